"""Exception types shared across the package."""


class SchnywoodError(Exception):
    """Base class for all package errors."""


class NonPlanar(SchnywoodError):
    """Face list does not assemble into a planar (genus-0) embedding."""


class NotSimple(SchnywoodError):
    """Loops or parallel edges detected."""


class NotTwoConnected(SchnywoodError):
    """A cut vertex (pinch point) was detected."""


class BadRoot(SchnywoodError):
    """Root edge is not a boundary edge in the required direction."""


class TooLarge(SchnywoodError):
    """Input exceeds the guard for an exhaustive / brute-force routine."""


class InvalidM(SchnywoodError):
    """Boundary parameter outside the domain of a counting formula."""


class OutOfRange(SchnywoodError):
    """Argument outside the documented domain."""


class Infeasible(SchnywoodError):
    """Step parameters violate a support constraint (right step with m_s < k)."""


class Empty(SchnywoodError):
    """Requested a sample from an empty support."""


class NotBoundary(SchnywoodError):
    """Edge is not on the boundary."""


class NotACycle(SchnywoodError):
    """Vertex sequence is not a simple cycle of the map."""


class Not3Orientation(SchnywoodError):
    """Orientation does not satisfy the out-degree quotas."""


class OracleContradiction(SchnywoodError):
    """Brute-force oracle found an unexpected number of survivors."""


class NonConvergence(SchnywoodError):
    """Iterative solver stalled above tolerance."""


class NotSharedStart(SchnywoodError):
    """Winding number requires both paths to start at the same vertex."""


class NotTriangleBoundary(SchnywoodError):
    """Grid embedding requires a triangulation of a triangle (m = 1)."""


class BudgetExhausted(SchnywoodError):
    """Step budget ran out before the requested condition was reached."""
