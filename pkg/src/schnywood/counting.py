"""Exact enumeration, generating functions, and the half-plane step law.

Everything here is exact: counts are big integers, probabilities are
Fractions. Floats appear only in the asymptotic-ratio report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import Infeasible, InvalidM, OutOfRange

ALPHA = Fraction(256, 27)  # growth constant of triangulation counts

_FACT = [1]


def _fact(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


@lru_cache(maxsize=None)
def catalan(x: int) -> int:
    """The x-th Catalan number."""
    if x < 0:
        raise OutOfRange("catalan requires x >= 0")
    return _fact(2 * x) // (_fact(x) * _fact(x + 1))


_COUNT_CACHE: dict = {}


def count_triangulations(m: int, n: int) -> int:
    """Number of rooted triangulations of an (m+2)-gon with n interior
    vertices: 2(2m+1)!(4n+2m-1)! / ((m-1)!(m+1)!n!(3n+2m+1)!)."""
    if m == 0:
        raise InvalidM("m = 0 is outside the formula's domain ((m-1)! undefined)")
    if m < 0 or n < 0:
        raise InvalidM("m >= 1 and n >= 0 required")
    key = (m, n)
    v = _COUNT_CACHE.get(key)
    if v is None:
        v = (2 * _fact(2 * m + 1) * _fact(4 * n + 2 * m - 1)) // (
            _fact(m - 1) * _fact(m + 1) * _fact(n) * _fact(3 * n + 2 * m + 1)
        )
        _COUNT_CACHE[key] = v
    return v


def count_ext(m: int, n: int) -> int:
    """count_triangulations extended with the degenerate 2-gon: the empty
    filling is the unique 'triangulation' for m = 0, n = 0."""
    if m == 0:
        return 1 if n == 0 else 0
    return count_triangulations(m, n)


def count_ratio_in_n(m: int, n: int) -> Fraction:
    """count(m, n+1) / count(m, n), exactly, with small operands."""
    a = 4 * n + 2 * m
    b = 3 * n + 2 * m
    return Fraction(a * (a + 1) * (a + 2) * (a + 3), (n + 1) * (b + 2) * (b + 3) * (b + 4))


def count_ratio_diag(m: int, n: int) -> Fraction:
    """count(m+1, n-1) / count(m, n) for m >= 1, n >= 1 (diagonal step)."""
    a = 4 * n + 2 * m
    return Fraction(
        (2 * m + 2) * (2 * m + 3) * n * (3 * n + 2 * m + 1),
        (a - 2) * (a - 1) * m * (m + 2),
    )


def cache_count(m: int, n: int, value: int) -> None:
    """Install a count computed elsewhere (e.g. by diagonal ratio updates)."""
    _COUNT_CACHE[(m, n)] = value


def count_recurrence(m: int, n: int) -> int:
    """Independent evaluation of the count via the chord/fan decomposition:
    phi(m,n) = sum over cells of phi(a, n_l) * phi(b, n_r)."""
    from . import _decomp

    if m == 0:
        return 1 if n == 0 else 0
    total = 0
    for (a, k, n_l, n_r) in _decomp.cells(m, n):
        b = m - 1 - a + k
        total += _count_rec_memo(a, n_l) * _count_rec_memo(b, n_r)
    return total


@lru_cache(maxsize=None)
def _count_rec_memo(m: int, n: int) -> int:
    return count_recurrence(m, n)


# ---------------------------------------------------------------------------
# Partition function (free distribution normalizer)
# ---------------------------------------------------------------------------


def partition_function(m: int, t: Fraction, dps: int = 50):
    """Z_m(t) = sum_n count(m,n) t^n for t in (0, 27/256].

    For rational t whose branch parameter theta in (0, 1/4] (t = theta(1-theta)^3)
    is rational, returns the exact Fraction. Otherwise returns an mpmath
    interval (lo, hi) at ``dps`` digits.
    """
    t = Fraction(t)
    if m < 0:
        raise InvalidM("m >= 0 required")
    if not (0 < t <= Fraction(27, 256)):
        raise OutOfRange("t must lie in (0, 27/256]")
    if t == Fraction(27, 256):
        theta = Fraction(1, 4)
    else:
        theta = _rational_theta(t)
    if theta is not None:
        return _z_closed_form(m, theta)
    with mpmath.workdps(dps):
        f = lambda x: x * (1 - x) ** 3 - mpmath.mpf(t.numerator) / t.denominator
        th = mpmath.findroot(f, mpmath.mpf("0.1"))
        z = _z_closed_form_mp(m, th)
        eps = mpmath.mpf(10) ** (-(dps - 5))
        return (z * (1 - eps), z * (1 + eps))


def _rational_theta(t: Fraction):
    """Rational root of theta(1-theta)^3 = t in (0, 1/4], if one exists."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(
        t.denominator * x * (1 - x) ** 3 - t.numerator, x, domain="QQ"
    )
    for r in poly.all_roots():
        if r.is_rational and 0 < r <= sympy.Rational(1, 4):
            rr = sympy.Rational(r)
            return Fraction(int(rr.p), int(rr.q))
    return None


def _z_closed_form(m: int, theta: Fraction) -> Fraction:
    num = _fact(2 * m) * ((1 - 4 * theta) * m + 6 * theta)
    den = _fact(m) * _fact(m + 2)
    return Fraction(num, den) * (1 - theta) ** (-(2 * m + 1))


def _z_closed_form_mp(m: int, theta):
    num = _fact(2 * m) * ((1 - 4 * theta) * m + 6 * theta)
    den = _fact(m) * _fact(m + 2)
    return num / den * (1 - theta) ** (-(2 * m + 1))


def z_critical(m: int) -> Fraction:
    """Z_m at t = 27/256: 2(2m)!/(m!(m+2)!) (16/9)^m."""
    return Fraction(2 * _fact(2 * m), _fact(m) * _fact(m + 2)) * Fraction(16, 9) ** m


# ---------------------------------------------------------------------------
# Half-plane peeling step law
# ---------------------------------------------------------------------------


def step_probability(side: str, k: int, m_s: int) -> Fraction:
    """Probability that a peeling step on the half-plane picks a given side,
    reveals k fan vertices, and encloses a region of boundary parameter m_s:
    (3/64) 4^-m_s (4 C_{m_s} - C_{m_s+1}) (3/4)^k."""
    if side not in ("left", "right"):
        raise OutOfRange("side must be 'left' or 'right'")
    if k < 0 or m_s < 0:
        raise OutOfRange("k >= 0 and m_s >= 0 required")
    if side == "right" and m_s < k:
        raise Infeasible(f"right step requires m_s >= k (got m_s={m_s}, k={k})")
    return (
        Fraction(3, 64)
        * Fraction(1, 4) ** m_s
        * (4 * catalan(m_s) - catalan(m_s + 1))
        * Fraction(3, 4) ** k
    )


@dataclass(frozen=True)
class StepLaw:
    """Exact probability tables for one peeling step on the half-plane."""

    p_left: Fraction = Fraction(3, 4)
    p_right: Fraction = Fraction(1, 4)

    def q(self, j: int) -> Fraction:
        """Left-step coverage width law: q_j = 4^-j (4 C_{j-1} - C_j), j >= 1."""
        if j < 1:
            raise OutOfRange("q_j defined for j >= 1")
        return Fraction(4 * catalan(j - 1) - catalan(j), 4**j)

    def q_tail(self, j: int) -> Fraction:
        """P(J > j) = C_j / 4^j (telescoping), exact."""
        return Fraction(catalan(j), 4**j)

    def r(self, k: int) -> Fraction:
        """Fan-size law: r_k = (1/4)(3/4)^k, k >= 0."""
        if k < 0:
            raise OutOfRange("r_k defined for k >= 0")
        return Fraction(1, 4) * Fraction(3, 4) ** k

    def r_tail(self, k: int) -> Fraction:
        """P(K > k) = (3/4)^{k+1}, exact."""
        return Fraction(3, 4) ** (k + 1)

    def joint(self, side: str, k: int, m_s: int) -> Fraction:
        return step_probability(side, k, m_s)

    def right_k_marginal(self, k: int) -> Fraction:
        """P(right step with k fan vertices) = (3/16) C_k (3/16)^k."""
        return Fraction(3, 16) * catalan(k) * Fraction(3, 16) ** k

    def m_weight(self, m_s: int) -> Fraction:
        """Unnormalized m_s factor 4^-m_s (4 C_{m_s} - C_{m_s+1})."""
        return Fraction(4 * catalan(m_s) - catalan(m_s + 1), 4**m_s)

    def m_weight_tail(self, m_s: int) -> Fraction:
        """sum_{m > m_s} of m_weight = C_{m_s+1}/4^{m_s} (telescoping)."""
        return Fraction(catalan(m_s + 1), 4**m_s)

    expected_j: Fraction = Fraction(2)
    expected_k: Fraction = Fraction(3)
    expected_drift: Fraction = Fraction(1, 2)


def coverage_walk_law() -> tuple:
    """The step law plus the exact drift report of the coverage walk:
    E[J] = 2 (Catalan generating function at 1/4), E[K] = 3,
    E[xi] = (3/4)(E[K]-E[J]) - (1/4) = 1/2."""
    law = StepLaw()
    report = {
        "E_J": law.expected_j,
        "E_K": law.expected_k,
        "E_xi_given_left": law.expected_k - law.expected_j,
        "E_xi": law.p_left * (law.expected_k - law.expected_j) - law.p_right,
    }
    assert report["E_xi"] == Fraction(1, 2)
    return law, report


def normalization_bracket(k_max: int = 60, m_max: int = 60) -> dict:
    """Exact bracket for the total step-law mass truncated at k <= k_max,
    m_s <= m_max, with analytic Catalan/geometric tails.

    Tails telescope exactly, so lower + tail equals the analytic totals
    (3/4 left, 1/4 right) with zero width; the function still returns the
    pieces so callers can assert the bracket inequality at 1e-12.
    """
    left_part = sum(
        step_probability("left", k, m)
        for k in range(k_max + 1)
        for m in range(m_max + 1)
    )
    # left tail: k <= k_max with m > m_max, plus all k > k_max
    geo_part = sum(Fraction(3, 4) ** k for k in range(k_max + 1))  # = 4(1-(3/4)^{K+1})
    law = StepLaw()
    left_tail = (
        Fraction(3, 64) * geo_part * law.m_weight_tail(m_max)
        + Fraction(3, 16) * Fraction(3, 4) ** (k_max + 1) * 4
    )
    right_part = sum(
        step_probability("right", k, m)
        for k in range(k_max + 1)
        for m in range(k, m_max + 1)
    )
    # right tail: per k <= k_max the m-tail telescopes; k > k_max uses the
    # exact Catalan series c(3/16) = 4/3.
    right_tail = sum(
        Fraction(3, 64) * Fraction(3, 4) ** k * law.m_weight_tail(max(m_max, k - 1) if k <= m_max else k - 1)
        for k in range(k_max + 1)
    )
    ck_partial = sum(catalan(k) * Fraction(3, 16) ** k for k in range(k_max + 1))
    right_tail += Fraction(3, 16) * (Fraction(4, 3) - ck_partial)
    return {
        "left_part": left_part,
        "left_tail": left_tail,
        "right_part": right_part,
        "right_tail": right_tail,
        "total_lower": left_part + right_part,
        "total_upper": left_part + right_part + left_tail + right_tail,
    }


# ---------------------------------------------------------------------------
# Free-distribution normalization bracket
# ---------------------------------------------------------------------------


def free_weight(m: int, n: int) -> Fraction:
    """mu_m weight of the n-slice: count(m,n) alpha^-n / Z_m."""
    return count_triangulations(m, n) * ALPHA**-n / z_critical(m)


def _ratio_decreases(m: int, n: int) -> bool:
    """Exact check of count(m,n+1) a^{-1} / count(m,n) <= 1 - 2/(n+2)."""
    r = count_ratio_in_n(m, n) / ALPHA
    return r <= 1 - Fraction(2, n + 2)


def _ratio_bound_symbolic(m: int) -> int:
    """Smallest n0 from which the per-term decay bound holds for all n >= n0,
    certified by expanding the polynomial difference and checking that all
    coefficients (in n, after shifting n -> n + n0) are nonnegative."""
    import sympy

    n, n0 = sympy.Symbol("n", nonnegative=True), 0
    mm = sympy.Integer(m)
    lhs = 27 * (4 * n + 2 * mm) * (4 * n + 2 * mm + 1) * (4 * n + 2 * mm + 2) * (4 * n + 2 * mm + 3) * (n + 2)
    rhs = 256 * (n + 1) * (3 * n + 2 * mm + 2) * (3 * n + 2 * mm + 3) * (3 * n + 2 * mm + 4) * n
    # decay bound <=> lhs <= rhs (after clearing 1 - 2/(n+2) = n/(n+2))
    for shift in range(0, 4096):
        diff = sympy.expand((rhs - lhs).subs(n, n + shift))
        if all(c >= 0 for c in sympy.Poly(diff, n).all_coeffs()):
            return shift
    raise AssertionError("no certified decay threshold found")


def free_normalization_bracket(m: int, n_max: int = 400) -> dict:
    """Bracket for sum_n mu_m(n-slice): [partial, partial + tail_bound].

    The tail bound uses term(n+1) <= term(n) (1 - 2/(n+2)) for n >= n_max,
    certified symbolically, which gives tail <= term(n_max) * (n_max + 1).
    """
    n0 = _ratio_bound_symbolic(m)
    n_max = max(n_max, n0)
    partial = Fraction(0)
    term = free_weight(m, 0)
    for n in range(n_max):
        partial += term
        term = term * count_ratio_in_n(m, n) / ALPHA
    partial += term  # term at n_max
    tail = term * (n_max + 1)
    return {"partial": partial, "tail_bound": tail, "lower": partial, "upper": partial + tail}


# ---------------------------------------------------------------------------
# Asymptotics
# ---------------------------------------------------------------------------


def asymptotic_prefactor_rational(m: int) -> Fraction:
    """Rational part of the n -> infinity prefactor: the full prefactor is
    this value divided by sqrt(6 pi)."""
    if m < 1:
        raise InvalidM("m >= 1 required")
    return Fraction(
        2 * _fact(2 * m + 1), 6 * _fact(m - 1) * _fact(m + 1)
    ) * Fraction(16, 9) ** m


def asymptotic_ratio(m: int, n: int, dps: int = 40) -> float:
    """count(m,n) / (C_m alpha^n n^{-5/2}) with C_m the paper prefactor."""
    if m < 1 or n < 1:
        raise InvalidM("m >= 1 and n >= 1 required")
    exact = count_triangulations(m, n) * ALPHA**-n / asymptotic_prefactor_rational(m)
    with mpmath.workdps(dps):
        val = (
            mpmath.mpf(exact.numerator)
            / exact.denominator
            * mpmath.sqrt(6 * mpmath.pi)
            * mpmath.power(n, mpmath.mpf(5) / 2)
        )
        return float(val)
