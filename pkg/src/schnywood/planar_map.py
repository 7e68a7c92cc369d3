"""Rooted combinatorial embeddings of triangulations of polygons.

A triangulation is stored as a dart structure: each directed edge is a dart
with a twin, an origin, and a ccw-next pointer around its origin (rotation
system). The boundary is the cycle of the exterior face, listed anticlockwise
starting at the root tail, so the exterior face lies to the right of the root
edge and the interior to the left of the boundary walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BadRoot, NonPlanar, NotSimple, NotTwoConnected, TooLarge


@dataclass(frozen=True)
class Triangulation:
    """Immutable rooted triangulation of an (m+2)-gon with n interior vertices.

    Vertices are dense ints: boundary first (ccw from the root tail), then
    interior by first appearance. Darts are dense ints; ``twin`` is a fixed
    point free involution and ``nxt`` the ccw rotation at the origin.
    """

    twin: tuple
    nxt: tuple
    origin: tuple
    root: int  # dart v_r -> v_y
    boundary: tuple  # vertices ccw from root tail: (v_r, v_y, ..., v_{m+1})
    nv: int

    # derived, filled in __post_init__
    head_: tuple = field(default=(), compare=False)
    first_dart: tuple = field(default=(), compare=False)
    prv: tuple = field(default=(), compare=False)
    dart_of: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        head = tuple(self.origin[self.twin[d]] for d in range(len(self.twin)))
        first = [-1] * self.nv
        dart_of = {}
        prv = [0] * len(self.twin)
        for d in range(len(self.twin)):
            o = self.origin[d]
            if first[o] < 0:
                first[o] = d
            dart_of[(o, head[d])] = d
            prv[self.nxt[d]] = d
        object.__setattr__(self, "head_", head)
        object.__setattr__(self, "first_dart", tuple(first))
        object.__setattr__(self, "prv", tuple(prv))
        object.__setattr__(self, "dart_of", dart_of)

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.boundary) - 2

    @property
    def n_interior(self) -> int:
        return self.nv - len(self.boundary)

    @property
    def n_edges(self) -> int:
        return len(self.twin) // 2

    @property
    def root_edge(self) -> tuple:
        return (self.origin[self.root], self.head_[self.root])

    def head(self, d: int) -> int:
        return self.head_[d]

    def dart(self, u: int, v: int) -> int:
        return self.dart_of[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.dart_of

    def edge_id(self, d: int) -> int:
        """Canonical undirected id of the edge through dart d."""
        return min(d, self.twin[d])

    def vertex_darts(self, v: int) -> Iterator[int]:
        """Darts out of v in ccw order, starting at an arbitrary fixed dart."""
        d0 = self.first_dart[v]
        d = d0
        while True:
            yield d
            d = self.nxt[d]
            if d == d0:
                break

    def neighbors_ccw(self, v: int, start: Optional[int] = None) -> list:
        """Neighbor vertices of v in ccw order, optionally starting at a dart."""
        d0 = self.first_dart[v] if start is None else start
        out, d = [], d0
        while True:
            out.append(self.head_[d])
            d = self.nxt[d]
            if d == d0:
                break
        return out

    def degree(self, v: int) -> int:
        return sum(1 for _ in self.vertex_darts(v))

    def sigma(self, d: int) -> int:
        """Next dart ccw around the origin of d."""
        return self.nxt[d]

    def face_next(self, d: int) -> int:
        """Next dart of the face to the LEFT of d (phi = sigma^-1 o twin)."""
        return self.prv[self.twin[d]]

    def face_of(self, d: int) -> list:
        """The dart cycle of the face to the left of d."""
        out, e = [], d
        while True:
            out.append(e)
            e = self.face_next(e)
            if e == d:
                break
        return out

    def is_boundary_vertex(self, v: int) -> bool:
        return v < len(self.boundary)

    def boundary_darts(self) -> list:
        """Darts of the exterior walk b0->b1->...->b0 (exterior on the right)."""
        b = self.boundary
        return [self.dart(b[i], b[(i + 1) % len(b)]) for i in range(len(b))]

    def faces(self) -> list:
        """All interior faces as vertex triples (each face once)."""
        ext = set()
        b = self.boundary
        for i in range(len(b)):
            ext.add(self.dart(b[(i + 1) % len(b)], b[i]))
        seen, out = set(), []
        for d in range(len(self.twin)):
            if d in seen or d in ext:
                continue
            cyc = self.face_of(d)
            if any(e in ext for e in cyc):
                seen.update(cyc)
                continue
            seen.update(cyc)
            out.append(tuple(self.origin[e] for e in cyc))
        return out

    def undirected_edges(self) -> list:
        return [
            (self.origin[d], self.head_[d])
            for d in range(len(self.twin))
            if d < self.twin[d]
        ]

    # -- canonical form ----------------------------------------------------

    def canonical_code(self) -> tuple:
        """Rooted-isomorphism invariant: BFS dart relabeling from the root."""
        return _canonical_code(self, self.root)

    def __hash__(self):
        return hash(self.canonical_code())

    def isomorphic(self, other: "Triangulation") -> bool:
        return self.canonical_code() == other.canonical_code()

    # -- rerooting ----------------------------------------------------------

    def reroot(self, edge: tuple) -> "Triangulation":
        """Same map, new root edge (must be a boundary edge, exterior right)."""
        from .errors import NotBoundary

        u, v = edge
        b = list(self.boundary)
        k = len(b)
        pos = None
        for i in range(k):
            if b[i] == u and b[(i + 1) % k] == v:
                pos = i
                break
        if pos is None:
            raise NotBoundary(f"({u},{v}) is not a boundary edge in ccw direction")
        new_boundary = tuple(b[pos:] + b[:pos])
        return Triangulation(
            twin=self.twin,
            nxt=self.nxt,
            origin=self.origin,
            root=self.dart(u, v),
            boundary=new_boundary,
            nv=self.nv,
        )


def _canonical_code(t: Triangulation, start_dart: int) -> tuple:
    label = {t.origin[start_dart]: 0}
    entry = {t.origin[start_dart]: start_dart}
    order = [t.origin[start_dart]]
    code = []
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        d0 = entry[v]
        d = d0
        word = []
        while True:
            h = t.head_[d]
            if h not in label:
                label[h] = len(order)
                order.append(h)
                entry[h] = t.twin[d]
            word.append(label[h])
            d = t.nxt[d]
            if d == d0:
                break
        code.append(tuple(word))
    return tuple(code)


# ---------------------------------------------------------------------------
# Construction from a face list
# ---------------------------------------------------------------------------


def build_from_faces(
    faces: Sequence, boundary: Sequence, root: tuple
) -> Triangulation:
    """Assemble and validate a rooted triangulation.

    ``faces`` are unordered vertex triples of the interior faces, ``boundary``
    the exterior cycle in anticlockwise order (interior on its left), ``root``
    an ordered pair of consecutive boundary vertices (v_r, v_y).

    Raises NonPlanar, NotSimple, NotTwoConnected or BadRoot.
    """
    boundary = list(boundary)
    k = len(boundary)
    if k < 2 or len(set(boundary)) != k:
        raise BadRoot("boundary must be a cycle of distinct vertices")
    vr, vy = root
    pos = None
    for i in range(k):
        if boundary[i] == vr and boundary[(i + 1) % k] == vy:
            pos = i
            break
    if pos is None:
        raise BadRoot(f"root {root} is not a ccw boundary edge")
    boundary = boundary[pos:] + boundary[:pos]

    for f in faces:
        if len(f) != 3 or len(set(f)) != 3:
            raise NotSimple(f"face {f} has a repeated vertex")

    # Undirected edge usage: interior faces contribute one side each; the
    # exterior face contributes one side to every boundary edge.
    usage: dict = {}

    def add_usage(u, v, who):
        e = (u, v) if repr(u) <= repr(v) else (v, u)
        usage.setdefault(e, []).append(who)

    for idx, f in enumerate(faces):
        a, b, c = f
        add_usage(a, b, idx)
        add_usage(b, c, idx)
        add_usage(c, a, idx)
    for i in range(k):
        add_usage(boundary[i], boundary[(i + 1) % k], "ext")

    for e, who in usage.items():
        if len(who) > 2:
            raise NotSimple(f"edge {e} used {len(who)} times")
        if len(who) < 2:
            raise NonPlanar(f"edge {e} has an unmatched side")

    # Orient faces consistently: the exterior cycle is the boundary reversed
    # (exterior face on the left of its darts); each undirected edge must be
    # traversed once in each direction. Propagate by BFS over face adjacency.
    orient = [None] * len(faces)  # True: (a,b,c) as given; False: reversed
    # fixed directed edges from the exterior walk
    fixed = {}
    for i in range(k):
        u, v = boundary[(i + 1) % k], boundary[i]
        fixed[(u, v)] = "ext"

    edge_faces: dict = {}
    for idx, f in enumerate(faces):
        a, b, c = f
        for u, v in ((a, b), (b, c), (c, a)):
            e = (u, v) if repr(u) <= repr(v) else (v, u)
            edge_faces.setdefault(e, []).append(idx)

    from collections import deque

    assigned_dir: dict = dict(fixed)  # directed edge -> owner

    def face_dirs(idx):
        a, b, c = faces[idx]
        if orient[idx]:
            return ((a, b), (b, c), (c, a))
        return ((a, c), (c, b), (b, a))

    todo = deque()
    # seed orientations from boundary edges
    for i in range(k):
        u, v = boundary[i], boundary[(i + 1) % k]
        e = (u, v) if repr(u) <= repr(v) else (v, u)
        for idx in edge_faces.get(e, []):
            if orient[idx] is None:
                # interior face must traverse (u, v) forward (exterior took (v,u))
                a, b, c = faces[idx]
                fwd = (u, v) in ((a, b), (b, c), (c, a))
                orient[idx] = fwd
                todo.append(idx)

    while todo:
        idx = todo.popleft()
        for (u, v) in face_dirs(idx):
            if (u, v) in assigned_dir and assigned_dir[(u, v)] != idx:
                raise NonPlanar("inconsistent face orientations")
            assigned_dir[(u, v)] = idx
            e = (u, v) if repr(u) <= repr(v) else (v, u)
            for j in edge_faces[e]:
                if j == idx:
                    continue
                a, b, c = faces[j]
                fwd = (v, u) in ((a, b), (b, c), (c, a))
                if orient[j] is None:
                    orient[j] = fwd
                    todo.append(j)
                elif orient[j] != fwd:
                    raise NonPlanar("face orientation conflict")

    if any(o is None for o in orient):
        raise NonPlanar("face list is not connected to the boundary")

    directed = dict(fixed)
    for idx in range(len(faces)):
        for (u, v) in face_dirs(idx):
            if (u, v) in directed and directed[(u, v)] != idx:
                raise NonPlanar("directed edge claimed twice")
            directed[(u, v)] = idx
    for (u, v) in directed:
        if (v, u) not in directed:
            raise NonPlanar(f"dart ({u},{v}) has no reverse")

    # Dense vertex ids: boundary first, then interior by deterministic order.
    vid = {}
    for v in boundary:
        vid[v] = len(vid)
    for f in faces:
        for v in sorted(f, key=repr):
            if v not in vid:
                vid[v] = len(vid)
    nv = len(vid)

    return _assemble(faces, face_dirs, boundary, vid, nv, k)


def _assemble(faces, face_dirs, boundary, vid, nv, k) -> Triangulation:
    dart_id: dict = {}

    def did(u, v):
        key = (vid[u], vid[v])
        if key not in dart_id:
            dart_id[key] = len(dart_id)
        return dart_id[key]

    cycles = []
    # exterior cycle: boundary reversed
    cycles.append([did(boundary[(i + 1) % k], boundary[i]) for i in range(k - 1, -1, -1)])
    for idx in range(len(faces)):
        dirs = face_dirs(idx)
        cycles.append([did(u, v) for (u, v) in dirs])

    nd = len(dart_id)
    rev = {v: k2 for k2, v in dart_id.items()}
    twin = [0] * nd
    for (u, v), d in dart_id.items():
        twin[d] = dart_id[(v, u)]
    origin = [rev[d][0] for d in range(nd)]

    phi = [0] * nd  # next dart within the face (face on the left)
    for cyc in cycles:
        # cycle as listed walks the face with the face on the left
        for i, d in enumerate(cyc):
            phi[d] = cyc[(i + 1) % len(cyc)]
    # ccw rotation: sigma = twin o phi^-1
    phi_inv = [0] * nd
    for d in range(nd):
        phi_inv[phi[d]] = d
    nxt = [twin[phi_inv[d]] for d in range(nd)]

    # Validate: sigma orbits, one per vertex (pinch points split orbits).
    seen = [False] * nd
    orbits = 0
    for d in range(nd):
        if seen[d]:
            continue
        orbits += 1
        o = origin[d]
        e = d
        while not seen[e]:
            seen[e] = True
            if origin[e] != o:
                raise NonPlanar("rotation orbit spans multiple vertices")
            e = nxt[e]
    if orbits != nv:
        raise NotTwoConnected(
            f"{orbits} rotation orbits for {nv} vertices (cut vertex present)"
        )

    # Euler check: V - E + F = 2
    ne = nd // 2
    nf = len(faces) + 1
    if nv - ne + nf != 2:
        raise NonPlanar(f"Euler check failed: V={nv} E={ne} F={nf}")

    root = dart_id[(0, 1)]
    return Triangulation(
        twin=tuple(twin),
        nxt=tuple(nxt),
        origin=tuple(origin),
        root=root,
        boundary=tuple(range(k)),
        nv=nv,
    )


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Induced submap of all vertices within distance rho of the center."""

    host: Triangulation
    center: int
    radius: int
    dist: dict  # vertex -> distance label

    @property
    def vertices(self) -> set:
        return set(self.dist)

    def canonical_code(self, wood=None) -> tuple:
        """Canonical encoding of the ball as a rooted (optionally colored) map.

        Anchored at the host root dart when its origin is inside, else at the
        center's first dart. Two balls receive equal codes iff the induced
        rooted submaps (with distance labels and wood decorations) agree.
        """
        t = self.host
        inside = self.dist
        if t.origin[t.root] in inside and t.head_[t.root] in inside:
            start = t.root
        else:
            start = t.first_dart[self.center]
        label = {t.origin[start]: 0}
        order = [t.origin[start]]
        entry = {t.origin[start]: start}
        code = [self.radius]
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            d0 = entry[v]
            word = [self.dist[v]]
            d = d0
            while True:
                h = t.head_[d]
                if h in inside:
                    if h not in label:
                        label[h] = len(order)
                        order.append(h)
                        entry[h] = t.twin[d]
                    if wood is None:
                        word.append((label[h],))
                    else:
                        u = t.origin[d]
                        hd, col = wood.assignment[(min(u, h), max(u, h))]
                        word.append((label[h], col, hd == h))
                else:
                    word.append(None)  # dart leaving the ball
                d = t.nxt[d]
                if d == d0:
                    break
            code.append(tuple(word))
        return tuple(code)


def ball(t: Triangulation, v: int, rho: int) -> Ball:
    """Ball of radius rho around v with BFS distance labels."""
    from collections import deque

    dist = {v: 0}
    q = deque([v])
    while q:
        u = q.popleft()
        if dist[u] == rho:
            continue
        for w in t.neighbors_ccw(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return Ball(host=t, center=v, radius=rho, dist=dist)


# ---------------------------------------------------------------------------
# Exhaustive enumeration (small cases), via the peeling decomposition
# ---------------------------------------------------------------------------

_ENUM_GUARD = (3, 3)  # (max m, max n)


def enumerate_all(m: int, n: int) -> list:
    """All rooted triangulations of an (m+2)-gon with n interior vertices.

    Exhaustive and duplicate-free; guarded to m <= 3, n <= 3. Generation uses
    the chord/fan decomposition recurrence, which is independent of the
    closed-form count.
    """
    if m > _ENUM_GUARD[0] or n > _ENUM_GUARD[1]:
        raise TooLarge(f"enumerate_all guarded to m<={_ENUM_GUARD[0]}, n<={_ENUM_GUARD[1]}")
    if m < 1:
        raise TooLarge("enumerate_all requires m >= 1")
    from . import _decomp

    out = []
    for faces in _decomp.generate_face_lists(m, n):
        bnd = list(range(m + 2))
        t = build_from_faces(list(faces), bnd, (0, 1))
        out.append(t)
    codes = {t.canonical_code() for t in out}
    assert len(codes) == len(out), "decomposition produced a duplicate"
    return out


# ---------------------------------------------------------------------------
# TRI v1 serialization
# ---------------------------------------------------------------------------


def to_tri(t: Triangulation) -> str:
    """TRI v1 text form. Deterministic, so write-read-write round-trips."""
    lines = [f"TRI {t.m} {t.n_interior}"]
    for f in sorted(tuple(sorted(face)) for face in t.faces()):
        lines.append("f " + " ".join(str(x) for x in f))
    lines.append("B " + " ".join(str(v) for v in t.boundary))
    vr, vy = t.root_edge
    lines.append(f"R {vr} {vy}")
    return "\n".join(lines) + "\n"


def from_tri(text: str) -> Triangulation:
    faces, bnd, root = [], None, None
    header = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "TRI":
            header = (int(parts[1]), int(parts[2]))
        elif parts[0] == "f":
            faces.append(tuple(int(x) for x in parts[1:4]))
        elif parts[0] == "B":
            bnd = [int(x) for x in parts[1:]]
        elif parts[0] == "R":
            root = (int(parts[1]), int(parts[2]))
        else:
            raise ValueError(f"bad TRI line: {line!r}")
    if header is None or bnd is None or root is None:
        raise ValueError("incomplete TRI document")
    t = build_from_faces(faces, bnd, root)
    if (t.m, t.n_interior) != header:
        raise ValueError("TRI header does not match face data")
    return t
