"""Schnyder woods on finite triangulations.

Colors are 'y', 'r', 'b'. A wood assigns every undirected edge a head and a
color; conditions (interior, boundary, root) are checked against the cyclic
word of edge roles around each vertex, read anticlockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import (
    Not3Orientation,
    NotACycle,
    OracleContradiction,
    TooLarge,
)
from .planar_map import Triangulation

YELLOW, RED, BLUE = "y", "r", "b"
COLORS = (YELLOW, RED, BLUE)


def ekey(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass
class Wood:
    """Edge orientation plus coloring; possibly partial during exploration."""

    assignment: Dict[tuple, tuple]  # ekey -> (head, color)
    complete: bool = True
    _out: Optional[dict] = field(default=None, repr=False, compare=False)

    def head(self, u: int, v: int) -> int:
        return self.assignment[ekey(u, v)][0]

    def color(self, u: int, v: int) -> str:
        return self.assignment[ekey(u, v)][1]

    def has(self, u: int, v: int) -> bool:
        return ekey(u, v) in self.assignment

    def out_map(self) -> dict:
        """vertex -> {color: head} over assigned edges."""
        if self._out is None:
            out: dict = {}
            for (u, v), (h, c) in self.assignment.items():
                tail = u if h == v else v
                out.setdefault(tail, {})[c] = h
            self._out = out
        return self._out

    def out_edge(self, v: int, color: str) -> Optional[int]:
        return self.out_map().get(v, {}).get(color)


def orientation_of(wood: Wood) -> dict:
    """Forget colors: ekey -> head."""
    return {e: h for e, (h, _) in wood.assignment.items()}


# ---------------------------------------------------------------------------
# The finite Schnyder peeling process
# ---------------------------------------------------------------------------


def peel_finite(t: Triangulation, left_first: bool = True) -> Wood:
    """Construct the unique maximal Schnyder wood by iterated peeling.

    Each step peels the vertex one left of the root tail, colors its chord
    yellow, the edge to the root tail red, and the revealed fan edges blue,
    then recurses into both sides. ``left_first`` fixes the (observationally
    irrelevant) recursion order.
    """
    assign: Dict[tuple, tuple] = {}

    def put(u, v, head, color):
        k = ekey(u, v)
        assert k not in assign, f"edge {k} colored twice"
        assign[k] = (head, color)

    vr, vy = t.root_edge
    put(vr, vy, vy, YELLOW)

    # region = boundary list ccw from root tail; membership dict built per region
    stack: List[list] = [list(t.boundary)]
    while stack:
        bnd = stack.pop()
        if len(bnd) <= 2:
            continue
        pos = {v: i for i, v in enumerate(bnd)}
        p = bnd[-1]
        v1 = bnd[0]
        d = t.nxt[t.dart(p, v1)]
        us: List[int] = []
        while True:
            x = t.head_[d]
            if x in pos:
                vc = x
                break
            us.append(x)
            d = t.nxt[d]
        put(p, vc, vc, YELLOW)
        put(p, v1, v1, RED)
        for u in us:
            put(u, p, p, BLUE)
        cpos = pos[vc]
        left = [p] + bnd[cpos:-1]
        right = bnd[: cpos + 1] + us[::-1]
        if left_first:
            stack.append(right)
            stack.append(left)
        else:
            stack.append(left)
            stack.append(right)
    assert len(assign) == t.n_edges, "peeling left an edge uncolored"
    return Wood(assignment=assign, complete=True)


# ---------------------------------------------------------------------------
# Condition verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WoodReport:
    ok: bool
    violation: Optional[tuple] = None  # (kind, vertex, word)

    def __bool__(self):
        return self.ok


def vertex_word(t: Triangulation, wood: Wood, v: int, start_dart: int) -> list:
    """Roles of edges at v in ccw order starting at ``start_dart``:
    ('out'|'in', color) per dart; None for unassigned edges."""
    word = []
    d = start_dart
    while True:
        h = t.head_[d]
        k = ekey(v, h)
        if k in wood.assignment:
            head, c = wood.assignment[k]
            word.append(("out" if head == h else "in", c))
        else:
            word.append(None)
        d = t.nxt[d]
        if d == start_dart:
            break
    return word


def _match_boundary_word(word: list) -> bool:
    """(in-y)* out-r (in-b)* out-y (in-r)*, as a linear word."""
    i, n = 0, len(word)
    while i < n and word[i] == ("in", YELLOW):
        i += 1
    if i >= n or word[i] != ("out", RED):
        return False
    i += 1
    while i < n and word[i] == ("in", BLUE):
        i += 1
    if i >= n or word[i] != ("out", YELLOW):
        return False
    i += 1
    while i < n and word[i] == ("in", RED):
        i += 1
    return i == n


def _match_interior_word(word: list) -> bool:
    """Cyclic word out-b (in-y)* out-r (in-b)* out-y (in-r)*."""
    n = len(word)
    starts = [i for i, w in enumerate(word) if w == ("out", BLUE)]
    if len(starts) != 1:
        return False
    i0 = starts[0]
    rot = word[i0:] + word[:i0]
    i = 1
    while i < n and rot[i] == ("in", YELLOW):
        i += 1
    if i >= n or rot[i] != ("out", RED):
        return False
    i += 1
    while i < n and rot[i] == ("in", BLUE):
        i += 1
    if i >= n or rot[i] != ("out", YELLOW):
        return False
    i += 1
    while i < n and rot[i] == ("in", RED):
        i += 1
    return i == n


def verify_wood(t: Triangulation, wood: Wood) -> WoodReport:
    """Check the Schnyder, root, and boundary conditions; report the first
    violation with its witness vertex and cyclic edge-color word."""
    if len(wood.assignment) != t.n_edges:
        return WoodReport(False, ("incomplete", -1, []))
    b = t.boundary
    k = len(b)
    vr, vy = b[0], b[1]
    for v in range(t.nv):
        if v == vr:
            word = vertex_word(t, wood, v, t.root)
            outs = [w for w in word if w and w[0] == "out"]
            if outs != [("out", YELLOW)] or word[0] != ("out", YELLOW):
                return WoodReport(False, ("root-tail", v, word))
            if any(w[0] == "in" and w[1] != RED for w in word[1:]):
                return WoodReport(False, ("root-tail", v, word))
        elif v == vy:
            word = vertex_word(t, wood, v, t.first_dart[v])
            if any(w[0] == "out" for w in word) or any(w[1] != YELLOW for w in word):
                return WoodReport(False, ("root-head", v, word))
        elif v < k:
            i = v  # boundary index == dense id by construction
            nxt_b, prv_b = b[(i + 1) % k], b[(i - 1) % k]
            word = vertex_word(t, wood, v, t.dart(v, nxt_b))
            if not _match_boundary_word(word):
                return WoodReport(False, ("boundary", v, word))
        else:
            word = vertex_word(t, wood, v, t.first_dart[v])
            if any(w is None for w in word) or not _match_interior_word(word):
                return WoodReport(False, ("interior", v, word))
    return WoodReport(True)


# ---------------------------------------------------------------------------
# Orientations: quotas, directed triangles, cycle out-degree law
# ---------------------------------------------------------------------------


def out_quota(t: Triangulation, v: int) -> int:
    b = t.boundary
    if v == b[0]:
        return 1
    if v == b[1]:
        return 0
    if v < len(b):
        return 2
    return 3


def check_3_orientation(t: Triangulation, heads: dict) -> None:
    outd = {v: 0 for v in range(t.nv)}
    for (u, v), h in heads.items():
        outd[u if h == v else v] += 1
    for v in range(t.nv):
        if outd[v] != out_quota(t, v):
            raise Not3Orientation(f"vertex {v} has out-degree {outd[v]}")


def _ccw_sector(t: Triangulation, v: int, d_from: int, d_to: int) -> list:
    """Darts strictly ccw-between d_from and d_to around v."""
    out = []
    d = t.nxt[d_from]
    while d != d_to:
        out.append(d)
        d = t.nxt[d]
    return out


def triangle_is_anticlockwise(t: Triangulation, heads: dict, tri: tuple) -> bool:
    """Orientation of a directed triangle x->y->z->x via the zero-interior-
    out-degree law: a corner's spare out-edges all avoid the enclosed disk,
    so the sector (left of the cycle) containing a spare out-edge is the
    outside."""
    x, y, z = tri
    votes = []
    for (a, b_, c) in ((x, y, z), (y, z, x), (z, x, y)):
        # at corner b_: entry a->b_, exit b_->c
        exit_d = t.dart(b_, c)
        entry_rev = t.dart(b_, a)
        left = set(_ccw_sector(t, b_, exit_d, entry_rev))
        for d in t.vertex_darts(b_):
            h = t.head_[d]
            if h in (a, c):
                continue
            if heads[ekey(b_, h)] == h:  # spare out-edge
                votes.append(d not in left)
        if votes:
            break
    if not votes:
        raise Not3Orientation("directed triangle with no spare out-edges")
    assert all(v == votes[0] for v in votes), "inconsistent orientation votes"
    return votes[0]


def find_anticlockwise_triangle(t: Triangulation, orientation) -> Optional[tuple]:
    """First anticlockwise directed triangle, or None. Directed-triangle
    witnesses suffice for directed cycles of any length."""
    heads = orientation.copy() if isinstance(orientation, dict) else orientation_of(orientation)
    check_3_orientation(t, heads)
    tri = _find_directed_triangle(t, heads, want_acw=True)
    return tri


def find_clockwise_triangle(t: Triangulation, orientation) -> Optional[tuple]:
    heads = orientation.copy() if isinstance(orientation, dict) else orientation_of(orientation)
    check_3_orientation(t, heads)
    return _find_directed_triangle(t, heads, want_acw=False)


def _find_directed_triangle(t: Triangulation, heads: dict, want_acw: bool):
    seen = set()
    for (u, v) in list(heads):
        h = heads[(u, v)]
        tail = u if h == v else v
        # common neighbors via the smaller adjacency
        nb_u = set(t.neighbors_ccw(u))
        for w in t.neighbors_ccw(v):
            if w not in nb_u:
                continue
            tri = tuple(sorted((u, v, w)))
            if tri in seen:
                continue
            seen.add(tri)
            cyc = _directed_cycle(heads, u, v, w)
            if cyc is None:
                continue
            if triangle_is_anticlockwise(t, heads, cyc) == want_acw:
                return cyc
    return None


def _directed_cycle(heads: dict, u: int, v: int, w: int):
    """If {u,v,w} spans a directed triangle, return it as (a,b,c) with
    a->b->c->a; else None. Given a->b, a cycle forces b->w->a."""
    hu = heads[ekey(u, v)]
    a, b_ = (u, v) if hu == v else (v, u)
    if heads[ekey(b_, w)] == w and heads[ekey(w, a)] == a:
        return (a, b_, w)
    return None


def cycle_interior_outdegree(t: Triangulation, orientation, cycle: list) -> int:
    """Edges directed from the cycle into its interior (= b - 3 for any
    3-orientation)."""
    heads = orientation.copy() if isinstance(orientation, dict) else orientation_of(orientation)
    b = len(cycle)
    if b < 3 or len(set(cycle)) != b:
        raise NotACycle("need a simple cycle")
    for i in range(b):
        if not t.has_edge(cycle[i], cycle[(i + 1) % b]):
            raise NotACycle(f"{cycle[i]}-{cycle[(i + 1) % b]} is not an edge")
    interior_left = _interior_is_left(t, cycle)
    walk = cycle if interior_left else cycle[::-1]
    count = 0
    cyc_set = set(cycle)
    n = len(walk)
    for i in range(n):
        v = walk[i]
        exit_d = t.dart(v, walk[(i + 1) % n])
        entry_rev = t.dart(v, walk[(i - 1) % n])
        for d in _ccw_sector(t, v, exit_d, entry_rev):
            h = t.head_[d]
            if heads[ekey(v, h)] == h:
                count += 1
    return count


def _face_id(t: Triangulation, d: int) -> int:
    return min(t.face_of(d))


def _interior_is_left(t: Triangulation, cycle: list) -> bool:
    """Flood faces on the left of the cycle walk; interior iff the flood
    avoids the exterior face."""
    ext_id = _face_id(t, t.dart(t.boundary[1], t.boundary[0]))
    n = len(cycle)
    cyc_darts = set()
    for i in range(n):
        cyc_darts.add(t.dart(cycle[i], cycle[(i + 1) % n]))
        cyc_darts.add(t.dart(cycle[(i + 1) % n], cycle[i]))
    seed = t.dart(cycle[0], cycle[1])
    seen = set()
    stack = [seed]
    hit_exterior = False
    while stack:
        d = stack.pop()
        fid = _face_id(t, d)
        if fid in seen:
            continue
        seen.add(fid)
        if fid == ext_id:
            hit_exterior = True
            break
        for e in t.face_of(d):
            tw = t.twin[e]
            if e not in cyc_darts and _face_id(t, tw) not in seen:
                stack.append(tw)
    return not hit_exterior


# ---------------------------------------------------------------------------
# Monochromatic structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonochromeForest:
    color: str
    parent: dict  # vertex -> vertex via the unique outgoing edge of the color
    roots: frozenset


def monochrome_forest(t: Triangulation, wood: Wood, color: str) -> MonochromeForest:
    """Parent structure of one color; asserts the tree/forest shape."""
    parent = {}
    for v in range(t.nv):
        h = wood.out_edge(v, color)
        if h is not None:
            parent[v] = h
    roots = frozenset(v for v in range(t.nv) if v not in parent)
    # acyclicity plus root-set shape
    state: dict = {}
    for v in range(t.nv):
        path = []
        u = v
        while u in parent and state.get(u) is None:
            state[u] = "open"
            path.append(u)
            u = parent[u]
        assert state.get(u) != "open", f"{color} cycle through {u}"
        for w in path:
            state[w] = "done"
    b = t.boundary
    vr, vy = b[0], b[1]
    if color == YELLOW:
        assert roots == frozenset({vy}), "yellow must be one tree rooted at v_y"
    elif color == RED:
        assert roots == frozenset({vr}), "red must be one tree rooted at v_r"
    else:
        assert all(r in b[2:] for r in roots), "blue roots must be non-root boundary"
    return MonochromeForest(color=color, parent=parent, roots=roots)


def path_from(t: Triangulation, wood: Wood, v: int, color: str) -> list:
    """Maximal directed monochromatic path from v (vertex list)."""
    path = [v]
    u = v
    for _ in range(t.nv + 1):
        h = wood.out_edge(u, color)
        if h is None:
            return path
        path.append(h)
        u = h
    raise AssertionError("monochromatic path did not terminate")


# ---------------------------------------------------------------------------
# Orientation -> coloring, and the brute-force oracle
# ---------------------------------------------------------------------------


def color_orientation(t: Triangulation, heads: dict) -> Wood:
    """The unique Schnyder wood induced by a 3-orientation.

    Boundary vertices force the colors of all their incident edges by
    position; interior vertices have a 3-way rotation phase pinned by the
    first incident colored edge, then propagate."""
    check_3_orientation(t, heads)
    b = t.boundary
    k = len(b)
    vr, vy = b[0], b[1]
    colors: dict = {}
    from collections import deque

    todo = deque()

    def set_color(e, c):
        if e in colors:
            assert colors[e] == c, f"color conflict on {e}"
            return
        colors[e] = c
        todo.append(e)

    # boundary vertices: every incident edge's color is forced by position
    for i in range(k):
        v = b[i]
        if v == vr:
            for d in t.vertex_darts(v):
                h = t.head_[d]
                e = ekey(v, h)
                set_color(e, YELLOW if heads[e] == h else RED)
            continue
        if v == vy:
            for d in t.vertex_darts(v):
                set_color(ekey(v, t.head_[d]), YELLOW)
            continue
        start = t.dart(v, b[(i + 1) % k])
        end = t.dart(v, b[(i - 1) % k])
        phase = 0  # 0: before out-r, 1: between out-r and out-y, 2: after out-y
        d = start
        while True:
            h = t.head_[d]
            e = ekey(v, h)
            if heads[e] == h:  # outgoing
                set_color(e, RED if phase == 0 else YELLOW)
                phase += 1
            else:
                set_color(e, (YELLOW, BLUE, RED)[phase])
            if d == end:
                break
            d = t.nxt[d]
        assert phase == 2, f"boundary vertex {v} lacks two outgoing edges"

    # interior vertices: pin the rotation phase from any colored edge
    interior = [v for v in range(t.nv) if v >= k]
    out_darts = {}
    for v in interior:
        out_darts[v] = [
            d for d in t.vertex_darts(v) if heads[ekey(v, t.head_[d])] == t.head_[d]
        ]
        assert len(out_darts[v]) == 3
    pinned: dict = {}

    def words_for_phase(v, phase):
        """edge -> color for all edges at v when the j-th out dart (ccw) has
        color (B,R,Y)[(j+phase) % 3]; incoming darts take the color that
        follows their preceding out dart (after out-b: yellow, after out-r:
        blue, after out-y: red)."""
        res = {}
        outs = out_darts[v]
        ccw = list(t.vertex_darts(v))
        i0 = ccw.index(outs[0])
        ccw = ccw[i0:] + ccw[:i0]
        out_set = set(outs)
        out_seq = [d for d in ccw if d in out_set]
        colmap = {d: (BLUE, RED, YELLOW)[(j + phase) % 3] for j, d in enumerate(out_seq)}
        follow = {BLUE: YELLOW, RED: BLUE, YELLOW: RED}
        cur = None
        for d in ccw:  # starts at an out dart, so cur is set immediately
            if d in colmap:
                cur = colmap[d]
                res[ekey(v, t.head_[d])] = cur
            else:
                res[ekey(v, t.head_[d])] = follow[cur]
        return res

    def try_pin(v):
        if v in pinned:
            return
        candidates = []
        for phase in range(3):
            table = words_for_phase(v, phase)
            if all(colors.get(e, c) == c for e, c in table.items()):
                candidates.append((phase, table))
        assert candidates, f"no consistent phase at interior vertex {v}"
        if len(candidates) == 1:
            phase, table = candidates[0]
            pinned[v] = phase
            for e, c in table.items():
                set_color(e, c)

    while todo:
        e = todo.popleft()
        for v in e:
            if v >= k and v not in pinned:
                try_pin(v)
    assert len(colors) == t.n_edges, "orientation coloring did not propagate"
    return Wood(assignment={e: (heads[e], c) for e, c in colors.items()}, complete=True)


def all_3_orientations(t: Triangulation) -> list:
    """All 3-orientations, as ekey->head dicts (backtracking with quotas)."""
    edges = t.undirected_edges()
    quota = {v: out_quota(t, v) for v in range(t.nv)}
    rem_inc = {v: 0 for v in range(t.nv)}
    for (u, v) in edges:
        rem_inc[u] += 1
        rem_inc[v] += 1
    out: list = []
    heads: dict = {}

    def rec(i):
        if i == len(edges):
            out.append(dict(heads))
            return
        u, v = edges[i]
        for tail, head in ((u, v), (v, u)):
            if quota[tail] == 0:
                continue
            quota[tail] -= 1
            rem_inc[u] -= 1
            rem_inc[v] -= 1
            # prune: every vertex must still be able to spend its quota
            if quota[u] <= rem_inc[u] and quota[v] <= rem_inc[v]:
                heads[ekey(u, v)] = head
                rec(i + 1)
                del heads[ekey(u, v)]
            quota[tail] += 1
            rem_inc[u] += 1
            rem_inc[v] += 1

    rec(0)
    return out


def brute_force_maximal(t: Triangulation) -> Wood:
    """Oracle: enumerate 3-orientations, keep the anticlockwise-free ones,
    assert uniqueness, and return the induced wood."""
    if t.n_edges > 18:
        raise TooLarge("brute_force_maximal guarded to 18 edges")
    survivors = []
    for heads in all_3_orientations(t):
        if _find_directed_triangle(t, heads, want_acw=True) is None:
            survivors.append(heads)
    if len(survivors) != 1:
        raise OracleContradiction(
            f"{len(survivors)} anticlockwise-free orientations (expected 1)"
        )
    return color_orientation(t, survivors[0])


# ---------------------------------------------------------------------------
# WOOD v1 serialization
# ---------------------------------------------------------------------------


def to_wood(wood: Wood) -> str:
    lines = ["WOOD v1"]
    for (u, v) in sorted(wood.assignment):
        h, c = wood.assignment[(u, v)]
        lines.append(f"e {u} {v} {h} {c}")
    return "\n".join(lines) + "\n"


def from_wood(text: str) -> Wood:
    assign = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line == "WOOD v1":
            continue
        parts = line.split()
        if parts[0] != "e":
            raise ValueError(f"bad WOOD line: {line!r}")
        u, v, h = int(parts[1]), int(parts[2]), int(parts[3])
        assign[ekey(u, v)] = (h, parts[4])
    return Wood(assignment=assign, complete=True)
