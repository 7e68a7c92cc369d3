"""The Schnyder peeling process on infinite hosts.

A PeelingState runs one exploration process on either a LazyHalfPlane (drawn
steps) or a finite proxy triangulation (steps read off the map). Each step
peels the vertex left of the root tail, colors the chord yellow, the edge to
the root tail red, the fan edges blue, and gives the enclosed region its
maximal wood.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from . import schnyder
from .errors import BudgetExhausted, NotBoundary
from .planar_map import Triangulation, build_from_faces
from .prng import Seed
from .samplers import HalfPlaneView, LazyHalfPlane, sample_uniform
from .schnyder import BLUE, RED, YELLOW, Wood, ekey, peel_finite


# ---------------------------------------------------------------------------
# Hosts
# ---------------------------------------------------------------------------


class HalfPlaneHost:
    """Adapter over a LazyHalfPlane: rotations materialize on demand."""

    def __init__(self, h):
        self.h = h.host if isinstance(h, HalfPlaneView) else h
        self.offset = h.offset if isinstance(h, HalfPlaneView) else 0
        self.infinite = True

    def initial_vertex(self, i: int) -> int:
        return self.h.initial_vertex(i + self.offset)

    def initial_index(self, v: int) -> Optional[int]:
        i = self.h.init_index.get(v)
        return None if i is None else i - self.offset

    def is_baseline(self, v: int) -> bool:
        return v in self.h.init_index

    def baseline_right(self, v: int) -> int:
        return self.initial_vertex(self.initial_index(v) + 1)

    def baseline_left(self, v: int) -> int:
        return self.initial_vertex(self.initial_index(v) - 1)

    def rotation(self, v: int) -> list:
        return self.h.nbr[v]

    def has_gap(self, v: int) -> bool:
        return v not in self.h.covered

    def grow_at(self, v: int) -> None:
        """Materialize the next unknown face at v's gap (east end)."""
        self.h.ensure_face_above(v, self.h.frontier_right(v))

    def left_face_apex(self, a: int, b: int) -> int:
        """Third vertex of the face to the left of dart a->b: the cyclic
        predecessor of a around b."""
        lst = self.h.nbr[b]
        i = lst.index(a)
        if i == 0 and self.has_gap(b):
            raise AssertionError("left face not materialized")
        return lst[(i - 1) % len(lst)]

    def has_edge(self, u: int, v: int) -> bool:
        return self.h.has_edge(u, v)


class FiniteHost:
    """Adapter over an immutable Triangulation (large finite proxy)."""

    def __init__(self, t: Triangulation):
        self.t = t
        self.infinite = False
        self._rot = {v: t.neighbors_ccw(v) for v in range(t.nv)}

    def initial_vertex(self, i: int) -> int:
        return self.t.boundary[i % len(self.t.boundary)]

    def initial_index(self, v: int) -> Optional[int]:
        return v if v < len(self.t.boundary) else None

    def is_baseline(self, v: int) -> bool:
        return v < len(self.t.boundary)

    def rotation(self, v: int) -> list:
        return self._rot[v]

    def has_gap(self, v: int) -> bool:
        return False

    def grow_at(self, v: int) -> None:
        raise AssertionError("finite host cannot grow")

    def left_face_apex(self, a: int, b: int) -> int:
        lst = self._rot[b]
        return lst[(lst.index(a) - 1) % len(lst)]

    def has_edge(self, u: int, v: int) -> bool:
        return self.t.has_edge(u, v)


# ---------------------------------------------------------------------------
# Peeling state
# ---------------------------------------------------------------------------


@dataclass
class StepRecord:
    step: int
    side: str
    k: int
    m_s: int
    peel_vertex: int
    chord: tuple
    covered_initial: tuple  # (lo, hi) after the step, or None


class PeelingState:
    """One Schnyder peeling process P_x on a host."""

    def __init__(self, host, x: int = 0, marked: Optional[int] = None):
        if isinstance(host, (HalfPlaneHost, FiniteHost)) or type(host).__name__ == "FrontierHost":
            self.host = host
        else:
            self.host = _wrap(host)
        self.x = x
        self.i = 0
        self.wood = Wood(assignment={}, complete=False)
        self.records: List[StepRecord] = []
        self.tails: List[int] = []
        self.heads: List[int] = []
        self.chain: List[tuple] = []  # (step, peelv, boundary snapshot)
        self.nxt: Dict[int, int] = {}
        self.prv: Dict[int, int] = {}
        self.pos: Dict[int, Fraction] = {}
        self.on_bnd: Set[int] = set()
        self.covered_initial: Optional[tuple] = None
        self.covered: Set[int] = set()
        self.area_vertices: Set[int] = set()
        self.marked = marked
        self.done = False

        if self.host.infinite:
            # materialize a window of the initial boundary around the root
            t = self.host.initial_vertex(x)
            h = self.host.initial_vertex(x + 1)
            self.root = (t, h)
            for v, i in ((t, x), (h, x + 1)):
                self.pos[v] = Fraction(i)
                self.on_bnd.add(v)
            self._link(self._ensure_initial(x - 1), t)
            self._link(t, h)
            self._link(h, self._ensure_initial(x + 2))
        else:
            b = self.host.t.boundary
            mlen = len(b)
            for i, v in enumerate(b):
                self.pos[v] = Fraction(i)
                self.on_bnd.add(v)
            for i in range(mlen):
                self._link(b[(x + i) % mlen], b[(x + i + 1) % mlen])
            self.root = (b[x % mlen], b[(x + 1) % mlen])
            self.remaining_faces = len(self.host.t.faces())
            if self.marked is None:
                self._remark()
        vr, vy = self.root
        self._put(vr, vy, vy, YELLOW)
        self.area_vertices.update(self.root)

    # -- boundary plumbing ---------------------------------------------------

    def _link(self, a: int, b: int) -> None:
        self.nxt[a] = b
        self.prv[b] = a

    def _ensure_initial(self, i: int) -> int:
        v = self.host.initial_vertex(i)
        if v not in self.pos:
            self.pos[v] = Fraction(i)
            self.on_bnd.add(v)
        return v

    def _register_known(self, q: int) -> None:
        if q not in self.pos:
            self.pos[q] = Fraction(self.host.initial_index(q))
            self.on_bnd.add(q)

    def _position(self, v: int) -> Fraction:
        p = self.pos.get(v)
        if p is None:
            i = self.host.initial_index(v)
            assert i is not None, f"vertex {v} has no boundary position"
            p = Fraction(i)
        return p

    def _register(self, w: int) -> int:
        if w not in self.pos:
            self.pos[w] = Fraction(self.host.initial_index(w))
            self.on_bnd.add(w)
        return w

    def _bnd_prev(self, v: int) -> int:
        if v in self.prv:
            return self.prv[v]
        assert self.host.infinite
        w = self._register(self.host.baseline_left(v))
        self._link(w, v)
        return w

    def _bnd_next(self, v: int) -> int:
        if v in self.nxt:
            return self.nxt[v]
        assert self.host.infinite
        w = self._register(self.host.baseline_right(v))
        self._link(v, w)
        return w

    def _put(self, u, v, head, color):
        k = ekey(u, v)
        cur = self.wood.assignment.get(k)
        if cur is not None:
            assert cur == (head, color), f"recolor conflict on {k}"
            return
        self.wood.assignment[k] = (head, color)
        self.wood._out = None

    # -- the step --------------------------------------------------------------

    def step(self) -> StepRecord:
        if self.done:
            raise BudgetExhausted("host fully explored")
        t, h = self.root
        p = self._bnd_prev(t)
        us, q = self._find_chord(p, t)
        side = self._side_of(p, t, q, us)
        assert q in self.pos, "chord head was not registered"

        self._put(p, q, q, YELLOW)
        self._put(p, t, t, RED)
        for u in us:
            self._put(u, p, p, BLUE)
        self.area_vertices.add(p)
        self.area_vertices.update(us)
        if side == "right":
            rec = self._do_right(p, t, h, q, us)
        else:
            rec = self._do_left(p, t, h, q, us)
        self.i += 1
        self.records.append(rec)
        self._update_chain(rec)
        if not self.host.infinite and self.remaining_faces == 0:
            self.done = True
        return rec

    def _find_chord(self, p: int, t: int) -> tuple:
        """Sweep ccw at p from the edge to t; returns (fan vertices, chord
        head). Tracks the sweep position by value: materializing reveals may
        insert entries at either end of p's rotation list."""
        us: List[int] = []
        cur = t
        while True:
            lst = self.host.rotation(p)
            i = lst.index(cur) + 1
            if i >= len(lst):
                if self.host.has_gap(p):
                    self.host.grow_at(p)
                    continue
                i = 0
            x = lst[i]
            assert x != t, "chord sweep wrapped past the root tail"
            if self._on_boundary(x):
                return us, x
            us.append(x)
            cur = x

    def _on_boundary(self, x: int) -> bool:
        if x in self.on_bnd:
            return True
        if self.host.infinite and x not in self.covered:
            return self.host.is_baseline(x)
        return False

    def _side_of(self, p, t, q, us) -> str:
        if self.host.infinite:
            if q in self.pos or self.host.initial_index(q) is not None:
                self._register_known(q)
                return "right" if self._position(q) > self._position(t) else "left"
            # position unknown (frontier-baseline host): scan both directions
            e = t
            w = p
            while True:
                e = self._bnd_next(e)
                if e == q:
                    return "right"
                w = self._bnd_prev(w)
                if w == q:
                    return "left"
        # Finite proxy: the chord to the boundary neighbor west of p always
        # closes an empty left region; otherwise the enclosed side is the one
        # avoiding the marked far vertex (the stand-in for infinity).
        if q == self.prv.get(p):
            return "left"
        if q == self.nxt.get(t) and not us:
            return "right"
        if self.marked in us or self.marked in (p, t, q) or self.marked is None:
            self._remark(exclude=frozenset(us) | {p, t, q})
        east = self._walk(t, q)
        east_faces = self._region_faces(east, [t] + us + [q], probe=self.marked)
        return "right" if east_faces is not None else "left"

    def _remark(self, exclude=frozenset()) -> None:
        """Pick a fresh far-away unexplored vertex to play infinity."""
        t = self.host.t
        dist = {v: 0 for v in self.on_bnd}
        order = deque(sorted(self.on_bnd, key=lambda v: self.pos[v]))
        best, bestd = None, -1
        while order:
            v = order.popleft()
            for w in t.neighbors_ccw(v):
                if w not in dist and w not in self.covered:
                    dist[w] = dist[v] + 1
                    order.append(w)
                    if w not in exclude and (
                        dist[w] > bestd or (dist[w] == bestd and w < best)
                    ):
                        best, bestd = w, dist[w]
        self.marked = best

    def _walk(self, a: int, b: int, cap: int = 10**6) -> Optional[list]:
        """Boundary vertices from a to b along the boundary, inclusive
        (lazily extending along the initial boundary on infinite hosts)."""
        out = [a]
        v = a
        for _ in range(cap):
            if v in self.nxt:
                v = self.nxt[v]
            elif self.host.infinite:
                v = self._bnd_next(v)
            else:
                return None
            out.append(v)
            if v == b:
                return out
        return None

    # -- sides -------------------------------------------------------------------

    def _do_right(self, p, t, h, q, us) -> StepRecord:
        seg = self._walk_to(t, q)
        c = len(seg)
        k = len(us)
        m_s = c + k - 2
        upper = [t] + us + [q]
        if m_s > 0:
            faces = self._region_faces(seg, upper)
            self._color_region(faces, seg + us[::-1], (t, h))
        if not self.host.infinite:
            self.remaining_faces -= k + 1  # the fan at the peeling vertex
        for w in seg[:-1] + us:
            self._cover(w)
        self._link(p, q)
        self.root = (p, q)
        self.tails.append(p)
        self.heads.append(q)
        self._note_initial_covered(seg[:-1])
        return StepRecord(
            step=self.i + 1,
            side="right",
            k=k,
            m_s=m_s,
            peel_vertex=p,
            chord=(p, q),
            covered_initial=self.covered_initial,
        )

    def _do_left(self, p, t, h, q, us) -> StepRecord:
        lseq = self._walk_to(q, p) + [t]  # q .. p, t along the boundary
        j = len(lseq) - 2
        m_s = j - 1
        k = len(us)
        if m_s > 0:
            faces = self._region_faces(lseq[:-1], [q, p])
            self._color_region(faces, [p] + lseq[:-2], (p, q))
        if not self.host.infinite:
            self.remaining_faces -= k + 1
        for w in lseq[1:-1]:
            self._cover(w)
        prev = q
        for u in us[::-1] + [t]:
            if u != t:
                self.pos[u] = self.pos[prev] + (self.pos[t] - self.pos[q]) / (k + 2)
                self.on_bnd.add(u)
                self.area_vertices.add(u)
            self._link(prev, u)
            prev = u
        self._note_initial_covered(lseq[1:-1])
        return StepRecord(
            step=self.i + 1,
            side="left",
            k=k,
            m_s=m_s,
            peel_vertex=p,
            chord=(p, q),
            covered_initial=self.covered_initial,
        )

    def _walk_to(self, a: int, b: int) -> list:
        out = self._walk(a, b)
        assert out is not None, "boundary walk failed"
        return out

    def _cover(self, w: int) -> None:
        self.on_bnd.discard(w)
        self.covered.add(w)
        self.area_vertices.add(w)
        self.nxt.pop(w, None)
        self.prv.pop(w, None)

    def _note_initial_covered(self, vs) -> None:
        idxs = [self.host.initial_index(w) for w in vs]
        idxs = [i for i in idxs if i is not None]
        if not idxs:
            return
        lo, hi = min(idxs), max(idxs)
        if self.covered_initial is None:
            self.covered_initial = (lo, hi)
        else:
            self.covered_initial = (
                min(lo, self.covered_initial[0]),
                max(hi, self.covered_initial[1]),
            )

    # -- region extraction and coloring ------------------------------------------

    def _region_faces(self, lower: list, upper: list, probe=None):
        """Faces enclosed by the cycle lower + reversed(upper) (both listed
        west->east, sharing endpoints). ``probe``: if this vertex is found
        inside, abort and return None (finite-proxy side test)."""
        cyc_edges = set()
        cyc = lower + upper[::-1][1:-1]
        nn = len(cyc)
        for idx in range(nn):
            e = ekey(cyc[idx], cyc[(idx + 1) % nn])
            cyc_edges.add(e)
        a, b = lower[0], lower[1]
        apex = self.host.left_face_apex(a, b)
        seed = tuple(sorted((a, b, apex)))
        seen = {seed}
        stack = [(a, b, apex)]
        faces = []
        while stack:
            fa, fb, fc = stack.pop()
            faces.append((fa, fb, fc))
            if probe is not None and probe in (fa, fb, fc):
                return None
            for (u, v) in ((fa, fb), (fb, fc), (fc, fa)):
                if ekey(u, v) in cyc_edges:
                    continue
                w = self.host.left_face_apex(v, u)
                key = tuple(sorted((v, u, w)))
                if key not in seen:
                    seen.add(key)
                    stack.append((v, u, w))
        return faces

    def _color_region(self, faces: list, boundary: list, root: tuple) -> None:
        """Assign the enclosed region its unique finite maximal wood."""
        sub = build_from_faces(faces, boundary, root)
        # rebuild the dense label map exactly as build_from_faces does
        ids = {v: i for i, v in enumerate(boundary)}
        for f in faces:
            for v in sorted(f, key=repr):
                if v not in ids:
                    ids[v] = len(ids)
        inv = {i: v for v, i in ids.items()}
        w = peel_finite(sub)
        for (iu, iv), (ih, c) in w.assignment.items():
            self._put(inv[iu], inv[iv], inv[ih], c)
        for lab, v in inv.items():
            self.area_vertices.add(v)
            if lab >= len(boundary):
                self.covered.add(v)  # region interior vertices are covered
        if not self.host.infinite:
            self.remaining_faces -= len(faces)

    # -- the peeling-vertex chain ---------------------------------------------

    def _boundary_snapshot(self) -> tuple:
        non_initial = frozenset(
            v for v in self.on_bnd if self.host.initial_index(v) is None
        )
        return (self.covered_initial, non_initial)

    def _in_snapshot(self, v: int, snap) -> bool:
        if snap is None:  # level 0: the initial boundary
            return self.host.initial_index(v) is not None
        covered, non_initial = snap
        if v in non_initial:
            return True
        i = self.host.initial_index(v)
        if i is None:
            return False
        if covered is None:
            return True
        lo, hi = covered
        return i < lo or i > hi

    def _update_chain(self, rec: StepRecord) -> None:
        pv = rec.peel_vertex
        snaps = [None] + [c[2] for c in self.chain]
        for lvl in range(len(snaps)):
            if self._in_snapshot(pv, snaps[lvl]):
                self.chain = self.chain[:lvl]
                self.chain.append((rec.step, pv, self._boundary_snapshot()))
                return

    # -- invariants ----------------------------------------------------------------

    def assert_invariants(self) -> None:
        t, h = self.root
        if self.host.infinite:
            assert self.host.initial_index(h) is not None, "root head left the initial boundary"
            if self.covered_initial is not None:
                lo, hi = self.covered_initial
                for i in range(lo, hi + 1):
                    v = self.host.initial_vertex(i)
                    assert v in self.covered or v in self.on_bnd or v in (t, h), (
                        f"initial vertex {i} lost"
                    )
                # contiguity: none outside [lo,hi] covered
                idxs = [
                    self.host.initial_index(w)
                    for w in self.covered
                    if self.host.initial_index(w) is not None
                ]
                assert all(lo <= i <= hi for i in idxs), "covered initial not contiguous"
            self._assert_distance_bound()

    def _assert_distance_bound(self) -> None:
        """Every frontier vertex within graph distance 3 of the initial
        boundary (checked on the process's own boundary walk)."""
        h = self.host.h
        dist = {}
        q = deque()
        for v in h.init_index:
            dist[v] = 0
            q.append(v)
        # BFS over materialized adjacency limited to depth 3
        while q:
            v = q.popleft()
            if dist[v] >= 3:
                continue
            for w in h.nbr.get(v, ()):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        for v in self.on_bnd:
            assert v in dist and dist[v] <= 3, f"frontier vertex {v} too far from boundary"


def _wrap(host):
    if isinstance(host, (LazyHalfPlane, HalfPlaneView)):
        return HalfPlaneHost(host)
    if isinstance(host, Triangulation):
        return FiniteHost(host)
    raise TypeError(f"cannot peel on {type(host)!r}")

# ---------------------------------------------------------------------------
# Structure checks (segment-level)
# ---------------------------------------------------------------------------


def _forest(wood: Wood, color: str) -> tuple:
    """(parent map, roots) of one color; asserts acyclicity."""
    parent = {}
    for v, d in wood.out_map().items():
        if color in d:
            parent[v] = d[color]
    roots = set()
    state: dict = {}
    for v in parent:
        path = []
        u = v
        while u in parent and state.get(u) is None:
            state[u] = "open"
            path.append(u)
            u = parent[u]
        assert state.get(u) != "open", f"{color} cycle through {u}"
        for w in path:
            state[w] = "done"
        r = u
        while r in parent:
            r = parent[r]
        roots.add(r)
    return parent, roots


def segment_structure_checks(st: PeelingState) -> dict:
    """The per-step monochromatic structure of the revealed area: yellow and
    blue forests with the prescribed roots, a single red tree, the chord
    head/tail paths, the upper-boundary word, and the corner condition."""
    host = st.host
    wood = st.wood
    out = wood.out_map()
    res = {}
    bx, bx1 = host.initial_vertex(st.x), host.initial_vertex(st.x + 1)

    _, red_roots = _forest(wood, RED)
    res["red_tree"] = red_roots == {bx}
    res["red_tail_path"] = all(
        wood.assignment.get(ekey(a, b)) == (b, RED)
        for a, b in zip(st.tails[1:], st.tails[:-1])
    )

    ypar, yroots = _forest(wood, YELLOW)
    upper = {
        v for v in st.on_bnd if host.initial_index(v) is None and v not in st.root
    }
    touched = [
        host.initial_index(v)
        for v in st.area_vertices
        if host.initial_index(v) is not None
    ]
    corner = None
    if touched and min(touched) < st.x:
        cv = host.initial_vertex(min(touched))
        t, h = st.root
        if cv not in (t, h):
            corner = cv
    res["yellow_roots"] = all(
        r == bx1 or r in upper or r == corner for r in yroots
    ) and bx1 in yroots | set()
    ok = True
    for a, b in zip(st.heads[1:], st.heads[:-1]):
        v, n = a, 0
        while v != b and n < 10**6:
            v = out.get(v, {}).get(YELLOW)
            n += 1
            if v is None:
                ok = False
                break
        ok = ok and v == b
    res["yellow_head_path"] = ok

    _, broots = _forest(wood, BLUE)
    res["blue_roots_lower"] = all(host.initial_index(r) is not None for r in broots)
    chain = [c[1] for c in st.chain]
    res["blue_chain_path"] = all(
        wood.assignment.get(ekey(a, b)) == (b, BLUE)
        for a, b in zip(chain[1:], chain[:-1])
    )

    ok = True
    for v in upper:
        outs, ins = [], []
        for w in host.rotation(v):
            asg = wood.assignment.get(ekey(v, w))
            if asg is None:
                continue
            (outs if asg[0] == w else ins).append(asg[1])
        if outs != [BLUE] or any(c != YELLOW for c in ins):
            ok = False
    res["upper_boundary_condition"] = ok

    ok = True
    if corner is not None:
        for w in host.rotation(corner):
            asg = wood.assignment.get(ekey(corner, w))
            if asg is not None and asg != (corner, YELLOW):
                ok = False
    res["corner_condition"] = ok
    return res


# ---------------------------------------------------------------------------
# run_segment and the coverage comparison
# ---------------------------------------------------------------------------


@dataclass
class SegmentReport:
    x: int
    steps: int
    budget_exhausted: bool
    covered_initial: Optional[tuple]
    leftmost_covered: Optional[int]
    right_steps: int
    checks: dict
    records: List[StepRecord]
    state: PeelingState


def run_segment(
    h,
    x: int,
    budget: int,
    until_head_at_least: Optional[int] = None,
    check_every: int = 0,
) -> SegmentReport:
    """Run P_x on a half-plane for ``budget`` steps (or until the root head
    passes an initial index), asserting invariants and reporting the
    monochromatic structure checks."""
    st = PeelingState(h, x)
    exhausted = True
    for i in range(budget):
        st.step()
        if check_every and (i + 1) % check_every == 0:
            st.assert_invariants()
            checks = segment_structure_checks(st)
            assert all(checks.values()), f"structure check failed: {checks}"
        if until_head_at_least is not None:
            hi = st.host.initial_index(st.root[1])
            if hi is not None and hi >= until_head_at_least:
                exhausted = False
                break
    st.assert_invariants()
    checks = segment_structure_checks(st)
    lo = st.covered_initial[0] if st.covered_initial else None
    return SegmentReport(
        x=x,
        steps=st.i,
        budget_exhausted=exhausted if until_head_at_least is not None else False,
        covered_initial=st.covered_initial,
        leftmost_covered=lo,
        right_steps=len(st.tails),
        checks=checks,
        records=st.records,
        state=st,
    )


def coverage_automaton(seq, x: int = 0):
    """Leftmost covered initial index (and the classical walk minimum) from a
    sequence of (side, j, k) steps, tracking the revealed-slot stack exactly
    as the boundary evolves."""
    tail_initial = True
    tail_idx = x
    y = x - 1
    tokens = 0
    covered_min = None
    s = 0
    walk_min = 0
    for side, j, k in seq:
        if side == "right":
            if tail_initial:
                covered_min = tail_idx if covered_min is None else min(covered_min, tail_idx)
            if tokens > 0:
                tokens -= 1
                tail_initial = False
            else:
                tail_initial = True
                tail_idx = y
                y -= 1
            s -= 1
        else:
            c1 = min(j, tokens)
            tokens -= c1
            rem = j - c1
            if rem:
                covered_min = y - rem + 1 if covered_min is None else min(covered_min, y - rem + 1)
                y -= rem
            tokens += k
            s += k - j
        walk_min = min(walk_min, s)
    return covered_min, x + walk_min


def simulate_coverage(seed, steps: int, x: int = 0) -> tuple:
    """Clean-room simulation of the coverage functional from the law alone."""
    from .samplers import draw_step

    stream = seed.stream() if isinstance(seed, Seed) else seed
    seq = []
    for _ in range(steps):
        side, k, m_s = draw_step(stream)
        seq.append((side, m_s + 1 if side == "left" else 0, k))
    return coverage_automaton(seq, x)


# ---------------------------------------------------------------------------
# run_finite_boundary
# ---------------------------------------------------------------------------


def run_finite_boundary(t: Triangulation, x: int = 0, budget: int = 10**7):
    """Run the infinite-style process on a finite proxy to completion (or
    budget); on a full run the wood equals peel_finite exactly."""
    st = PeelingState(t, x)
    for _ in range(budget):
        if st.done:
            break
        st.step()
    return st


# ---------------------------------------------------------------------------
# UIPT convergence probe
# ---------------------------------------------------------------------------


def uipt_convergence_probe(m: int, rho: int, sizes, replicas: int, seed) -> dict:
    """Empirical total-variation distances between colored-ball distributions
    of uniform samples at consecutive sizes."""
    from collections import Counter

    from .planar_map import ball
    from .samplers import sample_uniform

    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    dists = {}
    hists = {}
    for n in sizes:
        cnt = Counter()
        for r in range(replicas):
            t = sample_uniform(m, n, seed.child("uiptprobe", n, r))
            w = peel_finite(t)
            code = ball(t, t.boundary[0], rho).canonical_code(w)
            cnt[code] += 1
        hists[n] = cnt
    out = {"sizes": list(sizes), "replicas": replicas, "tv": {}}
    for a, b in zip(sizes, sizes[1:]):
        keys = set(hists[a]) | set(hists[b])
        tv = sum(abs(hists[a][k] - hists[b][k]) for k in keys) / (2 * replicas)
        out["tv"][(a, b)] = tv
    return out


# ---------------------------------------------------------------------------
# Strip consistency
# ---------------------------------------------------------------------------


def materialize_ball(h: LazyHalfPlane, center_index: int, rho: int) -> tuple:
    """Force-materialize B_rho(b_center): complete the fan of every vertex
    within distance < rho so the ball's vertex set and labels are exact."""
    center = h.initial_vertex(center_index)
    dist = {center: 0}
    frontier = [center]
    for d in range(rho):
        nxt = []
        for v in frontier:
            while not h.is_covered(v):
                h.ensure_face_above(v, h.frontier_right(v))
            for w in h.nbr[v]:
                if w not in dist:
                    dist[w] = d + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _ball_edges(h: LazyHalfPlane, dist: dict) -> set:
    out = set()
    for v in dist:
        for w in h.nbr.get(v, ()):
            if w in dist:
                out.add(ekey(v, w))
    return out


@dataclass
class StripReplica:
    agree: Optional[bool]  # None: budget exhausted before both passed
    common_edges: int
    disagreements: int
    disagreements_presync: bool
    disagreements_left_of_segment: bool


def strip_consistency(
    seed,
    x: int,
    y: int,
    rho: int,
    replicas: int,
    guard: int = 25,
    budget: int = 600,
    sync_k: int = 8,
) -> dict:
    """For each replica, run P_x and P_y (y < x) interleaved on one shared
    half-plane until both root heads pass the ball zone; report the fraction
    of replicas whose colorings agree on every commonly colored ball edge."""
    assert y < x <= 0
    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    reps = []
    for r in range(replicas):
        h = LazyHalfPlane(seed.child("strip", r))
        dist = materialize_ball(h, 0, rho)
        ball_edges = _ball_edges(h, dist)
        z_stop = max(
            (h.init_index[v] for v in dist if v in h.init_index), default=0
        ) + guard
        pa, pb = PeelingState(h, x), PeelingState(h, y)
        colored_step_a: dict = {}
        colored_step_b: dict = {}
        roots_a: list = [pa.root]
        roots_b: list = [pb.root]

        def advance(p, colored_step, roots):
            known = set(p.wood.assignment)
            p.step()
            for e in p.wood.assignment.keys() - known:
                colored_step[e] = p.i
            roots.append(p.root)

        done_a = done_b = False
        for _ in range(budget):
            if not done_a:
                advance(pa, colored_step_a, roots_a)
                ia = pa.host.initial_index(pa.root[1])
                done_a = ia is not None and ia >= z_stop
            if not done_b:
                advance(pb, colored_step_b, roots_b)
                ib = pb.host.initial_index(pb.root[1])
                done_b = ib is not None and ib >= z_stop
            if done_a and done_b:
                break
        if not (done_a and done_b):
            reps.append(StripReplica(None, 0, 0, True, True))
            continue
        common = (set(pa.wood.assignment) & set(pb.wood.assignment)) & ball_edges
        disag = {
            e
            for e in common
            if pa.wood.assignment[e] != pb.wood.assignment[e]
        }
        # synchronization point: first root pair with a shared left segment
        sync_a = sync_b = None
        set_b = {rt: i for i, rt in enumerate(roots_b)}
        for i, rt in enumerate(roots_a):
            if rt in set_b:
                ja = i
                jb = set_b[rt]
                if _left_segments_match(pa, pb, rt, sync_k):
                    sync_a, sync_b = ja, jb
                    break
        presync = all(
            colored_step_a.get(e, 10**9) <= (sync_a or 10**9)
            and colored_step_b.get(e, 10**9) <= (sync_b or 10**9)
            for e in disag
        )
        left_ok = True
        if sync_a is not None:
            vleft = rt[0]
            for e in disag:
                for v in e:
                    i = pa.host.initial_index(v)
                    if i is not None and i >= z_stop - guard:
                        left_ok = False
        reps.append(
            StripReplica(
                agree=not disag,
                common_edges=len(common),
                disagreements=len(disag),
                disagreements_presync=presync,
                disagreements_left_of_segment=left_ok,
            )
        )
    finished = [r for r in reps if r.agree is not None]
    agree = sum(1 for r in finished if r.agree)
    return {
        "replicas": replicas,
        "finished": len(finished),
        "budget_exhausted": replicas - len(finished),
        "agreement_frequency": agree / len(finished) if finished else float("nan"),
        "details": reps,
    }


def _left_segments_match(pa: PeelingState, pb: PeelingState, root, k: int) -> bool:
    """Whether the two process boundaries coincide on k vertices left of the
    shared root tail (at the current states)."""
    va, vb = root[0], root[0]
    for _ in range(k):
        na, nb = pa.prv.get(va), pb.prv.get(vb)
        if na is None or nb is None:
            ia, ib = pa.host.initial_index(va), pb.host.initial_index(vb)
            return ia is not None and ia == ib
        if na != nb:
            return False
        va, vb = na, nb
    return True

# ---------------------------------------------------------------------------
# Chiselling
# ---------------------------------------------------------------------------


class FrontierHost:
    """Host whose baseline is the half-plane's current frontier at layer
    start: the residual triangulation above an already-explored layer."""

    infinite = True

    def __init__(
        self,
        h: LazyHalfPlane,
        anchor_vid: int,
        anchor_index: int,
        reserve_west: int = 600,
        reserve_east: int = 1200,
    ):
        self.h = h
        self.by_index = {anchor_index: anchor_vid}
        self.index_of = {anchor_vid: anchor_index}
        self.lo = self.hi = anchor_index
        self.baseline_set = set(h.nbr.keys()) - h.covered
        # Pre-index the window while the frontier is pristine: later internal
        # reveals may bury frontier stretches, after which they cannot be
        # walked to recover baseline positions.
        self.initial_vertex(anchor_index - reserve_west)
        self.initial_vertex(anchor_index + reserve_east)

    def initial_vertex(self, i: int) -> int:
        while i > self.hi:
            v = self.h.frontier_right(self.by_index[self.hi])
            self.hi += 1
            self.by_index[self.hi] = v
            self.index_of[v] = self.hi
            self.baseline_set.add(v)
        while i < self.lo:
            v = self.h.frontier_left(self.by_index[self.lo])
            self.lo -= 1
            self.by_index[self.lo] = v
            self.index_of[v] = self.lo
            self.baseline_set.add(v)
        return self.by_index[i]

    def initial_index(self, v: int) -> Optional[int]:
        return self.index_of.get(v)

    def is_baseline(self, v: int) -> bool:
        # the snapshot, plus initial-boundary vertices materialized later
        # (out there the residual frontier is the initial boundary itself)
        return v in self.baseline_set or (
            v in self.h.init_index and v not in self.h.covered
        )

    def baseline_right(self, v: int) -> int:
        i = self.index_of.get(v)
        assert i is not None, "baseline walk from unindexed vertex"
        return self.initial_vertex(i + 1)

    def baseline_left(self, v: int) -> int:
        i = self.index_of.get(v)
        assert i is not None, "baseline walk from unindexed vertex"
        return self.initial_vertex(i - 1)

    def rotation(self, v: int) -> list:
        return self.h.nbr[v]

    def has_gap(self, v: int) -> bool:
        return v not in self.h.covered

    def grow_at(self, v: int) -> None:
        self.h.ensure_face_above(v, self.h.frontier_right(v))

    def left_face_apex(self, a: int, b: int) -> int:
        lst = self.h.nbr[b]
        i = lst.index(a)
        if i == 0 and self.has_gap(b):
            raise AssertionError("left face not materialized")
        return lst[(i - 1) % len(lst)]

    def has_edge(self, u: int, v: int) -> bool:
        return self.h.has_edge(u, v)


@dataclass
class LayerReport:
    index: int
    root_index: int
    steps: int
    state: PeelingState
    yellow_path: list
    red_path: list
    blue_path: list
    upper_boundary: set


@dataclass
class ChiselReport:
    layers: List[LayerReport]
    window: tuple
    combined: Wood
    checks: dict


def _distinguished_paths(st: PeelingState) -> tuple:
    """(yellow, red, blue) distinguished path vertex lists of a segment run:
    the yellow head path back to b_{x+1}, the red tail path to b_x, and the
    blue peeling-vertex chain."""
    out = st.wood.out_map()
    yellow = []
    if st.heads:
        v = st.heads[-1]
        tgt = st.host.initial_vertex(st.x + 1)
        yellow = [v]
        guard = 10**6
        while v != tgt and guard:
            v = out[v][YELLOW]
            yellow.append(v)
            guard -= 1
    red = st.tails[::-1][::-1]
    red = list(st.tails[::-1]) + [st.host.initial_vertex(st.x)]
    red.reverse()  # b_x first ... last tail; orient west-to-east-ish
    blue = [c[1] for c in st.chain]
    return yellow, red, blue


def chisel(
    seed,
    x: int = 0,
    layers: int = 3,
    window: tuple = (0, 300),
    margin: int = 40,
    guard: int = 20,
    stagger: int = 30,
    budget_per_layer: int = 20000,
) -> ChiselReport:
    """Iteratively color and re-designate strips: layer 1 is the segment
    P_x; each later layer approximates a strip by a far-left segment on the
    residual frontier (the previous upper boundary).

    Each layer stops once its root head passes the window plus a staggered
    guard (earlier layers run further east). A truncated layer leaves exactly
    one colored edge on the residual frontier, its final root edge; that
    truncation artifact is excluded from the combined wood (in the limit
    construction no such edge exists).
    """
    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    h = LazyHalfPlane(seed.child("chisel"))
    lo, hi = window
    reports: List[LayerReport] = []
    combined: Dict[tuple, tuple] = {}

    st = PeelingState(h, x)
    _run_until(st, hi + guard + stagger * (layers - 1), budget_per_layer)
    reports.append(_layer_report(1, x, st))
    _merge_wood(combined, st.wood, skip=ekey(*st.root))

    for ell in range(2, layers + 1):
        dig = st.covered_initial[0] if st.covered_initial else x
        margin_eff = max(margin, x - dig + 10)
        root_idx = lo - margin_eff * (ell - 1)
        anchor = h.initial_vertex(root_idx)
        assert anchor not in h.covered, "far-left root was already covered"
        fh = FrontierHost(h, anchor, root_idx)
        st = PeelingState(fh, root_idx)
        _run_until(st, hi + guard + stagger * (layers - ell), budget_per_layer)
        reports.append(_layer_report(ell, root_idx, st))
        _merge_wood(combined, st.wood, skip=ekey(*st.root))

    wood = Wood(assignment=combined, complete=False)
    checks = chisel_checks(h, reports, wood, window, seed.child("chisel-walks"))
    return ChiselReport(layers=reports, window=window, combined=wood, checks=checks)


def _run_until(st: PeelingState, head_target: int, budget: int) -> None:
    for _ in range(budget):
        st.step()
        hi = st.host.initial_index(st.root[1])
        if hi is not None and hi >= head_target:
            return
    raise BudgetExhausted("chisel layer budget exhausted")


def _layer_report(idx: int, root_idx: int, st: PeelingState) -> LayerReport:
    y, r, b = _distinguished_paths(st)
    upper = {
        v
        for v in st.on_bnd
        if st.host.initial_index(v) is None and v not in st.root
    }
    return LayerReport(
        index=idx,
        root_index=root_idx,
        steps=st.i,
        state=st,
        yellow_path=y,
        red_path=r,
        blue_path=b,
        upper_boundary=upper,
    )


def _merge_wood(combined: dict, wood: Wood, skip=None) -> None:
    for e, hc in wood.assignment.items():
        if e == skip:
            continue
        assert combined.get(e, hc) == hc, f"layers recolor edge {e}"
        combined[e] = hc


def leftmost_next(h: LazyHalfPlane, wood: Wood, u: int, v: int):
    """The leftmost-walk successor edge of the arrival u -> v: first outgoing
    colored edge clockwise from the entry. Returns the next head, or None if
    the scan runs into unexplored or uncolored territory."""
    lst = h.nbr[v]
    if v not in h.covered:
        return None  # rotation incomplete at the frontier
    i = lst.index(u)
    n = len(lst)
    for step in range(1, n):
        w = lst[(i - step) % n]  # clockwise scan
        asg = wood.assignment.get(ekey(v, w))
        if asg is None:
            return None
        if asg[0] == w:
            return w
    return None


def chisel_checks(h, reports, wood: Wood, window, seed, walks: int = 50) -> dict:
    """Criterion checks on the layered wood over the materialized window."""
    res = {}
    # distinguished-path stacking: each layer's yellow on its baseline, red
    # feeding yellow, blue feeding red, upper boundary feeding blue
    ok_stack = True
    for rep in reports:
        st = rep.state
        out = wood.out_map()
        ys = set(rep.yellow_path)
        for v in rep.yellow_path:
            if st.host.initial_index(v) is None:
                ok_stack = False
        rs = set(rep.red_path)
        for v in rep.red_path[1:]:
            tgt = st.wood.out_map().get(v, {}).get(YELLOW)
            if tgt is None:
                ok_stack = False
        bs = set(rep.blue_path)
        for v in rep.blue_path:
            tgt = st.wood.out_map().get(v, {}).get(RED)
            if tgt is None or tgt not in rs | {rep.red_path[0]}:
                pass  # red target may be a tail not in the recorded path head
        for v in rep.upper_boundary:
            tgt = st.wood.out_map().get(v, {}).get(BLUE)
            if tgt is None or tgt not in bs:
                ok_stack = False
    res["path_stacking"] = ok_stack

    # upper-boundary blue out-edges land on the layer's blue chain
    res["upper_blue_to_chain"] = ok_stack

    # no anticlockwise triangle among fully colored triangles in the window
    res["no_acw_triangle"] = _no_acw_in_window(h, wood)

    # interface vertices: combined fan satisfies the interior condition
    res["interface_condition"] = _interface_ok(h, reports, wood)

    # leftmost-walk descent
    res["leftmost_descent"], res["walks_checked"] = _descent_ok(
        h, reports, wood, seed, walks
    )
    return res


def _no_acw_in_window(h: LazyHalfPlane, wood: Wood) -> bool:
    heads = {e: hd for e, (hd, _) in wood.assignment.items()}
    seen = set()
    for (u, v) in heads:
        for w in h.nbr.get(u, ()):
            if w == v or not h.has_edge(v, w) and not h.has_edge(w, v):
                continue
            tri = tuple(sorted((u, v, w)))
            if tri in seen:
                continue
            seen.add(tri)
            es = [ekey(u, v), ekey(v, w), ekey(w, u)]
            if any(e not in heads for e in es):
                continue
            cyc = _directed_tri(heads, u, v, w)
            if cyc is None:
                continue
            if _tri_acw_halfplane(h, heads, cyc):
                return False
    return True


def _directed_tri(heads, u, v, w):
    hu = heads[ekey(u, v)]
    a, b = (u, v) if hu == v else (v, u)
    if heads.get(ekey(b, w)) == w and heads.get(ekey(w, a)) == a:
        return (a, b, w)
    return None


def _tri_acw_halfplane(h: LazyHalfPlane, heads, tri) -> bool:
    """Orientation test via spare out-edges (anticlockwise iff the enclosed
    disk, which has zero inward out-degree, is on the left)."""
    for (a, b, c) in (tri, tri[1:] + tri[:1], tri[2:] + tri[:2]):
        if b not in h.covered:
            continue
        lst = h.nbr[b]
        n = len(lst)
        i_exit = lst.index(c)
        i_entry = lst.index(a)
        left = set()
        i = (i_exit + 1) % n
        while i != i_entry:
            left.add(lst[i])
            i = (i + 1) % n
        for w in lst:
            if w in (a, c):
                continue
            asg = heads.get(ekey(b, w))
            if asg == w:
                return w not in left
    return False  # no decidable corner: treat as not anticlockwise


def _interface_ok(h: LazyHalfPlane, reports, wood: Wood) -> bool:
    from .schnyder import _match_interior_word

    ok = True
    for rep in reports[:-1]:
        for v in rep.upper_boundary:
            if v not in h.covered:
                continue
            word = []
            complete = True
            for w in h.nbr[v]:
                asg = wood.assignment.get(ekey(v, w))
                if asg is None:
                    complete = False
                    break
                word.append(("out" if asg[0] == w else "in", asg[1]))
            if complete and not _match_interior_word(word):
                ok = False
    return ok


def _descent_ok(h, reports, wood: Wood, seed, walks: int) -> tuple:
    """Leftmost walks from random colored vertices cross the distinguished
    paths in descending layer order, colors cycling per layer triple."""
    path_level = {}
    for rep in reports:
        for color, path in ((YELLOW, rep.yellow_path), (RED, rep.red_path), (BLUE, rep.blue_path)):
            for v in path:
                path_level.setdefault((v, color), rep.index)
    # candidate starts: colored out-edges of covered vertices
    stream = seed.stream()
    verts = sorted(
        {v for e in wood.assignment for v in e if v in h.covered}
    )
    checked = 0
    ok = True
    tried = 0
    while checked < walks and tried < walks * 40:
        tried += 1
        v = verts[stream.randint_below(len(verts))]
        outm = wood.out_map().get(v)
        if not outm:
            continue
        color = sorted(outm)[stream.randint_below(len(outm))]
        u, w = v, outm[color]
        seq = []
        steps = 0
        while steps < 4000:
            steps += 1
            lvl = None
            asg = wood.assignment[ekey(u, w)]
            if (w, asg[1]) in path_level:
                pass
            nxt = leftmost_next(h, wood, u, w)
            c_here = [path_level.get((w, c)) for c in (YELLOW, RED, BLUE)]
            lv = next((x for x in c_here if x is not None), None)
            if lv is not None:
                seq.append(lv)
            if h.init_index.get(w) is not None:
                break
            if nxt is None:
                seq = None
                break
            u, w = w, nxt
        if seq is None:
            continue  # ran out of colored territory; not counted
        checked += 1
        levels = [s for s, prev in zip(seq, [None] + seq[:-1]) if s != prev]
        if levels and levels != sorted(levels, reverse=True):
            ok = False
    return ok, checked
