"""Exact random generation of triangulations.

- sample_uniform: count-weighted chord/fan decomposition, exactly uniform.
- sample_free: Boltzmann size draw (exact inverse CDF) then uniform shape.
- LazyHalfPlane: a seeded half-plane materialized reveal by reveal via the
  exact step law, supporting consistent re-exploration through its ledger.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import _decomp, counting
from .counting import StepLaw, count_ext
from .errors import Empty, Infeasible, NotBoundary, OutOfRange
from .planar_map import Triangulation, build_from_faces
from .prng import Seed, Stream

_LAW = StepLaw()

_FREE_SIZE_CUTOFF = Fraction(10**12 - 1, 10**12)
_FREE_SIZE_CAP = 10**6
_DRAW_CAP = 10**7


def _as_stream(seed) -> Stream:
    if isinstance(seed, Stream):
        return seed
    if isinstance(seed, Seed):
        return seed.stream()
    return Seed(int(seed)).stream()


# ---------------------------------------------------------------------------
# Uniform sampling via the decomposition
# ---------------------------------------------------------------------------


_S_MEMO: Dict[tuple, int] = {}


def _tail_sum(b0: int, N: int) -> int:
    """S(b0, N) = sum_k count_ext(b0 + k, N - k): total completions of a
    half-open step with left part fixed. Satisfies S(b0, N) = count_ext(b0, N)
    + S(b0 + 1, N - 1); filled iteratively along the diagonal, with the counts
    themselves updated by exact diagonal ratios (much cheaper than factorial
    products)."""
    if N < 0:
        return 0
    v = _S_MEMO.get((b0, N))
    if v is not None:
        return v
    chain = []
    bb, nn = b0, N
    while nn >= 0 and (bb, nn) not in _S_MEMO:
        chain.append((bb, nn))
        bb, nn = bb + 1, nn - 1
    acc = _S_MEMO.get((bb, nn), 0)
    prev_count = None  # count at the previously processed (larger-b) element
    for (bb, nn) in reversed(chain):
        if bb == 0:
            c = 1 if nn == 0 else 0
        elif prev_count is None or prev_count == 0 or nn < 1:
            c = count_ext(bb, nn)
        else:
            r = counting.count_ratio_diag(bb, nn)  # count(bb+1,nn-1)/count(bb,nn)
            c = prev_count * r.denominator // r.numerator
            counting.cache_count(bb, nn, c)
        prev_count = c
        acc = acc + c
        _S_MEMO[(bb, nn)] = acc
    return _S_MEMO[(b0, N)]


def _an_order(m: int, n: int):
    """(a, n_l) pairs ordered by rank min(a, m-1-a) + min(n_l, n-n_l).

    Cell mass concentrates at the extremes of both coordinates in every
    regime (tiny or huge left part), so walking ranks outward from the four
    corners keeps the inverse-CDF walk short."""
    amax = m - 1
    ahalf, nhalf = amax // 2, n // 2
    for r in range(ahalf + nhalf + 2):
        for da in range(max(0, r - nhalf), min(r, ahalf) + 1):
            dn = r - da
            a_candidates = (da,) if da == amax - da else (da, amax - da)
            nl_candidates = (dn,) if dn == n - dn else (dn, n - dn)
            for a in a_candidates:
                for n_l in nl_candidates:
                    yield (a, n_l)


def _draw_cell(m: int, n: int, stream: Stream) -> tuple:
    """Draw one decomposition cell (a, k, n_l, n_r) with exact probability
    count(a, n_l) * count(b, n_r) / count(m, n), hierarchically: first the
    pair (a, n_l) using tail sums over k, then k."""
    u = stream.randint_below(count_ext(m, n))
    a = n_l = None
    for (a, n_l) in _an_order(m, n):
        w_left = count_ext(a, n_l)
        if w_left == 0:
            continue
        w = w_left * _tail_sum(m - 1 - a, n - n_l)
        if u < w:
            break
        u -= w
    else:
        raise AssertionError("cell draw fell off the distribution")
    rem = n - n_l
    b0 = m - 1 - a
    k = 0
    while True:
        w = w_left * count_ext(b0 + k, rem - k)
        if u < w:
            return (a, k, n_l, rem - k)
        u -= w
        k += 1
        if k > rem:
            raise AssertionError("k walk fell off the distribution")


def sample_uniform_faces(m: int, n: int, stream: Stream) -> list:
    """Face list (normalized labels: boundary 0..m+1, root (0,1)) of an
    exactly uniform triangulation from T_n^m."""
    if m < 1 or n < 0:
        raise OutOfRange("m >= 1 and n >= 0 required")
    if count_ext(m, n) == 0:
        raise Empty(f"no triangulations for (m={m}, n={n})")
    faces: list = []
    fresh = [m + 2]
    stack: list = [(m, n, list(range(m + 2)))]
    while stack:
        mm, nn, labels = stack.pop()
        if mm == 0:
            continue
        a, k, n_l, n_r = _draw_cell(mm, nn, stream)
        c = mm + 1 - a
        peel = labels[mm + 1]
        us = list(range(fresh[0], fresh[0] + k))
        fresh[0] += k
        faces.extend(_decomp.fan_faces(mm, a, k, us, peel, labels[0], labels[c - 1]))
        left_labels = [peel] + labels[c - 1 : mm + 1]
        right_labels = labels[:c] + us[::-1]
        stack.append((mm - 1 - a + k, n_r, right_labels))
        stack.append((a, n_l, left_labels))
    return faces


def sample_uniform(m: int, n: int, seed) -> Triangulation:
    """Exactly uniform sample from T_n^m."""
    stream = _as_stream(seed)
    faces = sample_uniform_faces(m, n, stream)
    return build_from_faces(faces, list(range(m + 2)), (0, 1))


# ---------------------------------------------------------------------------
# Free (Boltzmann) sampling
# ---------------------------------------------------------------------------


def _draw_free_size(m: int, stream: Stream) -> Optional[int]:
    """Size draw for mu_m: P(n) = count(m,n) alpha^-n / Z_m, exact inverse
    CDF. Returns None to request a resample (tail cutoff)."""
    u = stream.uniform_fraction(192)
    if u > _FREE_SIZE_CUTOFF:
        return None
    term = Fraction(counting.count_triangulations(m, 0)) / counting.z_critical(m)
    cum = term
    n = 0
    while u >= cum:
        term = term * counting.count_ratio_in_n(m, n) / counting.ALPHA
        cum += term
        n += 1
        if n > _FREE_SIZE_CAP:
            return None
    return n


def sample_free(m: int, seed) -> Triangulation:
    """Sample from the free distribution mu_m (weight alpha^-n / Z_m),
    by size-then-shape: exact inverse-CDF size draw, then a uniform shape."""
    stream = _as_stream(seed)
    if m < 1:
        raise OutOfRange("sample_free requires m >= 1")
    while True:
        n = _draw_free_size(m, stream)
        if n is not None:
            break
    faces = sample_uniform_faces(m, n, stream)
    return build_from_faces(faces, list(range(m + 2)), (0, 1))


# Free sampling without size tables: under mu_m, one decomposition step picks
# (a, k) with probability Z_a Z_b alpha^-k / Z_m (b = m-1-a+k) and the two
# sides are independent free samples. Equivalent in law to size-then-shape,
# and O(1) rational work per step, so it serves the half-plane fills where
# the enclosed boundary can be large.

_Z_MEMO: list = []
_W_MEMO: list = []


def _z(m: int) -> Fraction:
    while len(_Z_MEMO) <= m:
        _Z_MEMO.append(counting.z_critical(len(_Z_MEMO)))
    return _Z_MEMO[m]


def _w(b0: int) -> Fraction:
    """W_b = sum_k Z_{b+k} alpha^-k, by exact series inversion of the
    decomposition identity Z_m = sum_{a<m} Z_a W_{m-1-a}."""
    while len(_W_MEMO) <= b0:
        m = len(_W_MEMO) + 1
        acc = _z(m)
        for a in range(1, m):
            acc -= _z(a) * _W_MEMO[m - 1 - a]
        assert acc > 0, "W series inversion went nonpositive"
        _W_MEMO.append(acc / _z(0))
    return _W_MEMO[b0]


def _ends_first(amax: int):
    lo, hi = 0, amax
    while lo <= hi:
        yield lo
        if hi != lo:
            yield hi
        lo += 1
        hi -= 1


_FREE_A_CDF: Dict[int, tuple] = {}
_FREE_K_CDF: Dict[int, list] = {}


def _free_a_cdf(m: int) -> tuple:
    """(a order, cumulative P(a) list) for the free decomposition at m."""
    v = _FREE_A_CDF.get(m)
    if v is None:
        zm = _z(m)
        order = list(_ends_first(m - 1))
        cums = []
        cum = Fraction(0)
        for a in order:
            cum += _z(a) * _w(m - 1 - a) / zm
            cums.append(cum)
        assert cums[-1] == 1
        v = (order, cums)
        _FREE_A_CDF[m] = v
    return v


def _free_k_cdf(b0: int, upto: int) -> list:
    """Cumulative P(k | b0) = Z_{b0+k} alpha^-k / W_{b0}, extended on demand."""
    lst = _FREE_K_CDF.setdefault(b0, [])
    wb = _w(b0)
    while len(lst) <= upto:
        k = len(lst)
        prev = lst[-1] if lst else Fraction(0)
        lst.append(prev + _z(b0 + k) * counting.ALPHA**-k / wb)
    return lst


def _draw_free_cell(m: int, stream: Stream) -> tuple:
    """(a, k) with probability Z_a Z_{m-1-a+k} alpha^-k / Z_m, drawn as
    P(a) = Z_a W_{m-1-a} / Z_m then P(k|a) = Z_{b0+k} alpha^-k / W_{b0}."""
    order, cums = _free_a_cdf(m)
    u = stream.lazy_uniform()
    a = None
    for a, cum in zip(order, cums):
        if u.less_than(cum):
            break
    else:
        raise AssertionError("free a-draw fell off the distribution")
    b0 = m - 1 - a
    u2 = stream.lazy_uniform()
    k = 0
    while True:
        lst = _free_k_cdf(b0, k + 16)
        while k <= len(lst) - 1:
            if u2.less_than(lst[k]):
                return (a, k)
            k += 1
        if k > _DRAW_CAP:
            raise AssertionError("free k-draw fell off the distribution")


def sample_free_faces(m: int, stream: Stream) -> tuple:
    """(faces, n) for a mu_m draw with normalized labels (recursive free
    decomposition; no size tables)."""
    if m < 1:
        raise OutOfRange("sample_free requires m >= 1")
    faces: list = []
    fresh = [m + 2]
    stack: list = [(m, list(range(m + 2)))]
    while stack:
        mm, labels = stack.pop()
        if mm == 0:
            continue
        a, k = _draw_free_cell(mm, stream)
        c = mm + 1 - a
        peel = labels[mm + 1]
        us = list(range(fresh[0], fresh[0] + k))
        fresh[0] += k
        faces.extend(_decomp.fan_faces(mm, a, k, us, peel, labels[0], labels[c - 1]))
        stack.append((mm - 1 - a + k, labels[:c] + us[::-1]))
        stack.append((a, [peel] + labels[c - 1 : mm + 1]))
    n = fresh[0] - (m + 2)
    return faces, n


# ---------------------------------------------------------------------------
# Step-law draws
# ---------------------------------------------------------------------------


def draw_step(stream: Stream) -> tuple:
    """One (side, k, m_s) from the exact step law."""
    if stream.bernoulli(_LAW.p_left):
        k = _draw_r(stream)
        j = _draw_q(stream)
        return ("left", k, j - 1)
    k = _draw_right_k(stream)
    m_s = _draw_right_m(stream, k)
    return ("right", k, m_s)


def _walk_cdf(stream: Stream, first: int, weight, total) -> int:
    """Exact inverse-CDF walk: weight(i) summing to total over i >= first."""
    u = stream.uniform_fraction(128) * total
    cum = Fraction(0)
    i = first
    while True:
        cum += weight(i)
        if u < cum:
            return i
        i += 1
        if i - first > _DRAW_CAP:
            raise AssertionError("CDF walk exceeded cap")


def _draw_r(stream: Stream) -> int:
    return _walk_cdf(stream, 0, _LAW.r, Fraction(1))


def _draw_q(stream: Stream) -> int:
    return _walk_cdf(stream, 1, _LAW.q, Fraction(1))


def _draw_right_k(stream: Stream) -> int:
    return _walk_cdf(stream, 0, _LAW.right_k_marginal, _LAW.p_right)


def _draw_right_m(stream: Stream, k: int) -> int:
    total = Fraction(4 * counting.catalan(k), 4**k)
    return _walk_cdf(stream, k, _LAW.m_weight, total)

# ---------------------------------------------------------------------------
# The lazily materialized half-plane
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepOutcome:
    path: tuple
    root: tuple  # (tail vid, head vid)
    side: str
    k: int
    m_s: int
    n_s: int
    peel_vertex: int
    chord: tuple
    us: tuple
    covered: tuple  # vids removed from the frontier
    from_ledger: bool = False


class LazyHalfPlane:
    """Seeded, incrementally materialized UIHPT.

    The materialized region is a simply connected union of faces attached to
    the initial boundary; its frontier is a doubly linked path. Rotations of
    frontier vertices are stored ccw from their left frontier neighbor to
    their right one (the unexplored gap sits between the list ends).
    """

    def __init__(self, seed, stats_only: bool = False):
        self.seed = seed if isinstance(seed, Seed) else Seed(int(seed))
        self.stats_only = stats_only
        self.nbr: Dict[int, list] = {}
        self.fl: Dict[int, int] = {}
        self.fr: Dict[int, int] = {}
        self.covered: set = set()
        self.init_index: Dict[int, int] = {}
        self.by_index: Dict[int, int] = {}
        self._next_vid = 0
        self.ledger: list = []
        self.ledger_by_path: Dict[tuple, StepOutcome] = {}
        self._lo = 0
        self._hi = 1
        v0 = self._new_vertex(init_index=0)
        v1 = self._new_vertex(init_index=1)
        self.nbr[v0] = [v1]
        self.nbr[v1] = [v0]
        self.fl[v1] = v0
        self.fr[v0] = v1

    # -- vertices and the initial boundary ----------------------------------

    def _new_vertex(self, init_index=None) -> int:
        v = self._next_vid
        self._next_vid += 1
        self.nbr[v] = []
        if init_index is not None:
            self.init_index[v] = init_index
            self.by_index[init_index] = v
        return v

    def initial_vertex(self, i: int) -> int:
        while i > self._hi:
            self._extend_right()
        while i < self._lo:
            self._extend_left()
        return self.by_index[i]

    def _extend_right(self):
        old = self.by_index[self._hi]
        self._hi += 1
        v = self._new_vertex(init_index=self._hi)
        # the new initial edge is the east-most edge at the old right end
        self.nbr[old].append(v)
        self.nbr[v] = [old]
        self.fr[old] = v
        self.fl[v] = old

    def _extend_left(self):
        old = self.by_index[self._lo]
        self._lo -= 1
        v = self._new_vertex(init_index=self._lo)
        self.nbr[old].insert(0, v)
        self.nbr[v] = [old]
        self.fl[old] = v
        self.fr[v] = old

    def frontier_right(self, v: int) -> int:
        if v not in self.fr:
            assert self.init_index.get(v) == self._hi, f"{v} has no east link"
            self._extend_right()
        return self.fr[v]

    def frontier_left(self, v: int) -> int:
        if v not in self.fl:
            assert self.init_index.get(v) == self._lo, f"{v} has no west link"
            self._extend_left()
        return self.fl[v]

    def is_covered(self, v: int) -> bool:
        return v in self.covered

    # -- queries -------------------------------------------------------------

    def apex_above(self, a: int, b: int):
        """Third vertex of the face above edge (a, b) (a west of b), or None
        if that face is not materialized yet."""
        assert not self.stats_only, "rotation queries disabled in stats mode"
        lst = self.nbr[a]
        i = lst.index(b)
        if a not in self.covered and i == len(lst) - 1:
            return None
        return lst[(i + 1) % len(lst)]

    def ensure_face_above(self, a: int, b: int) -> None:
        """Materialize the face above the frontier edge (a, b) by one reveal
        rooted at (b, fr(b)); that reveal's peeling vertex is a."""
        assert self.fr.get(a) == b, "(a,b) must be a frontier edge"
        h = self.frontier_right(b)
        self.peel(b, h)
        assert self.apex_above(a, b) is not None

    def neighbors(self, v: int) -> list:
        return self.nbr[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbr.get(u, ())

    # -- the reveal ------------------------------------------------------------

    def peel(self, t: int, h: int, seed_path: Optional[tuple] = None) -> StepOutcome:
        """One step-shaped reveal rooted at the frontier edge (t, h).

        A previously used ``seed_path`` returns the recorded outcome unchanged
        (ledger determinism); otherwise (side, k, m_s) is drawn from the exact
        law, the enclosed region is filled with a free sample, and the whole
        revealed partial triangulation is spliced in.
        """
        import dataclasses

        if seed_path is None:
            seed_path = ("reveal", len(self.ledger))
        if seed_path in self.ledger_by_path:
            return dataclasses.replace(self.ledger_by_path[seed_path], from_ledger=True)
        if self.fr.get(t) != h:
            raise NotBoundary(f"({t},{h}) is not a current frontier edge")
        stream = self.seed.child(*seed_path).stream()
        side, k, m_s = draw_step(stream)
        if self.stats_only:
            out = self._reveal_stats(t, h, side, k, m_s, seed_path)
        elif side == "right":
            out = self._reveal_right(t, h, k, m_s, stream, seed_path)
        else:
            out = self._reveal_left(t, h, k, m_s, stream, seed_path)
        self.ledger.append(out)
        self.ledger_by_path[seed_path] = out
        return out

    def _reveal_stats(self, t, h, side, k, m_s, seed_path) -> StepOutcome:
        """Frontier-only splice: fan vertices and frontier rewiring without
        materializing the enclosed region. The frontier evolution and the
        step law are unaffected by fill interiors, so step statistics are
        exact; rotation queries are disabled in this mode."""
        p = self.frontier_left(t)
        if side == "right":
            c = m_s + 2 - k
            seq = [t, h]
            while len(seq) < c:
                seq.append(self.frontier_right(seq[-1]))
            vc = seq[-1]
            us = [self._new_vertex() for _ in range(k)]
            covered = seq[:-1] + us
            for w in covered:
                self.covered.add(w)
                self.fl.pop(w, None)
                self.fr.pop(w, None)
            self.fr[p] = vc
            self.fl[vc] = p
            chord = (p, vc)
        else:
            j = m_s + 1
            lseq = [p]
            while len(lseq) <= j:
                lseq.append(self.frontier_left(lseq[-1]))
            lseq.reverse()
            vc = lseq[0]
            us = [self._new_vertex() for _ in range(k)]
            covered = lseq[1:]
            for w in covered:
                self.covered.add(w)
                self.fl.pop(w, None)
                self.fr.pop(w, None)
            chain = [vc] + us[::-1] + [t]
            for a, b in zip(chain, chain[1:]):
                self.fr[a] = b
                self.fl[b] = a
            chord = (p, vc)
        return StepOutcome(
            path=seed_path,
            root=(t, h),
            side=side,
            k=k,
            m_s=m_s,
            n_s=-1,
            peel_vertex=p,
            chord=chord,
            us=tuple(us),
            covered=tuple(covered),
        )

    def _map_fill(self, fill: list, mapping: dict) -> list:
        """Map a normalized free sample through ``mapping``, allocating fresh
        vids for its interior labels in deterministic order."""
        local = dict(mapping)
        out = []
        for f in fill:
            g = []
            for v in f:
                if v not in local:
                    local[v] = self._new_vertex()
                g.append(local[v])
            out.append(tuple(g))
        return out

    def _reveal_right(self, t, h, k, m_s, stream, seed_path) -> StepOutcome:
        p = self.frontier_left(t)
        c = m_s + 2 - k
        seq = [t, h]
        while len(seq) < c:
            seq.append(self.frontier_right(seq[-1]))
        vc = seq[-1]
        us = [self._new_vertex() for _ in range(k)]
        faces = _decomp.fan_faces(m_s, 0, k, us, p, t, vc)
        n_s = 0
        if m_s > 0:
            fill, n_s = sample_free_faces(m_s, stream)
            mapping = {i: seq[i] for i in range(c)}
            for i in range(1, k + 1):
                mapping[c - 1 + i] = us[k - i]
            faces += self._map_fill(list(fill), mapping)
        self._splice(
            faces,
            bnd=[p] + seq,
            root=(p, t),
            gains_east=p,
            gains_west=vc,
            covered_bnd=seq[:-1],
            new_frontier=[],
        )
        return StepOutcome(
            path=seed_path,
            root=(t, h),
            side="right",
            k=k,
            m_s=m_s,
            n_s=n_s,
            peel_vertex=p,
            chord=(p, vc),
            us=tuple(us),
            covered=tuple(seq[:-1]),
        )

    def _reveal_left(self, t, h, k, m_s, stream, seed_path) -> StepOutcome:
        p = self.frontier_left(t)
        j = m_s + 1
        lseq = [p]
        while len(lseq) <= j:
            lseq.append(self.frontier_left(lseq[-1]))
        lseq.reverse()  # [v_c, v_{c+1}, ..., v_{-1}, p]
        vc = lseq[0]
        us = [self._new_vertex() for _ in range(k)]
        faces = _decomp.fan_faces(m_s, 0, k, us, p, t, vc)
        n_s = 0
        if m_s > 0:
            fill, n_s = sample_free_faces(m_s, stream)
            mapping = {0: p, 1: vc}
            for i in range(2, m_s + 2):
                mapping[i] = lseq[i - 1]
            faces += self._map_fill(list(fill), mapping)
        self._splice(
            faces,
            bnd=lseq + [t] + us,
            root=(vc, lseq[1]),
            gains_east=vc,
            gains_west=t,
            covered_bnd=lseq[1:],
            new_frontier=us[::-1],  # west -> east order between vc and t
        )
        return StepOutcome(
            path=seed_path,
            root=(t, h),
            side="left",
            k=k,
            m_s=m_s,
            n_s=n_s,
            peel_vertex=p,
            chord=(p, vc),
            us=tuple(us),
            covered=tuple(lseq[1:]),
        )

    def _splice(self, faces, bnd, root, gains_east, gains_west, covered_bnd, new_frontier):
        """Validate the revealed region as a small triangulation and merge its
        rotations into the half-plane; rewire the frontier.

        ``gains_east`` is the remaining vertex at the west end of the replaced
        frontier stretch (it gains edges at its east end); ``gains_west`` the
        remaining vertex at the east end. ``new_frontier`` lists new frontier
        vertices west -> east.
        """
        r = build_from_faces(faces, bnd, root)
        # replicate build_from_faces's dense relabeling
        to_r = {v: i for i, v in enumerate(bnd)}
        for f in faces:
            for v in sorted(f, key=repr):
                if v not in to_r:
                    to_r[v] = len(to_r)
        from_r = {i: v for v, i in to_r.items()}
        nxt_on_r = {bnd[i]: bnd[(i + 1) % len(bnd)] for i in range(len(bnd))}

        def rot_from(w, start_nb):
            d0 = r.dart(to_r[w], to_r[start_nb])
            return [from_r[x] for x in r.neighbors_ccw(to_r[w], start=d0)]

        def check_new(w, block):
            known = set(self.nbr[w])
            for x in block:
                assert x not in known, f"edge ({w},{x}) spliced twice"
            return block

        rot = rot_from(gains_east, nxt_on_r[gains_east])
        self.nbr[gains_east].extend(check_new(gains_east, rot[1:]))
        rot = rot_from(gains_west, nxt_on_r[gains_west])
        self.nbr[gains_west] = check_new(gains_west, rot[:-1]) + self.nbr[gains_west]
        for w in covered_bnd:
            rot = rot_from(w, nxt_on_r[w])
            self.nbr[w].extend(check_new(w, rot[1:-1]))
            self.covered.add(w)
            self.fl.pop(w, None)
            self.fr.pop(w, None)
        for w in new_frontier:
            assert not self.nbr[w], "new frontier vertex must be fresh"
            self.nbr[w] = rot_from(w, nxt_on_r[w])
        for i in range(len(bnd), r.nv):
            w = from_r[i]
            assert not self.nbr[w], "interior vertex must be fresh"
            self.nbr[w] = [from_r[x] for x in r.neighbors_ccw(i)]
            self.covered.add(w)
        west_to_east = [gains_east] + list(new_frontier) + [gains_west]
        for a, b in zip(west_to_east, west_to_east[1:]):
            self.fr[a] = b
            self.fl[b] = a
        for w in west_to_east:
            lst = self.nbr[w]
            assert len(lst) == len(set(lst)), f"duplicate neighbor at {w}"
        for w in covered_bnd:
            lst = self.nbr[w]
            assert len(lst) == len(set(lst)), f"duplicate neighbor at {w}"

    # -- rerooting -------------------------------------------------------------

    def reroot(self, k: int) -> "HalfPlaneView":
        return HalfPlaneView(self, k)


@dataclass(frozen=True)
class HalfPlaneView:
    """The same half-plane with initial-boundary indices shifted so index 0
    lands on b_k; map state and ledger are shared."""

    host: LazyHalfPlane
    offset: int = 0

    def initial_vertex(self, i: int) -> int:
        return self.host.initial_vertex(i + self.offset)

    def peel(self, t: int, h: int, seed_path=None) -> StepOutcome:
        return self.host.peel(t, h, seed_path)

    def reroot(self, k: int) -> "HalfPlaneView":
        return HalfPlaneView(self.host, self.offset + k)


def peel_uihpt_step(h, frontier_edge: tuple, seed_path=None) -> StepOutcome:
    """Draw (or replay) a peeling step at a frontier edge of a LazyHalfPlane."""
    host = h.host if isinstance(h, HalfPlaneView) else h
    t, hd = frontier_edge
    return host.peel(t, hd, seed_path)


def reroot(obj, new_root):
    """Reroot a Triangulation (boundary edge pair) or a half-plane (index)."""
    if isinstance(obj, Triangulation):
        return obj.reroot(new_root)
    if isinstance(obj, (LazyHalfPlane, HalfPlaneView)):
        if isinstance(new_root, tuple):
            raise NotBoundary("half-plane reroot takes an initial boundary index")
        return obj.reroot(new_root)
    raise TypeError(f"cannot reroot {type(obj)!r}")
