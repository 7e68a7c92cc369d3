"""Chord/fan decomposition of rooted triangulations.

One peeling step at the vertex left of the root tail splits a triangulation
of an (m+2)-gon with n interior vertices into a fan of triangles plus two
smaller rooted triangulations T_l and T_r. The split is a bijection, so it
drives both the exhaustive generator and the exact count-weighted sampler.

Label convention for a normalized (m, n) piece: boundary vertices are
0..m+1 anticlockwise with root edge (0, 1); the peeling vertex is m+1;
interior labels start at m+2 in emission order.
"""

from __future__ import annotations

from functools import lru_cache


def fan_faces(m: int, a: int, k: int, us: list, peel, lower0, chord_head) -> list:
    """Faces of the fan at the peeling vertex.

    ``peel`` is the peeling vertex label, ``lower0`` the root tail (paper v_1),
    ``chord_head`` the chord head (paper v_c), ``us`` the k revealed neighbors
    in ccw order from the root tail.
    """
    if k == 0:
        return [(peel, lower0, chord_head)]
    faces = [(peel, lower0, us[0])]
    for i in range(k - 1):
        faces.append((peel, us[i], us[i + 1]))
    faces.append((peel, us[k - 1], chord_head))
    return faces


def relabel(faces: list, mapping: dict, fresh_start: int, m_child: int) -> tuple:
    """Map a normalized child's faces through ``mapping`` on its boundary,
    assigning fresh labels (from ``fresh_start``) to its interior vertices.
    Returns (mapped faces, next fresh label)."""
    nxt = fresh_start
    local = dict(mapping)
    out = []
    for f in faces:
        g = []
        for v in f:
            if v not in local:
                if v < m_child + 2:
                    raise AssertionError("child boundary label missing from mapping")
                local[v] = nxt
                nxt += 1
            g.append(local[v])
        out.append(tuple(g))
    return out, nxt


def glue(m: int, a: int, k: int, faces_l: list, faces_r: list) -> list:
    """Assemble the faces of the parent (m, .) triangulation from one
    decomposition cell. ``a`` is T_l's boundary parameter m_l; ``k`` the number
    of fan vertices; ``faces_l``/``faces_r`` normalized child face lists."""
    c = m + 1 - a  # chord head is paper v_c = label c-1
    b = m - 1 - a + k
    peel = m + 1
    fresh = m + 2
    us = list(range(fresh, fresh + k))
    fresh += k
    faces = fan_faces(m, a, k, us, peel, 0, c - 1)
    # T_l boundary (a+2 labels): root tail -> peel, head -> chord head, then on
    map_l = {0: peel, 1: c - 1}
    for t in range(1, a + 1):
        map_l[1 + t] = c - 1 + t
    fl, fresh = relabel(faces_l, map_l, fresh, a)
    faces += fl
    # T_r boundary (b+2 labels): identity on 0..c-1, then the fan vertices
    map_r = {i: i for i in range(c)}
    for t in range(1, k + 1):
        map_r[c - 1 + t] = us[k - t]
    fr, fresh = relabel(faces_r, map_r, fresh, b)
    faces += fr
    return faces


def cells(m: int, n: int):
    """All decomposition cells (a, k, n_l, n_r) in the canonical walk order.

    The order front-loads the high-probability cells: a ascending, k ascending,
    and the interior split zigzagging from both ends (mass concentrates there).
    """
    for a in range(m):
        for k in range(n + 1):
            b = m - 1 - a + k
            avail = n - k
            if a == 0 and b == 0:
                if avail == 0:
                    yield (0, k, 0, 0)
            elif a == 0:
                yield (0, k, 0, avail)
            elif b == 0:
                yield (a, k, avail, 0)
            else:
                for n_l in _zigzag(avail):
                    yield (a, k, n_l, avail - n_l)


def _zigzag(n: int) -> list:
    lo, hi, out = 0, n, []
    while lo <= hi:
        out.append(lo)
        if hi != lo:
            out.append(hi)
        lo += 1
        hi -= 1
    return out


@lru_cache(maxsize=None)
def generate_face_lists(m: int, n: int) -> tuple:
    """All normalized face lists for (m, n), via the decomposition recurrence."""
    if m == 0:
        return (tuple(),) if n == 0 else tuple()
    out = []
    for (a, k, n_l, n_r) in cells(m, n):
        b = m - 1 - a + k
        for fl in generate_face_lists(a, n_l):
            for fr in generate_face_lists(b, n_r):
                out.append(tuple(glue(m, a, k, list(fl), list(fr))))
    return tuple(out)
