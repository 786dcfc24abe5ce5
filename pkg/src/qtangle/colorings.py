"""Quandle colorings of diagrams and their region (shadow) extensions.

Colorings are returned as integer arrays of shape ``(count, num_arcs)``
whose rows are sorted lexicographically; column ``k`` is the color of arc
``k`` in the diagram's arc numbering.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache

import numpy as np

from .algebra import AlexanderRing, Quandle, is_prime
from .diagrams import Diagram


class ColoringError(RuntimeError):
    pass


def _relations(d: Diagram):
    return [(c.in_arc, c.over_arc, c.out_arc, c.sign) for c in d.crossing_data]


def check_coloring(d: Diagram, q: Quandle, colors) -> bool:
    """Re-check the crossing relation at every crossing for one or many colorings."""
    C = np.atleast_2d(np.asarray(colors))
    for a_in, a_over, a_out, s in _relations(d):
        table = q.op if s > 0 else q.inv_op
        if not np.array_equal(table[C[:, a_in], C[:, a_over]], C[:, a_out]):
            return False
    return True


# ---------------------------------------------------------------------------
# backtracking with propagation


def _arc_order(d: Diagram, rels) -> list[int]:
    n = d.num_arcs
    touching: dict[int, list[int]] = {a: [] for a in range(n)}
    for i, (a, b, c, _) in enumerate(rels):
        for arc in (a, b, c):
            touching[arc].append(i)
    order: list[int] = []
    seen: set[int] = set()
    for root in ([rels[0][0]] if rels else []) + list(range(n)):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            arc = queue.popleft()
            order.append(arc)
            for i in touching[arc]:
                for other in rels[i][:3]:
                    if other not in seen:
                        seen.add(other)
                        queue.append(other)
    return order


def _backtrack(d: Diagram, q: Quandle, fixed: dict[int, int]) -> np.ndarray:
    rels = _relations(d)
    n_arcs = d.num_arcs
    op = q.op.tolist()
    inv = q.inv_op.tolist()
    touching: list[list[int]] = [[] for _ in range(n_arcs)]
    for i, (a, b, c, _) in enumerate(rels):
        for arc in {a, b, c}:
            touching[arc].append(i)
    order = _arc_order(d, rels)

    def propagate(colors, queue) -> bool:
        while queue:
            arc = queue.pop()
            for i in touching[arc]:
                a, b, c, s = rels[i]
                ca, cb, cc = colors[a], colors[b], colors[c]
                if cb is None:
                    continue
                fwd, back = (op, inv) if s > 0 else (inv, op)
                if ca is not None:
                    want = fwd[ca][cb]
                    if cc is None:
                        colors[c] = want
                        queue.append(c)
                    elif cc != want:
                        return False
                elif cc is not None:
                    colors[a] = back[cc][cb]
                    queue.append(a)
        return True

    start: list[int | None] = [None] * n_arcs
    for arc, x in fixed.items():
        if start[arc] is not None and start[arc] != x:
            return np.empty((0, n_arcs), dtype=np.int64)
        start[arc] = x
    if not propagate(start, list(fixed)):
        return np.empty((0, n_arcs), dtype=np.int64)

    found: list[list[int]] = []

    def search(colors):
        for arc in order:
            if colors[arc] is None:
                break
        else:
            found.append(colors)
            return
        for x in range(q.size):
            trial = list(colors)
            trial[arc] = x
            if propagate(trial, [arc]):
                search(trial)

    search(start)
    out = np.array(sorted(found), dtype=np.int64).reshape(len(found), n_arcs)
    return out


def enumerate_colorings(d: Diagram, q: Quandle) -> np.ndarray:
    """All colorings of a closed diagram, by backtracking search."""
    return _backtrack(d, q, {})


def enumerate_tangle_colorings(t: Diagram, q: Quandle, x: int) -> np.ndarray:
    """All colorings of a tangle whose four boundary ends are colored ``x``."""
    return _backtrack(t, q, {arc: int(x) for arc in t.boundary_arcs})


# ---------------------------------------------------------------------------
# linear solving for Alexander (and prime dihedral) quandles


def nullspace_mod_p(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of the right kernel of ``matrix`` over ``F_p``."""
    A = np.array(matrix, dtype=np.int64) % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        for k in others:
            if k != r:
                A[k] = (A[k] - A[k, c] * A[r]) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-A[row, f]) % p
    return basis


@lru_cache(maxsize=None)
def _linear_ring(q: Quandle) -> AlexanderRing | None:
    if q.ring is not None:
        return q.ring
    if q.spec and q.spec.startswith("dihedral:"):
        n = q.size
        if is_prime(n):
            return AlexanderRing(n, [1, 1])  # R_p = Z_p[t]/(t+1)
    return None


def is_linear(q: Quandle) -> bool:
    return _linear_ring(q) is not None


def _mult_matrix(ring: AlexanderRing, r: int) -> np.ndarray:
    """Matrix of ``v -> r*v`` on coefficient vectors."""
    d = ring.degree
    M = np.zeros((d, d), dtype=np.int64)
    for j in range(d):
        basis = ring.encode([1 if i == j else 0 for i in range(d)])
        M[:, j] = ring.decode(int(ring.mul_table[r, basis]))
    return M


def _system(d: Diagram, ring: AlexanderRing, zero_arcs=()) -> np.ndarray:
    p, deg = ring.p, ring.degree
    n = d.num_arcs * deg
    one = ring.one
    blocks = []
    for cd in d.crossing_data:
        a, b, c = cd.in_arc, cd.over_arc, cd.out_arc
        tt = ring.t if cd.sign > 0 else ring.t_inv
        one_minus = int(ring.add_table[one, ring.neg_table[tt]])
        # out - tt*in - (1-tt)*over = 0
        row = np.zeros((deg, n), dtype=np.int64)
        row[:, c * deg:(c + 1) * deg] += np.eye(deg, dtype=np.int64)
        row[:, a * deg:(a + 1) * deg] -= _mult_matrix(ring, tt)
        row[:, b * deg:(b + 1) * deg] -= _mult_matrix(ring, one_minus)
        blocks.append(row % p)
    for arc in zero_arcs:
        row = np.zeros((deg, n), dtype=np.int64)
        row[:, arc * deg:(arc + 1) * deg] = np.eye(deg, dtype=np.int64)
        blocks.append(row)
    if not blocks:
        return np.zeros((0, n), dtype=np.int64)
    return np.vstack(blocks)


def _kernel(d: Diagram, q: Quandle, zero_arcs=()) -> tuple[AlexanderRing, np.ndarray]:
    ring = _linear_ring(q)
    if ring is None:
        raise ColoringError(f"{q.label} is not a linear (Alexander) quandle")
    return ring, nullspace_mod_p(_system(d, ring, zero_arcs), ring.p)


def _expand(ring: AlexanderRing, basis: np.ndarray, n_arcs: int, shift=None) -> np.ndarray:
    p, deg = ring.p, ring.degree
    k = basis.shape[0]
    if k == 0:
        vectors = np.zeros((1, n_arcs * deg), dtype=np.int64)
    else:
        coeffs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
        vectors = (coeffs @ basis) % p
    weights = p ** np.arange(deg)
    codes = (vectors.reshape(-1, n_arcs, deg) * weights).sum(axis=2)
    if shift is not None:
        codes = ring.add_table[codes, shift]
    order = np.lexsort(codes.T[::-1])
    return codes[order]


def coloring_count(d: Diagram, q: Quandle, x: int | None = None) -> int:
    """``|Col_X(D)|``, or ``|Col_x(T)|`` for a tangle when ``x`` is given."""
    if not is_linear(q):
        if x is None:
            return len(enumerate_colorings(d, q))
        return len(enumerate_tangle_colorings(d, q, x))
    zero = d.boundary_arcs if x is not None else ()
    ring, basis = _kernel(d, q, zero)
    return ring.p ** basis.shape[0]


def solve_alexander_colorings(d: Diagram, q: Quandle) -> np.ndarray:
    """Colorings as the kernel of the linear system over ``F_p``.

    Each crossing gives ``x_out = t x_in + (1-t) x_over`` (``t^-1`` for a
    negative crossing) in ``Z_p[t]/(h)``, written out coordinatewise.
    """
    ring, basis = _kernel(d, q)
    return _expand(ring, basis, d.num_arcs)


def solve_tangle_colorings(t: Diagram, q: Quandle, x: int) -> np.ndarray:
    """Boundary-monochromatic colorings: the constant coloring ``x`` plus the
    kernel of the system with the boundary arcs set to zero."""
    ring, basis = _kernel(t, q, t.boundary_arcs)
    return _expand(ring, basis, t.num_arcs, shift=int(x))


def colorings(d: Diagram, q: Quandle) -> np.ndarray:
    """All colorings, by the linear solver when available."""
    return solve_alexander_colorings(d, q) if is_linear(q) else enumerate_colorings(d, q)


def tangle_colorings(t: Diagram, q: Quandle, x: int) -> np.ndarray:
    if is_linear(q):
        return solve_tangle_colorings(t, q, x)
    return enumerate_tangle_colorings(t, q, x)


# ---------------------------------------------------------------------------
# region colorings


def _face_tree(d: Diagram, base: int):
    """Spanning tree of the face adjacency graph: ``(from, to, arc, along_normal)``."""
    adjacency: dict[int, list[tuple[int, int, bool]]] = {}
    for e, (right, left) in d.edge_faces.items():
        arc = d.arc_of_edge[e]
        adjacency.setdefault(right, []).append((left, arc, True))
        adjacency.setdefault(left, []).append((right, arc, False))
    seen = {base}
    steps = []
    queue = deque([base])
    while queue:
        f = queue.popleft()
        for g, arc, along in adjacency.get(f, ()):
            if g not in seen:
                seen.add(g)
                steps.append((f, g, arc, along))
                queue.append(g)
    if len(seen) != len(d.faces):
        raise ColoringError("face graph is disconnected")
    return steps


def region_colorings(d: Diagram, q: Quandle, C: np.ndarray, base_face: int | None = None,
                     check: bool = True) -> np.ndarray:
    """Extend each arc coloring to regions, for every base color ``s``.

    Returns an array ``R[i, s, f]``: the color of face ``f`` for coloring
    ``i`` when ``base_face`` has color ``s``.  Crossing an arc colored ``y``
    along its normal multiplies by ``y``; against it, divides.
    """
    base = d.base_face if base_face is None else base_face
    C = np.atleast_2d(C)
    m, n = C.shape[0], q.size
    R = np.full((m, n, len(d.faces)), -1, dtype=np.int64)
    R[:, :, base] = np.arange(n)[None, :]
    for f, g, arc, along in _face_tree(d, base):
        table = q.op if along else q.inv_op
        R[:, :, g] = table[R[:, :, f], C[:, arc, None]]
    if check:
        for e, (right, left) in d.edge_faces.items():
            arc = d.arc_of_edge[e]
            if not np.array_equal(q.op[R[:, :, right], C[:, arc, None]], R[:, :, left]):
                raise ColoringError(f"region colors inconsistent across edge {e}")
    return R


def extend_region_coloring(d: Diagram, q: Quandle, coloring, base_face: int, s: int) -> np.ndarray:
    """The unique region coloring extending ``coloring`` with ``base_face`` colored ``s``."""
    R = region_colorings(d, q, np.asarray(coloring)[None, :], base_face)
    return R[0, int(s)]
