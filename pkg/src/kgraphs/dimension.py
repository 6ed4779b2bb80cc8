"""The graded dimension group of a k-graph and its maps.

An element is a class [x, n]: x an integer row vector over the vertices,
n a Z^k shift. [x, n] = [y, m] iff x*A_{l-n} = y*A_{l-m} for some l >= n v m,
which is decided by multiplying the difference at the join by P^d, where
P is the product of all one-step matrices and d the vertex count (the
kernel chain of P stabilizes within d steps).
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .core import Degree, KGraph, Shift, deg_sub, unit_degree, vertex_matrix, zero_degree
from .intmat import (
    Matrix,
    is_nonneg_vec,
    is_zero_vec,
    mat_eq,
    mat_mul,
    mat_pow,
    rank,
    vec_add,
    vec_mat,
    vec_scale,
    vec_sub,
)


class RankMismatch(Exception):
    pass


class DimensionMismatch(Exception):
    pass


class DimElement(NamedTuple):
    x: tuple[int, ...]
    n: Shift


class GeneratorMap(NamedTuple):
    """A candidate graded-module map given on generators: images[v] is the
    image of v(0) in the target's dimension group."""

    source: KGraph
    target: KGraph
    images: dict[str, DimElement]


class SSEWitness(NamedTuple):
    p: Degree
    r: Matrix
    s: Matrix


class ExhaustedBounds(NamedTuple):
    p_max: int
    entry_max: int


# ----------------------------------------------------------------- elements

def dim_element(x, n) -> DimElement:
    return DimElement(tuple(int(c) for c in x), tuple(int(c) for c in n))


def unit_element(g: KGraph, v: str, n: Shift | None = None) -> DimElement:
    """The generator v(n), by default v(0)."""
    if v not in g.vertex_index:
        raise ValueError(f"unknown vertex {v!r}")
    x = tuple(1 if w == v else 0 for w in g.vertices)
    return DimElement(x, tuple(n) if n is not None else zero_degree(g.rank))


def zero_element(g: KGraph, n: Shift | None = None) -> DimElement:
    return DimElement((0,) * len(g.vertices), tuple(n) if n is not None else zero_degree(g.rank))


def _check_element(g: KGraph, a: DimElement) -> None:
    if len(a.x) != len(g.vertices):
        raise RankMismatch(f"vector has {len(a.x)} entries for {len(g.vertices)} vertices")
    if len(a.n) != g.rank:
        raise RankMismatch(f"shift has {len(a.n)} coordinates for rank {g.rank}")


def _shift_join(m: Shift, n: Shift) -> Shift:
    return tuple(max(a, b) for a, b in zip(m, n, strict=True))


def _push(g: KGraph, a: DimElement, p: Shift) -> list[int]:
    # the representative of a at level p >= a.n: x * A_{p - a.n}
    return vec_mat(list(a.x), vertex_matrix(g, deg_sub(p, a.n)))


def total_matrix(g: KGraph) -> Matrix:
    """P = product of all one-step matrices."""
    return vertex_matrix(g, (1,) * g.rank)


def dge_eq(g: KGraph, a: DimElement, b: DimElement) -> bool:
    _check_element(g, a)
    _check_element(g, b)
    p = _shift_join(a.n, b.n)
    z = vec_sub(_push(g, a, p), _push(g, b, p))
    if is_zero_vec(z):
        return True
    d = len(g.vertices)
    return is_zero_vec(vec_mat(z, vertex_matrix(g, (d,) * g.rank)))


def dge_add(g: KGraph, a: DimElement, b: DimElement) -> DimElement:
    _check_element(g, a)
    _check_element(g, b)
    p = _shift_join(a.n, b.n)
    return DimElement(tuple(vec_add(_push(g, a, p), _push(g, b, p))), p)


def dge_shift(a: DimElement, m: Shift) -> DimElement:
    if len(m) != len(a.n):
        raise RankMismatch(f"shift has {len(m)} coordinates, element has {len(a.n)}")
    return DimElement(a.x, tuple(x + y for x, y in zip(a.n, m)))


def dge_scale(c: int, a: DimElement) -> DimElement:
    return DimElement(tuple(vec_scale(c, list(a.x))), a.n)


def dge_neg(a: DimElement) -> DimElement:
    return dge_scale(-1, a)


def positivity(g: KGraph, a: DimElement, q_max: int) -> str:
    """'positive' | 'not_positive' | 'unknown', searched up to level q_max.

    x*A_q >= 0 for some q <= q_max*(1,..,1) iff it holds at the corner,
    since nonnegativity propagates through the nonnegative matrices; an
    element whose negation is positive is itself positive only if zero.
    """
    _check_element(g, a)
    if q_max < 0:
        raise ValueError("q_max must be >= 0")
    corner = tuple(max(q_max, c) for c in a.n)
    pushed = _push(g, a, corner)
    if is_nonneg_vec(pushed):
        return "positive"
    if is_nonneg_vec(vec_scale(-1, pushed)) and not dge_eq(g, a, zero_element(g, a.n)):
        return "not_positive"
    return "unknown"


# ------------------------------------------------------------ generator maps

def generator_map(source: KGraph, target: KGraph, images: dict[str, DimElement]) -> GeneratorMap:
    for v in source.vertices:
        if v not in images:
            raise ValueError(f"no image for vertex {v!r}")
        _check_element(target, images[v])
    if set(images) != set(source.vertices):
        raise ValueError("images given for unknown vertices")
    return GeneratorMap(source, target, dict(images))


def identity_generator_map(g: KGraph) -> GeneratorMap:
    return GeneratorMap(g, g, {v: unit_element(g, v) for v in g.vertices})


def identity_map_between(source: KGraph, target: KGraph) -> GeneratorMap:
    """v(0) -> v(0) for graphs sharing vertex names (e.g. twisted pairs)."""
    if set(source.vertices) != set(target.vertices):
        raise ValueError("graphs do not share vertex names")
    return GeneratorMap(source, target, {v: unit_element(target, v) for v in source.vertices})


def apply_generator_map(m: GeneratorMap, a: DimElement) -> DimElement:
    """Extend images additively and Z^k-equivariantly: v(n) -> shift(m(v), n)."""
    _check_element(m.source, a)
    total = zero_element(m.target, a.n)
    for v, coeff in zip(m.source.vertices, a.x):
        if coeff:
            total = dge_add(m.target, total, dge_scale(coeff, dge_shift(m.images[v], a.n)))
    return total


def hom_check(m: GeneratorMap) -> bool:
    """Whether the images satisfy every defining relation
    v(0) = sum over color-i in-edges of s(edge)(e_i)."""
    g = m.source
    for v in g.vertices:
        for i in range(1, g.rank + 1):
            rhs = zero_element(m.target, unit_degree(g.rank, i))
            for e in g.in_edges[v][i]:
                rhs = dge_add(
                    m.target, rhs, dge_shift(m.images[e.src], unit_degree(g.rank, i))
                )
            if not dge_eq(m.target, m.images[v], rhs):
                return False
    return True


def iso_check(fwd: GeneratorMap, bwd: GeneratorMap) -> bool:
    """Both maps are homs and both composites fix every generator."""
    if fwd.source is not bwd.target and fwd.source != bwd.target:
        raise ValueError("fwd.source and bwd.target differ")
    if fwd.target is not bwd.source and fwd.target != bwd.source:
        raise ValueError("fwd.target and bwd.source differ")
    if not hom_check(fwd) or not hom_check(bwd):
        return False
    for v in fwd.source.vertices:
        back = apply_generator_map(bwd, fwd.images[v])
        if not dge_eq(fwd.source, back, unit_element(fwd.source, v)):
            return False
    for w in bwd.source.vertices:
        forth = apply_generator_map(fwd, bwd.images[w])
        if not dge_eq(bwd.source, forth, unit_element(bwd.source, w)):
            return False
    return True


def pointed_check(fwd: GeneratorMap) -> bool:
    """Whether the sum of all source generators maps to the sum of all
    target generators (the order units)."""
    src_unit = DimElement((1,) * len(fwd.source.vertices), zero_degree(fwd.source.rank))
    tgt_unit = DimElement((1,) * len(fwd.target.vertices), zero_degree(fwd.target.rank))
    return dge_eq(fwd.target, apply_generator_map(fwd, src_unit), tgt_unit)


# -------------------------------------------------------------- intertwiners

def intertwiner_check(g_left: KGraph, g_right: KGraph, r: Matrix) -> bool:
    """Whether A_{e_i} * r == r * B_{e_i} for every color."""
    if g_left.rank != g_right.rank:
        raise DimensionMismatch("graphs have different ranks")
    dl, dr = len(g_left.vertices), len(g_right.vertices)
    if len(r) != dl or any(len(row) != dr for row in r):
        raise DimensionMismatch(f"matrix must be {dl}x{dr}")
    for i in range(1, g_left.rank + 1):
        a = vertex_matrix(g_left, unit_degree(g_left.rank, i))
        b = vertex_matrix(g_right, unit_degree(g_right.rank, i))
        if not mat_eq(mat_mul(a, r), mat_mul(r, b)):
            return False
    return True


def hom_from_matrix(r: Matrix, a: DimElement) -> DimElement:
    """[x, n] -> [x*r, n]."""
    if len(a.x) != len(r):
        raise DimensionMismatch(f"vector has {len(a.x)} entries for {len(r)} rows")
    return DimElement(tuple(vec_mat(list(a.x), r)), a.n)


def generator_map_from_matrix(g_left: KGraph, g_right: KGraph, r: Matrix) -> GeneratorMap:
    images = {
        v: DimElement(tuple(r[i]), zero_degree(g_right.rank))
        for i, v in enumerate(g_left.vertices)
    }
    return generator_map(g_left, g_right, images)


# ---------------------------------------------------------------- SSE search

def _iter_matrices(rows: int, cols: int, entry_max: int):
    # row-major lexicographic order
    for flat in product(range(entry_max + 1), repeat=rows * cols):
        yield [list(flat[r * cols : (r + 1) * cols]) for r in range(rows)]


def sse_search(
    g_left: KGraph, g_right: KGraph, p_max: int, entry_max: int
) -> SSEWitness | ExhaustedBounds:
    """First (p, R, S) in lexicographic order with A_p = R*S, B_p = S*R,
    A_{e_i}R = R B_{e_i} and B_{e_i}S = S A_{e_i} for all i, all entries of
    R and S in 0..entry_max and p <= p_max componentwise."""
    if g_left.rank != g_right.rank:
        raise DimensionMismatch("graphs have different ranks")
    if p_max < 0 or entry_max < 0:
        raise ValueError("bounds must be >= 0")
    k = g_left.rank
    dl, dr = len(g_left.vertices), len(g_right.vertices)
    a_steps = [vertex_matrix(g_left, unit_degree(k, i)) for i in range(1, k + 1)]
    b_steps = [vertex_matrix(g_right, unit_degree(k, i)) for i in range(1, k + 1)]

    def s_search(r: Matrix, a_p: Matrix, b_p: Matrix) -> Matrix | None:
        rows: list[list[int]] = []

        def rec() -> Matrix | None:
            t = len(rows)
            if t == dr:
                s = rows
                if not mat_eq(mat_mul(r, s), a_p):
                    return None
                for a, b in zip(a_steps, b_steps):
                    if not mat_eq(mat_mul(b, s), mat_mul(s, a)):
                        return None
                return [row[:] for row in s]
            for row in product(range(entry_max + 1), repeat=dl):
                # row t of S*R must match row t of B_p
                if vec_mat(list(row), r) != b_p[t]:
                    continue
                rows.append(list(row))
                found = rec()
                if found is not None:
                    return found
                rows.pop()
            return None

        return rec()

    for p in product(range(p_max + 1), repeat=k):
        a_p = vertex_matrix(g_left, p)
        b_p = vertex_matrix(g_right, p)
        for r in _iter_matrices(dl, dr, entry_max):
            ok = True
            for a, b in zip(a_steps, b_steps):
                if not mat_eq(mat_mul(a, r), mat_mul(r, b)):
                    ok = False
                    break
            if not ok:
                continue
            s = s_search(r, a_p, b_p)
            if s is not None:
                return SSEWitness(tuple(p), r, s)
    return ExhaustedBounds(p_max, entry_max)


def rank_invariant(g: KGraph) -> int:
    """Rank over Q of P^d, P the product of the one-step matrices."""
    d = len(g.vertices)
    return rank(vertex_matrix(g, (d,) * g.rank))
