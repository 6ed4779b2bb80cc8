"""Polymorphisms, flip families, the coherence criterion and bridging search.

A flip family over a nonnegative matrix R assigns, per color i, a bijection
(lambda, g) -> (g', omega) on composable pairs with r(lambda) = r(g') and
s(g) = s(omega). Coherence: for every triple lambda_i lambda_j g (i < j),
flipping j then i then swapping the omega pair agrees with swapping the
lambda pair then flipping i then j. Coherent families extend to flips of
arbitrary-degree paths, one edge at a time from the source end.
"""

from __future__ import annotations

from itertools import permutations
from math import factorial
from typing import NamedTuple

from .core import (
    Edge,
    KGraph,
    NotComposable,
    Path,
    Skeleton,
    make_path,
    path_source,
    validate_kgraph,
    vertex_path,
)
from .dimension import intertwiner_check
from .intmat import Matrix, zeros


class ShapeMismatch(Exception):
    pass


class NotIntertwining(Exception):
    pass


class IncoherentPair(Exception):
    pass


class PolyEdge(NamedTuple):
    id: str
    rng: str
    src: str


class Polymorphism(NamedTuple):
    rng_vertices: tuple[str, ...]
    src_vertices: tuple[str, ...]
    edges: tuple[PolyEdge, ...]


# f_i keyed by color: (lambda edge id, poly edge id) -> (poly edge id, omega edge id)
FlipFamily = dict[int, dict[tuple[str, str], tuple[str, str]]]


class BridgingPair(NamedTuple):
    r: Matrix
    flips: FlipFamily


class Exhausted(NamedTuple):
    count: int


class CoherenceWitness(NamedTuple):
    """A triple whose two flip routes disagree; top/bottom are the final
    (g, omega_j, omega_i) words."""

    i: int
    j: int
    lam_i: str
    lam_j: str
    g: str
    top: tuple[str, str, str]
    bottom: tuple[str, str, str]


# ------------------------------------------------------------- polymorphisms

def poly_matrix(p: Polymorphism) -> Matrix:
    m = zeros(len(p.rng_vertices), len(p.src_vertices))
    ri = {v: i for i, v in enumerate(p.rng_vertices)}
    si = {v: i for i, v in enumerate(p.src_vertices)}
    for e in p.edges:
        m[ri[e.rng]][si[e.src]] += 1
    return m


def polymorphism_from_matrix(g_lam: KGraph, g_om: KGraph, r: Matrix) -> Polymorphism:
    """Canonical edge set g<t>[v,w] with range v, source w, t = 1..R(v,w)."""
    dl, dr = len(g_lam.vertices), len(g_om.vertices)
    if len(r) != dl or any(len(row) != dr for row in r):
        raise ShapeMismatch(f"matrix must be {dl}x{dr}")
    edges = []
    for v, row in zip(g_lam.vertices, r):
        for w, count in zip(g_om.vertices, row):
            if count < 0:
                raise ShapeMismatch(f"negative entry at ({v}, {w})")
            for t in range(1, count + 1):
                edges.append(PolyEdge(f"g{t}[{v},{w}]", v, w))
    return Polymorphism(tuple(g_lam.vertices), tuple(g_om.vertices), tuple(edges))


def coordinate_polymorphism(g: KGraph, i: int) -> Polymorphism:
    if not 1 <= i <= g.rank:
        raise ValueError(f"color {i} out of range 1..{g.rank}")
    edges = tuple(PolyEdge(e.id, e.rng, e.src) for e in g.edges if e.color == i)
    return Polymorphism(tuple(g.vertices), tuple(g.vertices), edges)


def identity_polymorphism(vertices: tuple[str, ...]) -> Polymorphism:
    return Polymorphism(vertices, vertices, tuple(PolyEdge(f"id[{v}]", v, v) for v in vertices))


def compose_poly(e: Polymorphism, f: Polymorphism) -> Polymorphism:
    """Composable-pair edges; the adjacency matrix multiplies."""
    if e.src_vertices != f.rng_vertices:
        raise NotComposable("source set of the first must equal range set of the second")
    edges = tuple(
        PolyEdge(f"({a.id}*{b.id})", a.rng, b.src)
        for a in e.edges
        for b in f.edges
        if a.src == b.rng
    )
    return Polymorphism(e.rng_vertices, f.src_vertices, edges)


# -------------------------------------------------------------- flip families

def _flip_domain(g_lam: KGraph, poly: Polymorphism, i: int) -> list[tuple[str, str]]:
    return [
        (lam.id, g.id)
        for lam in g_lam.edges
        if lam.color == i
        for g in poly.edges
        if g.rng == lam.src
    ]


def _flip_codomain(g_om: KGraph, poly: Polymorphism, i: int) -> list[tuple[str, str]]:
    return [
        (g.id, om.id)
        for g in poly.edges
        for om in g_om.edges
        if om.color == i and om.rng == g.src
    ]


def check_flip_family(g_lam: KGraph, g_om: KGraph, pair: BridgingPair) -> Polymorphism:
    """Raise ValueError unless pair.flips is a total, bijective,
    endpoint-preserving family over pair.r; returns the polymorphism."""
    poly = polymorphism_from_matrix(g_lam, g_om, pair.r)
    by_id = {e.id: e for e in poly.edges}
    for i in range(1, g_lam.rank + 1):
        f = pair.flips.get(i)
        if f is None:
            raise ValueError(f"no flip for color {i}")
        domain = _flip_domain(g_lam, poly, i)
        if set(f) != set(domain):
            raise ValueError(f"color {i} flip domain mismatch")
        codomain = _flip_codomain(g_om, poly, i)
        values = list(f.values())
        if len(set(values)) != len(values) or set(values) != set(codomain):
            raise ValueError(f"color {i} flip is not a bijection onto its codomain")
        for (lam_id, g_id), (g2_id, om_id) in f.items():
            lam, g = g_lam.by_id[lam_id], by_id[g_id]
            g2, om = by_id[g2_id], g_om.by_id[om_id]
            if g2.src != om.rng:
                raise ValueError(f"image of {(lam_id, g_id)} is not composable")
            if lam.rng != g2.rng or g.src != om.src:
                raise ValueError(f"flip of {(lam_id, g_id)} moves an endpoint")
    return poly


def _route_triple(
    g_lam: KGraph, g_om: KGraph, flips: FlipFamily, i: int, j: int, lam_i: str, lam_j: str, g: str
) -> tuple[tuple[str, str, str], tuple[str, str, str]] | None:
    """Both route outputs for one triple, or None while some lookup is
    still unassigned (during search)."""
    top_j = flips[j].get((lam_j, g))
    if top_j is None:
        return None
    g1, om_j = top_j
    top_i = flips[i].get((lam_i, g1))
    if top_i is None:
        return None
    g2, om_i = top_i
    sq_j, sq_i = g_om.squares[(om_i, om_j)]
    top = (g2, sq_j, sq_i)

    lam_j2, lam_i2 = g_lam.squares[(lam_i, lam_j)]
    bot_i = flips[i].get((lam_i2, g))
    if bot_i is None:
        return None
    gb1, om_i2 = bot_i
    bot_j = flips[j].get((lam_j2, gb1))
    if bot_j is None:
        return None
    gb2, om_j2 = bot_j
    return top, (gb2, om_j2, om_i2)


def _iter_triples(g_lam: KGraph, poly: Polymorphism, i: int, j: int):
    # order: lambda_i, then g, then lambda_j
    for lam_i in g_lam.edges:
        if lam_i.color != i:
            continue
        for g in poly.edges:
            for lam_j in g_lam.in_edges[lam_i.src][j]:
                if lam_j.src == g.rng:
                    yield lam_i.id, lam_j.id, g.id


def coherence_check(
    g_lam: KGraph, g_om: KGraph, pair: BridgingPair
) -> tuple[bool, CoherenceWitness | None]:
    """True iff both routes agree on every composable triple, for every
    color pair i < j; otherwise the first witness in iteration order."""
    poly = check_flip_family(g_lam, g_om, pair)
    for i in range(1, g_lam.rank + 1):
        for j in range(i + 1, g_lam.rank + 1):
            for lam_i, lam_j, g in _iter_triples(g_lam, poly, i, j):
                routes = _route_triple(g_lam, g_om, pair.flips, i, j, lam_i, lam_j, g)
                top, bottom = routes
                if top != bottom:
                    return False, CoherenceWitness(i, j, lam_i, lam_j, g, top, bottom)
    return True, None


# ------------------------------------------------------------ bridging search

def bridging_search(g_lam: KGraph, g_om: KGraph, r: Matrix) -> BridgingPair | Exhausted:
    """Backtracking over per-block bijections, colors ascending and blocks
    in (range, source) order; prunes on any decidable triple disagreeing.
    Returns the lexicographically first coherent family, or Exhausted with
    the number of complete families the pruned search accounts for."""
    if not intertwiner_check(g_lam, g_om, r):
        raise NotIntertwining("A_{e_i} R != R B_{e_i} for some color")
    poly = polymorphism_from_matrix(g_lam, g_om, r)

    blocks = []
    for i in range(1, g_lam.rank + 1):
        for a in g_lam.vertices:
            for b in g_om.vertices:
                dom = [
                    (lam.id, g.id)
                    for lam in g_lam.edges
                    if lam.color == i and lam.rng == a
                    for g in poly.edges
                    if g.rng == lam.src and g.src == b
                ]
                cod = [
                    (g.id, om.id)
                    for g in poly.edges
                    if g.rng == a
                    for om in g_om.edges
                    if om.color == i and om.rng == g.src and om.src == b
                ]
                assert len(dom) == len(cod)  # block sizes match by intertwining
                if dom:
                    blocks.append((i, dom, cod))

    # completions represented by a prune at block t
    suffix = [1] * (len(blocks) + 1)
    for t in range(len(blocks) - 1, -1, -1):
        suffix[t] = suffix[t + 1] * factorial(len(blocks[t][2]))

    triples = [
        (i, j, trip)
        for i in range(1, g_lam.rank + 1)
        for j in range(i + 1, g_lam.rank + 1)
        for trip in _iter_triples(g_lam, poly, i, j)
    ]
    flips: FlipFamily = {i: {} for i in range(1, g_lam.rank + 1)}
    examined = 0

    def consistent() -> bool:
        for i, j, (lam_i, lam_j, g) in triples:
            routes = _route_triple(g_lam, g_om, flips, i, j, lam_i, lam_j, g)
            if routes is not None and routes[0] != routes[1]:
                return False
        return True

    def rec(t: int) -> BridgingPair | None:
        nonlocal examined
        if t == len(blocks):
            return BridgingPair(r, {i: dict(f) for i, f in flips.items()})
        color, dom, cod = blocks[t]
        for perm in permutations(range(len(cod))):
            for key, idx in zip(dom, perm):
                flips[color][key] = cod[idx]
            if consistent():
                found = rec(t + 1)
                if found is not None:
                    return found
            else:
                examined += suffix[t + 1]
            for key in dom:
                del flips[color][key]
        return None

    found = rec(0)
    return found if found is not None else Exhausted(examined)


# ----------------------------------------------------- higher-degree flips

def _coherent_or_raise(g_lam: KGraph, g_om: KGraph, pair: BridgingPair) -> Polymorphism:
    ok, witness = coherence_check(g_lam, g_om, pair)
    if not ok:
        raise IncoherentPair(f"routes disagree at {witness}")
    return polymorphism_from_matrix(g_lam, g_om, pair.r)


def extend_flip(
    g_lam: KGraph, g_om: KGraph, pair: BridgingPair, lam: Path, g_id: str
) -> tuple[str, Path]:
    """Flip a whole path through g, source-end edge first; coherence makes
    the result independent of the factorization of d(lam)."""
    poly = _coherent_or_raise(g_lam, g_om, pair)
    by_id = {e.id: e for e in poly.edges}
    if g_id not in by_id:
        raise ValueError(f"unknown polymorphism edge {g_id!r}")
    if path_source(g_lam, lam) != by_id[g_id].rng:
        raise NotComposable(f"s(lam) != r({g_id})")
    cur = g_id
    omegas: list[str] = []
    for eid in reversed(lam.edges):
        cur, om = pair.flips[g_lam.by_id[eid].color][(eid, cur)]
        omegas.append(om)
    omegas.reverse()
    if not omegas:
        return cur, vertex_path(by_id[cur].src)
    return cur, make_path(g_om, omegas)


def morph_apply(
    g_lam: KGraph, g_om: KGraph, pair: BridgingPair, g_id: str, omega: Path
) -> tuple[Path, str]:
    """The morph map: pull omega backwards through g by inverse flips,
    range-end edge first; a vertex path returns (r(g), g)."""
    poly = _coherent_or_raise(g_lam, g_om, pair)
    by_id = {e.id: e for e in poly.edges}
    if g_id not in by_id:
        raise ValueError(f"unknown polymorphism edge {g_id!r}")
    if by_id[g_id].src != omega.rng:
        raise NotComposable(f"s({g_id}) != r(omega)")
    inverse = {i: {v: k for k, v in pair.flips[i].items()} for i in pair.flips}
    cur = g_id
    lams: list[str] = []
    for om_id in omega.edges:
        lam_e, cur = inverse[g_om.by_id[om_id].color][(cur, om_id)]
        lams.append(lam_e)
    if not lams:
        return vertex_path(by_id[g_id].rng), cur
    return make_path(g_lam, lams), cur


# ------------------------------------------------------------ bridging graph

def bridging_graph(g_lam: KGraph, g_om: KGraph, pair: BridgingPair) -> KGraph:
    """The rank-(k+1) graph on L-prefixed and O-prefixed vertices whose
    color-(k+1) edges are the polymorphism edges and whose mixed squares
    are the flips. Validation succeeds iff the pair is coherent, which
    makes this an independent oracle for coherence_check."""
    poly = check_flip_family(g_lam, g_om, pair)
    k = g_lam.rank
    vertices = tuple(f"L.{v}" for v in g_lam.vertices) + tuple(f"O.{w}" for w in g_om.vertices)
    edges = (
        tuple(Edge(f"L.{e.id}", e.color, f"L.{e.src}", f"L.{e.rng}") for e in g_lam.edges)
        + tuple(Edge(f"O.{e.id}", e.color, f"O.{e.src}", f"O.{e.rng}") for e in g_om.edges)
        + tuple(Edge(f"R.{e.id}", k + 1, f"O.{e.src}", f"L.{e.rng}") for e in poly.edges)
    )
    squares: dict[tuple[str, str], tuple[str, str]] = {}
    for (a, b), (c, d) in g_lam.squares.items():
        squares[(f"L.{a}", f"L.{b}")] = (f"L.{c}", f"L.{d}")
    for (a, b), (c, d) in g_om.squares.items():
        squares[(f"O.{a}", f"O.{b}")] = (f"O.{c}", f"O.{d}")
    for i, f in pair.flips.items():
        for (lam_id, g_id), (g2_id, om_id) in f.items():
            squares[(f"L.{lam_id}", f"R.{g_id}")] = (f"R.{g2_id}", f"O.{om_id}")
    return validate_kgraph(Skeleton(k + 1, vertices, edges), squares, strict=False)
