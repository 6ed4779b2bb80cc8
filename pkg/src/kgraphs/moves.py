"""In-splitting and sink deletion, with the induced maps on dimension groups.

In-splitting at v partitions the edges with range v into two sides; the
split graph doubles v and every edge with source v, and each other edge
with range v is redirected to the copy named by its side. The partition
must not separate edges admitting a common extension, so sides are unions
of pairing classes.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

from .core import (
    Edge,
    KGraph,
    Path,
    Skeleton,
    mce,
    unit_degree,
    validate_kgraph,
    vertex_matrix,
    zero_degree,
)
from .dimension import DimElement, GeneratorMap, generator_map, unit_element
from .intmat import Matrix, zeros


class IndivisibleVertex(Exception):
    pass


class InvalidPartition(Exception):
    pass


class NotASink(Exception):
    pass


class Partition(NamedTuple):
    vertex: str
    side1: tuple[str, ...]
    side2: tuple[str, ...]


class ParentMap(NamedTuple):
    """Projection of the split graph onto the original."""

    vertices: dict[str, str]
    edges: dict[str, str]


def _range_edges(g: KGraph, v: str) -> list[Edge]:
    # all edges with range v, in skeleton order
    return [e for e in g.edges if e.rng == v]


def pairing_closure(g: KGraph, v: str) -> list[tuple[str, ...]]:
    """Classes of the transitive closure of: e ~ f iff the one-edge paths
    at v admit a common extension (mce nonempty). Class order and member
    order follow the skeleton."""
    if v not in g.vertex_index:
        raise ValueError(f"unknown vertex {v!r}")
    edges = _range_edges(g, v)
    parent = {e.id: e.id for e in edges}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(edges, 2):
        if a.color == b.color:
            continue
        if mce(g, Path(v, (a.id,)), Path(v, (b.id,))):
            ra, rb = find(a.id), find(b.id)
            if ra != rb:
                parent[rb] = ra

    classes: dict[str, list[str]] = {}
    order: list[str] = []
    for e in edges:
        root = find(e.id)
        if root not in classes:
            classes[root] = []
            order.append(root)
        classes[root].append(e.id)
    return [tuple(classes[root]) for root in order]


def enumerate_valid_partitions(g: KGraph, v: str) -> list[Partition]:
    """All 2^(c-1) - 1 two-sided splits of the c pairing classes at v,
    with the first class pinned to side 1. Raises IndivisibleVertex when
    c < 2."""
    classes = pairing_closure(g, v)
    c = len(classes)
    if c < 2:
        raise IndivisibleVertex(f"{v} has {c} pairing class(es); need at least 2")
    out = []
    for mask in range(2 ** (c - 1) - 1):
        side1 = list(classes[0])
        side2 = []
        for i, cls in enumerate(classes[1:]):
            if mask >> i & 1:
                side1.extend(cls)
            else:
                side2.extend(cls)
        out.append(Partition(v, tuple(sorted(side1)), tuple(sorted(side2))))
    return out


def check_partition(g: KGraph, p: Partition) -> None:
    """Raise InvalidPartition unless p is a two-sided split of the edges
    with range p.vertex that keeps every pairing class on one side."""
    if p.vertex not in g.vertex_index:
        raise InvalidPartition(f"unknown vertex {p.vertex!r}")
    s1, s2 = set(p.side1), set(p.side2)
    if not s1 or not s2:
        raise InvalidPartition("both sides must be nonempty")
    if s1 & s2:
        raise InvalidPartition(f"sides overlap: {sorted(s1 & s2)}")
    full = {e.id for e in _range_edges(g, p.vertex)}
    if s1 | s2 != full:
        off = (s1 | s2) ^ full
        raise InvalidPartition(f"sides must cover exactly the edges with range {p.vertex}: {sorted(off)}")
    for cls in pairing_closure(g, p.vertex):
        members = set(cls)
        if members & s1 and members & s2:
            raise InvalidPartition(f"pairing class {cls} is split across sides")


def insplit(g: KGraph, p: Partition) -> tuple[KGraph, ParentMap]:
    """The in-split graph and its projection back onto g.

    Offspring ids are '<v>^1', '<v>^2' for the vertex and '<e>^1', '<e>^2'
    for each edge with source v; squares lift uniquely, pinned by sources.
    """
    check_partition(g, p)
    v = p.vertex
    side = {eid: 1 for eid in p.side1} | {eid: 2 for eid in p.side2}
    v1, v2 = f"{v}^1", f"{v}^2"
    taken = set(g.vertices) | {e.id for e in g.edges}
    for fresh in (v1, v2):
        if fresh in taken:
            raise ValueError(f"offspring id {fresh!r} collides with an existing id")

    vertices: list[str] = []
    vertex_parent: dict[str, str] = {}
    for w in g.vertices:
        if w == v:
            vertices.extend([v1, v2])
            vertex_parent[v1] = v
            vertex_parent[v2] = v
        else:
            vertices.append(w)
            vertex_parent[w] = w

    def new_range(e: Edge) -> str:
        # an edge with range v lands on the copy named by its side
        return f"{v}^{side[e.id]}" if e.rng == v else e.rng

    edges: list[Edge] = []
    edge_parent: dict[str, str] = {}
    offspring: dict[str, list[Edge]] = {}
    for e in g.edges:
        if e.src == v:
            for t in (1, 2):
                fresh = f"{e.id}^{t}"
                if fresh in taken:
                    raise ValueError(f"offspring id {fresh!r} collides with an existing id")
                child = Edge(fresh, e.color, f"{v}^{t}", new_range(e))
                edges.append(child)
                edge_parent[fresh] = e.id
                offspring.setdefault(e.id, []).append(child)
        else:
            child = Edge(e.id, e.color, e.src, new_range(e))
            edges.append(child)
            edge_parent[e.id] = e.id
            offspring.setdefault(e.id, []).append(child)

    # lift each square: the new inner edge is the offspring whose source
    # matches, first g2 pinned by s(g2) = s(h), then h2 by s(h2) = r(g2)
    in_new: dict[tuple[str, int], list[Edge]] = {}
    for e in edges:
        in_new.setdefault((e.rng, e.color), []).append(e)
    squares: dict[tuple[str, str], tuple[str, str]] = {}
    for a in edges:
        for jc in range(a.color + 1, g.rank + 1):
            for b in in_new.get((a.src, jc), []):
                h2p, g2p = g.squares[(edge_parent[a.id], edge_parent[b.id])]
                (g2n,) = [e for e in offspring[g2p] if e.src == b.src]
                (h2n,) = [e for e in offspring[h2p] if e.src == g2n.rng]
                squares[(a.id, b.id)] = (h2n.id, g2n.id)

    split = validate_kgraph(
        Skeleton(g.rank, tuple(vertices), tuple(edges)), squares, strict=g.strict
    )
    return split, ParentMap(vertex_parent, edge_parent)


def insplit_matrices(g: KGraph, p: Partition, j: int) -> tuple[Matrix, Matrix]:
    """(R, S) with R*S = A_{e_j}, S*R = B_{e_j}, A_{e_i}R = R B_{e_i} and
    B_{e_i}S = S A_{e_i} for every color i; A over g, B over the split graph.

    R(u, w') = 1 iff w' projects to u. S(v^i, w) counts the color-j edges
    on side i with source w; other rows of S copy A_{e_j}.
    """
    if not 1 <= j <= g.rank:
        raise ValueError(f"color {j} out of range 1..{g.rank}")
    split, parents = insplit(g, p)
    r = zeros(len(g.vertices), len(split.vertices))
    for jj, w in enumerate(split.vertices):
        r[g.vertex_index[parents.vertices[w]]][jj] = 1

    sides = {1: p.side1, 2: p.side2}
    a_j = vertex_matrix(g, unit_degree(g.rank, j))
    s = zeros(len(split.vertices), len(g.vertices))
    for ii, w in enumerate(split.vertices):
        if parents.vertices[w] == p.vertex:
            t = int(w.rsplit("^", 1)[1])
            for eid in sides[t]:
                e = g.by_id[eid]
                if e.color == j:
                    s[ii][g.vertex_index[e.src]] += 1
        else:
            s[ii] = list(a_j[g.vertex_index[w]])
    return r, s


# --------------------------------------------------------------- sink moves

def ei_sinks(g: KGraph, i: int) -> list[str]:
    """Vertices emitting no color-i edge."""
    if not 1 <= i <= g.rank:
        raise ValueError(f"color {i} out of range 1..{g.rank}")
    return [v for v in g.vertices if not g.out_edges[v][i]]


def sink_colors(g: KGraph, v: str) -> list[int]:
    if v not in g.vertex_index:
        raise ValueError(f"unknown vertex {v!r}")
    return [i for i in range(1, g.rank + 1) if not g.out_edges[v][i]]


def _reachable_from(g: KGraph, v: str) -> set[str]:
    # follow edges source -> range
    seen = {v}
    frontier = [v]
    while frontier:
        w = frontier.pop()
        for i in range(1, g.rank + 1):
            for e in g.out_edges[w][i]:
                if e.rng not in seen:
                    seen.add(e.rng)
                    frontier.append(e.rng)
    return seen


def sink_delete(g: KGraph, v: str) -> KGraph:
    """Remove v, everything reachable from it, and all incident edges.
    v must emit no edge of some color; the result keeps every in-edge of
    each surviving vertex, so strictness is preserved."""
    if not sink_colors(g, v):
        raise NotASink(f"{v} emits edges of every color")
    dead = _reachable_from(g, v)
    vertices = tuple(w for w in g.vertices if w not in dead)
    if not vertices:
        raise ValueError("sink deletion removes every vertex")
    edges = tuple(e for e in g.edges if e.src not in dead and e.rng not in dead)
    kept = {e.id for e in edges}
    squares = {
        key: val
        for key, val in g.squares.items()
        if key[0] in kept and key[1] in kept
    }
    return validate_kgraph(Skeleton(g.rank, vertices, edges), squares, strict=g.strict)


# ----------------------------------------------------------- generator maps

def phi_insplit(g: KGraph, p: Partition) -> GeneratorMap:
    """g -> split graph: v(0) -> v^1(0) + v^2(0), fixing other vertices."""
    split, parents = insplit(g, p)
    images: dict[str, DimElement] = {}
    for w in g.vertices:
        x = tuple(1 if parents.vertices[u] == w else 0 for u in split.vertices)
        images[w] = DimElement(x, zero_degree(g.rank))
    return generator_map(g, split, images)


def psi_insplit(g: KGraph, p: Partition, j: int) -> GeneratorMap:
    """split graph -> g, the inverse up to shift: each copy v^i(0) maps to
    the sum of s(f)(e_j) over the color-j edges f on side i."""
    if not 1 <= j <= g.rank:
        raise ValueError(f"color {j} out of range 1..{g.rank}")
    split, parents = insplit(g, p)
    sides = {1: p.side1, 2: p.side2}
    e_j = unit_degree(g.rank, j)
    images: dict[str, DimElement] = {}
    for w in split.vertices:
        if parents.vertices[w] == p.vertex:
            t = int(w.rsplit("^", 1)[1])
            x = [0] * len(g.vertices)
            for eid in sides[t]:
                e = g.by_id[eid]
                if e.color == j:
                    x[g.vertex_index[e.src]] += 1
            images[w] = DimElement(tuple(x), e_j)
        else:
            images[w] = unit_element(g, w)
    return generator_map(split, g, images)


def phi_sink_delete(g: KGraph, v: str) -> GeneratorMap:
    """deleted graph -> g on generators, w(0) -> w(0)."""
    cut = sink_delete(g, v)
    return generator_map(cut, g, {w: unit_element(g, w) for w in cut.vertices})


def sink_delete_witnesses(g: KGraph, v: str) -> dict[str, DimElement]:
    """For each deleted vertex u, an element of the cut graph's dimension
    group mapping to u(0): the relation at the sink color i rewrites u(0)
    as the sum of s(alpha)(e_i) over color-i edges into u, and every such
    source survives."""
    cut = sink_delete(g, v)
    i = sink_colors(g, v)[0]
    survivors = set(cut.vertices)
    out: dict[str, DimElement] = {}
    for u in g.vertices:
        if u in survivors:
            continue
        x = [0] * len(cut.vertices)
        for e in g.in_edges[u][i]:
            if e.src not in survivors:
                raise ValueError(f"source {e.src} of {e.id} was deleted; {v} is not an e_{i}-sink")
            x[cut.vertex_index[e.src]] += 1
        out[u] = DimElement(tuple(x), unit_degree(g.rank, i))
    return out
