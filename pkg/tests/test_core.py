"""Path arithmetic and validator behavior on small graphs.

Key conventions under test: edge words read range-to-source, normal form
sorts colors ascending left to right, and a square (g,h)->(h2,g2) equates
the ascending word [g,h] with the descending word [h2,g2].
"""

from __future__ import annotations

import random

import pytest

from kgraphs.constructions import fixture, grid, rose
from kgraphs.core import (
    CubeFailure,
    DegreeOutOfRange,
    EndpointMismatch,
    InvalidKGraph,
    MissingSquare,
    NonBijectiveSquares,
    NotComposable,
    Path,
    SourceVertex,
    compose,
    deg_join,
    deg_leq,
    deg_sub,
    kgraph_violations,
    make_path,
    mce,
    normalize_word,
    path_degree,
    path_source,
    paths_of_degree,
    segment,
    unit_degree,
    validate_kgraph,
    vertex_matrix,
    vertex_path,
    zero_degree,
)
from kgraphs.intmat import mat_eq, mat_mul


def all_paths_up_to(g, bound):
    out = []
    for v in g.vertices:
        n = [0] * g.rank
        while True:
            out.extend(paths_of_degree(g, v, tuple(n)))
            for i in range(g.rank):
                if n[i] < bound[i]:
                    n[i] += 1
                    break
                n[i] = 0
            else:
                break
    return out


def test_compose_follows_squares_in_both_twists():
    # one vertex, one color-1 loop f, two color-2 loops: the two square
    # tables (straight and twisted) give different normal forms for e1.f
    g1 = fixture("ex7.1-Lambda1")
    g2 = fixture("ex7.1-Lambda2")
    e1 = make_path(g2, ["e1"])
    f = make_path(g2, ["f"])
    assert compose(g2, e1, f) == Path("v", ("f", "e2"))
    assert compose(g1, make_path(g1, ["e1"]), make_path(g1, ["f"])) == Path("v", ("f", "e1"))


def test_compose_requires_matching_endpoints():
    g = fixture("ex3.5-Lambda")
    h = make_path(g, ["h"])  # v -> w
    with pytest.raises(NotComposable):
        compose(g, h, h)
    f1 = make_path(g, ["f1"])  # u -> v
    hf1 = compose(g, h, f1)
    assert hf1 == Path("w", ("h", "f1"))
    assert path_source(g, hf1) == "u"
    assert path_degree(g, hf1) == (1, 1)


def test_segment_peels_range_end_pieces():
    g2 = fixture("ex7.1-Lambda2")
    tau = compose(g2, make_path(g2, ["f"]), make_path(g2, ["e2"]))
    assert tau == Path("v", ("f", "e2"))
    assert segment(g2, tau, (0, 0), (0, 1)) == Path("v", ("e1",))
    assert segment(g2, tau, (0, 0), (1, 0)) == Path("v", ("f",))
    assert segment(g2, tau, (1, 0), (1, 1)) == Path("v", ("e2",))
    assert segment(g2, tau, (0, 0), (1, 1)) == tau
    assert segment(g2, tau, (1, 1), (1, 1)) == vertex_path("v")


def test_segment_degree_bounds():
    g = fixture("ex3.5-Lambda")
    p = make_path(g, ["h", "f1"])
    with pytest.raises(DegreeOutOfRange):
        segment(g, p, (0, 0), (2, 0))
    with pytest.raises(DegreeOutOfRange):
        segment(g, p, (1, 1), (0, 0))
    with pytest.raises(DegreeOutOfRange):
        segment(g, p, (0,), (1,))


def test_segment_three_piece_recomposition():
    rng = random.Random(11)
    for name in ("ex3.5-Lambda", "ex5.6-Omega", "ex7.1-Lambda2"):
        g = fixture(name)
        for p in all_paths_up_to(g, (2, 2)):
            d = path_degree(g, p)
            for _ in range(3):
                m = tuple(rng.randint(0, c) for c in d)
                n = tuple(rng.randint(m[i], c) for i, c in enumerate(d))
                a = segment(g, p, zero_degree(2), m)
                b = segment(g, p, m, n)
                c = segment(g, p, n, d)
                assert compose(g, a, compose(g, b, c)) == p


def test_mce_brute_force():
    g = fixture("ex3.5-Lambda")
    h = make_path(g, ["h"])
    p_g = make_path(g, ["g"])
    exts = mce(g, h, p_g)
    assert exts == [Path("w", ("h", "f1")), Path("w", ("h", "f2"))]
    # disjoint ranges have no common extension
    assert mce(g, h, make_path(g, ["f1"])) == []
    # same-degree distinct paths never extend each other
    assert mce(g, make_path(g, ["f1"]), make_path(g, ["f2"])) == []
    assert mce(g, h, h) == [h]


def test_mce_matches_pairwise_factorization_property():
    # tau is in mce(p, q) iff both range-end segments match
    g = fixture("ex5.6-Omega")
    p = make_path(g, ["f1"])
    q = make_path(g, ["e3"])
    exts = mce(g, p, q)
    assert len(exts) == 1
    tau = exts[0]
    assert segment(g, tau, (0, 0), (1, 0)) == p
    assert segment(g, tau, (0, 0), (0, 1)) == q


def test_paths_of_degree_counts_match_matrix_row_sums():
    for name in ("ex3.5-Lambda", "ex5.6-Lambda", "ex5.6-Omega", "ex5.7-Omega"):
        g = fixture(name)
        for n in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (2, 2)]:
            a = vertex_matrix(g, n)
            for v in g.vertices:
                assert len(paths_of_degree(g, v, n)) == sum(a[g.vertex_index[v]])


def test_paths_of_degree_examples():
    g = fixture("ex5.6-Lambda")
    assert len(paths_of_degree(g, "u", (1, 1))) == 4
    gr = grid(2, (1, 1))
    assert len(paths_of_degree(gr, "(0,0)", (1, 1))) == 1
    assert paths_of_degree(gr, "(1,1)", (1, 1)) == []


def test_vertex_matrix_entries_are_path_counts():
    for name in ("ex3.5-Lambda", "ex5.6-Omega"):
        g = fixture(name)
        for n in [(1, 0), (0, 1), (1, 1), (2, 2), (2, 1)]:
            a = vertex_matrix(g, n)
            for u in g.vertices:
                counts = {}
                for p in paths_of_degree(g, u, n):
                    counts[path_source(g, p)] = counts.get(path_source(g, p), 0) + 1
                for w in g.vertices:
                    assert a[g.vertex_index[u]][g.vertex_index[w]] == counts.get(w, 0)


def test_vertex_matrix_product_law_and_commutation():
    for name in ("ex3.5-Lambda", "ex3.5-LambdaI", "ex5.6-Omega", "ex5.7-Omega", "sec3-Sigma"):
        g = fixture(name)
        a1 = vertex_matrix(g, (1, 0))
        a2 = vertex_matrix(g, (0, 1))
        assert mat_eq(mat_mul(a1, a2), mat_mul(a2, a1))
        for m in [(1, 0), (0, 1), (1, 1)]:
            for n in [(1, 0), (1, 1), (2, 0)]:
                lhs = vertex_matrix(g, tuple(x + y for x, y in zip(m, n)))
                assert mat_eq(lhs, mat_mul(vertex_matrix(g, m), vertex_matrix(g, n)))


def test_normal_form_confluence_under_random_swap_order():
    rng = random.Random(2026)
    for name in ("ex3.5-Lambda", "ex5.6-Omega", "ex7.1-Lambda2"):
        g = fixture(name)
        words = [p.edges for p in all_paths_up_to(g, (2, 2)) if len(p.edges) >= 2]
        for word in words:
            # scramble by legal ascending swaps first, then re-sort randomly
            scrambled = list(word)
            for _ in range(4):
                spots = [
                    t
                    for t in range(len(scrambled) - 1)
                    if (scrambled[t], scrambled[t + 1]) in g.squares
                ]
                if not spots:
                    break
                t = rng.choice(spots)
                scrambled[t], scrambled[t + 1] = g.squares[(scrambled[t], scrambled[t + 1])]
            deterministic = normalize_word(g, tuple(scrambled))
            for _ in range(5):
                randomized = normalize_word(g, tuple(scrambled), pick=rng.choice)
                assert randomized == deterministic
            assert deterministic == word


def test_composition_associative_on_small_degrees():
    g = fixture("ex5.6-Omega")
    paths = [p for p in all_paths_up_to(g, (1, 1)) if p.edges]
    rng = random.Random(5)
    trials = 0
    while trials < 100:
        p = rng.choice(paths)
        q = rng.choice([x for x in paths if x.rng == path_source(g, p)] or [None])
        if q is None:
            continue
        r = rng.choice([x for x in paths if x.rng == path_source(g, q)] or [None])
        if r is None:
            continue
        assert compose(g, compose(g, p, q), r) == compose(g, p, compose(g, q, r))
        trials += 1


def test_make_path_normalizes_and_checks_adjacency():
    g = fixture("ex3.5-Lambda")
    # g.e read range-to-source is the descending word [g, e]
    assert make_path(g, ["g", "e"]) == Path("w", ("h", "f1"))
    with pytest.raises(NotComposable):
        make_path(g, ["e", "h"])
    with pytest.raises(ValueError):
        make_path(g, ["nope"])


def test_validator_missing_square():
    g = fixture("ex5.7-Lambda")
    broken = dict(g.squares)
    del broken[("f1", "e")]
    violations = kgraph_violations(g.skeleton, broken, strict=True)
    assert MissingSquare("f1", "e") in violations


def test_validator_non_bijective_squares():
    g = fixture("ex5.7-Lambda")
    broken = dict(g.squares)
    broken[("f1", "e")] = broken[("f2", "e")]  # two keys, one value
    violations = kgraph_violations(g.skeleton, broken, strict=True)
    assert any(isinstance(v, NonBijectiveSquares) for v in violations)


def test_validator_endpoint_mismatch():
    g = fixture("ex3.5-Lambda")
    broken = dict(g.squares)
    # value pair with the wrong source on the color-1 side
    broken[("h1", "f1")] = ("f2", "e'")
    violations = kgraph_violations(g.skeleton, broken, strict=True)
    assert any(isinstance(v, NonBijectiveSquares) for v in violations)
    broken[("h1", "f1")] = ("g", "e")  # r(g)=w but r(h1)=v
    violations = kgraph_violations(g.skeleton, broken, strict=True)
    assert any(isinstance(v, EndpointMismatch) for v in violations)


def test_validator_cube_failure_on_mutated_grid():
    g = grid(3, (1, 1, 1))
    broken = dict(g.squares)
    key = ("e2(0,1,0)", "e3(0,1,1)")
    assert key in broken
    h2, g2 = broken[key]
    broken[key] = (g2, h2)
    violations = kgraph_violations(g.skeleton, broken, strict=False)
    cube = [v for v in violations if isinstance(v, CubeFailure)]
    assert cube
    assert cube[0].colors == (1, 2, 3)


def test_validator_source_vertex_under_strict():
    g = grid(2, (1, 1))
    violations = kgraph_violations(g.skeleton, g.squares, strict=True)
    sources = {(v.vertex, v.color) for v in violations if isinstance(v, SourceVertex)}
    # boundary vertices with q_i = n_i have no color-i in-edges
    assert ("(1,1)", 1) in sources and ("(1,1)", 2) in sources
    assert ("(1,0)", 1) in sources and ("(0,1)", 2) in sources
    assert ("(0,0)", 1) not in sources
    with pytest.raises(InvalidKGraph):
        validate_kgraph(g.skeleton, g.squares, strict=True)


def test_one_color_graphs_need_no_squares():
    g = rose(3)
    assert g.rank == 1 and len(g.edges) == 3
    assert paths_of_degree(g, "u", (2,)) and len(paths_of_degree(g, "u", (2,))) == 9


def test_degree_helpers():
    assert deg_join((1, 0), (0, 2)) == (1, 2)
    assert deg_sub((2, 2), (1, 0)) == (1, 2)
    assert deg_leq((0, 0), (1, 1)) and not deg_leq((2, 0), (1, 1))
    assert unit_degree(3, 2) == (0, 1, 0)
    assert zero_degree(2) == (0, 0)
