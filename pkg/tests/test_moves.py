"""In-splitting and sink deletion against the frozen catalog graphs."""

import pytest

from kgraphs.constructions import fixture, grid, rose
from kgraphs.core import validate_kgraph, vertex_matrix
from kgraphs.intmat import mat_eq, mat_mul
from kgraphs.moves import (
    IndivisibleVertex,
    InvalidPartition,
    NotASink,
    Partition,
    check_partition,
    ei_sinks,
    enumerate_valid_partitions,
    insplit,
    insplit_matrices,
    pairing_closure,
    sink_colors,
    sink_delete,
)


# ------------------------------------------------------------------ pairing

def test_pairing_classes_at_v():
    g = fixture("ex3.5-Lambda")
    assert pairing_closure(g, "v") == [("h1", "f2"), ("h2", "f1")]


def test_pairing_single_class_elsewhere():
    g = fixture("ex3.5-Lambda")
    # every pair at u and at w admits a common extension
    assert len(pairing_closure(g, "u")) == 1
    assert len(pairing_closure(g, "w")) == 1
    with pytest.raises(IndivisibleVertex):
        enumerate_valid_partitions(g, "u")
    with pytest.raises(IndivisibleVertex):
        enumerate_valid_partitions(g, "w")


def test_partition_enumeration():
    g = fixture("ex3.5-Lambda")
    parts = enumerate_valid_partitions(g, "v")
    assert parts == [Partition("v", ("f2", "h1"), ("f1", "h2"))]
    # three singleton classes give 2^2 - 1 = 3 splits
    assert pairing_closure(rose(3), "u") == [("c1",), ("c2",), ("c3",)]
    parts3 = enumerate_valid_partitions(rose(3), "u")
    assert len(parts3) == 3
    assert parts3[0] == Partition("u", ("c1",), ("c2", "c3"))
    for p in parts3:
        check_partition(rose(3), p)


def test_partition_validation():
    g = fixture("ex3.5-Lambda")
    with pytest.raises(InvalidPartition):
        check_partition(g, Partition("v", ("h1", "f1"), ("h2", "f2")))  # splits classes
    with pytest.raises(InvalidPartition):
        check_partition(g, Partition("v", ("h1", "f2", "h2", "f1"), ()))
    with pytest.raises(InvalidPartition):
        check_partition(g, Partition("v", ("h1", "f2", "e"), ("h2", "f1")))
    with pytest.raises(InvalidPartition):
        check_partition(g, Partition("v", ("h1", "f2"), ("h2",)))
    with pytest.raises(InvalidPartition):
        check_partition(g, Partition("nope", ("h1",), ("h2",)))


# ----------------------------------------------------------------- insplit

def test_insplit_matches_catalog():
    g = fixture("ex3.5-Lambda")
    (part,) = enumerate_valid_partitions(g, "v")
    split, parents = insplit(g, part)
    assert split == fixture("ex3.5-LambdaI")
    assert parents.vertices == {"u": "u", "v^1": "v", "v^2": "v", "w": "w"}
    assert parents.edges["h1^2"] == "h1"
    assert parents.edges["f1"] == "f1"
    assert split.strict


def test_insplit_rose():
    g = rose(2)
    (part,) = [p for p in enumerate_valid_partitions(g, "u") if p.side1 == ("c1",)]
    split, parents = insplit(g, part)
    assert split.vertices == ("u^1", "u^2")
    assert len(split.edges) == 4
    assert {e.id for e in split.edges} == {"c1^1", "c1^2", "c2^1", "c2^2"}
    # every offspring of c1 keeps range u^1, of c2 range u^2
    assert all(split.by_id[f"c1^{t}"].rng == "u^1" for t in (1, 2))
    assert all(split.by_id[f"c2^{t}"].rng == "u^2" for t in (1, 2))


def test_insplit_matrix_identities():
    cases = [
        (fixture("ex3.5-Lambda"), enumerate_valid_partitions(fixture("ex3.5-Lambda"), "v")[0]),
        (rose(2), enumerate_valid_partitions(rose(2), "u")[0]),
        (rose(3), enumerate_valid_partitions(rose(3), "u")[1]),
        (fixture("ex5.6-Omega"), enumerate_valid_partitions(fixture("ex5.6-Omega"), "w")[0]),
    ]
    for g, part in cases:
        split, _ = insplit(g, part)
        for j in range(1, g.rank + 1):
            r, s = insplit_matrices(g, part, j)
            a_j = vertex_matrix(g, tuple(1 if i == j else 0 for i in range(1, g.rank + 1)))
            b_j = vertex_matrix(split, tuple(1 if i == j else 0 for i in range(1, g.rank + 1)))
            assert mat_eq(mat_mul(r, s), a_j)
            assert mat_eq(mat_mul(s, r), b_j)
            for i in range(1, g.rank + 1):
                a_i = vertex_matrix(g, tuple(1 if t == i else 0 for t in range(1, g.rank + 1)))
                b_i = vertex_matrix(split, tuple(1 if t == i else 0 for t in range(1, g.rank + 1)))
                assert mat_eq(mat_mul(a_i, r), mat_mul(r, b_i))
                assert mat_eq(mat_mul(b_i, s), mat_mul(s, a_i))


def test_insplit_pinned_matrices():
    g = fixture("ex3.5-Lambda")
    (part,) = enumerate_valid_partitions(g, "v")
    r, s = insplit_matrices(g, part, 1)
    assert r == [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]]
    assert s == [[2, 0, 0], [0, 1, 0], [0, 1, 0], [0, 1, 0]]


def test_insplit_on_nonstrict_graph():
    strict = fixture("ex3.5-Lambda")
    g = validate_kgraph(strict.skeleton, strict.squares, strict=False)
    (part,) = enumerate_valid_partitions(g, "v")
    split, _ = insplit(g, part)
    assert not split.strict
    assert split.skeleton == fixture("ex3.5-LambdaI").skeleton


# ---------------------------------------------------------------- sinks

def test_ei_sinks():
    g = fixture("ex3.5-Lambda")
    assert ei_sinks(g, 1) == ["w"]
    assert ei_sinks(g, 2) == ["v", "w"]
    assert sink_colors(g, "v") == [2]
    assert sink_colors(g, "u") == []
    h = grid(2, (2, 2))
    assert ei_sinks(h, 1) == ["(0,0)", "(0,1)", "(0,2)"]


def test_sink_delete_matches_catalog():
    g = fixture("ex3.5-Lambda")
    assert sink_delete(g, "v") == fixture("ex3.5-LambdaS")
    assert set(g.vertices) - set(sink_delete(g, "v").vertices) == {"v", "w"}
    # w is also a sink; deleting it keeps u and v
    cut = sink_delete(g, "w")
    assert cut.vertices == ("u", "v")
    assert cut.strict


def test_sink_delete_rejects_non_sink():
    g = fixture("ex3.5-Lambda")
    with pytest.raises(NotASink):
        sink_delete(g, "u")
    with pytest.raises(NotASink):
        sink_delete(fixture("ex3.5-LambdaS"), "u")


def test_sink_delete_removes_whole_downstream():
    g = grid(2, (2, 2))
    cut = sink_delete(g, "(0,1)")
    assert set(g.vertices) - set(cut.vertices) == {"(0,1)", "(0,0)"}
    assert all(e.src in cut.vertices and e.rng in cut.vertices for e in cut.edges)


def test_sink_delete_empty_result_is_an_error():
    from kgraphs.core import Edge, Skeleton

    g = validate_kgraph(
        Skeleton(2, ("u",), (Edge("b", 1, "u", "u"),)), {}, strict=False
    )
    with pytest.raises(ValueError):
        sink_delete(g, "u")
