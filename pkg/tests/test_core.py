from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given

from fracdecomp.core import (
    Hypergraph,
    edge_hash,
    from_json,
    load,
    min_degree,
    min_j_degree,
    neighborhood,
    non_neighborhood,
    non_neighbors_mask,
    observed_delta,
    read_hypergraph,
    save,
    to_json,
    write_hypergraph,
)
from fracdecomp.errors import InputError

from .conftest import graphs


def test_complete_graph_counts():
    g = Hypergraph(5, 2, combinations(range(5), 2))
    assert g.num_edges == 10
    assert min_degree(g) == 4
    assert observed_delta(g) == Fraction(1, 5)


def test_hypergraph_codegree():
    g = Hypergraph(6, 3, combinations(range(6), 3))
    assert min_degree(g) == 4
    assert min_j_degree(g, 1).min_degree == 10


def test_codegree_witness_is_least():
    g = Hypergraph(4, 2, [(0, 1), (1, 2), (2, 3), (0, 2)])
    prof = min_j_degree(g, 1)
    assert prof.min_degree == 1 and prof.arg_min == (3,)


def test_non_neighbourhood_contains_vertex():
    g = Hypergraph(4, 2, [(0, 1), (0, 2)])
    assert non_neighborhood(g, (0,)) == {(0,), (3,)}
    assert non_neighborhood(g, (0,), include_overlap=False) == {(3,)}
    assert non_neighbors_mask(g, 0) == 0b1001


@given(graphs(min_n=2, max_n=8))
def test_neighbourhood_partition(g):
    for x in range(g.n):
        assert len(neighborhood(g, (x,))) + len(non_neighborhood(g, (x,))) == g.n


@given(graphs(min_n=3, max_n=7, k=3))
def test_neighbourhood_partition_hypergraph(g):
    for s in combinations(range(g.n), 2):
        assert len(neighborhood(g, s)) + len(non_neighborhood(g, s)) == g.n - 2


@given(graphs(max_n=9))
def test_text_round_trip(g):
    assert load(save(g)) == g
    assert from_json(to_json(g)) == g


def test_edge_hash_stable_under_edge_order():
    a = Hypergraph(4, 2, [(0, 1), (2, 3)])
    b = Hypergraph(4, 2, [(3, 2), (1, 0)])
    assert edge_hash(a) == edge_hash(b)


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 2\n0 1\n0 x\n", 3),
        ("3 2\n0 1\n1 0\n", 3),
        ("3 2\n0 5\n", 2),
        ("3 2\n0 0\n", 2),
        ("3 2\n0 1 2\n", 2),
        ("3\n", 1),
    ],
)
def test_malformed_input_reports_line(text, line):
    with pytest.raises(InputError) as info:
        load(text)
    assert info.value.line == line


def test_missing_header():
    with pytest.raises(InputError):
        load("# nothing\n")


def test_file_round_trip(tmp_path):
    g = Hypergraph(5, 3, [(0, 1, 2), (1, 3, 4)])
    for name in ("g.txt", "g.json"):
        write_hypergraph(tmp_path / name, g)
        assert read_hypergraph(tmp_path / name) == g


def test_lazy_adjacency_graph_matches():
    g = Hypergraph(6, 2, [(0, 1), (1, 2), (2, 5), (0, 5)])
    lazy = Hypergraph.from_adjacency(6, list(g.adj))
    assert lazy.num_edges == g.num_edges
    assert lazy.edges == g.edges
    assert lazy.has_edge((2, 5)) and not lazy.has_edge((0, 2))


def test_rejects_bad_edges():
    with pytest.raises(InputError):
        Hypergraph(3, 2, [(0, 3)])
    with pytest.raises(InputError):
        Hypergraph(3, 2, [(0, 1), (1, 0)])
    with pytest.raises(InputError):
        Hypergraph(3, 1, [])
