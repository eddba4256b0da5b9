from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracdecomp.cliques import CliqueCounter, walk_extensions
from fracdecomp.core import Hypergraph
from fracdecomp.errors import InputError, StageError
from fracdecomp.gadgets import (
    GadgetAccumulator,
    Weighting,
    averaged_edge_gadget,
    basic_edge_gadget,
    edge_gadget_bound_violations,
    identity_residual,
    solve_alpha,
    tau_closed_form,
    vertex_gadget,
    vertex_gadget_approx,
    vertex_weight,
)

from .conftest import dense_graph, dense_graphs


def _direct_coverage(J, e, alpha, r, k):
    """Σ_{K ⊇ f} α_{|K ∩ e|} for every k-subset f of J, by plain summation."""
    out = {}
    for f in combinations(J, k):
        s = Fraction(0)
        for K in combinations(J, r):
            if set(f) <= set(K):
                s += alpha[len(set(K) & set(e))]
        out[f] = s
    return out


def test_alpha_small_cases():
    # oracle: the coverage identity on K_{r+k} forces these values
    assert solve_alpha(3, 2).alpha == (Fraction(1, 3), Fraction(-1, 6), Fraction(1, 3))
    assert solve_alpha(5, 2).alpha == (Fraction(3, 5), Fraction(-3, 20), Fraction(1, 10))
    for r, k in [(3, 2), (5, 2)]:
        J = tuple(range(r + k))
        cov = _direct_coverage(J, J[:k], solve_alpha(r, k).alpha, r, k)
        assert all(v == (1 if f == J[:k] else 0) for f, v in cov.items())


@pytest.mark.parametrize("r,k", [(r, k) for r in range(3, 8) for k in range(2, r) if comb(r + k, r) <= 800])
def test_basic_gadget_identity_by_direct_sum(r, k):
    J = tuple(range(r + k))
    e = tuple(random.Random(r * 31 + k).sample(J, k))
    cov = _direct_coverage(J, tuple(sorted(e)), solve_alpha(r, k).alpha, r, k)
    assert all(v == (1 if set(f) == set(e) else 0) for f, v in cov.items())


def test_alpha_rejects_bad_sizes():
    with pytest.raises(InputError):
        solve_alpha(2, 2)
    with pytest.raises(InputError):
        solve_alpha(4, 1)


def test_basic_gadget_on_hypergraph():
    g = Hypergraph(7, 3, combinations(range(7), 3))
    w = basic_edge_gadget(g, range(7), (1, 3, 5))
    assert w.coverage(3) == {(1, 3, 5): 1}


@given(dense_graphs(min_n=6, max_n=10), st.integers(3, 4), st.data())
def test_averaged_edge_gadget_identity(g, r, data):
    edges = [e for e in g.sorted_edges() if any(True for _ in walk_extensions(g, e, r))]
    if not edges:
        return
    e = data.draw(st.sampled_from(edges))
    psi = averaged_edge_gadget(g, e, r)
    res, _ = identity_residual(psi, 2, lambda f: 1 if f == e else 0, g.edges)
    assert res == 0


def test_averaged_gadget_matches_mean_of_basic_gadgets():
    g = dense_graph(9, 0.1, 4)
    e = g.sorted_edges()[0]
    hosts = [a for a in walk_extensions(g, e, 3)]
    want = Weighting(3)
    for a in hosts:
        want = want + basic_edge_gadget(g, a + e, e)
    assert averaged_edge_gadget(g, e, 3) == want.scaled(Fraction(1, len(hosts)))


def test_averaged_gadget_explicit_hosts_and_errors():
    g = Hypergraph(6, 2, combinations(range(6), 2))
    psi = averaged_edge_gadget(g, (0, 1), 3, hosts=[(2, 3, 4)])
    assert psi == basic_edge_gadget(g, (0, 1, 2, 3, 4), (0, 1))
    with pytest.raises(InputError):
        averaged_edge_gadget(g, (0, 1), 3, hosts=[(1, 2, 3)])
    with pytest.raises(InputError):
        averaged_edge_gadget(g, (0, 1), 3, hosts=[(2, 3, 4), (4, 3, 2)])
    sparse = Hypergraph(4, 2, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(StageError):
        averaged_edge_gadget(sparse, (0, 1), 3)


def test_averaged_gadget_bound_on_complete_graph():
    g = Hypergraph(12, 2, combinations(range(12), 2))
    psi = averaged_edge_gadget(g, (0, 1), 3)
    assert edge_gadget_bound_violations(psi, (0, 1), 12, 3, comb(12, 3)) == []


@given(st.integers(0, 10**6), st.integers(3, 5))
def test_accumulator_generic_path_agrees(seed, r):
    rng = random.Random(seed)
    fast = GadgetAccumulator(r, 2)
    slow = GadgetAccumulator(r, 2)
    slow.k = -1  # any value other than 2 routes through the class table
    for _ in range(3):
        J = tuple(sorted(rng.sample(range(12), r + 2)))
        b = [rng.randint(-3, 3) for _ in fast.local_edges]
        fast.add(J, b)
        slow.add(J, b)
    assert fast.result(7) == slow.result(7)


def test_weighting_json_round_trip_and_errors():
    w = Weighting(3, {(0, 1, 2): Fraction(1, 3), (1, 2, 3): Fraction(-2, 7)})
    assert Weighting.from_json(w.to_json()) == w
    with pytest.raises(InputError):
        Weighting.from_json({"r": 3, "entries": [{"clique": [0, 1], "weight": "1"}]})
    with pytest.raises(InputError):
        Weighting.from_json({"r": 3, "entries": [{"clique": [0, 1, 2], "weight": "1/0"}]})


@given(st.integers(0, 10**6))
def test_weighting_coverage_is_linear(seed):
    rng = random.Random(seed)
    cl = list(combinations(range(6), 3))
    a = Weighting(3, {c: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for c in rng.sample(cl, 6)})
    b = Weighting(3, {c: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for c in rng.sample(cl, 6)})
    ca, cb, cs = a.coverage(2), b.coverage(2), (a + b).coverage(2)
    for e in combinations(range(6), 2):
        assert cs.get(e, 0) == ca.get(e, 0) + cb.get(e, 0)


def test_vertex_gadget_complete_graph_values():
    g = Hypergraph(10, 2, combinations(range(10), 2))
    delta = Fraction(1, 10)
    # w_x = k_3 - (n - d(x) + δn)·k_2 = 120 - 2·45
    assert vertex_weight(g, 0, 4, delta) == 30
    phi, rep = vertex_gadget_approx(g, 0, 4, delta, [])
    assert rep.hosts == comb(9, 4)
    assert rep.tau == tau_closed_form(g, 0, 4, delta, [])
    # τ = (w_x - #hosts through y)/w_x = (30 - C(8, 3))/30
    assert set(rep.tau.values()) == {Fraction(30 - comb(8, 3), 30)} == {Fraction(-13, 15)}


def _vertex_identity(g, x, xi):
    return identity_residual(xi, 2, lambda f: 1 if x in f else 0, g.edges)[0]


@pytest.mark.parametrize("families", ["full", "auto"])
def test_vertex_gadget_identity_complete(families):
    g = Hypergraph(10, 2, combinations(range(10), 2))
    xi, rep = vertex_gadget(g, 3, 4, Fraction(1, 10), [], families=families, strict=False)
    assert _vertex_identity(g, 3, xi) == 0
    assert rep.extra["host_family"] in ("restricted", "full")


@pytest.mark.parametrize("seed", range(4))
def test_vertex_gadget_identity_random(seed):
    g = dense_graph(12, 0.08, seed)
    counter = CliqueCounter(g)
    delta = Fraction(12 - min(a.bit_count() for a in g.adj), 12)
    X = [v for v in range(12) if g.adj[v].bit_count() >= (1 - delta) * 12 + 2]
    for x in range(0, 12, 5):
        try:
            xi, _ = vertex_gadget(g, x, 3, delta, X, strict=False, counter=counter)
        except StageError:
            continue
        assert _vertex_identity(g, x, xi) == 0


def test_vertex_gadget_strict_raises_when_not_well_distributed():
    g = Hypergraph(10, 2, combinations(range(10), 2))
    with pytest.raises(StageError) as info:
        vertex_gadget(g, 0, 4, Fraction(1, 10), [], strict=True)
    assert info.value.stage == "vertex-gadget"


def test_vertex_weight_nonpositive_raises():
    g = Hypergraph(9, 2, combinations(range(9), 2))
    with pytest.raises(StageError):
        vertex_gadget_approx(g, 0, 5, Fraction(1, 9), [])
