from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracdecomp.bounds import (
    FAIL,
    PASS,
    SKIP,
    _bonferroni3,
    audit_degree_spread,
    audit_instance,
    count_cliques_meeting,
    count_bound_delta,
    heavy_bound_max_x,
)
from fracdecomp.core import Hypergraph, mask_of
from fracdecomp.gen import gen_random_min_degree

from .conftest import brute_cliques, dense_graphs


@pytest.mark.parametrize("n,r", [(8, 3), (10, 4), (12, 5)])
def test_complete_hosts_pass(n, r):
    g = Hypergraph(n, 2, combinations(range(n), 2))
    rep = audit_instance(g, r)
    assert rep.ok, rep.as_dict()
    assert rep.counts()[FAIL] == 0


@pytest.mark.parametrize("seed", range(5))
def test_random_dense_hosts_pass(seed):
    g = gen_random_min_degree(16, 2, Fraction(1, 8), seed)
    rep = audit_instance(g, 3)
    assert rep.ok, rep.as_dict()


def test_hypergraph_audit():
    g = Hypergraph(9, 3, combinations(range(9), 3))
    rep = audit_instance(g, 4)
    assert rep.ok
    assert {c.name for c in rep.checks} >= {"degree-spread", "global-clique-count", "edge-clique-count"}


def test_degree_violation_is_skipped_not_failed():
    g = Hypergraph(8, 2, combinations(range(8), 2))
    rep = audit_instance(g, 3, delta=Fraction(1, 100))
    statuses = {c.name: c.status for c in rep.checks}
    assert FAIL not in statuses.values()
    assert statuses["global-clique-count"] == SKIP


def test_count_bound_delta_strictly_above_one_over_n():
    g = Hypergraph(10, 2, combinations(range(10), 2))
    d = count_bound_delta(g)
    assert d > Fraction(1, 10)
    assert audit_degree_spread(g, Fraction(1, 10)).status == PASS


@given(dense_graphs(min_n=5, max_n=9), st.integers(3, 5))
def test_bonferroni_matches_direct_sum(g, size):
    # oracle: Σ_i (-1)^i Σ_{|Y|=i} #{size-cliques ⊇ Y}, counted from the brute clique list
    cl = [set(c) for c in brute_cliques(g, size)]
    x = 0
    pool = [v for v in range(g.n) if not g.adj[x] >> v & 1]
    want = 0
    for i in (1, 2, 3):
        for y in combinations(pool, i):
            want += (-1) ** i * sum(1 for c in cl if set(y) <= c)
    assert _bonferroni3(g, mask_of(pool), size) == want


@given(dense_graphs(min_n=5, max_n=9), st.integers(2, 4), st.integers(1, 3))
def test_cliques_meeting_matches_direct_count(g, r, at_least):
    xs = list(range(0, g.n, 2))
    want = sum(1 for c in brute_cliques(g, r) if len(set(c) & set(xs)) >= at_least)
    assert count_cliques_meeting(g, r, xs, at_least) == want


def test_heavy_bound_vacuous_below_scale():
    g = Hypergraph(30, 2, combinations(range(30), 2))
    assert heavy_bound_max_x(g, 4) == 0
