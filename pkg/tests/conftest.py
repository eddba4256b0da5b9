from __future__ import annotations

import random
from itertools import combinations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fracdecomp.core import Hypergraph

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def brute_cliques(g: Hypergraph, r: int) -> list[tuple[int, ...]]:
    """r-cliques by checking every r-set against the edge set directly."""
    edges = g.edges
    return [c for c in combinations(range(g.n), r) if all(e in edges for e in combinations(c, g.k))]


def dense_graph(n: int, drop: float, seed: int) -> Hypergraph:
    rng = random.Random(seed)
    return Hypergraph(n, 2, [e for e in combinations(range(n), 2) if rng.random() >= drop])


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9, k: int = 2):
    n = draw(st.integers(min_n, max_n))
    pool = list(combinations(range(n), k))
    keep = draw(st.lists(st.booleans(), min_size=len(pool), max_size=len(pool)))
    return Hypergraph(n, k, [e for e, b in zip(pool, keep) if b])


@st.composite
def dense_graphs(draw, min_n: int = 6, max_n: int = 11, max_missing: int = 4):
    n = draw(st.integers(min_n, max_n))
    pool = list(combinations(range(n), 2))
    missing = draw(st.sets(st.sampled_from(pool), max_size=max_missing))
    return Hypergraph(n, 2, [e for e in pool if e not in missing])
