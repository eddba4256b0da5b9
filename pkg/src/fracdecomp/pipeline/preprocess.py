"""Greedy removal of r-cliques that keeps the minimum degree above threshold."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..cliques import Clique, _graph_walk
from ..core import Hypergraph, iter_bits, min_degree
from ..errors import InputError, StageError


@dataclass
class PreprocessResult:
    host: Hypergraph
    removed: list[Clique]
    X: list[int]
    threshold: Fraction
    flags: dict[str, object] = field(default_factory=dict)


def _high_mask(adj: list[int], bound: Fraction) -> int:
    m = 0
    for v, a in enumerate(adj):
        if a.bit_count() >= bound:
            m |= 1 << v
    return m


def preprocess(g: Hypergraph, r: int, delta: Fraction) -> PreprocessResult:
    """Delete r-cliques while every degree stays at least (1-δ)n.

    Removing K lowers each degree in K by r-1, so K can go exactly when all
    its vertices have degree at least (1-δ)n + r-1.  The lexicographically
    least such clique is removed each round, which makes the run replayable.
    On return X (the high-degree vertices) spans no r-clique, and a Turán
    count bounds |X| by δ(r-1)n.
    """
    if not g.is_graph:
        raise InputError("preprocessing is defined for graphs")
    if r < 2:
        raise InputError(f"clique size must be at least 2, got {r}")
    n = g.n
    delta = Fraction(delta)
    threshold = (1 - delta) * n
    if min_degree(g) < threshold:
        raise InputError(f"minimum degree {min_degree(g)} is below (1-δ)n = {threshold}")
    adj = list(g.adj)
    bound = threshold + r - 1
    removed: list[Clique] = []
    while True:
        xm = _high_mask(adj, bound)
        if xm.bit_count() < r:
            break
        restricted = [a & xm for a in adj]
        k = next(_graph_walk(restricted, xm, r), None)
        if k is None:
            break
        removed.append(k)
        for i, u in enumerate(k):
            for v in k[i + 1:]:
                adj[u] &= ~(1 << v)
                adj[v] &= ~(1 << u)
    host = g.without_edges((u, v) for k in removed for i, u in enumerate(k) for v in k[i + 1:]) if removed else g
    X = list(iter_bits(xm))
    if xm.bit_count() >= r and next(_graph_walk([a & xm for a in host.adj], xm, r), None) is not None:
        raise StageError("preprocess", "high-degree set", f"H[X] still contains an {r}-clique")
    turan = len(X) <= delta * (r - 1) * n
    if not turan:
        raise StageError("preprocess", "high-degree set", f"|X| = {len(X)} exceeds δ(r-1)n", len(X))
    if min_degree(host) < threshold:
        raise StageError("preprocess", "host graph", "minimum degree fell below threshold")
    flags = {"removed": len(removed), "x_size": len(X), "x_bound": delta * (r - 1) * n, "x_clique_free": True}
    return PreprocessResult(host, removed, X, threshold, flags)
