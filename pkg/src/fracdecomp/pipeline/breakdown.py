"""Split the per-edge surplus κ_xy^(r) - κ into vertex terms and an edge remainder.

Vertex terms γ(x) + σ(x) are later removed with vertex gadgets; the edge
remainder π is small enough to be handled by edge gadgets.  π is defined as
the exact remainder, so the split identity holds by construction; the
auxiliary quantities π₁, π₂ are computed separately to audit the bound on |π|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..bounds import _bonferroni3
from ..cliques import CliqueCounter, count_extensions
from ..core import Edge, Hypergraph, iter_bits, min_degree, non_neighbors_mask
from ..errors import InputError
from .smooth import graph_kappa


@dataclass
class BreakdownResult:
    r: int
    delta: Fraction
    kappa: Fraction
    gamma: dict[int, Fraction]
    sigma: dict[int, Fraction]
    pi: dict[Edge, Fraction]
    sigma_parts: dict[int, tuple[Fraction, Fraction, Fraction]] = field(default_factory=dict)
    pi1: dict[Edge, Fraction] = field(default_factory=dict)
    pi2: dict[Edge, Fraction] = field(default_factory=dict)
    bound_rhs: dict[Edge, Fraction] = field(default_factory=dict)
    report: dict[str, object] = field(default_factory=dict)

    def vertex_term(self, x: int) -> Fraction:
        return self.gamma[x] + self.sigma[x]


def non_edge_pairs(g: Hypergraph, a: int, b: int) -> int:
    """ē(A, B): ordered pairs (u, v) ∈ A × B with uv not an edge, u = v included."""
    return sum((b & non_neighbors_mask(g, u)).bit_count() for u in iter_bits(a))


def _edges_inside(g: Hypergraph, mask: int) -> int:
    return sum((g.adj[u] & mask).bit_count() for u in iter_bits(mask)) // 2


def breakdown_hypotheses(g: Hypergraph, r: int, delta: Fraction, X: Iterable[int]) -> dict[str, bool]:
    """Relaxed hypotheses under which bound (iii) is audited.

    The fixed δ = 1/(10⁴r^{3/2}) together with δ(G) ≥ (1-δ)n forces
    n ≥ 10⁴r^{3/2} unless G is complete, so the audit instead asks for a
    small δr with the remaining conditions unchanged.
    """
    n = g.n
    x_size = len(set(X))
    return {
        "r_at_least_5": r >= 5,
        "min_degree": n == 0 or min_degree(g) >= (1 - delta) * n,
        "delta_r_small": 0 < delta * r <= Fraction(1, 16),
        "x_small": x_size <= delta * (r - 1) * n,
    }


def breakdown(
    g: Hypergraph,
    r: int,
    delta: Fraction,
    X: Iterable[int] | None = None,
    *,
    counter: CliqueCounter | None = None,
) -> BreakdownResult:
    """γ, σ = σ₁ + σ₂ + σ₃ and the remainder π, with π₁, π₂ for the bound audit."""
    if not g.is_graph:
        raise InputError("breakdown is defined for graphs")
    if r < 5:
        raise InputError(f"breakdown needs r >= 5, got {r}")
    delta = Fraction(delta)
    n = g.n
    counter = counter or CliqueCounter(g)
    if X is None:
        bound = (1 - delta) * n + r - 1
        X = [v for v in range(n) if g.adj[v].bit_count() >= bound]
    X = sorted(set(X))
    dn = delta * n
    k2, k3, k4, k5 = (counter(r - i) for i in (2, 3, 4, 5))
    kappa = graph_kappa(g, r, delta, counter)

    nc = [non_neighbors_mask(g, v) for v in range(n)]
    ncs = [m.bit_count() for m in nc]
    # Σ_{z ∈ N^c(x)} |N^c(z)| and e(N^c(x))
    nc_sum = [sum(ncs[z] for z in iter_bits(nc[x])) for x in range(n)]
    e_in = [_edges_inside(g, nc[x]) for x in range(n)]

    gamma: dict[int, Fraction] = {}
    sigma: dict[int, Fraction] = {}
    parts: dict[int, tuple[Fraction, Fraction, Fraction]] = {}
    for x in range(n):
        gx = (dn - ncs[x]) * k3
        s1 = _bonferroni3(g, nc[x], r - 2) - gx + dn * k3
        s2 = dn * (ncs[x] - dn / 2) * k4 - dn * nc_sum[x] * k5
        s3 = -e_in[x] * dn * k5
        gamma[x] = Fraction(gx)
        parts[x] = (Fraction(s1), Fraction(s2), Fraction(s3))
        sigma[x] = Fraction(s1 + s2 + s3)

    pi: dict[Edge, Fraction] = {}
    pi1: dict[Edge, Fraction] = {}
    pi2: dict[Edge, Fraction] = {}
    rhs: dict[Edge, Fraction] = {}
    tail = 203 * (delta * r) ** 4 * k2
    bad3 = None
    for e in g.sorted_edges():
        x, y = e
        kap = count_extensions(g, e, r - 2)
        pi[e] = kap - kappa - gamma[x] - gamma[y] - sigma[x] - sigma[y]
        cross = sum((nc[z1] | nc[z2]).bit_count() for z1 in iter_bits(nc[x]) for z2 in iter_bits(nc[y]))
        p1 = dn * nc_sum[x] * k5 + dn * nc_sum[y] * k5 - cross * k5 + (dn - ncs[x]) * (dn - ncs[y]) * k4
        p2 = (e_in[x] * (ncs[y] - dn) + e_in[y] * (ncs[x] - dn)) * k5
        pi1[e], pi2[e] = Fraction(p1), Fraction(p2)
        bound = (
            abs(p1)
            + abs(p2)
            + 2 * (nc[x] & nc[y]).bit_count() * k3
            + tail
            + 3 * non_edge_pairs(g, nc[x], nc[y]) * k4
        )
        rhs[e] = Fraction(bound)
        if bad3 is None and abs(pi[e]) > bound:
            bad3 = e

    sigma_cap = Fraction(k2, 10**4 * r)
    bad2 = next((x for x in range(n) if abs(sigma[x]) > sigma_cap), None)
    hyp = breakdown_hypotheses(g, r, delta, X)
    report = {
        "hypotheses": hyp,
        "hypotheses_met": all(hyp.values()),
        "sigma_bound_ok": bad2 is None,
        "sigma_bound_witness": bad2,
        "pi_bound_ok": bad3 is None,
        "pi_bound_witness": bad3,
        "x_size": len(X),
    }
    return BreakdownResult(r, delta, kappa, gamma, sigma, pi, parts, pi1, pi2, rhs, report)
