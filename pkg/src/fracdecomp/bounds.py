"""Exact audits of the clique-counting inequalities.

Each audit first checks its hypotheses.  When they fail the check is
reported as ``skip``, never as ``fail``; a ``fail`` means the inequality was
violated on an instance satisfying its hypotheses, which can only be a bug.
All comparisons are exact: rationals for δ-dependent bounds, and squared
integer comparisons wherever a hypothesis involves r^{1/2} or r^{3/2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, isqrt
from typing import Iterable

from .cliques import CliqueCounter, count_extensions, enumerate_cliques, extensions
from .core import Hypergraph, iter_bits, mask_of, min_degree, min_j_degree, observed_delta
from .errors import InputError

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class AuditCheck:
    name: str
    status: str
    detail: str = ""
    witness: object = None

    def as_dict(self) -> dict[str, object]:
        return {"name": self.name, "status": self.status, "detail": self.detail, "witness": _plain(self.witness)}


@dataclass
class AuditReport:
    checks: list[AuditCheck] = field(default_factory=list)

    def add(self, check: AuditCheck) -> None:
        self.checks.append(check)

    def extend(self, other: AuditReport) -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def by_name(self, name: str) -> AuditCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def as_dict(self) -> dict[str, object]:
        return {"ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


def _plain(value: object) -> object:
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    return value


def _degree_ok(g: Hypergraph, delta: Fraction) -> bool:
    """δ_{k-1}(G) ≥ (1-δ)n."""
    return min_degree(g) >= (1 - delta) * g.n


def _require_graph(g: Hypergraph, what: str) -> None:
    if g.k != 2:
        raise InputError(f"{what} is defined for graphs")


# -- degree spread and global clique counts ----------------------------------


def audit_degree_spread(g: Hypergraph, delta: Fraction) -> AuditCheck:
    """δ_ℓ(G) ≥ (1-δ)·C(n-ℓ, k-ℓ) for all ℓ < k, given the codegree bound."""
    name = "degree-spread"
    if not (0 < delta < 1) or g.n < g.k or not _degree_ok(g, delta):
        return AuditCheck(name, SKIP, "codegree hypothesis not met")
    for ell in range(0, g.k):
        actual = g.num_edges if ell == 0 else min_j_degree(g, ell).min_degree
        bound = (1 - delta) * comb(g.n - ell, g.k - ell)
        if actual < bound:
            return AuditCheck(name, FAIL, f"δ_{ell} = {actual} < {bound}", ell)
    return AuditCheck(name, PASS, f"checked ℓ = 0..{g.k - 1}")


def count_bound_delta(g: Hypergraph) -> Fraction:
    """Smallest convenient δ meeting 1/n < δ and the codegree hypothesis."""
    d = observed_delta(g)
    floor = Fraction(1, g.n) + Fraction(1, g.n**3)
    return d if d > Fraction(1, g.n) else max(d, floor)


def audit_global_count(g: Hypergraph, r: int, delta: Fraction, counter: CliqueCounter | None = None) -> AuditCheck:
    """(1 - C(r,k)δ)·C(n,r) ≤ k_r ≤ C(n,r) ≤ n^r/r!."""
    name = "global-clique-count"
    n, k = g.n, g.k
    if not (n > r > k and Fraction(1, n) < delta < 1 and _degree_ok(g, delta)):
        return AuditCheck(name, SKIP, "needs n > r > k, 1/n < δ < 1 and the codegree bound")
    kr = (counter or CliqueCounter(g))(r)
    lower = (1 - comb(r, k) * delta) * comb(n, r)
    if not lower <= kr:
        return AuditCheck(name, FAIL, f"k_r = {kr} below {lower}", kr)
    if not kr <= comb(n, r) or comb(n, r) * factorial(r) > n**r:
        return AuditCheck(name, FAIL, f"upper chain violated at k_r = {kr}", kr)
    return AuditCheck(name, PASS, f"{lower} ≤ {kr} ≤ {comb(n, r)}")


def audit_edge_count(g: Hypergraph, r: int, delta: Fraction, counter: CliqueCounter | None = None) -> AuditCheck:
    """k_{r-k} - 2kδ n^{r-k} C(r,k-1)/(r-k)! ≤ κ_e^(r) ≤ k_{r-k} for every edge."""
    name = "edge-clique-count"
    n, k = g.n, g.k
    if not (n > r > k and Fraction(1, n) < delta < 1 and _degree_ok(g, delta)):
        return AuditCheck(name, SKIP, "needs n > r > k, 1/n < δ < 1 and the codegree bound")
    counter = counter or CliqueCounter(g)
    top = counter(r - k)
    slack = Fraction(2 * k * n ** (r - k) * comb(r, k - 1), factorial(r - k)) * delta
    for e in g.sorted_edges():
        kap = count_extensions(g, e, r - k)
        if not top - slack <= kap <= top:
            return AuditCheck(name, FAIL, f"κ_e = {kap} outside [{top - slack}, {top}]", e)
    return AuditCheck(name, PASS, f"all {g.num_edges} edges within [{top - slack}, {top}]")


def audit_lower_counts(g: Hypergraph, r: int, counter: CliqueCounter | None = None) -> AuditCheck:
    """k_{r-i} ≤ (2r/n)^i k_r for i = 1..r, when δ(G) ≥ (1 - 1/2r)n."""
    name = "lower-clique-ratio"
    _require_graph(g, name)
    n = g.n
    if n == 0 or r < 1 or not _degree_ok(g, Fraction(1, 2 * r)):
        return AuditCheck(name, SKIP, "needs δ(G) ≥ (1 - 1/2r)n")
    counter = counter or CliqueCounter(g)
    kr = counter(r)
    for i in range(1, r + 1):
        if counter(r - i) * n**i > (2 * r) ** i * kr:
            return AuditCheck(name, FAIL, f"k_{r - i} = {counter(r - i)} too large", i)
    return AuditCheck(name, PASS, f"i = 1..{r}")


def clique_count_bounds_audit(g: Hypergraph, r: int, delta: Fraction | None = None) -> AuditReport:
    """The global and per-edge clique-count bounds, plus the lower-ratio bound for graphs.

    ``delta`` defaults to the smallest admissible value for this instance.
    """
    counter = CliqueCounter(g)
    d = count_bound_delta(g) if delta is None else Fraction(delta)
    rep = AuditReport()
    rep.add(audit_global_count(g, r, d, counter))
    rep.add(audit_edge_count(g, r, d, counter))
    if g.k == 2:
        rep.add(audit_lower_counts(g, r, counter))
    return rep


# -- local estimates (graphs) -------------------------------------------------


def _nc_union(g: Hypergraph, zs: tuple[int, ...]) -> int:
    m = 0
    full = g.full_mask
    for z in zs:
        m |= full & ~g.adj[z]
    return m


def _bonferroni3(g: Hypergraph, pool: int, size: int) -> int:
    """Σ_{i=1}^{3} (-1)^i Σ_{Y ⊆ pool, |Y| = i} κ_Y^(size)."""
    verts = list(iter_bits(pool))
    total = 0
    for i in (1, 2, 3):
        if i > size:
            break
        sign = -1 if i % 2 else 1
        for y in combinations(verts, i):
            total += sign * extensions(g, y, size)
    return total


def audit_local_estimates(g: Hypergraph, r: int, delta: Fraction, *, max_t: int | None = None) -> list[AuditCheck]:
    """Three local estimates for cliques Z (|Z| = t < r) and edges xy.

    (i)   |κ_Z^(r) - k_{r-t}| ≤ 2tδr·k_{r-t}
    (ii)  |κ_Z^(r) - k_{r-t} + |∪N^c(z)|·k_{r-t-1}| ≤ 6(tδr)²·k_{r-t}
    (iii) |κ_xy^(r) - k_{r-2} - (first three inclusion-exclusion terms)| ≤ 11(δr)⁴·k_{r-2}
    """
    _require_graph(g, "local estimates")
    names = ("local-estimate-first", "local-estimate-second", "local-estimate-edge")
    if r < 2 or not (0 <= delta <= Fraction(1, 2 * r)) or not _degree_ok(g, delta):
        return [AuditCheck(nm, SKIP, "needs δ ≤ 1/2r and δ(G) ≥ (1-δ)n") for nm in names]
    counter = CliqueCounter(g)
    out: list[AuditCheck] = []
    bad1 = bad2 = None
    seen = 0
    top_t = r - 1 if max_t is None else min(max_t, r - 1)
    for t in range(1, top_t + 1):
        kt, kt1 = counter(r - t), counter(r - t - 1)
        for z in enumerate_cliques(g, t):
            seen += 1
            kap = count_extensions(g, z, r - t)
            if bad1 is None and abs(kap - kt) > 2 * t * delta * r * kt:
                bad1 = z
            u = _nc_union(g, z).bit_count()
            if bad2 is None and abs(kap - kt + u * kt1) > 6 * (t * delta * r) ** 2 * kt:
                bad2 = z
    out.append(AuditCheck(names[0], FAIL if bad1 else PASS, f"{seen} cliques", bad1))
    out.append(AuditCheck(names[1], FAIL if bad2 else PASS, f"{seen} cliques", bad2))
    bad3 = None
    if r >= 2:
        k2 = counter(r - 2)
        for x, y in g.sorted_edges():
            kap = count_extensions(g, (x, y), r - 2)
            approx = k2 + _bonferroni3(g, _nc_union(g, (x, y)), r - 2)
            if abs(kap - approx) > 11 * (delta * r) ** 4 * k2:
                bad3 = (x, y)
                break
    out.append(AuditCheck(names[2], FAIL if bad3 else PASS, f"{g.num_edges} edges", bad3))
    return out


# -- cliques with a large intersection with X ---------------------------------


def count_cliques_meeting(g: Hypergraph, r: int, x: Iterable[int], at_least: int) -> int:
    """Number of r-cliques K with |V(K) ∩ X| ≥ ``at_least``."""
    xs = sorted(set(x))
    xm = mask_of(xs)
    outside = g.full_mask & ~xm
    total = 0
    for j in range(max(at_least, 0), min(r, len(xs)) + 1):
        for s in combinations(xs, j):
            if g.is_clique(s):
                total += count_extensions(g, s, r - j, outside)
    return total


def heavy_bound_hypotheses(g: Hypergraph, r: int, x_size: int) -> bool:
    """δ(G) ≥ (1 - 1/(600 r^{3/2}))n and |X| ≤ n/(600 r^{1/2}), compared exactly."""
    gap = g.n - min_degree(g)
    return r >= 3 and (600 * gap) ** 2 * r**3 <= g.n**2 and (600 * x_size) ** 2 * r <= g.n**2


def heavy_bound_max_x(g: Hypergraph, r: int) -> int:
    """Largest |X| allowed: ⌊n/(600 r^{1/2})⌋ = ⌊√(n²/(600² r))⌋."""
    return isqrt(g.n**2 // (600**2 * r))


def audit_heavy_cliques(g: Hypergraph, r: int, x: Iterable[int], counter: CliqueCounter | None = None) -> AuditCheck:
    """|{K : |V(K) ∩ X| ≥ r^{1/2}}| ≤ k_r / r²."""
    name = "heavy-intersection"
    _require_graph(g, name)
    xs = sorted(set(x))
    if not heavy_bound_hypotheses(g, r, len(xs)):
        return AuditCheck(name, SKIP, "needs δ(G) ≥ (1-1/600r^{3/2})n and |X| ≤ n/600r^{1/2}")
    t = isqrt(r - 1) + 1  # least integer m with m² ≥ r
    heavy = count_cliques_meeting(g, r, xs, t)
    kr = (counter or CliqueCounter(g))(r)
    if heavy * r * r > kr:
        return AuditCheck(name, FAIL, f"{heavy} heavy cliques > k_r/r² with k_r = {kr}", xs)
    return AuditCheck(name, PASS, f"{heavy} heavy cliques, k_r = {kr}, |X| = {len(xs)}")


# -- everything at once --------------------------------------------------------


def audit_instance(
    g: Hypergraph,
    r: int,
    delta: Fraction | None = None,
    x: Iterable[int] | None = None,
    *,
    local: bool = True,
) -> AuditReport:
    """Run every applicable audit on one instance.

    ``delta`` defaults to the observed δ (the smallest value meeting the degree
    hypothesis); the clique-count bounds use a value just above 1/n when the
    observed δ equals 1/n, since they need δ > 1/n strictly.  ``x`` defaults
    to the first ⌊n/(600 r^{1/2})⌋ vertices, the largest X the heavy-clique
    bound allows.
    """
    d = observed_delta(g) if delta is None else Fraction(delta)
    counter = CliqueCounter(g)
    rep = AuditReport()
    if 0 < d < 1:
        rep.add(audit_degree_spread(g, d))
    else:
        rep.add(AuditCheck("degree-spread", SKIP, "needs 0 < δ < 1"))
    d32 = count_bound_delta(g) if delta is None else d
    rep.add(audit_global_count(g, r, d32, counter))
    rep.add(audit_edge_count(g, r, d32, counter))
    if g.k == 2:
        rep.add(audit_lower_counts(g, r, counter))
        if local:
            for c in audit_local_estimates(g, r, d):
                rep.add(c)
        xs = list(range(heavy_bound_max_x(g, r))) if x is None else list(x)
        rep.add(audit_heavy_cliques(g, r, xs, counter))
    return rep
