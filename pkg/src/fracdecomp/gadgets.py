"""Weight-moving gadgets over clique weightings.

An edge gadget for e is a signed weighting of r-cliques whose net weight is
1 over e and 0 over every other edge.  The basic gadget lives on a single
(r+k)-clique J ⊇ e and gives each r-subclique K the weight α_i, where
i = |K ∩ e| and α solves an upper-triangular system.  Averaging basic
gadgets over many hosts J keeps individual clique weights small.

All arithmetic is exact.  Large accumulations run on integers scaled by a
common denominator and are converted to fractions once at the end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, isqrt, lcm
from operator import itemgetter
from typing import Callable, Iterable, Mapping

from .cliques import (
    Clique,
    CliqueCounter,
    cliques_containing,
    walk_extensions,
    well_distributed_by,
)
from .core import Edge, Hypergraph, iter_bits, mask_of
from .errors import InputError, StageError

# -- coefficients -------------------------------------------------------------


def a_coeff(r: int, k: int, i: int, j: int) -> int:
    """Ways to extend a k-set meeting e in i vertices to an r-set meeting e in j."""
    if j < i:
        return 0
    return comb(k - i, j - i) * comb(r - k + i, j)


@dataclass(frozen=True)
class GadgetCoefficients:
    r: int
    k: int
    alpha: tuple[Fraction, ...]

    def row_residuals(self) -> list[Fraction]:
        """Σ_j a_ij α_j minus the target 1_{i=k}, for each row i."""
        out = []
        for i in range(self.k + 1):
            s = sum((a_coeff(self.r, self.k, i, j) * self.alpha[j] for j in range(i, self.k + 1)), Fraction(0))
            out.append(s - (1 if i == self.k else 0))
        return out

    def magnitude_bound(self, i: int) -> Fraction:
        """2^{k-i} (k-i)! / C(r-k+i, i)."""
        return Fraction(2 ** (self.k - i) * factorial(self.k - i), comb(self.r - self.k + i, i))


@lru_cache(maxsize=None)
def solve_alpha(r: int, k: int) -> GadgetCoefficients:
    """Back-substitute the triangular system for α_0..α_k."""
    if not r > k >= 2:
        raise InputError(f"need r > k >= 2, got r={r}, k={k}")
    alpha: list[Fraction] = [Fraction(0)] * (k + 1)
    alpha[k] = Fraction(1, comb(r, k))
    for i in range(k - 1, -1, -1):
        s = sum((a_coeff(r, k, i, j) * alpha[j] for j in range(i + 1, k + 1)), Fraction(0))
        alpha[i] = -s / a_coeff(r, k, i, i)
    return GadgetCoefficients(r, k, tuple(alpha))


# -- weightings ---------------------------------------------------------------


class Weighting:
    """Finite map from sorted r-tuples to exact rationals; missing means 0."""

    __slots__ = ("r", "entries")

    def __init__(self, r: int, entries: Mapping[Clique, Fraction] | None = None) -> None:
        self.r = r
        self.entries: dict[Clique, Fraction] = {}
        if entries:
            for c, w in entries.items():
                if w:
                    self.entries[tuple(sorted(c))] = Fraction(w)

    def __getitem__(self, c: Iterable[int]) -> Fraction:
        return self.entries.get(tuple(sorted(c)), Fraction(0))

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Weighting):
            return NotImplemented
        return self.r == other.r and self.entries == other.entries

    def __repr__(self) -> str:
        return f"Weighting(r={self.r}, support={len(self.entries)})"

    def items(self) -> list[tuple[Clique, Fraction]]:
        return sorted(self.entries.items())

    def add(self, c: Clique, w: Fraction) -> None:
        v = self.entries.get(c, 0) + w
        if v:
            self.entries[c] = v
        else:
            self.entries.pop(c, None)

    def scaled(self, factor: Fraction) -> Weighting:
        out = Weighting(self.r)
        if factor:
            out.entries = {c: w * factor for c, w in self.entries.items()}
        return out

    def combine(self, other: Weighting, factor: Fraction = Fraction(1)) -> Weighting:
        """self + factor·other."""
        if other.r != self.r:
            raise InputError("cannot combine weightings of different clique sizes")
        out = Weighting(self.r)
        out.entries = dict(self.entries)
        for c, w in other.entries.items():
            out.add(c, factor * w)
        return out

    def __add__(self, other: Weighting) -> Weighting:
        return self.combine(other)

    def __sub__(self, other: Weighting) -> Weighting:
        return self.combine(other, Fraction(-1))

    def min_weight(self) -> Fraction:
        return min(self.entries.values(), default=Fraction(0))

    def max_abs(self) -> Fraction:
        return max((abs(w) for w in self.entries.values()), default=Fraction(0))

    def coverage(self, k: int) -> dict[Edge, Fraction]:
        """Σ_{K ∋ e} ω(K) for every k-set e inside the support (zeros omitted)."""
        if not self.entries:
            return {}
        den = lcm(*(w.denominator for w in self.entries.values()))
        acc: dict[Edge, int] = {}
        for c, w in self.entries.items():
            num = w.numerator * (den // w.denominator)
            for e in combinations(c, k):
                acc[e] = acc.get(e, 0) + num
        return {e: Fraction(v, den) for e, v in acc.items() if v}

    def to_json(self) -> dict[str, object]:
        return {
            "r": self.r,
            "entries": [{"clique": list(c), "weight": str(w)} for c, w in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> Weighting:
        try:
            r = int(data["r"])  # type: ignore[arg-type]
            out = cls(r)
            for item in data["entries"]:  # type: ignore[union-attr]
                c = tuple(sorted(int(v) for v in item["clique"]))
                if len(c) != r:
                    raise InputError(f"clique {c} does not have {r} vertices")
                if c in out.entries:
                    raise InputError(f"clique {c} listed twice")
                out.add(c, Fraction(item["weight"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed weighting JSON: {exc}") from None
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def identity_residual(
    w: Weighting, k: int, target: Callable[[Edge], Fraction | int], edges: Iterable[Edge]
) -> tuple[Fraction, Edge | None]:
    """Max |coverage(e) - target(e)| over ``edges`` plus the support's own k-sets."""
    cov = w.coverage(k)
    worst, arg = Fraction(0), None
    for e in sorted(set(edges) | set(cov)):
        d = abs(cov.get(e, Fraction(0)) - target(e))
        if d > worst:
            worst, arg = d, e
    return worst, arg


# -- basic gadget ---------------------------------------------------------------


def basic_edge_gadget(
    g: Hypergraph, J: Iterable[int], e: Iterable[int], coeffs: GadgetCoefficients | None = None
) -> Weighting:
    """ω(K) = α_{|K ∩ e|} for every r-subset K of the (r+k)-clique J."""
    J = tuple(sorted(J))
    e = tuple(sorted(e))
    k = g.k
    r = len(J) - k
    if coeffs is None:
        coeffs = solve_alpha(r, k)
    if coeffs.k != k or coeffs.r != r:
        raise InputError(f"coefficients are for (r={coeffs.r}, k={coeffs.k}), host needs (r={r}, k={k})")
    if not g.is_clique(J):
        raise InputError(f"{J} is not a clique")
    if len(e) != k or not set(e) <= set(J):
        raise InputError(f"{e} is not an edge of the host clique {J}")
    es = set(e)
    return Weighting(r, {K: coeffs.alpha[len(es.intersection(K))] for K in combinations(J, r)})


# -- averaged gadgets by per-host accumulation --------------------------------------


class GadgetAccumulator:
    """Accumulate Σ_J Σ_{e ⊂ J} b_J(e)·(basic gadget of e on J).

    ``add(J, b)`` takes the host J (sorted, r+k vertices) and integer
    coefficients b aligned with ``local_edges`` (the k-subsets of positions
    0..r+k-1 in lexicographic order).  ``result(den)`` returns the weighting
    with every coefficient divided by ``den``.
    """

    def __init__(self, r: int, k: int) -> None:
        self.r, self.k = r, k
        coeffs = solve_alpha(r, k)
        self.alpha_den = lcm(*(a.denominator for a in coeffs.alpha))
        self.A = [int(a * self.alpha_den) for a in coeffs.alpha]
        m = r + k
        self.local_edges: list[tuple[int, ...]] = list(combinations(range(m), k))
        self.edge_index = {e: i for i, e in enumerate(self.local_edges)}
        # K = J minus the positions in T; T ranges over k-subsets too.
        self._getters = [itemgetter(*[p for p in range(m) if p not in t]) for t in self.local_edges]
        self._cls = [[k - len(set(t) & set(e)) for e in self.local_edges] for t in self.local_edges]
        self.sums: dict[Clique, int] = {}
        self.hosts = 0

    def add(self, J: Clique, b: list[int]) -> None:
        self.hosts += 1
        sums = self.sums
        A = self.A
        if self.k == 2:
            m = self.r + 2
            s = [0] * m
            idx = 0
            for p in range(m):
                for q in range(p + 1, m):
                    bv = b[idx]
                    if bv:
                        s[p] += bv
                        s[q] += bv
                    idx += 1
            total = sum(b)
            a0, a1, a2 = A
            for t_i, (p, q) in enumerate(self.local_edges):
                bab = b[t_i]
                sp = s[p] + s[q]
                val = a0 * bab + a1 * (sp - 2 * bab) + a2 * (total - sp + bab)
                if val:
                    K = self._getters[t_i](J)
                    sums[K] = sums.get(K, 0) + val
            return
        nz = [(i, bv) for i, bv in enumerate(b) if bv]
        if not nz:
            return
        for t_i, cls in enumerate(self._cls):
            val = 0
            for i, bv in nz:
                val += bv * A[cls[i]]
            if val:
                K = self._getters[t_i](J)
                sums[K] = sums.get(K, 0) + val

    def result(self, den: int = 1) -> Weighting:
        full = den * self.alpha_den
        out = Weighting(self.r)
        out.entries = {K: Fraction(v, full) for K, v in self.sums.items() if v}
        return out


def _check_hosts(g: Hypergraph, e: Edge, hosts: Iterable[Iterable[int]], r: int) -> list[Clique]:
    es = set(e)
    out = []
    seen = set()
    for a in hosts:
        a = tuple(sorted(a))
        if len(a) != r or es & set(a):
            raise InputError(f"host set {a} must be an r-set disjoint from {e}")
        j = tuple(sorted(a + e))
        if not g.is_clique(j):
            raise InputError(f"{a} ∪ {e} is not a clique")
        if a in seen:
            raise InputError(f"host set {a} listed twice")
        seen.add(a)
        out.append(j)
    return out


def averaged_edge_gadget(
    g: Hypergraph, e: Iterable[int], r: int, hosts: Iterable[Iterable[int]] | None = None
) -> Weighting:
    """ψ_e(K) = α_{e,K}·φ_e(K)/|H| for a family H of admissible r-sets.

    α_{e,K} counts the A ∈ H with K ⊆ A ∪ e; φ_e is the basic gadget
    coefficient vector for (r, k).  ``hosts`` defaults to every r-set A with
    A ∪ e a clique.  Works for any uniformity, although the usual setting is
    graphs.
    """
    e = tuple(sorted(e))
    k = g.k
    if not g.has_edge(e):
        raise InputError(f"{e} is not an edge")
    if hosts is None:
        js = [tuple(sorted(a + e)) for a in walk_extensions(g, e, r)]
    else:
        js = _check_hosts(g, e, hosts, r)
    if not js:
        raise StageError("edge-gadget", "averaged edge gadget", "empty host family", e)
    acc = GadgetAccumulator(r, k)
    for j in js:
        pos = tuple(j.index(v) for v in e)
        b = [0] * len(acc.local_edges)
        b[acc.edge_index[pos]] = 1
        acc.add(j, b)
    return acc.result(len(js))


def edge_gadget_bound_violations(
    psi: Weighting, e: Edge, n: int, r: int, k_r: int, factor: int = 6
) -> list[Clique]:
    """Cliques with |ψ_e(K)| > factor·n^i/(r^i k_r), i = |K ∩ e|."""
    es = set(e)
    bad = []
    for K, w in psi.items():
        i = len(es.intersection(K))
        if abs(w) * r**i * k_r > factor * n**i:
            bad.append(K)
    return bad


# -- vertex gadgets -------------------------------------------------------------


def sqrt_floor_plus(r: int, c: int) -> int:
    """Largest integer m with m ≤ r^{1/2} + c."""
    return isqrt(r) + c


@dataclass
class VertexGadgetReport:
    x: int
    w_x: Fraction
    tau: dict[int, Fraction]
    hosts: int
    b1_residual: Fraction = Fraction(0)
    b2_ok: bool = True
    b3_ok: bool = True
    b4_ok: bool = True
    extra: dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict[str, object]:
        return {
            "x": self.x,
            "w_x": str(self.w_x),
            "hosts": self.hosts,
            "tau_max": str(max((abs(t) for t in self.tau.values()), default=Fraction(0))),
            "tau_sum": str(sum((abs(t) for t in self.tau.values()), Fraction(0))),
            "b1_residual": str(self.b1_residual),
            "b2_ok": self.b2_ok,
            "b3_ok": self.b3_ok,
            "b4_ok": self.b4_ok,
            **{k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.extra.items()},
        }


def vertex_weight(g: Hypergraph, x: int, r: int, delta: Fraction, counter: CliqueCounter | None = None) -> Fraction:
    """w_x = k_{r-1} - (n - d(x) + δn)·k_{r-2}."""
    kc = counter or CliqueCounter(g)
    return kc(r - 1) - (g.n - g.adj[x].bit_count() + delta * g.n) * kc(r - 2)


def vertex_gadget_approx(
    g: Hypergraph,
    x: int,
    r: int,
    delta: Fraction,
    X: Iterable[int],
    *,
    counter: CliqueCounter | None = None,
) -> tuple[Weighting, VertexGadgetReport]:
    """φ_x(K) = α_{x,K}·ψ_x(K)/w_x, averaged over the (r+1)-cliques A ∪ {x}.

    The hosts are the r-sets A ⊆ N(x) with A ∪ {x} a clique and
    |A ∩ X| ≤ r^{1/2} + 1.  ψ_x(K) is 1/(r-1) when x ∈ K and -(r-2)/(r-1)
    otherwise, so every edge avoiding x gets net weight 0.
    """
    if g.k != 2:
        raise InputError("vertex gadgets are defined for graphs")
    if r < 3:
        raise InputError(f"vertex gadgets need r >= 3, got {r}")
    if not 0 <= x < g.n:
        raise InputError(f"vertex {x} out of range")
    delta = Fraction(delta)
    counter = counter or CliqueCounter(g)
    w_x = vertex_weight(g, x, r, delta, counter)
    if w_x <= 0:
        raise StageError("vertex-gadget", "approximate vertex gadget", "vertex gadget denominator nonpositive", x)
    xm = mask_of(X)
    cap = sqrt_floor_plus(r, 1)
    sums: dict[Clique, int] = {}
    hosts = 0
    for a in walk_extensions(g, (x,), r):
        if sum(1 for v in a if xm >> v & 1) > cap:
            continue
        hosts += 1
        sums[a] = sums.get(a, 0) - (r - 2)
        for i in range(r):
            K = tuple(sorted(a[:i] + a[i + 1:] + (x,)))
            sums[K] = sums.get(K, 0) + 1
    den = (r - 1) * w_x
    phi = Weighting(r)
    phi.entries = {K: v / den for K, v in sums.items() if v}

    cov = phi.coverage(2)
    tau: dict[int, Fraction] = {}
    b1 = Fraction(0)
    for y in sorted(iter_bits(g.adj[x])):
        tau[y] = 1 - cov.get((min(x, y), max(x, y)), Fraction(0))
    for e, v in cov.items():
        if x not in e:
            b1 = max(b1, abs(v))
    n = g.n
    k_r = counter(r)
    b2 = all(t * t * r <= 1 for t in tau.values())
    b3 = sum((abs(t) for t in tau.values()), Fraction(0)) * r <= n
    b4 = True
    for K, w in phi.entries.items():
        i = 1 if x in K else 0
        if abs(w) * r ** (i + 1) * k_r > 2 * n ** (i + 1):
            b4 = False
            break
    report = VertexGadgetReport(x, w_x, tau, hosts, b1, b2, b3, b4)
    return phi, report


def tau_closed_form(g: Hypergraph, x: int, r: int, delta: Fraction, X: Iterable[int]) -> dict[int, Fraction]:
    """τ_{x,y} = (w_x - w_{x,y})/w_x with w_{x,y} = #{hosts A of x : y ∈ A}.

    Independent of the weighting: counts hosts directly.
    """
    w_x = vertex_weight(g, x, r, Fraction(delta))
    xm = mask_of(X)
    cap = sqrt_floor_plus(r, 1)
    wxy: dict[int, int] = {y: 0 for y in iter_bits(g.adj[x])}
    for a in walk_extensions(g, (x,), r):
        if sum(1 for v in a if xm >> v & 1) <= cap:
            for y in a:
                wxy[y] += 1
    return {y: (w_x - c) / w_x for y, c in wxy.items()}


FAMILIES = ("restricted", "full", "auto")


def vertex_gadget(
    g: Hypergraph,
    x: int,
    r: int,
    delta: Fraction,
    X: Iterable[int],
    *,
    families: str = "auto",
    strict: bool = True,
    approx: tuple[Weighting, VertexGadgetReport] | None = None,
    counter: CliqueCounter | None = None,
) -> tuple[Weighting, VertexGadgetReport]:
    """ξ_x = φ_x + Σ_{z ∈ N(x)} τ_{x,z}·ψ^x_{xz}; weight 1 over edges at x, 0 elsewhere.

    The correcting edge gadgets for xz average over hosts J = A ∪ {x, z}.
    With ``families="restricted"`` a host must satisfy |A ∩ X| ≤ r^{1/2} and
    Σ_{y ∈ J ∩ N(x)} |τ_{x,y}| ≤ 12; ``"full"`` accepts every (r+2)-clique
    J ⊇ xz; ``"auto"`` uses restricted hosts unless some needed edge has none,
    then falls back to full hosts (recorded in the report).

    Well-distributedness of the restricted family
    A_x = {K : |K ∩ X| ≤ r^{1/2}+2, Σ_{y ∈ K ∩ N(x)} |τ_{x,y}| ≤ 12}
    is always evaluated; with ``strict`` a failure raises ``StageError``.
    """
    if families not in FAMILIES:
        raise InputError(f"families must be one of {FAMILIES}")
    counter = counter or CliqueCounter(g)
    X = sorted(set(X))
    phi, rep = approx if approx is not None else vertex_gadget_approx(g, x, r, delta, X, counter=counter)
    tau = rep.tau
    xm = mask_of(X)
    # |τ| scaled to integers so the family tests stay in integer arithmetic
    tden = lcm(*(t.denominator for t in tau.values())) if tau else 1
    abs_tau = [0] * g.n
    for y, t in tau.items():
        abs_tau[y] = abs(t.numerator) * (tden // t.denominator)
    tau_cap = 12 * tden
    x_cap = sqrt_floor_plus(r, 2)
    k_r = counter(r)
    memo: dict[Clique, bool] = {}

    def in_family(K: Clique) -> bool:
        hit = memo.get(K)
        if hit is None:
            hit = sum(1 for v in K if xm >> v & 1) <= x_cap and sum(abs_tau[v] for v in K) <= tau_cap
            memo[K] = hit
        return hit

    wd = well_distributed_by(g, r, in_family, k_r)
    rep.extra["well_distributed"] = wd.verdict
    rep.extra["well_distributed_witness"] = wd.witness
    if strict and not wd.verdict:
        raise StageError(
            "vertex-gadget",
            "restricted family for the vertex gadget",
            f"not well-distributed: fewer than k_r/2 = {wd.threshold} hosts",
            wd.witness,
        )

    needed = [z for z, t in tau.items() if t]
    phi_only = not needed
    cap_a = isqrt(r)

    def restricted_host(J: Clique, z: int) -> bool:
        inx = sum(1 for v in J if xm >> v & 1) - (xm >> x & 1) - (xm >> z & 1)
        if inx > cap_a:
            return False
        return sum(abs_tau[v] for v in J) <= tau_cap

    hosts_of_x = cliques_containing(g, (x,), r + 2) if not phi_only else []
    mode = "full" if families == "full" else "restricted"

    def host_counts_for(m: str) -> dict[int, int]:
        cnt = {z: 0 for z in needed}
        for J in hosts_of_x:
            for z in J:
                if z in cnt and (m == "full" or restricted_host(J, z)):
                    cnt[z] += 1
        return cnt

    counts = host_counts_for(mode) if not phi_only else {}
    empty = [z for z in needed if counts[z] == 0]
    if empty and mode == "restricted":
        if families == "restricted":
            if strict:
                raise StageError("vertex-gadget", "vertex gadget correction", "no admissible host clique", (x, empty[0]))
        else:
            mode = "full"
            counts = host_counts_for(mode)
            empty = [z for z in needed if counts[z] == 0]
    if empty:
        raise StageError("vertex-gadget", "vertex gadget correction", "no host clique for edge", (min(x, empty[0]), max(x, empty[0])))
    rep.extra["host_family"] = mode

    if phi_only:
        return phi, rep
    coef = {z: tau[z] / counts[z] for z in needed}
    den = lcm(*(c.denominator for c in coef.values()))
    num = {z: c.numerator * (den // c.denominator) for z, c in coef.items()}
    acc = GadgetAccumulator(r, 2)
    nloc = len(acc.local_edges)
    for J in hosts_of_x:
        px = J.index(x)
        b = [0] * nloc
        used = False
        for pz, z in enumerate(J):
            if z in num and (mode == "full" or restricted_host(J, z)):
                b[acc.edge_index[(min(px, pz), max(px, pz))]] = num[z]
                used = True
        if used:
            acc.add(J, b)
    xi = phi + acc.result(den)

    n = g.n
    b_ok = True
    for K, w in xi.entries.items():
        i = 1 if x in K else 0
        if abs(w) * r ** (i + 1) * k_r > 80 * n ** (i + 1):
            b_ok = False
            break
    rep.extra["xi_bound_ok"] = b_ok
    return xi, rep
