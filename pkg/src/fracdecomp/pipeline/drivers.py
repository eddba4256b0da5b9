"""End-to-end decomposition drivers.

Each driver starts from a uniform weighting, which is off by a known surplus
on every edge, and cancels that surplus exactly with gadgets.  The result
always has per-edge sum 1; it is a fractional decomposition when no weight
turns negative.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction
from math import factorial, lcm
from typing import Iterator

from ..cliques import CliqueCounter, count_extensions, enumerate_cliques, iter_cliques
from ..core import Edge, Hypergraph, min_degree, observed_delta
from ..errors import InputError, StageError
from ..gadgets import GadgetAccumulator, Weighting, vertex_gadget
from .breakdown import breakdown
from .certificate import Certificate, verify
from .preprocess import preprocess
from .smooth import graph_kappa, smooth_correction

DELEGATE_MAX_R = 24


class _Clock:
    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - t0


def hypergraph_threshold(r: int, k: int) -> Fraction:
    """δ = k!/(2^{k+3}k²r^{2k-1})."""
    return Fraction(factorial(k), 2 ** (k + 3) * k * k * r ** (2 * k - 1))


def _uniform(g: Hypergraph, r: int, kappa: Fraction, workers: int) -> Weighting:
    if kappa <= 0:
        raise StageError("uniform", "uniform weighting", "uniform scale nonpositive", kappa)
    inv = 1 / kappa
    w = Weighting(r)
    w.entries = {c: inv for c in enumerate_cliques(g, r, workers=workers)}
    return w


def _finish(
    g: Hypergraph, r: int, w: Weighting, report: dict[str, object], clock: _Clock, exact: bool
) -> Certificate:
    with clock.stage("verify"):
        cert = verify(g, r, w, exact=exact)
    cert.report.update(report)
    cert.timings = clock.timings
    return cert


def decompose_hypergraph(
    g: Hypergraph, r: int, k: int | None = None, *, exact: bool = True, workers: int = 1
) -> Certificate:
    """Uniform weight 1/κ̄ plus per-edge gadget corrections (κ̄ = mean κ_e^(r)).

    Edge e starts with weight κ_e^(r)/κ̄ and needs (κ̄ - κ_e^(r))/κ̄ more;
    that amount is split equally over the basic gadgets of e on all
    (r+k)-cliques J ⊇ e.
    """
    k = g.k if k is None else k
    if k != g.k:
        raise InputError(f"host is {g.k}-uniform, not {k}-uniform")
    if not r > k >= 2:
        raise InputError(f"need r > k >= 2, got r={r}, k={k}")
    clock = _Clock()
    n = g.n
    delta = hypergraph_threshold(r, k)
    report: dict[str, object] = {
        "pipeline": "hypergraph",
        "delta_threshold": delta,
        "delta_observed": observed_delta(g),
        "hypotheses": {
            "codegree": n == 0 or min_degree(g) >= (1 - delta) * n,
            "n_large": n * delta > 1,
        },
    }
    edges = g.sorted_edges()
    if not edges:
        raise StageError("uniform", "uniform weighting", "host has no edges")
    with clock.stage("count"):
        kap = {e: count_extensions(g, e, r - k) for e in edges}
        kbar = Fraction(sum(kap.values()), len(edges))
        report["kappa"] = kbar
        report["k_r"] = CliqueCounter(g)(r)
    with clock.stage("uniform"):
        uni = _uniform(g, r, kbar, workers)
    w = 1 / kbar
    with clock.stage("gadgets"):
        coef: dict[Edge, Fraction] = {}
        for e in edges:
            c = (kbar - kap[e]) * w
            if not c:
                continue
            hosts = count_extensions(g, e, r)
            if hosts == 0:
                raise StageError("edge-gadget", "hypergraph correction", f"no gadget host clique for edge {e}", e)
            coef[e] = c / hosts
        report["corrected_edges"] = len(coef)
        omega = uni
        if coef:
            den = lcm(*(c.denominator for c in coef.values()))
            num = {e: c.numerator * (den // c.denominator) for e, c in coef.items()}
            acc = GadgetAccumulator(r, k)
            loc = acc.local_edges
            for J in iter_cliques(g, r + k):
                b = [num.get(tuple(J[p] for p in t), 0) for t in loc]
                if any(b):
                    acc.add(J, b)
            report["hosts"] = acc.hosts
            omega = uni + acc.result(den)
    return _finish(g, r, omega, report, clock, exact)


def _graph_delta(g: Hypergraph, delta: Fraction | None) -> Fraction:
    if not g.is_graph:
        raise InputError("this pipeline is defined for graphs")
    return observed_delta(g) if delta is None else Fraction(delta)


def decompose_r2(
    g: Hypergraph,
    r: int,
    *,
    delta: Fraction | None = None,
    families: str = "auto",
    strict: bool = False,
    exact: bool = True,
    workers: int = 1,
) -> Certificate:
    """Preprocess, then 1/κ on every r-clique minus a smooth correction.

    Removed cliques get weight 1.  δ defaults to the observed (n - δ(G))/n.
    """
    if r < 4:
        raise InputError(f"this pipeline needs r >= 4, got {r}")
    delta = _graph_delta(g, delta)
    clock = _Clock()
    n = g.n
    thm = Fraction(1, 10**5 * r * r)
    report: dict[str, object] = {
        "pipeline": "r2",
        "delta": delta,
        "delta_observed": observed_delta(g),
        "hypotheses": {"min_degree": n == 0 or min_degree(g) >= (1 - thm) * n},
    }
    with clock.stage("preprocess"):
        pre = preprocess(g, r, delta)
    h = pre.host
    counter = CliqueCounter(h)
    report["preprocess"] = {**pre.flags, "X": pre.X}
    with clock.stage("count"):
        kappa = graph_kappa(h, r, delta, counter)
        report["kappa"] = kappa
        report["k_r"] = counter(r)
        if kappa <= 0:
            raise StageError("uniform", "uniform weighting", "uniform scale nonpositive", kappa)
        pi = {e: count_extensions(h, e, r - 2) - kappa for e in h.sorted_edges()}
    with clock.stage("uniform"):
        uni = _uniform(h, r, kappa, workers)
    with clock.stage("smooth"):
        sc = smooth_correction(h, r, delta, pi, kappa=kappa, families=families, strict=strict, counter=counter)
    report["smoothness"] = sc.smoothness.as_dict()
    report["smooth_correction"] = sc.report
    with clock.stage("assemble"):
        omega = uni - sc.weighting
        for c in pre.removed:
            omega.add(c, Fraction(1))
    return _finish(g, r, omega, report, clock, exact)


def decompose_r32(
    g: Hypergraph,
    r: int,
    *,
    delta: Fraction | None = None,
    full: bool = False,
    vertex_gadgets: bool = True,
    families: str = "auto",
    strict: bool = False,
    exact: bool = True,
    workers: int = 1,
) -> Certificate:
    """Vertex gadgets for γ + σ and edge gadgets for the smooth remainder π.

    For r ≤ 24 the hypergraph driver (k = 2) already covers the same degree
    range and is used instead unless ``full`` is set.  With
    ``vertex_gadgets=False`` the vertex terms are folded back into π and
    only the smooth correction runs.
    """
    if not g.is_graph:
        raise InputError("this pipeline is defined for graphs")
    if r <= DELEGATE_MAX_R and not full:
        cert = decompose_hypergraph(g, r, 2, exact=exact, workers=workers)
        cert.report["pipeline"] = "r32"
        cert.report["delegated"] = {
            "driver": "hypergraph",
            # 1/(10⁴r^{3/2}) ≤ 1/(64r³) squared out: 4096r³ ≤ 10⁸
            "threshold_covered": 4096 * r**3 <= 10**8,
        }
        return cert
    if r < 5:
        raise InputError(f"the full pipeline needs r >= 5, got {r}")
    delta = _graph_delta(g, delta)
    clock = _Clock()
    n = g.n
    report: dict[str, object] = {
        "pipeline": "r32",
        "delta": delta,
        "delta_observed": observed_delta(g),
        # δ(G) ≥ (1 - 1/(10⁴r^{3/2}))n, squared out to stay rational
        "hypotheses": {"min_degree": n == 0 or (10**8 * r**3) * (n - min_degree(g)) ** 2 <= n * n},
        "vertex_gadgets": vertex_gadgets,
    }
    with clock.stage("preprocess"):
        pre = preprocess(g, r, delta)
    h = pre.host
    counter = CliqueCounter(h)
    report["preprocess"] = {**pre.flags, "X": pre.X}
    with clock.stage("breakdown"):
        bd = breakdown(h, r, delta, pre.X, counter=counter)
    kappa = bd.kappa
    report["kappa"] = kappa
    report["k_r"] = counter(r)
    report["breakdown"] = bd.report
    if kappa <= 0:
        raise StageError("uniform", "uniform weighting", "uniform scale nonpositive", kappa)
    cx = {x: bd.vertex_term(x) for x in range(n)}
    if vertex_gadgets:
        pi = bd.pi
    else:
        pi = {e: p + cx[e[0]] + cx[e[1]] for e, p in bd.pi.items()}
    with clock.stage("uniform"):
        uni = _uniform(h, r, kappa, workers)
    with clock.stage("smooth"):
        sc = smooth_correction(h, r, delta, pi, kappa=kappa, families=families, strict=strict, counter=counter)
    report["smoothness"] = sc.smoothness.as_dict()
    report["smooth_correction"] = sc.report
    omega = uni - sc.weighting
    if vertex_gadgets:
        with clock.stage("vertex-gadgets"):
            acc: dict[tuple[int, ...], Fraction] = {}
            summary = {"built": 0, "fallback": [], "not_well_distributed": [], "xi_bound_ok": True}
            for x in range(n):
                c = cx[x]
                if not c or not h.adj[x]:
                    continue
                xi, rep = vertex_gadget(h, x, r, delta, pre.X, families=families, strict=strict, counter=counter)
                summary["built"] += 1
                if rep.extra.get("host_family") == "full":
                    summary["fallback"].append(x)
                if not rep.extra.get("well_distributed"):
                    summary["not_well_distributed"].append(x)
                if not rep.extra.get("xi_bound_ok", True):
                    summary["xi_bound_ok"] = False
                f = c / kappa
                for K, v in xi.entries.items():
                    acc[K] = acc.get(K, 0) + f * v
            report["vertex_gadget_summary"] = summary
        with clock.stage("assemble"):
            for K, v in acc.items():
                omega.add(K, -v)
    with clock.stage("assemble"):
        for c in pre.removed:
            omega.add(c, Fraction(1))
    return _finish(g, r, omega, report, clock, exact)
