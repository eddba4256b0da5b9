"""Uniform weightings, the smoothness test and the smooth correction ω′.

The correction spreads a small per-edge surplus π over r-cliques with
averaged edge gadgets, so that Σ_{K ∋ e} ω′(K) = π(e)/κ on every edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Mapping

from ..cliques import CliqueCounter, iter_cliques
from ..core import Edge, Hypergraph, min_degree
from ..errors import InputError, StageError
from ..gadgets import FAMILIES, GadgetAccumulator, Weighting

SMOOTH_SCALE = 10**4


def graph_kappa(g: Hypergraph, r: int, delta: Fraction, counter: CliqueCounter | None = None) -> Fraction:
    """κ = k_{r-2} - 2δn·k_{r-3}."""
    counter = counter or CliqueCounter(g)
    return counter(r - 2) - 2 * Fraction(delta) * g.n * counter(r - 3)


def uniform_weighting(g: Hypergraph, r: int, kappa: Fraction | int) -> Weighting:
    """Weight 1/κ on every r-clique of ``g``."""
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise StageError("uniform", "uniform weighting", "uniform scale nonpositive", kappa)
    w = Weighting(r)
    inv = 1 / kappa
    w.entries = {c: inv for c in iter_cliques(g, r)}
    return w


@dataclass
class SmoothnessReport:
    gamma_scale: Fraction
    a1_max: Fraction
    a1_witness: Edge | None
    a2_max: Fraction
    a2_witness: int | None
    a3_total: Fraction
    a1_ok: bool
    a2_ok: bool
    a3_ok: bool

    @property
    def smooth(self) -> bool:
        return self.a1_ok and self.a2_ok and self.a3_ok

    def as_dict(self) -> dict[str, object]:
        return {
            "kappa": str(self.gamma_scale),
            "a1_max": str(self.a1_max),
            "a1_witness": list(self.a1_witness) if self.a1_witness else None,
            "a2_max": str(self.a2_max),
            "a2_witness": self.a2_witness,
            "a3_total": str(self.a3_total),
            "a1_ok": self.a1_ok,
            "a2_ok": self.a2_ok,
            "a3_ok": self.a3_ok,
            "smooth": self.smooth,
        }


def _check_pi(g: Hypergraph, pi: Mapping[Edge, Fraction | int]) -> dict[Edge, Fraction]:
    if not g.is_graph:
        raise InputError("smoothness is defined for graphs")
    out = {}
    for e in g.sorted_edges():
        if e not in pi:
            raise InputError(f"π is not defined on edge {e}")
        out[e] = Fraction(pi[e])
    return out


def smoothness_check(
    g: Hypergraph, r: int, pi: Mapping[Edge, Fraction | int], kappa: Fraction | int
) -> SmoothnessReport:
    """Compare π/κ against the per-edge, per-vertex and global smoothness bounds."""
    pi = _check_pi(g, pi)
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise StageError("smoothness", "normalised surplus", "uniform scale nonpositive", kappa)
    n = g.n
    a1, a1w = Fraction(0), None
    per_vertex = [Fraction(0)] * n
    total = Fraction(0)
    for e, v in pi.items():
        a = abs(v)
        if a1w is None or a > a1:
            a1, a1w = a, e
        per_vertex[e[0]] += a
        per_vertex[e[1]] += a
        total += a
    a2, a2w = Fraction(0), None
    for x, s in enumerate(per_vertex):
        if a2w is None or s > a2:
            a2, a2w = s, x
    a1, a2, total = a1 / kappa, a2 / kappa, total / kappa
    return SmoothnessReport(
        kappa,
        a1,
        a1w,
        a2,
        a2w,
        total,
        a1 <= Fraction(1, SMOOTH_SCALE),
        a2 <= Fraction(n, SMOOTH_SCALE * r),
        total <= Fraction(n * n, SMOOTH_SCALE * r * r),
    )


@dataclass
class SmoothCorrection:
    weighting: Weighting
    kappa: Fraction
    smoothness: SmoothnessReport
    report: dict[str, object] = field(default_factory=dict)


# host classification bits for an (r+2)-clique J
_IN_FAMILY = 1  # every r-subclique of J passes both tests defining the family
_BARRED = 2  # J itself passes the inside and touching tests


def smooth_correction(
    g: Hypergraph,
    r: int,
    delta: Fraction,
    pi: Mapping[Edge, Fraction | int],
    *,
    kappa: Fraction | None = None,
    families: str = "auto",
    strict: bool = True,
    counter: CliqueCounter | None = None,
) -> SmoothCorrection:
    """ω′ with Σ_{K ∋ e} ω′(K) = π(e)/κ exactly, built from averaged edge gadgets.

    With p = π/κ and γ = 1/(10⁴r²), the clique family keeps the r-cliques K
    whose own edges carry Σ|p| ≤ 72r²γ and whose touching edges carry
    Σ|p| ≤ 48rnγ.  The gadget for e averages over hosts J ⊇ e whose
    r-subcliques all lie in the family (``families="restricted"``), over every
    (r+2)-clique J ⊇ e (``"full"``), or the former unless some edge with
    p(e) ≠ 0 has no host (``"auto"``).  ``strict`` additionally requires
    at least k_r/2 hosts passing both tests for every edge.
    """
    if families not in FAMILIES:
        raise InputError(f"families must be one of {FAMILIES}")
    if r < 3:
        raise InputError(f"smooth correction needs r >= 3, got {r}")
    pi = _check_pi(g, pi)
    counter = counter or CliqueCounter(g)
    delta = Fraction(delta)
    if kappa is None:
        kappa = graph_kappa(g, r, delta, counter)
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise StageError("smooth-correction", "uniform scale", "uniform scale nonpositive", kappa)
    smooth = smoothness_check(g, r, pi, kappa)
    n = g.n
    k_r = counter(r)
    report: dict[str, object] = {
        "hypotheses": {
            "r_at_least_4": r >= 4,
            "delta_small": delta <= Fraction(1, 24 * r),
            "min_degree": min_degree(g) >= (1 - delta) * n if n else True,
            "smooth": smooth.smooth,
        }
    }
    needed = [e for e, v in pi.items() if v]
    if not needed and not strict:
        report.update(host_family="none", hosts=0, max_abs=Fraction(0), bound_ok=True)
        return SmoothCorrection(Weighting(r), kappa, smooth, report)

    # integer-scaled |π|: thresholds on Σ|p| become thresholds on Σ|π|·D
    D = lcm(*(v.denominator for v in pi.values())) if pi else 1
    absm = [[0] * n for _ in range(n)]
    pv = [0] * n
    for (u, v), val in pi.items():
        a = abs(val.numerator) * (D // val.denominator)
        absm[u][v] = absm[v][u] = a
        pv[u] += a
        pv[v] += a
    t_in = Fraction(72, SMOOTH_SCALE) * kappa * D
    t_touch = Fraction(48 * n, SMOOTH_SCALE * r) * kappa * D

    # r-clique family size (reported) ----------------------------------------
    fam_size = 0
    for K in iter_cliques(g, r):
        s_in = sum(absm[a][b] for a, b in combinations(K, 2))
        if s_in <= t_in and sum(pv[v] for v in K) - s_in <= t_touch:
            fam_size += 1

    # pass 1: classify hosts ----------------------------------------------------
    m = r + 2
    pairs = list(combinations(range(m), 2))
    flags = bytearray()
    cnt_fam: dict[Edge, int] = {e: 0 for e in pi}
    cnt_bar: dict[Edge, int] = {e: 0 for e in pi}
    cnt_all: dict[Edge, int] = {e: 0 for e in pi}
    for J in iter_cliques(g, m):
        row = [0] * m
        s_in = 0
        for i, j in pairs:
            a = absm[J[i]][J[j]]
            if a:
                row[i] += a
                row[j] += a
                s_in += a
        sum_p = sum(pv[v] for v in J)
        fl = 0
        if s_in <= t_in and sum_p - s_in <= t_touch:
            fl |= _BARRED
        ok = True
        for i, j in pairs:
            k_in = s_in - row[i] - row[j] + absm[J[i]][J[j]]
            if k_in > t_in or (sum_p - pv[J[i]] - pv[J[j]]) - k_in > t_touch:
                ok = False
                break
        if ok:
            fl |= _IN_FAMILY
        flags.append(fl)
        for i, j in pairs:
            e = (J[i], J[j])
            cnt_all[e] += 1
            if fl & _IN_FAMILY:
                cnt_fam[e] += 1
            if fl & _BARRED:
                cnt_bar[e] += 1

    half = Fraction(k_r, 2)
    bar_bad = next((e for e in sorted(cnt_bar) if cnt_bar[e] < half), None)
    fam_bad = next((e for e in sorted(cnt_fam) if cnt_fam[e] < half), None)
    report.update(
        family_size=fam_size,
        k_r=k_r,
        well_distributed=fam_bad is None,
        well_distributed_witness=fam_bad,
        barred_min=min(cnt_bar.values(), default=0),
        barred_ok=bar_bad is None,
        barred_witness=bar_bad,
    )
    if strict and bar_bad is not None:
        raise StageError(
            "smooth-correction",
            "host family for the smooth correction",
            f"{cnt_bar[bar_bad]} hosts pass both tests, fewer than k_r/2 = {half}",
            bar_bad,
        )
    mode = "full" if families == "full" else "restricted"
    empty = [e for e in needed if cnt_fam[e] == 0]
    if empty and mode == "restricted":
        if families == "restricted":
            raise StageError("smooth-correction", "edge gadget", "no admissible host clique", empty[0])
        mode = "full"
    counts = cnt_all if mode == "full" else cnt_fam
    empty = [e for e in needed if counts[e] == 0]
    if empty:
        raise StageError("smooth-correction", "edge gadget", "no host clique for edge", empty[0])
    report["host_family"] = mode

    # pass 2: accumulate Σ_e π(e)/(κ|H_e|) · (basic gadget of e on J) -----------
    coef = {e: pi[e] / (kappa * counts[e]) for e in needed}
    den = lcm(*(c.denominator for c in coef.values())) if coef else 1
    num = [[0] * n for _ in range(n)]
    for (u, v), c in coef.items():
        num[u][v] = c.numerator * (den // c.denominator)
    acc = GadgetAccumulator(r, 2)
    want = 0 if mode == "full" else _IN_FAMILY
    used = 0
    for J, fl in zip(iter_cliques(g, m), flags):
        if fl & want != want:
            continue
        b = [num[J[i]][J[j]] for i, j in pairs]
        if any(b):
            acc.add(J, b)
            used += 1
    omega = acc.result(den)
    mx = omega.max_abs()
    report.update(hosts=used, max_abs=mx, bound_ok=mx * 2 * kappa <= 1)
    return SmoothCorrection(omega, kappa, smooth, report)
