"""Exact LP feasibility for fractional clique decompositions.

The system is Σ_{K ∋ e} ω(K) = 1 for every edge e with ω ≥ 0.  It is decided
by a phase-one revised simplex over exact rationals with Bland's rule.  A
floating-point HiGHS solve may supply the starting basis; it only affects
speed, since the exact simplex re-derives everything and every answer comes
with a witness that is re-checked exactly:

* feasible: a weighting ω with residual 0 and 0 ≤ ω ≤ 1;
* infeasible: y on edges with Σ_{e ⊂ K} y(e) ≤ 0 for every r-clique K and
  Σ_e y(e) > 0 (Farkas).  Summing the equations against y shows no ω ≥ 0 works.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from gmpy2 import mpq

from .cliques import Clique, enumerate_cliques
from .core import Edge, Hypergraph
from .errors import FracDecompError, InputError, SizeLimitError
from .gadgets import Weighting

DEFAULT_LP_CAP = 10**5
LP_CAP_ENV = "FRACDECOMP_LP_CAP"


def lp_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(LP_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{LP_CAP_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_LP_CAP


@dataclass
class LPResult:
    n: int
    k: int
    r: int
    feasible: bool
    witness: Weighting | None
    dual_witness: dict[Edge, Fraction] | None
    rows: int = 0
    columns: int = 0
    pivots: int = 0
    warm_start: bool = False

    def to_json(self) -> dict[str, object]:
        dual = None
        if self.dual_witness is not None:
            dual = [{"edge": list(e), "value": str(v)} for e, v in sorted(self.dual_witness.items())]
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "feasible": self.feasible,
            "rows": self.rows,
            "columns": self.columns,
            "witness": self.witness.to_json()["entries"] if self.witness is not None else None,
            "dual_witness": dual,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"


def _frac(q: mpq) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Simplex:
    """Phase one for A·x = 1, x ≥ 0; columns N.. N+m-1 are artificial."""

    def __init__(self, m: int, cols: list[list[int]]) -> None:
        self.m = m
        self.N = len(cols)
        self.cols = cols + [[i] for i in range(m)]
        self.basis = [self.N + i for i in range(m)]
        self.in_basis = set(self.basis)
        one, zero = mpq(1), mpq(0)
        self.binv = [[one if i == j else zero for j in range(m)] for i in range(m)]
        self.xb = [one] * m
        self.pivots = 0

    def column(self, q: int) -> list[mpq]:
        rows = self.cols[q]
        return [sum((bi[t] for t in rows), mpq(0)) for bi in self.binv]

    def pivot(self, q: int, p: int, u: list[mpq]) -> None:
        piv = u[p]
        rowp = [v / piv for v in self.binv[p]]
        nz = [j for j, v in enumerate(rowp) if v]
        self.binv[p] = rowp
        xp = self.xb[p] / piv
        self.xb[p] = xp
        for i, f in enumerate(u):
            if i == p or not f:
                continue
            bi = self.binv[i]
            for j in nz:
                bi[j] -= f * rowp[j]
            self.xb[i] -= f * xp
        self.in_basis.discard(self.basis[p])
        self.basis[p] = q
        self.in_basis.add(q)
        self.pivots += 1

    def duals(self) -> list[mpq]:
        y = [mpq(0)] * self.m
        for i, b in enumerate(self.basis):
            if b >= self.N:
                for j, v in enumerate(self.binv[i]):
                    if v:
                        y[j] += v
        return y

    def entering(self, y: list[mpq]) -> int | None:
        for j in range(self.N + self.m):
            if j in self.in_basis:
                continue
            cost = 1 if j >= self.N else 0
            d = cost - sum((y[t] for t in self.cols[j]), mpq(0))
            if d < 0:
                return j
        return None

    def run(self) -> None:
        while True:
            y = self.duals()
            q = self.entering(y)
            if q is None:
                return
            u = self.column(q)
            best, p = None, None
            for i, ui in enumerate(u):
                if ui > 0:
                    ratio = self.xb[i] / ui
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[p]):
                        best, p = ratio, i
            if p is None:  # phase one is bounded below; cannot happen
                raise FracDecompError("phase-one simplex reported an unbounded direction")
            self.pivot(q, p, u)

    def objective(self) -> mpq:
        return sum((x for x, b in zip(self.xb, self.basis) if b >= self.N), mpq(0))


def _highs_support(m: int, cols: list[list[int]]) -> list[int] | None:
    """Columns in the support of a HiGHS phase-one vertex, or None."""
    try:
        import numpy as np
        from scipy.optimize import linprog
        from scipy.sparse import csc_matrix
    except ImportError:  # pragma: no cover - scipy is a declared dependency
        return None
    N = len(cols)
    data, indices, indptr = [], [], [0]
    for c in cols + [[i] for i in range(m)]:
        indices.extend(c)
        data.extend([1.0] * len(c))
        indptr.append(len(indices))
    A = csc_matrix((np.array(data), np.array(indices), np.array(indptr)), shape=(m, N + m))
    cost = np.concatenate([np.zeros(N), np.ones(m)])
    res = linprog(cost, A_eq=A, b_eq=np.ones(m), bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    return [j for j in range(N) if res.x[j] > 1e-9]


def _warm(sx: _Simplex, support: list[int]) -> bool:
    """Pivot the support columns in over artificial rows; keep if feasible."""
    for q in support:
        u = sx.column(q)
        p = next((i for i, ui in enumerate(u) if ui and sx.basis[i] >= sx.N), None)
        if p is not None:
            sx.pivot(q, p, u)
    return all(x >= 0 for x in sx.xb)


def lp_feasible(
    g: Hypergraph, r: int, k: int | None = None, *, cap: int | None = None, warm_start: bool = True
) -> LPResult:
    """Decide whether ``g`` has a fractional K_r^(k)-decomposition, exactly."""
    k = g.k if k is None else k
    if k != g.k:
        raise InputError(f"host is {g.k}-uniform, not {k}-uniform")
    if r < k:
        raise InputError(f"clique size {r} is below the uniformity {k}")
    limit = lp_cap(cap)
    try:
        family = enumerate_cliques(g, r, cap=limit)
    except SizeLimitError:
        raise SizeLimitError(
            f"more than {limit} {r}-cliques: too large for the exact LP; use a pipeline instead"
        ) from None
    cliques: list[Clique] = list(family)
    edges = g.sorted_edges()
    eidx = {e: i for i, e in enumerate(edges)}
    m = len(edges)
    cols = [[eidx[e] for e in combinations(c, k)] for c in cliques]
    sx = _Simplex(m, cols)
    warm = False
    if warm_start and m and cols:
        support = _highs_support(m, cols)
        if support:
            warm = _warm(sx, support)
            if not warm:
                sx = _Simplex(m, cols)
    sx.run()
    if sx.objective() == 0:
        w = Weighting(r)
        for x, b in zip(sx.xb, sx.basis):
            if b < sx.N and x:
                w.entries[cliques[b]] = _frac(x)
        res = LPResult(g.n, k, r, True, w, None, m, len(cols), sx.pivots, warm)
    else:
        y = sx.duals()
        dual = {e: _frac(y[i]) for e, i in eidx.items() if y[i]}
        res = LPResult(g.n, k, r, False, None, dual, m, len(cols), sx.pivots, warm)
    check_lp_result(g, res, cliques)
    return res


def check_lp_result(g: Hypergraph, res: LPResult, cliques: list[Clique] | None = None) -> None:
    """Re-verify a witness exactly; raises ``FracDecompError`` if it fails."""
    r, k = res.r, res.k
    if (res.witness is None) == (res.dual_witness is None):
        raise FracDecompError("an LP result carries exactly one witness")
    if res.feasible:
        w = res.witness
        assert w is not None
        for c, v in w.entries.items():
            if not g.is_clique(c) or not 0 <= v <= 1:
                raise FracDecompError(f"primal witness invalid at {c}")
        cov = w.coverage(k)
        for e in g.edges:
            if cov.get(e, 0) != 1:
                raise FracDecompError(f"primal witness misses edge {e}")
        return
    y = res.dual_witness
    assert y is not None
    if sum(y.values(), Fraction(0)) <= 0:
        raise FracDecompError("dual witness has nonpositive total")
    family = cliques if cliques is not None else list(enumerate_cliques(g, r))
    for c in family:
        if sum((y.get(e, Fraction(0)) for e in combinations(c, k)), Fraction(0)) > 0:
            raise FracDecompError(f"dual witness positive on clique {c}")
