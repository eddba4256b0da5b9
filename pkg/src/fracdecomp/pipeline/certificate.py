"""Certificates: a weighting plus its exact verification, and CSV summaries."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from ..core import Hypergraph
from ..errors import InputError
from ..gadgets import Weighting

CSV_SCHEMA = "# fracdecomp-summary v1"
CSV_FIELDS = [
    "instance",
    "pipeline",
    "n",
    "k",
    "r",
    "delta_observed",
    "k_r",
    "kappa",
    "min_weight",
    "feasible",
    "stage",
    "seconds",
]


@dataclass
class Certificate:
    n: int
    k: int
    r: int
    weighting: Weighting
    edge_residual: Fraction
    min_weight: Fraction
    max_weight: Fraction
    feasible: bool
    exact: bool = True
    report: dict[str, object] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def certifying(self) -> bool:
        return self.exact

    def to_json(self) -> dict[str, object]:
        return {
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "exact": self.exact,
            "feasible": self.feasible,
            "edge_residual": str(self.edge_residual),
            "min_weight": str(self.min_weight),
            "max_weight": str(self.max_weight),
            "weights": self.weighting.to_json()["entries"],
            "report": _jsonable(self.report),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"

    def write(self, path: str | Path) -> None:
        if not self.exact:
            raise InputError("float-mode results are not certificates and are never written")
        Path(path).write_text(self.dumps(), encoding="utf-8")


def _jsonable(value: object) -> object:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return value


def verify(g: Hypergraph, r: int, w: Weighting, *, exact: bool = True) -> Certificate:
    """Exact per-edge sums, minimum weight and the feasibility verdict.

    Feasible means every edge receives total weight exactly 1 and no weight
    is negative; weights are then automatically at most 1, which is checked
    as well.  ``exact=False`` evaluates in floating point and marks the
    result as non-certifying.
    """
    if w.r != r:
        raise InputError(f"weighting is over {w.r}-cliques, expected {r}")
    for c in w.entries:
        if len(c) != r or not g.is_clique(c):
            raise InputError(f"weighting references {c}, which is not an {r}-clique")
    cov = w.coverage(g.k)
    if exact:
        residual = max((abs(cov.get(e, Fraction(0)) - 1) for e in g.edges), default=Fraction(0))
        lo = w.min_weight() if len(w) else Fraction(0)
        hi = max(w.entries.values(), default=Fraction(0))
        feasible = residual == 0 and lo >= 0
    else:
        residual = Fraction(max((abs(float(cov.get(e, 0)) - 1.0) for e in g.edges), default=0.0))
        lo = Fraction(min((float(v) for v in w.entries.values()), default=0.0))
        hi = Fraction(max((float(v) for v in w.entries.values()), default=0.0))
        feasible = residual < Fraction(1, 10**9) and lo >= 0
    report: dict[str, object] = {"support": len(w)}
    if feasible:
        report["weights_at_most_one"] = hi <= 1
    return Certificate(g.n, g.k, r, w, residual, lo, hi, feasible, exact, report)


def summary_rows(instance: str, pipeline: str, g: Hypergraph, cert: Certificate) -> list[dict[str, object]]:
    """One CSV row per timed stage (and a ``total`` row)."""
    rep = cert.report
    base = {
        "instance": instance,
        "pipeline": pipeline,
        "n": g.n,
        "k": g.k,
        "r": cert.r,
        "delta_observed": str(rep.get("delta_observed", "")),
        "k_r": rep.get("k_r", ""),
        "kappa": str(rep.get("kappa", "")),
        "min_weight": str(cert.min_weight),
        "feasible": cert.feasible,
    }
    rows = []
    for stage, secs in cert.timings.items():
        rows.append({**base, "stage": stage, "seconds": f"{secs:.6f}"})
    rows.append({**base, "stage": "total", "seconds": f"{sum(cert.timings.values()):.6f}"})
    return rows


def append_csv(path: str | Path, rows: Iterable[Mapping[str, object]]) -> None:
    """Append rows, writing the schema comment and header for a new file."""
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="", encoding="utf-8") as fh:
        if new:
            fh.write(CSV_SCHEMA + "\n")
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        if new:
            writer.writeheader()
        for row in rows:
            writer.writerow(row)


def read_csv(path: str | Path) -> list[dict[str, str]]:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def load_certificate(path: str | Path) -> tuple[int, int, int, Weighting]:
    """Read back (n, k, r, weighting) from a certificate file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        r = int(data["r"])
        w = Weighting.from_json({"r": r, "entries": data["weights"]})
        return int(data["n"]), int(data["k"]), r, w
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
