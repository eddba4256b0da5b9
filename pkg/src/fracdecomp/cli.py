"""Command-line front end: ``fracdecomp gen|decompose|verify|oracle|audit|bench``.

Exit codes: 0 feasible (or all checks pass), 1 infeasible, flagged or a
construction failed, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .bounds import FAIL, audit_instance
from .cliques import CLIQUE_CAP_ENV, count_cliques
from .core import Hypergraph, read_hypergraph, write_hypergraph
from .errors import FracDecompError, InputError, SizeLimitError, StageError
from .gen import FAMILY_NAMES, GenSpec
from .oracle import lp_feasible
from .pipeline import (
    Certificate,
    append_csv,
    decompose_hypergraph,
    decompose_r2,
    decompose_r32,
    load_certificate,
    summary_rows,
    verify,
)

log = logging.getLogger("fracdecomp")

EXIT_OK, EXIT_INFEASIBLE, EXIT_ERROR = 0, 1, 2
PIPELINES = ("auto", "hypergraph", "r2", "r32")
MODES = ("exact", "float-timing")


@dataclass
class RunConfig:
    command: str
    source: str
    r: int | None = None
    pipeline: str = "auto"
    mode: str = "exact"
    delta: Fraction | None = None
    full: bool = False
    output: str | None = None
    csv: str | None = None
    workers: int = 1
    clique_cap: int | None = None


def _load(source: str) -> tuple[Hypergraph, str]:
    """A path, or ``gen:<spec>`` for an on-the-fly generated instance."""
    if source.startswith("gen:"):
        spec = GenSpec.parse(source[4:])
        return spec.build(), source
    path = Path(source)
    if not path.exists():
        raise InputError(f"no such file: {source}")
    return read_hypergraph(path), path.stem


def run_pipeline(g: Hypergraph, cfg: RunConfig) -> Certificate:
    if cfg.r is None:
        raise InputError("-r is required")
    exact = cfg.mode == "exact"
    name = cfg.pipeline
    if name == "auto":
        name = "r32" if g.k == 2 else "hypergraph"
    if name != "hypergraph" and g.k != 2:
        raise InputError(f"pipeline {name} needs a graph; use hypergraph")
    if name == "hypergraph":
        return decompose_hypergraph(g, cfg.r, exact=exact, workers=cfg.workers)
    if name == "r2":
        return decompose_r2(g, cfg.r, delta=cfg.delta, exact=exact, workers=cfg.workers)
    return decompose_r32(g, cfg.r, delta=cfg.delta, full=cfg.full, exact=exact, workers=cfg.workers)


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GenSpec.parse(args.spec)
    g = spec.build()
    write_hypergraph(args.output, g)
    manifest = spec.manifest(g)
    manifest["path"] = str(args.output)
    if args.manifest:
        Path(args.manifest).write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {args.output}: n={g.n} k={g.k} edges={g.num_edges} hash={manifest['edge_hash'][:16]}")
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g, label = _load(cfg.source)
    try:
        cert = run_pipeline(g, cfg)
    except StageError as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        if cfg.output:
            Path(cfg.output).with_suffix(".error.json").write_text(
                json.dumps(exc.as_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
            )
        return EXIT_INFEASIBLE
    if cfg.output and cert.exact:
        cert.write(cfg.output)
    if cfg.csv:
        append_csv(cfg.csv, summary_rows(label, cert.report.get("pipeline", cfg.pipeline), g, cert))
    status = "feasible" if cert.feasible else "infeasible"
    print(f"{label}: {status} residual={cert.edge_residual} min_weight={cert.min_weight} support={len(cert.weighting)}")
    return EXIT_OK if cert.feasible else EXIT_INFEASIBLE


def cmd_verify(args: argparse.Namespace) -> int:
    g, label = _load(args.input)
    n, k, r, w = load_certificate(args.certificate)
    if (n, k) != (g.n, g.k):
        raise InputError(f"certificate is for n={n}, k={k}; host has n={g.n}, k={g.k}")
    cert = verify(g, r, w)
    print(f"{label}: feasible={cert.feasible} residual={cert.edge_residual} min_weight={cert.min_weight}")
    return EXIT_OK if cert.feasible else EXIT_INFEASIBLE


def cmd_oracle(args: argparse.Namespace) -> int:
    g, label = _load(args.input)
    res = lp_feasible(g, args.r, cap=args.cap, warm_start=not args.cold)
    if args.output:
        Path(args.output).write_text(res.dumps(), encoding="utf-8")
    print(f"{label}: lp_feasible={res.feasible} rows={res.rows} columns={res.columns}")
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_audit(args: argparse.Namespace) -> int:
    failed = False
    rows = []
    for source in _sources(args):
        g, label = _load(source)
        rep = audit_instance(g, args.r, args.delta)
        for c in rep.checks:
            rows.append((label, c.name, c.status, c.detail))
            if c.status == FAIL:
                failed = True
                print(f"FAIL {label} {c.name}: witness {c.witness!r}", file=sys.stderr)
    width = max((len(r[0]) for r in rows), default=8)
    for label, name, status, detail in rows:
        print(f"{label:<{width}}  {name:<22} {status:<5} {detail}")
    return EXIT_INFEASIBLE if failed else EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config(args)
    rows = []
    for source in _sources(args):
        g, label = _load(source)
        t0 = time.perf_counter()
        k_r = count_cliques(g, cfg.r) if cfg.r is not None else 0
        enum = time.perf_counter() - t0
        base = {"instance": label, "pipeline": cfg.pipeline, "n": g.n, "k": g.k, "r": cfg.r, "k_r": k_r}
        rows.append({**base, "stage": "clique-count", "seconds": f"{enum:.6f}"})
        try:
            cert = run_pipeline(g, cfg)
        except StageError as exc:
            rows.append({**base, "stage": f"failed:{exc.stage}", "seconds": ""})
            continue
        rows.extend(summary_rows(label, cert.report.get("pipeline", cfg.pipeline), g, cert))
    if cfg.csv:
        append_csv(cfg.csv, rows)
    for row in rows:
        print(f"{row['instance']} {row['stage']} {row['seconds']}")
    return EXIT_OK


def _sources(args: argparse.Namespace) -> list[str]:
    out = list(args.inputs or [])
    out.extend(f"gen:{s}" for s in args.gen or [])
    if getattr(args, "manifest", None):
        data = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        for item in data if isinstance(data, list) else [data]:
            if "path" in item:
                out.append(item["path"])
    if not out:
        raise InputError("no instances given")
    return out


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        source=getattr(args, "input", "") or "",
        r=args.r,
        pipeline=args.pipeline,
        mode=args.mode,
        delta=args.delta,
        full=args.full,
        output=getattr(args, "output", None),
        csv=args.csv,
        workers=args.workers,
        clique_cap=args.clique_cap,
    )


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracdecomp", description="Exact fractional clique decompositions.")
    p.add_argument("--clique-cap", type=int, default=None, help=f"overrides ${CLIQUE_CAP_ENV}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("spec", help=f"family:key=value,...  families: {', '.join(FAMILY_NAMES)}")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--manifest")
    g.set_defaults(func=cmd_gen)

    def pipeline_opts(q: argparse.ArgumentParser) -> None:
        q.add_argument("-r", type=int, required=True)
        q.add_argument("--pipeline", choices=PIPELINES, default="auto")
        q.add_argument("--mode", choices=MODES, default="exact")
        q.add_argument("--delta", type=_fraction, default=None, help="threshold δ (default: observed)")
        q.add_argument("--full", action="store_true", help="run the vertex-gadget pipeline for every r")
        q.add_argument("--csv", help="append summary rows here")
        q.add_argument("--workers", type=int, default=1)

    d = sub.add_parser("decompose", help="run a decomposition pipeline")
    d.add_argument("input", help="instance file or gen:<spec>")
    d.add_argument("-o", "--output", help="certificate JSON")
    pipeline_opts(d)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="re-check a certificate")
    v.add_argument("input")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exact LP feasibility")
    o.add_argument("input")
    o.add_argument("-r", type=int, required=True)
    o.add_argument("-o", "--output")
    o.add_argument("--cap", type=int, default=None, help="maximum number of LP columns")
    o.add_argument("--cold", action="store_true", help="skip the floating-point warm start")
    o.set_defaults(func=cmd_oracle)

    a = sub.add_parser("audit", help="counting-bound audits")
    a.add_argument("inputs", nargs="*")
    a.add_argument("--gen", action="append", help="generator spec (repeatable)")
    a.add_argument("--manifest", help="manifest JSON (object or list) with 'path' entries")
    a.add_argument("-r", type=int, required=True)
    a.add_argument("--delta", type=_fraction, default=None)
    a.set_defaults(func=cmd_audit)

    b = sub.add_parser("bench", help="time clique counting and pipeline stages")
    b.add_argument("inputs", nargs="*")
    b.add_argument("--gen", action="append")
    b.add_argument("--manifest")
    pipeline_opts(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.clique_cap is not None:
        os.environ[CLIQUE_CAP_ENV] = str(args.clique_cap)
    try:
        return args.func(args)
    except (InputError, SizeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except StageError as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FracDecompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
