"""Preprocessing, smoothing, breakdown, the decomposition drivers and certificates."""

from __future__ import annotations

from .breakdown import BreakdownResult, breakdown, breakdown_hypotheses, non_edge_pairs
from .certificate import Certificate, append_csv, load_certificate, read_csv, summary_rows, verify
from .drivers import decompose_hypergraph, decompose_r2, decompose_r32, hypergraph_threshold
from .preprocess import PreprocessResult, preprocess
from .smooth import (
    SmoothCorrection,
    SmoothnessReport,
    graph_kappa,
    smooth_correction,
    smoothness_check,
    uniform_weighting,
)

__all__ = [
    "BreakdownResult",
    "Certificate",
    "PreprocessResult",
    "SmoothCorrection",
    "SmoothnessReport",
    "append_csv",
    "breakdown",
    "breakdown_hypotheses",
    "decompose_hypergraph",
    "decompose_r2",
    "decompose_r32",
    "graph_kappa",
    "hypergraph_threshold",
    "load_certificate",
    "non_edge_pairs",
    "preprocess",
    "read_csv",
    "smooth_correction",
    "smoothness_check",
    "summary_rows",
    "uniform_weighting",
    "verify",
]
