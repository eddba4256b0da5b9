"""Exact fractional K_r-decompositions of dense graphs and hypergraphs.

Every pipeline returns a rational weighting of r-cliques whose weights over
each edge sum to exactly 1, together with a verdict on nonnegativity.  An
exact LP oracle decides feasibility independently on small instances.
"""

from __future__ import annotations

from .core import Hypergraph, load, min_degree, observed_delta, read_hypergraph, save, write_hypergraph
from .errors import FracDecompError, InputError, SizeLimitError, StageError
from .gadgets import Weighting, averaged_edge_gadget, basic_edge_gadget, solve_alpha, vertex_gadget
from .gen import GenSpec, gen_complete, gen_k4_minus_edge, gen_lower_bound_family, gen_random_min_degree
from .oracle import LPResult, lp_feasible
from .pipeline import (
    Certificate,
    breakdown,
    decompose_hypergraph,
    decompose_r2,
    decompose_r32,
    preprocess,
    smooth_correction,
    smoothness_check,
    uniform_weighting,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "FracDecompError",
    "GenSpec",
    "Hypergraph",
    "InputError",
    "LPResult",
    "SizeLimitError",
    "StageError",
    "Weighting",
    "averaged_edge_gadget",
    "basic_edge_gadget",
    "breakdown",
    "decompose_hypergraph",
    "decompose_r2",
    "decompose_r32",
    "gen_complete",
    "gen_k4_minus_edge",
    "gen_lower_bound_family",
    "gen_random_min_degree",
    "load",
    "lp_feasible",
    "min_degree",
    "observed_delta",
    "preprocess",
    "read_hypergraph",
    "save",
    "smooth_correction",
    "smoothness_check",
    "solve_alpha",
    "uniform_weighting",
    "verify",
    "vertex_gadget",
    "write_hypergraph",
]
