"""Exact generalized layering of directed graphs.

Layerings may reverse arcs; objectives combine total arc length, reversed
arcs, width, and the scale at which a drawing fits a target area.
"""

__version__ = "0.1.0"

from .graph import DiGraph, GenSpec, generate_random, parse_dot, parse_edge_list, read_graph
from .metrics import Layering, Metrics, Variant, WeightScheme, check_feasible, evaluate, objective
from .solver import SolveConfig, SolveResult, branch_and_bound, brute_force, solve

__all__ = [
    "DiGraph", "GenSpec", "Layering", "Metrics", "SolveConfig", "SolveResult", "Variant", "WeightScheme",
    "__version__", "branch_and_bound", "brute_force", "check_feasible", "evaluate", "generate_random",
    "objective", "parse_dot", "parse_edge_list", "read_graph", "solve",
]
