"""Mod-k edge colorings: constructive engine, exact solver and G(n, p) probes."""

from .engine import ColoringResult, construct_coloring, forest_chi_value, k1kk_coloring, k1kk_graph
from .estimators import ColoringFailedError, ExactModKChromaticIndex, ModKEdgeColorer
from .exact import SearchBudget, chi_k_exact, decide_coloring, find_certificates, verify_certificate
from .experiments import ExperimentConfig, run_trials, summarize
from .graph import EdgeColoring, Graph, InputError, degree_classes, read_edge_list, verify_coloring
from .matching import extract_r_factor, max_matching
from .random_model import binom_mod_k_exact, binom_mod_k_roots, check_bijumbled, gnp
from .validation import check_graph

__version__ = "0.1.0"

__all__ = [
    "ColoringFailedError",
    "ColoringResult",
    "EdgeColoring",
    "ExactModKChromaticIndex",
    "ExperimentConfig",
    "Graph",
    "InputError",
    "ModKEdgeColorer",
    "SearchBudget",
    "binom_mod_k_exact",
    "binom_mod_k_roots",
    "check_bijumbled",
    "check_graph",
    "chi_k_exact",
    "construct_coloring",
    "decide_coloring",
    "degree_classes",
    "extract_r_factor",
    "find_certificates",
    "forest_chi_value",
    "gnp",
    "k1kk_coloring",
    "k1kk_graph",
    "max_matching",
    "read_edge_list",
    "run_trials",
    "summarize",
    "verify_certificate",
    "verify_coloring",
]
