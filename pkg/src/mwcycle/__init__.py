"""Minimum weight cycles in weighted graphs and the p=2 loop modulus."""

from .estimators import LoopModulus, MinimumWeightCycle
from .generators import GraphSpec, generate, parse_graph_spec
from .graph import (
    CycleRecord,
    GraphError,
    GraphFormatError,
    GraphValidationError,
    WeightedGraph,
    canonicalize_cycle,
    dumps_graph,
    load_graph,
    read_graph,
    save_graph,
)
from .modulus import ModulusConfig, ModulusResult, compute_modulus
from .mwc import MwcResult, find_mwc
from .oracles import rooted_girth
from .pruning import PruneConfig
from .validation import check_graph

__version__ = "0.1.0"

__all__ = [
    "CycleRecord",
    "GraphError",
    "GraphFormatError",
    "GraphSpec",
    "GraphValidationError",
    "LoopModulus",
    "MinimumWeightCycle",
    "ModulusConfig",
    "ModulusResult",
    "MwcResult",
    "PruneConfig",
    "WeightedGraph",
    "canonicalize_cycle",
    "check_graph",
    "compute_modulus",
    "dumps_graph",
    "find_mwc",
    "generate",
    "load_graph",
    "parse_graph_spec",
    "read_graph",
    "rooted_girth",
    "save_graph",
]
