"""Exact solvers for (3,2)/(4,2)-CSP, graph 3-coloring, 3-edge-coloring and 3-SAT.

The core engine is a deterministic branch-and-reduce search over binary
constraint satisfaction instances, finished off by a bipartite-matching
endgame.  Graph coloring and edge coloring are handled by dedicated
pipelines that pre-color part of the graph before handing the residue to
the CSP engine.  The ``analysis`` module reproduces all the numeric
branching bounds the algorithms are designed around.
"""

from .instance import Instance, Assignment, simplify, lift, measure, check
from .solver import (
    SolverConfig,
    SolveResult,
    solve,
    solve_randomized_32,
    solve_randomized_d2,
)
from .transform import coloring_to_csp, sat_to_csp
from .vertexcolor import ColorConfig, ColorResult, color_graph
from .edgecolor import edge_color

__all__ = [
    "Instance",
    "Assignment",
    "simplify",
    "lift",
    "measure",
    "check",
    "SolverConfig",
    "SolveResult",
    "solve",
    "solve_randomized_32",
    "solve_randomized_d2",
    "coloring_to_csp",
    "sat_to_csp",
    "ColorConfig",
    "ColorResult",
    "color_graph",
    "edge_color",
]

__version__ = "0.1.0"
