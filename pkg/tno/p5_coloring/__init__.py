"""Exact k-list-colouring of P5-free graphs."""
from tno.p5_coloring.model.graph_core import Graph, build_graph, find_dominating_structure, find_induced_p5
from tno.p5_coloring.model.instance_model import ListInstance, Sat, Unsat
from tno.p5_coloring.model.solver import Solver, chromatic_coloring, k_colorability, solve, verify

__all__ = [
    "Graph",
    "build_graph",
    "find_dominating_structure",
    "find_induced_p5",
    "ListInstance",
    "Sat",
    "Unsat",
    "Solver",
    "chromatic_coloring",
    "k_colorability",
    "solve",
    "verify",
]
