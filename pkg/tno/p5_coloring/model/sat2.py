"""
2-SAT for list instances whose palettes hold at most two colours.

Literals follow the DIMACS convention: variable ids start at 1, a negative literal is the negation.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from tno.p5_coloring.exceptions import ContractError
from tno.p5_coloring.model.instance_model import Coloring, ListInstance, Sat, Unsat, Verdict, palette_colors
from tno.shared.log import get_logger
from tno.shared.utils import popcount

logger = get_logger(__name__)

Clause = Tuple[int, int]
Assignment = List[bool]
Decoder = Callable[[Sequence[bool]], Coloring]


@dataclass(frozen=True)
class Cnf2:
    variable_count: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        for a, b in self.clauses:
            if not (0 < abs(a) <= self.variable_count and 0 < abs(b) <= self.variable_count):
                raise ContractError(f"Clause ({a}, {b}) refers to an unknown variable")

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {len(self.clauses)}"]
        lines.extend(f"{a} {b} 0" for a, b in self.clauses)
        return "\n".join(lines) + "\n"


def solve_2sat(formula: Cnf2) -> Optional[Assignment]:
    """Satisfying assignment (index i holds variable i+1) or None.

    Strongly connected components of the implication graph are visited in reverse topological order
    and every still unassigned literal of a component is made true. Among components that are ready
    at the same time the one holding the smallest negative literal goes first, so unconstrained
    variables end up false.
    """
    n = formula.variable_count
    implications = nx.DiGraph()
    for var in range(1, n + 1):
        implications.add_node(-var)
        implications.add_node(var)
    for a, b in formula.clauses:
        implications.add_edge(-a, b)
        implications.add_edge(-b, a)

    condensed = nx.condensation(implications)
    component_of = condensed.graph["mapping"]
    for var in range(1, n + 1):
        if component_of[var] == component_of[-var]:
            return None

    def priority(component: int):
        return min((lit > 0, abs(lit)) for lit in condensed.nodes[component]["members"])

    assignment: List[Optional[bool]] = [None] * n
    for component in nx.lexicographical_topological_sort(condensed.reverse(copy=False), key=priority):
        for lit in condensed.nodes[component]["members"]:
            if assignment[abs(lit) - 1] is None:
                assignment[abs(lit) - 1] = lit > 0
    return [bool(value) for value in assignment]


def encode_two_list(inst: ListInstance) -> Tuple[Cnf2, Decoder]:
    """One variable per two-colour vertex: false picks the smaller colour, true the larger one."""
    variable: Dict[int, int] = {}
    for v, palette in enumerate(inst.palettes):
        size = popcount(palette)
        if size == 0 or size > 2:
            raise ContractError(f"Vertex {v} has a palette of size {size}, 2-SAT needs 1 or 2")
        if size == 2:
            variable[v] = len(variable) + 1
    variable_count = len(variable)
    clauses: List[Clause] = []
    contradiction = False

    def takes(v: int, color: int) -> Optional[int]:
        """Literal meaning "v gets colour"; None when that is forced already."""
        if v not in variable:
            return None
        low, _high = palette_colors(inst.palettes[v])
        return -variable[v] if color == low else variable[v]

    for u, v in inst.graph.edges():
        for color in palette_colors(inst.palettes[u] & inst.palettes[v]):
            lit_u, lit_v = takes(u, color), takes(v, color)
            if lit_u is None and lit_v is None:
                contradiction = True
            elif lit_u is None:
                clauses.append((-lit_v, -lit_v))
            elif lit_v is None:
                clauses.append((-lit_u, -lit_u))
            else:
                clauses.append((-lit_u, -lit_v))
    if contradiction:
        # two adjacent vertices forced onto the same colour
        variable_count += 1
        clauses.extend([(variable_count, variable_count), (-variable_count, -variable_count)])

    def decode(assignment: Sequence[bool]) -> Coloring:
        coloring = {}
        for v, palette in enumerate(inst.palettes):
            colors = palette_colors(palette)
            coloring[v] = colors[1] if v in variable and assignment[variable[v] - 1] else colors[0]
        return coloring

    return Cnf2(variable_count, tuple(clauses)), decode


def two_list_coloring(inst: ListInstance, trace: int = 0) -> Verdict:
    formula, decode = encode_two_list(inst)
    if trace > 0:
        logger.debug("2-SAT formula", dimacs=formula.to_dimacs())
    assignment = solve_2sat(formula)
    logger.debug(
        "Solved 2-SAT", variables=formula.variable_count, clauses=len(formula.clauses), sat=assignment is not None
    )
    if assignment is None:
        return Unsat()
    return Sat(decode(assignment))
