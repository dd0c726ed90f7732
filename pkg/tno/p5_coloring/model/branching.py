"""
Branching procedures that turn one list instance into a compatible set of simpler instances:
a set is compatible with an instance when the instance is colourable iff some member is.

  procedure_pi / pi_prime        remove essential edges between two independent sets S and T
  procedure_theta / theta_prime  remove essential edges between two bags U_I and U_J
  algorithm_lambda               fix a colouring of D and separate every bag
"""
import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from tno.p5_coloring.data_types import BranchStats
from tno.p5_coloring.exceptions import ContractError, PreconditionViolated, RecursionInvariantError
from tno.p5_coloring.model.graph_core import Graph, VertexSet, is_dominating, mask_of, members
from tno.p5_coloring.model.instance_model import (
    BagKey,
    Infeasible,
    InstanceSet,
    ListInstance,
    Palette,
    bag,
    canonical_set,
    cross_essential_set,
    palette_colors,
    simplify,
)
from tno.shared.log import get_logger
from tno.shared.utils import iter_bits, popcount

logger = get_logger(__name__)

ChromaticOracle = Callable[[Graph, int], Optional[Tuple[Dict[int, int], int]]]
"""(graph, cap) -> (colouring with colours 1..chi, chi), or None when chi > cap."""


class BranchTrace:
    """Counts created and pruned instances, logs branch events and polls the deadline."""

    def __init__(self, stats: Optional[BranchStats] = None, trace: int = 0,
                 checkpoint: Optional[Callable[[], None]] = None):
        self.stats = stats if stats is not None else BranchStats()
        self.trace = trace
        self.checkpoint = checkpoint

    def event(self, op: str, depth: int, **sizes):
        self.stats.reached_depth(depth)
        if self.checkpoint is not None:
            self.checkpoint()
        if self.trace > 0:
            logger.debug(op, depth=depth, **sizes)

    def child(self, inst: ListInstance, changes: Dict[int, Palette]) -> Optional[ListInstance]:
        """Apply palette changes and simplify; None (and counted as pruned) when infeasible."""
        self.stats.created()
        result = simplify(inst.with_palettes(changes))
        if isinstance(result, Infeasible):
            self.stats.pruned()
            return None
        return result


@dataclass(frozen=True)
class BranchContext:
    """Independent sets S ⊆ U_I and T ⊆ U_J of two different bags."""

    s: VertexSet
    t: VertexSet
    i_key: BagKey
    j_key: BagKey

    def validate(self, inst: ListInstance):
        if self.i_key == self.j_key:
            raise ContractError(f"S and T must lie in different bags, got I = J = {self.i_key}")
        if self.s & ~bag(inst, self.i_key) or self.t & ~bag(inst, self.j_key):
            raise ContractError("S must lie in U_I and T in U_J")
        adjacency = inst.graph.adjacency
        for side in (self.s, self.t):
            if any(adjacency[v] & side for v in iter_bits(side)):
                raise ContractError("S and T must be independent sets")


def cross_neighborhoods(inst: ListInstance, ctx: BranchContext) -> Tuple[VertexSet, VertexSet]:
    """(S', T'): vertices of S with an essential neighbour in T, and vice versa."""
    essential = inst.essential_adjacency
    s_prime = mask_of(s for s in iter_bits(ctx.s) if essential[s] & ctx.t)
    t_prime = mask_of(t for t in iter_bits(ctx.t) if essential[t] & ctx.s)
    return s_prime, t_prime


def is_linearly_ordered(inst: ListInstance, ctx: BranchContext) -> bool:
    """True iff the neighbourhoods of S' inside T' form a chain under inclusion."""
    s_prime, t_prime = cross_neighborhoods(inst, ctx)
    reach = sorted((inst.graph.adjacency[s] & t_prime for s in iter_bits(s_prime)), key=popcount)
    return all(smaller & ~larger == 0 for smaller, larger in zip(reach, reach[1:]))


def dominating_vertex(inst: ListInstance, ctx: BranchContext) -> int:
    """A vertex of S' adjacent to all of T': the one with the most neighbours in T', lowest id first."""
    s_prime, t_prime = cross_neighborhoods(inst, ctx)
    if not s_prime:
        raise ContractError("No essential edges between S and T")
    adjacency = inst.graph.adjacency
    v = max(iter_bits(s_prime), key=lambda s: (popcount(adjacency[s] & t_prime), -s))
    if t_prime & ~adjacency[v]:
        raise PreconditionViolated(
            f"Vertex {v} does not dominate T': the graph is not P5-free or the bags are invalid",
            witness=[v],
        )
    return v


def procedure_pi(inst: ListInstance, ctx: BranchContext, trace: Optional[BranchTrace] = None,
                 depth: int = 0) -> InstanceSet:
    """One round of branching on a vertex v of S' that dominates T'.

    Either v takes a colour of L(T'), which then leaves every palette of T', or v keeps only colours
    outside L(T') and drops out of S', after which the procedure recurses.
    """
    trace = trace or BranchTrace()
    s_prime, t_prime = cross_neighborhoods(inst, ctx)
    if not s_prime:
        return [inst]
    v = dominating_vertex(inst, ctx)
    t_palette = inst.palette_union(t_prime)
    trace.event("pi", depth, s_prime=popcount(s_prime), t_prime=popcount(t_prime), vertex=v)

    children = []
    for d in palette_colors(inst.palettes[v] & t_palette):
        child = trace.child(inst, {v: 1 << (d - 1)})
        if child is not None:
            children.append(child)
    rest = inst.palettes[v] & ~t_palette
    if rest:
        child = trace.child(inst, {v: rest})
        if child is not None:
            children.extend(procedure_pi(child, ctx, trace, depth + 1))
    return canonical_set(children)


def pi_prime(inst: ListInstance, ctx: BranchContext, trace: Optional[BranchTrace] = None) -> InstanceSet:
    """Apply procedure_pi until no member has an essential edge between S and T."""
    trace = trace or BranchTrace()
    ctx.validate(inst)
    done = []
    pending = [(inst, 0)]
    while pending:
        current, rounds = pending.pop()
        if not cross_neighborhoods(current, ctx)[0]:
            done.append(current)
            continue
        if rounds > current.universe:
            raise RecursionInvariantError(f"pi_prime exceeded {current.universe} rounds")
        pending.extend((child, rounds + 1) for child in procedure_pi(current, ctx, trace, rounds))
    return canonical_set(done)


def _color_classes(coloring: Dict[int, int], ids: Sequence[int]) -> List[VertexSet]:
    classes: Dict[int, VertexSet] = {}
    for v, c in coloring.items():
        classes[c] = classes.get(c, 0) | (1 << ids[v])
    return [classes[c] for c in sorted(classes)]


def procedure_theta(inst: ListInstance, i_key: BagKey, j_key: BagKey, chromatic: ChromaticOracle,
                    trace: Optional[BranchTrace] = None, depth: int = 0) -> InstanceSet:
    """Strip one colour class A of G[U_I^J] of all its essential neighbours in U_J^I."""
    trace = trace or BranchTrace()
    u_ij = cross_essential_set(inst, i_key, j_key)
    if not u_ij:
        return [inst]
    # bag vertices see at least one coloured vertex of D, so at most k-1 colours remain for them
    cap = max(inst.universe - 1, 0)
    graph_ij, ids_ij = inst.graph.induced_subgraph(u_ij)
    coloring_ij = chromatic(graph_ij, cap)
    if coloring_ij is None:
        trace.event("theta-infeasible", depth, side="I")
        return []
    u_ji = cross_essential_set(inst, j_key, i_key)
    graph_ji, ids_ji = inst.graph.induced_subgraph(u_ji)
    coloring_ji = chromatic(graph_ji, cap)
    if coloring_ji is None:
        trace.event("theta-infeasible", depth, side="J")
        return []

    # a largest class, ties by smallest contained id
    a = max(_color_classes(coloring_ij[0], ids_ij), key=lambda cls: (popcount(cls), -(cls & -cls)))
    b_classes = _color_classes(coloring_ji[0], ids_ji)
    trace.event("theta", depth, u_ij=popcount(u_ij), u_ji=popcount(u_ji), chi_ij=coloring_ij[1],
                chi_ji=coloring_ji[1], a=popcount(a))

    instances = [inst]
    for b in b_classes:
        ctx = BranchContext(a, b, tuple(i_key), tuple(j_key))
        folded = []
        for current in instances:
            folded.extend(pi_prime(current, ctx, trace))
        instances = canonical_set(folded)
    return instances


def theta_prime(inst: ListInstance, i_key: BagKey, j_key: BagKey, chromatic: ChromaticOracle,
                trace: Optional[BranchTrace] = None) -> InstanceSet:
    """Apply procedure_theta until U_I^J is empty in every member."""
    trace = trace or BranchTrace()
    done = []
    pending = [(inst, 0)]
    while pending:
        current, rounds = pending.pop()
        if not cross_essential_set(current, i_key, j_key):
            done.append(current)
            continue
        if rounds > current.universe:
            raise RecursionInvariantError(f"theta_prime exceeded {current.universe} rounds")
        children = procedure_theta(current, i_key, j_key, chromatic, trace, rounds)
        pending.extend((child, rounds + 1) for child in children)
    return canonical_set(done)


def d_colorings(inst: ListInstance) -> List[Dict[int, int]]:
    """Proper colourings of G[D] from the palettes of D, lexicographic over D sorted by id."""
    d_vertices = members(inst.dominating)
    colorings = []
    for colors in itertools.product(*(palette_colors(inst.palettes[d]) for d in d_vertices)):
        coloring = dict(zip(d_vertices, colors))
        adjacency = inst.graph.adjacency
        if all(coloring[u] != coloring[w] for u in d_vertices for w in iter_bits(adjacency[u] & inst.dominating)):
            colorings.append(coloring)
    return colorings


def algorithm_lambda(inst: ListInstance, chromatic: ChromaticOracle,
                     trace: Optional[BranchTrace] = None) -> InstanceSet:
    """For every colouring of D, branch until all bags are separated; the union over colourings."""
    trace = trace or BranchTrace()
    if not inst.dominating or not is_dominating(inst.graph, inst.dominating):
        raise PreconditionViolated("Algorithm lambda needs a nonempty dominating set D")
    keys = list(inst.bags)
    outputs = []
    for coloring in d_colorings(inst):
        fixed = trace.child(inst, {d: 1 << (c - 1) for d, c in coloring.items()})
        if fixed is None:
            continue
        trace.event("lambda", 0, d_coloring=str(coloring), bags=len(keys))
        instances = [fixed]
        for i_key, j_key in itertools.combinations(keys, 2):
            folded = []
            for current in instances:
                if cross_essential_set(current, i_key, j_key):
                    folded.extend(theta_prime(current, i_key, j_key, chromatic, trace))
                else:
                    folded.append(current)
            instances = canonical_set(folded)
            if not instances:
                break
        outputs.extend(instances)
    return canonical_set(outputs)
