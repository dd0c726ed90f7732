"""
List-colouring instances G=(V,E,L,D): a graph, one palette per vertex over the colours 1..k, and a
dominating set D. Instances are immutable; every palette change produces a new instance.

Palettes are int masks with bit c-1 set iff colour c is allowed.
"""
import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from tno.p5_coloring.exceptions import ContractError, InputError, PreconditionViolated
from tno.p5_coloring.model.graph_core import Graph, VertexSet, components_of, mask_of, members
from tno.p5_coloring.settings import MAX_SUPPORTED_UNIVERSE
from tno.shared.utils import iter_bits, popcount

Palette = int
Coloring = Dict[int, int]
BagKey = Tuple[int, ...]


def full_palette(k: int) -> Palette:
    return (1 << k) - 1


def palette_of(colors: Iterable[int]) -> Palette:
    palette = 0
    for c in colors:
        palette |= 1 << (c - 1)
    return palette


def palette_colors(palette: Palette) -> List[int]:
    return [bit + 1 for bit in iter_bits(palette)]


@dataclass(frozen=True)
class ListInstance:
    graph: Graph
    palettes: Tuple[Palette, ...]
    dominating: VertexSet = 0
    universe: int = 0

    def __post_init__(self):
        if len(self.palettes) != self.graph.vertex_count:
            raise InputError(f"Expected {self.graph.vertex_count} palettes, got {len(self.palettes)}")
        if not 0 <= self.universe <= MAX_SUPPORTED_UNIVERSE:
            raise InputError(f"Colour universe must lie in [0, {MAX_SUPPORTED_UNIVERSE}], got {self.universe}")
        outside = ~full_palette(self.universe)
        if any(p & outside for p in self.palettes):
            raise InputError(f"Palette with a colour outside [1, {self.universe}]")
        if self.dominating & ~self.graph.all_vertices:
            raise InputError("Dominating set refers to an unknown vertex")

    @classmethod
    def full(cls, graph: Graph, k: int, dominating: VertexSet = 0) -> "ListInstance":
        return cls(graph, (full_palette(k),) * graph.vertex_count, dominating, k)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def palette(self, v: int) -> Palette:
        return self.palettes[v]

    def palette_union(self, vertices: VertexSet) -> Palette:
        union = 0
        for v in iter_bits(vertices):
            union |= self.palettes[v]
        return union

    def with_palette(self, v: int, palette: Palette) -> "ListInstance":
        palettes = list(self.palettes)
        palettes[v] = palette
        return dataclasses.replace(self, palettes=tuple(palettes))

    def with_palettes(self, changes: Mapping[int, Palette]) -> "ListInstance":
        palettes = list(self.palettes)
        for v, palette in changes.items():
            palettes[v] = palette
        return dataclasses.replace(self, palettes=tuple(palettes))

    def with_dominating(self, dominating: VertexSet) -> "ListInstance":
        return dataclasses.replace(self, dominating=dominating)

    def induced(self, vertices: VertexSet) -> Tuple["ListInstance", Tuple[int, ...]]:
        """Sub-instance on `vertices`; D is intersected with them. Returns it with the id map."""
        graph, ids = self.graph.induced_subgraph(vertices)
        dominating = mask_of(i for i, v in enumerate(ids) if self.dominating >> v & 1)
        palettes = tuple(self.palettes[v] for v in ids)
        return ListInstance(graph, palettes, dominating, self.universe), ids

    @cached_property
    def essential_adjacency(self) -> Tuple[VertexSet, ...]:
        adjacency = self.graph.adjacency
        palettes = self.palettes
        return tuple(
            mask_of(w for w in iter_bits(adjacency[v]) if palettes[v] & palettes[w])
            for v in range(self.vertex_count)
        )

    @cached_property
    def fingerprint(self) -> Tuple:
        return self.graph.fingerprint, self.universe, self.dominating, self.palettes

    @cached_property
    def bags(self) -> Dict[BagKey, VertexSet]:
        return compute_bags(self)

    def is_colored(self, v: int) -> bool:
        return popcount(self.palettes[v]) == 1

    def is_simplified(self) -> bool:
        for v, palette in enumerate(self.palettes):
            if popcount(palette) == 1:
                for w in iter_bits(self.graph.adjacency[v]):
                    if self.palettes[w] & palette:
                        return False
        return True


@dataclass(frozen=True)
class Infeasible:
    """Outcome of simplification when the palette of `vertex` runs empty."""

    vertex: int


@dataclass(frozen=True)
class Sat:
    certificate: Coloring

    @property
    def satisfiable(self) -> bool:
        return True


@dataclass(frozen=True)
class Unsat:
    # a clique larger than the colour universe, when that is the reason
    clique: Optional[VertexSet] = None

    @property
    def satisfiable(self) -> bool:
        return False


Verdict = Union[Sat, Unsat]
InstanceSet = List[ListInstance]


def canonical_set(instances: Iterable[ListInstance]) -> InstanceSet:
    """Deduplicate by fingerprint and order by it."""
    unique = {inst.fingerprint: inst for inst in instances}
    return [unique[key] for key in sorted(unique)]


def simplify(inst: ListInstance) -> Union[ListInstance, Infeasible]:
    """Remove the colour of every single-colour vertex from its neighbours' palettes, to a fixpoint."""
    palettes = list(inst.palettes)
    for v, palette in enumerate(palettes):
        if palette == 0:
            return Infeasible(v)
    adjacency = inst.graph.adjacency
    pending = [v for v, palette in enumerate(palettes) if popcount(palette) == 1]
    changed = False
    while pending:
        v = pending.pop()
        color = palettes[v]
        for w in iter_bits(adjacency[v]):
            if palettes[w] & color:
                palettes[w] &= ~color
                changed = True
                if palettes[w] == 0:
                    return Infeasible(w)
                if popcount(palettes[w]) == 1:
                    pending.append(w)
    if not changed:
        return inst
    return dataclasses.replace(inst, palettes=tuple(palettes))


def essential_neighbors(inst: ListInstance, v: int) -> VertexSet:
    return inst.essential_adjacency[v]


def essential_components(inst: ListInstance) -> List[VertexSet]:
    """Components of the graph that keeps only edges between vertices with intersecting palettes."""
    return components_of(inst.essential_adjacency, inst.graph.all_vertices)


def compute_bags(inst: ListInstance) -> Dict[BagKey, VertexSet]:
    """Partition V - D into bags U_I keyed by I = N(v) ∩ D as a sorted id tuple."""
    bags: Dict[BagKey, VertexSet] = {}
    dominating = inst.dominating
    adjacency = inst.graph.adjacency
    for v in iter_bits(inst.graph.all_vertices & ~dominating):
        attachment = adjacency[v] & dominating
        if not attachment:
            raise PreconditionViolated(f"Vertex {v} is not dominated by D")
        key = tuple(members(attachment))
        bags[key] = bags.get(key, 0) | (1 << v)
    return dict(sorted(bags.items()))


def bag(inst: ListInstance, key: Sequence[int]) -> VertexSet:
    return inst.bags.get(tuple(sorted(key)), 0)


def cross_essential_set(inst: ListInstance, i_key: Sequence[int], j_key: Sequence[int]) -> VertexSet:
    """U_I^J: the vertices of U_I with at least one essential neighbour in U_J."""
    if tuple(sorted(i_key)) == tuple(sorted(j_key)):
        raise InputError(f"Cross-essential set needs two different bags, got I = J = {tuple(i_key)}")
    u_j = bag(inst, j_key)
    essential = inst.essential_adjacency
    return mask_of(s for s in iter_bits(bag(inst, i_key)) if essential[s] & u_j)


def is_separated(inst: ListInstance, key: Sequence[int]) -> bool:
    """True iff no vertex of U_I has an essential neighbour outside U_I ∪ D."""
    u_i = bag(inst, key)
    outside = ~(u_i | inst.dominating)
    essential = inst.essential_adjacency
    return all(essential[v] & outside == 0 for v in iter_bits(u_i))


@dataclass(frozen=True)
class ColorRenaming:
    """Maps a bag sub-instance back to its parent: colours old -> new, vertices new -> old."""

    colors: Dict[int, int]
    vertices: Tuple[int, ...]

    def lift(self, certificate: Mapping[int, int]) -> Coloring:
        inverse = {new: old for old, new in self.colors.items()}
        return {self.vertices[v]: inverse[c] for v, c in certificate.items()}


def restrict_bag_instance(inst: ListInstance, key: Sequence[int]) -> Tuple[ListInstance, ColorRenaming]:
    """The bag U_I as a list instance over the colours not used on I, renumbered to 1..k'."""
    key = tuple(sorted(key))
    if not key:
        raise ContractError("Bag restriction needs a nonempty I")
    uncolored = [d for d in iter_bits(inst.dominating) if not inst.is_colored(d)]
    if uncolored:
        raise ContractError(f"Dominating vertices {uncolored} are not coloured")
    if not is_separated(inst, key):
        raise ContractError(f"Bag {key} is not separated")
    used = inst.palette_union(mask_of(key))
    u_i = bag(inst, key)
    if inst.palette_union(u_i) & used:
        raise ContractError(f"Bag {key} still sees the colours of I: instance not simplified")
    remaining = [c for c in range(1, inst.universe + 1) if not used >> (c - 1) & 1]
    renaming = {old: new for new, old in enumerate(remaining, start=1)}
    graph, ids = inst.graph.induced_subgraph(u_i)
    palettes = tuple(palette_of(renaming[c] for c in palette_colors(inst.palettes[v])) for v in ids)
    return ListInstance(graph, palettes, 0, len(remaining)), ColorRenaming(renaming, ids)
