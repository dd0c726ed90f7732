"""
Undirected simple graphs on vertex ids 0..n-1 with int bit-mask adjacency, plus the structural
queries the solver needs: components, induced P5 detection, bounded clique search and dominating
cliques / dominating P3s.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from tno.p5_coloring.exceptions import InputError, PreconditionViolated
from tno.shared.log import get_logger
from tno.shared.utils import iter_bits, lowest_bit, popcount

logger = get_logger(__name__)

VertexSet = int
"""Bit-mask over internal vertex ids: bit v is set iff v is a member."""


def mask_of(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: VertexSet) -> List[int]:
    return list(iter_bits(mask))


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    adjacency: Tuple[int, ...]
    # external labels, e.g. the 1-indexed ids of a DIMACS file
    labels: Optional[Tuple[str, ...]] = None

    @property
    def all_vertices(self) -> VertexSet:
        return (1 << self.vertex_count) - 1

    def closed_neighbors(self, v: int) -> VertexSet:
        return self.adjacency[v] | (1 << v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adjacency[v])

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u in range(self.vertex_count):
            for v in iter_bits(self.adjacency[u] >> (u + 1)):
                yield u, u + 1 + v

    @property
    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adjacency) // 2

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def index_of(self, label: str) -> int:
        """Internal id of an external label."""
        try:
            return self._label_index[label]
        except KeyError:
            raise InputError(f"Unknown vertex label {label!r}")

    @cached_property
    def _label_index(self):
        return {self.label(v): v for v in range(self.vertex_count)}

    @cached_property
    def fingerprint(self) -> int:
        return hash((self.vertex_count, self.adjacency))

    def induced_subgraph(self, vertices: VertexSet) -> Tuple["Graph", Tuple[int, ...]]:
        """Subgraph induced by `vertices`, renumbered 0..m-1 in increasing id order.

        Returns the subgraph and the tuple mapping new ids to ids of this graph.
        """
        ids = tuple(iter_bits(vertices))
        position = {v: i for i, v in enumerate(ids)}
        adjacency = tuple(
            mask_of(position[w] for w in iter_bits(self.adjacency[v] & vertices)) for v in ids
        )
        labels = tuple(self.label(v) for v in ids)
        return Graph(len(ids), adjacency, labels), ids


def build_graph(n: int, edges: Iterable[Tuple[int, int]], labels: Optional[Sequence[str]] = None) -> Graph:
    """Build a graph on vertices 0..n-1. Duplicate edges are collapsed."""
    if n < 0:
        raise InputError(f"Vertex count must be non-negative, got {n}")
    if labels is not None and len(labels) != n:
        raise InputError(f"Expected {n} labels, got {len(labels)}")
    adjacency = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"Edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise InputError(f"Self-loop at vertex {u}")
        adjacency[u] |= 1 << v
        adjacency[v] |= 1 << u
    return Graph(n, tuple(adjacency), tuple(labels) if labels is not None else None)


def components_of(adjacency: Sequence[int], vertices: VertexSet) -> List[VertexSet]:
    """Connected components of the graph given by `adjacency` restricted to `vertices`."""
    components = []
    remaining = vertices
    while remaining:
        frontier = remaining & -remaining
        component = 0
        while frontier:
            component |= frontier
            reached = 0
            for v in iter_bits(frontier):
                reached |= adjacency[v]
            frontier = reached & vertices & ~component
        components.append(component)
        remaining &= ~component
    return components


def connected_components(graph: Graph) -> List[VertexSet]:
    return components_of(graph.adjacency, graph.all_vertices)


def is_dominating(graph: Graph, vertices: VertexSet, within: Optional[VertexSet] = None) -> bool:
    """True iff every vertex of `within` (default: all) is in `vertices` or adjacent to one."""
    target = graph.all_vertices if within is None else within
    covered = vertices
    for v in iter_bits(vertices):
        covered |= graph.adjacency[v]
    return target & ~covered == 0


def is_clique(graph: Graph, vertices: VertexSet) -> bool:
    return all(vertices & ~graph.closed_neighbors(v) == 0 for v in iter_bits(vertices))


def find_induced_p5(graph: Graph) -> Optional[Tuple[int, int, int, int, int]]:
    """Return the vertices of an induced P5 in path order, or None when the graph is P5-free.

    Induced paths are grown one vertex at a time; a new end vertex must be adjacent to the current
    end and to no earlier path vertex, which the `blocked` mask (union of closed neighbourhoods of
    all path vertices except the end) encodes.
    """
    adjacency = graph.adjacency

    def extend(path: List[int], blocked: int) -> Optional[List[int]]:
        if len(path) == 5:
            return path
        end = path[-1]
        for w in iter_bits(adjacency[end] & ~blocked):
            found = extend(path + [w], blocked | adjacency[end] | (1 << end))
            if found:
                return found
        return None

    for start in range(graph.vertex_count):
        found = extend([start], 1 << start)
        if found:
            a, b, c, d, e = found
            return a, b, c, d, e
    return None


def is_p5_free(graph: Graph) -> bool:
    return find_induced_p5(graph) is None


def greedy_color_bound(graph: Graph, vertices: VertexSet) -> int:
    """Number of colours of a sequential greedy colouring of G[vertices]; bounds its clique number."""
    classes = 0
    uncolored = vertices
    while uncolored:
        classes += 1
        available = uncolored
        while available:
            v = lowest_bit(available)
            uncolored &= ~(1 << v)
            available &= ~graph.closed_neighbors(v)
    return classes


def iter_cliques(graph: Graph, size: int, vertices: Optional[VertexSet] = None) -> Iterator[VertexSet]:
    """Cliques of exactly `size` vertices inside `vertices`, in lexicographic order of sorted ids."""
    scope = graph.all_vertices if vertices is None else vertices

    def extend(clique: int, count: int, candidates: int) -> Iterator[int]:
        if count == size:
            yield clique
            return
        while candidates and count + popcount(candidates) >= size:
            v = lowest_bit(candidates)
            candidates &= ~(1 << v)
            yield from extend(clique | (1 << v), count + 1, candidates & graph.adjacency[v])

    if size == 0:
        yield 0
        return
    yield from extend(0, 0, scope)


def find_clique_exceeding(graph: Graph, k: int) -> Optional[VertexSet]:
    """A clique on k+1 vertices, or None if the clique number is at most k."""
    target = k + 1

    def extend(clique: int, count: int, candidates: int) -> Optional[int]:
        if count == target:
            return clique
        if count + greedy_color_bound(graph, candidates) < target:
            return None
        while candidates:
            if count + popcount(candidates) < target:
                return None
            v = lowest_bit(candidates)
            candidates &= ~(1 << v)
            found = extend(clique | (1 << v), count + 1, candidates & graph.adjacency[v])
            if found is not None:
                return found
        return None

    return extend(0, 0, graph.all_vertices)


class StructureKind(str, Enum):
    CLIQUE = "Clique"
    PATH_P3 = "PathP3"


@dataclass(frozen=True)
class DominatingStructure:
    vertices: VertexSet
    kind: StructureKind

    @property
    def size(self) -> int:
        return popcount(self.vertices)

    def members(self) -> List[int]:
        return members(self.vertices)


def induces_p3(graph: Graph, vertices: VertexSet) -> bool:
    if popcount(vertices) != 3:
        return False
    a, b, c = members(vertices)
    return graph.has_edge(a, b) + graph.has_edge(b, c) + graph.has_edge(a, c) == 2


def validate_dominating_structure(graph: Graph, structure: DominatingStructure) -> bool:
    if not is_dominating(graph, structure.vertices):
        return False
    if structure.kind == StructureKind.CLIQUE:
        return structure.vertices != 0 and is_clique(graph, structure.vertices)
    return induces_p3(graph, structure.vertices)


def _dominating_p3(graph: Graph) -> Optional[VertexSet]:
    best: Optional[Tuple[int, ...]] = None
    for middle in range(graph.vertex_count):
        around = members(graph.adjacency[middle])
        for i, x in enumerate(around):
            for y in around[i + 1:]:
                if graph.has_edge(x, y):
                    continue
                triple = tuple(sorted((x, middle, y)))
                if (best is None or triple < best) and is_dominating(graph, mask_of(triple)):
                    best = triple
    return mask_of(best) if best is not None else None


def find_dominating_structure(graph: Graph, k_bound: int = 3) -> DominatingStructure:
    """Smallest dominating clique or dominating P3 of a connected P5-free graph.

    Candidates are searched by increasing size up to max(3, k_bound). At equal size a clique wins
    over a P3, and ties are broken by the lexicographically smallest vertex set.
    """
    if graph.vertex_count == 0:
        raise PreconditionViolated("The empty graph has no dominating structure")
    for size in range(1, max(3, k_bound) + 1):
        for clique in iter_cliques(graph, size):
            if is_dominating(graph, clique):
                return DominatingStructure(clique, StructureKind.CLIQUE)
        if size == 3:
            path = _dominating_p3(graph)
            if path is not None:
                return DominatingStructure(path, StructureKind.PATH_P3)
    logger.warning("No dominating structure found", vertices=graph.vertex_count, k_bound=k_bound)
    raise PreconditionViolated(
        f"No dominating clique of size <= {max(3, k_bound)} and no dominating P3: "
        "the graph is not connected or not P5-free"
    )
