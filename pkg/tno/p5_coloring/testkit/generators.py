"""
Seeded generators of P5-free graphs and random lists. Every draw comes from one numpy Generator
built from the seed, so the output is a pure function of the GenSpec.
"""
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from tno.p5_coloring.data_types import GenSpec, GraphFamily
from tno.p5_coloring.exceptions import GenerationError, InputError
from tno.p5_coloring.model.graph_core import Graph, VertexSet, build_graph, connected_components, find_induced_p5
from tno.p5_coloring.model.instance_model import ListInstance, Palette, full_palette
from tno.shared.log import get_logger
from tno.shared.utils import popcount

logger = get_logger(__name__)

REJECTION_RETRY_CAP = 10_000


def from_networkx(nx_graph: nx.Graph, labels: Optional[Sequence[str]] = None) -> Graph:
    nodes = sorted(nx_graph.nodes)
    index = {node: i for i, node in enumerate(nodes)}
    edges = [(index[u], index[v]) for u, v in nx_graph.edges if u != v]
    return build_graph(len(nodes), edges, labels)


def to_networkx(graph: Graph) -> nx.Graph:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(graph.vertex_count))
    nx_graph.add_edges_from(graph.edges())
    return nx_graph


def _permuted(nx_graph: nx.Graph, rng: np.random.Generator) -> nx.Graph:
    permutation = rng.permutation(nx_graph.number_of_nodes())
    return nx.relabel_nodes(nx_graph, {v: int(permutation[i]) for i, v in enumerate(sorted(nx_graph.nodes))})


def _split_graph(spec: GenSpec, rng: np.random.Generator) -> nx.Graph:
    """A clique on the first vertices, an independent set on the rest, random edges in between."""
    size = spec.clique_size if spec.clique_size is not None else int(rng.integers(0, spec.n + 1))
    nx_graph = nx.complete_graph(size)
    nx_graph.add_nodes_from(range(size, spec.n))
    for u in range(size):
        for v in range(size, spec.n):
            if rng.random() < spec.edge_probability:
                nx_graph.add_edge(u, v)
    return nx_graph


def _rejection_sampled(spec: GenSpec, rng: np.random.Generator) -> nx.Graph:
    for attempt in range(REJECTION_RETRY_CAP):
        nx_graph = nx.gnp_random_graph(spec.n, spec.edge_probability, seed=int(rng.integers(2 ** 32)))
        if find_induced_p5(from_networkx(nx_graph)) is None:
            logger.debug("Rejection sampling accepted", attempts=attempt + 1, n=spec.n)
            return nx_graph
    raise GenerationError(f"no P5-free graph after {REJECTION_RETRY_CAP} samples", spec.seed)


def generate(spec: GenSpec) -> Graph:
    rng = np.random.default_rng(spec.seed)
    if spec.family == GraphFamily.SPLIT_GRAPH:
        nx_graph = _split_graph(spec, rng)
    elif spec.family == GraphFamily.COMPLETE_MULTIPARTITE:
        nx_graph = nx.complete_multipartite_graph(*spec.parts)
    else:
        nx_graph = _rejection_sampled(spec, rng)
    graph = from_networkx(_permuted(nx_graph, rng))
    witness = find_induced_p5(graph)
    if witness is not None:
        raise GenerationError(f"generated graph has the induced P5 {witness}", spec.seed)
    return graph


def generate_lists(graph: Graph, k: int, density: float, seed: int,
                   max_size: Optional[int] = None) -> Tuple[Palette, ...]:
    """Every colour joins a palette with probability `density`; an empty draw gets one uniform colour.

    With `max_size` set, larger draws are cut down to `max_size` colours picked uniformly.
    """
    if not 0.0 < density <= 1.0:
        raise InputError(f"list density must lie in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    palettes: List[Palette] = []
    for _ in range(graph.vertex_count):
        if density >= 1.0:
            palette = full_palette(k)
        else:
            chosen = rng.random(k) < density
            palette = sum(1 << c for c in range(k) if chosen[c])
            if not palette:
                palette = 1 << int(rng.integers(k))
        if max_size is not None and popcount(palette) > max_size:
            kept = rng.choice([c for c in range(k) if palette >> c & 1], size=max_size, replace=False)
            palette = sum(1 << int(c) for c in kept)
        palettes.append(palette)
    return tuple(palettes)


def generate_instance(spec: GenSpec, k: int) -> ListInstance:
    graph = generate(spec)
    # the list stream is seeded apart from the graph stream
    palettes = generate_lists(graph, k, spec.list_density, spec.seed + 1)
    return ListInstance(graph, palettes, 0, k)


def largest_component(graph: Graph) -> VertexSet:
    """Vertices of a largest connected component, the one with the smallest id on ties."""
    return max(connected_components(graph), key=lambda c: (popcount(c), -(c & -c)), default=0)


def random_spec(rng: np.random.Generator, max_n: int, density: float = 1.0) -> GenSpec:
    """A spec over all three families, sized to keep rejection sampling cheap."""
    family = list(GraphFamily)[int(rng.integers(len(GraphFamily)))]
    seed = int(rng.integers(2 ** 62))
    if family == GraphFamily.COMPLETE_MULTIPARTITE:
        parts: List[int] = []
        while sum(parts) < 1 or (sum(parts) < max_n and rng.random() < 0.7):
            parts.append(int(rng.integers(1, min(3, max_n) + 1)))
        while sum(parts) > max_n:
            parts.pop()
        return GenSpec(family, sum(parts), parts=parts, seed=seed, list_density=density)
    n = int(rng.integers(1, max_n + 1))
    if family == GraphFamily.REJECTION_SAMPLED:
        # dense samples are P5-free often enough only while the complement stays sparse
        choices = [0.7, 0.85] if n <= 10 else [0.85, 0.9]
        return GenSpec(family, n, edge_probability=float(rng.choice(choices)), seed=seed, list_density=density)
    return GenSpec(family, n, edge_probability=float(rng.uniform(0.2, 0.8)), seed=seed, list_density=density)


def random_instances(
    count: int,
    seed: int,
    max_n: int = 10,
    ks: Sequence[int] = (2, 3, 4),
    densities: Sequence[float] = (0.5, 0.75, 1.0),
) -> Iterator[Tuple[GenSpec, ListInstance]]:
    """`count` seeded list instances cycling through the given universes and list densities."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        k = ks[i % len(ks)]
        density = densities[(i // len(ks)) % len(densities)]
        spec = random_spec(rng, max_n, density)
        yield spec, generate_instance(spec, k)
