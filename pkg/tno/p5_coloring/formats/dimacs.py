"""
DIMACS ".col" graphs: `c` comment lines, one `p edge <n> <m>` header, then `e <u> <v>` lines with
1-indexed endpoints. Internal ids are 0-based; the original ids are kept as vertex labels.
"""
from pathlib import Path
from typing import Iterable, List, Set, Tuple, Union

from tno.p5_coloring.exceptions import InputError
from tno.p5_coloring.model.graph_core import Graph, build_graph
from tno.shared.log import get_logger

logger = get_logger(__name__)

PROBLEM_FORMATS = ("edge", "col")


def parse_dimacs(text: str) -> Graph:
    n = None
    declared_edges = 0
    edges: Set[Tuple[int, int]] = set()
    duplicates = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                raise InputError(f"line {number}: second problem line")
            if len(fields) != 4 or fields[1] not in PROBLEM_FORMATS:
                raise InputError(f"line {number}: expected 'p edge <n> <m>', got {line!r}")
            n, declared_edges = _naturals(fields[2:], number)
        elif fields[0] == "e":
            if n is None:
                raise InputError(f"line {number}: edge before the problem line")
            if len(fields) != 3:
                raise InputError(f"line {number}: expected 'e <u> <v>', got {line!r}")
            u, v = _naturals(fields[1:], number)
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"line {number}: endpoint outside [1, {n}]")
            if u == v:
                raise InputError(f"line {number}: self-loop at vertex {u}")
            edge = (min(u, v) - 1, max(u, v) - 1)
            if edge in edges:
                duplicates += 1
            edges.add(edge)
        else:
            raise InputError(f"line {number}: unknown line type {fields[0]!r}")
    if n is None:
        raise InputError("missing problem line 'p edge <n> <m>'")
    if declared_edges not in (len(edges), len(edges) + duplicates):
        logger.info("Edge count differs from the problem line", declared=declared_edges, read=len(edges))
    return build_graph(n, sorted(edges), labels=[str(v) for v in range(1, n + 1)])


def read_dimacs(path: Union[str, Path]) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read graph file {path}: {e}")
    return parse_dimacs(text)


def format_dimacs(graph: Graph, comments: Iterable[str] = ()) -> str:
    lines: List[str] = [f"c {comment}" for comment in comments]
    lines.append(f"p edge {graph.vertex_count} {graph.edge_count}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def write_dimacs(graph: Graph, path: Union[str, Path], comments: Iterable[str] = ()):
    Path(path).write_text(format_dimacs(graph, comments))


def _naturals(fields: List[str], number: int) -> List[int]:
    try:
        values = [int(field) for field in fields]
    except ValueError:
        raise InputError(f"line {number}: expected integers, got {' '.join(fields)!r}")
    if any(value < 0 for value in values):
        raise InputError(f"line {number}: negative value")
    return values
