"""
List files: one line per vertex, `<vertex-label>: c1 c2 ...` with colours in [k]. Blank lines and
lines starting with `#` or `c ` are ignored; vertices without a line keep the full palette [k].
"""
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Union

from tno.p5_coloring.exceptions import InputError
from tno.p5_coloring.model.graph_core import Graph
from tno.p5_coloring.model.instance_model import ListInstance, Palette, full_palette, palette_colors, palette_of


def parse_lists(text: str, graph: Graph, k: int) -> ListInstance:
    palettes = [full_palette(k)] * graph.vertex_count
    seen: Dict[int, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c "):
            continue
        label, sep, rest = line.partition(":")
        if not sep:
            raise InputError(f"line {number}: expected '<vertex>: c1 c2 ...', got {line!r}")
        v = graph.index_of(label.strip())
        if v in seen:
            raise InputError(f"line {number}: vertex {label.strip()} already listed on line {seen[v]}")
        seen[v] = number
        try:
            colors = [int(c) for c in rest.split()]
        except ValueError:
            raise InputError(f"line {number}: colours must be integers")
        if not colors:
            raise InputError(f"line {number}: empty list for vertex {label.strip()}")
        bad = [c for c in colors if not 1 <= c <= k]
        if bad:
            raise InputError(f"line {number}: colours {bad} outside [1, {k}]")
        palettes[v] = palette_of(colors)
    return ListInstance(graph, tuple(palettes), 0, k)


def read_lists(path: Optional[Union[str, Path]], graph: Graph, k: int) -> ListInstance:
    """The list instance for `graph` over [k]; no path means full palettes everywhere."""
    if path is None:
        return ListInstance.full(graph, k)
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read list file {path}: {e}")
    return parse_lists(text, graph, k)


def format_lists(graph: Graph, palettes: Sequence[Palette], comments: Iterable[str] = ()) -> str:
    lines = [f"# {comment}" for comment in comments]
    for v, palette in enumerate(palettes):
        lines.append(f"{graph.label(v)}: " + " ".join(str(c) for c in palette_colors(palette)))
    return "\n".join(lines) + "\n"


def write_lists(graph: Graph, palettes: Sequence[Palette], path: Union[str, Path], comments: Iterable[str] = ()):
    Path(path).write_text(format_lists(graph, palettes, comments))
