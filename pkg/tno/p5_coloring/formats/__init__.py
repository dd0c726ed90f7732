from tno.p5_coloring.formats.dimacs import format_dimacs, parse_dimacs, read_dimacs, write_dimacs
from tno.p5_coloring.formats.list_file import format_lists, parse_lists, read_lists, write_lists

__all__ = [
    "format_dimacs",
    "parse_dimacs",
    "read_dimacs",
    "write_dimacs",
    "format_lists",
    "parse_lists",
    "read_lists",
    "write_lists",
]
