import tempfile
import unittest
from pathlib import Path

from tno.p5_coloring.exceptions import InputError
from tno.p5_coloring.formats.dimacs import format_dimacs, parse_dimacs, read_dimacs, write_dimacs
from tno.p5_coloring.formats.list_file import format_lists, parse_lists, read_lists, write_lists
from tno.p5_coloring.model.instance_model import full_palette, palette_of

C5 = """c five cycle
c second comment
p edge 5 5
e 1 2
e 2 3
e 3 4
e 4 5
e 5 1
"""


class DimacsTest(unittest.TestCase):
    def test_parse(self):
        graph = parse_dimacs(C5)
        self.assertEqual(graph.vertex_count, 5)
        self.assertEqual(graph.edge_count, 5)
        self.assertTrue(graph.has_edge(0, 4))
        self.assertEqual([graph.label(v) for v in range(5)], ["1", "2", "3", "4", "5"])

    def test_duplicates_and_col_header_are_accepted(self):
        graph = parse_dimacs("p col 3 3\ne 1 2\ne 2 1\ne 2 3\n")
        self.assertEqual(graph.edge_count, 2)

    def test_isolated_vertices(self):
        graph = parse_dimacs("p edge 4 1\ne 1 2\n")
        self.assertEqual(graph.vertex_count, 4)
        self.assertEqual(graph.degree(3), 0)

    def test_errors(self):
        bad_inputs = [
            "e 1 2\n",
            "c only comments\n",
            "p edge 3 1\ne 1 4\n",
            "p edge 3 1\ne 2 2\n",
            "p edge 3 1\ne 1 x\n",
            "p edge 3\n",
            "p cnf 3 1\n",
            "p edge 3 1\np edge 3 1\n",
            "p edge 3 1\nx 1 2\n",
            "p edge 3 1\ne 1 2 3\n",
        ]
        for text in bad_inputs:
            with self.subTest(text=text), self.assertRaises(InputError):
                parse_dimacs(text)

    def test_write_and_read_back(self):
        graph = parse_dimacs(C5)
        text = format_dimacs(graph, ["seed=7"])
        self.assertTrue(text.startswith("c seed=7\np edge 5 5\n"))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "c5.col"
            write_dimacs(graph, path, ["seed=7"])
            self.assertEqual(read_dimacs(path).adjacency, graph.adjacency)

    def test_missing_file(self):
        with self.assertRaises(InputError):
            read_dimacs("/nonexistent/graph.col")


class ListFileTest(unittest.TestCase):
    def setUp(self):
        self.graph = parse_dimacs(C5)

    def test_absent_vertices_get_full_palette(self):
        inst = parse_lists("# lists\n1: 1 2\n\n3: 3\n", self.graph, 3)
        self.assertEqual(inst.universe, 3)
        self.assertEqual(inst.palettes[0], palette_of([1, 2]))
        self.assertEqual(inst.palettes[2], palette_of([3]))
        self.assertEqual(inst.palettes[1], full_palette(3))

    def test_errors(self):
        bad_inputs = ["1 1 2\n", "9: 1\n", "1: 4\n", "1: 0\n", "1:\n", "1: a\n", "1: 1\n1: 2\n"]
        for text in bad_inputs:
            with self.subTest(text=text), self.assertRaises(InputError):
                parse_lists(text, self.graph, 3)

    def test_no_file_means_full_palettes(self):
        inst = read_lists(None, self.graph, 2)
        self.assertEqual(inst.palettes, (full_palette(2),) * 5)

    def test_write_and_read_back(self):
        palettes = (1, 2, 3, 4, 7)
        self.assertIn("5: 1 2 3\n", format_lists(self.graph, palettes))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "c5.lists"
            write_lists(self.graph, palettes, path, ["k=3"])
            self.assertEqual(read_lists(path, self.graph, 3).palettes, palettes)


if __name__ == "__main__":
    unittest.main()
