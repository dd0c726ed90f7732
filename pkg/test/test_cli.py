import json
import tempfile
import unittest
from pathlib import Path

from click.testing import CliRunner

from tno.p5_coloring.formats.dimacs import read_dimacs
from tno.p5_coloring.formats.list_file import read_lists
from tno.p5_coloring.main import EXIT_INPUT, EXIT_PRECONDITION, EXIT_TIMEOUT, cli, main

C5 = "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n"
P6 = "p edge 6 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\n"
K5 = "p edge 5 10\n" + "".join(f"e {u} {v}\n" for u in range(1, 6) for v in range(u + 1, 6))
# hub 1 on the rim 2-3-4-5-6
W5 = "p edge 6 10\n" + "".join(f"e 1 {v}\n" for v in range(2, 7)) + "e 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 2\n"


def k3333():
    parts = [range(1, 4), range(4, 7), range(7, 10), range(10, 13)]
    edges = [(u, v) for i, a in enumerate(parts) for b in parts[i + 1:] for u in a for v in b]
    return f"p edge 12 {len(edges)}\n" + "".join(f"e {u} {v}\n" for u, v in edges)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.runner = CliRunner()
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return str(path)

    def invoke(self, *args, env=None):
        result = self.runner.invoke(cli, [str(a) for a in args], env=env)
        report = json.loads(result.stdout.splitlines()[0]) if result.stdout.strip() else None
        return result, report

    def test_solve_sat(self):
        result, report = self.invoke("solve", "-k", 3, self.write("c5.col", C5))
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "SAT")
        self.assertEqual(sorted(report["coloring"]), ["1", "2", "3", "4", "5"])
        self.assertGreaterEqual(report["stats"]["instances_created"], 0)

    def test_solve_unsat_with_clique(self):
        result, report = self.invoke("solve", "-k", 4, self.write("k5.col", K5))
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "UNSAT")
        self.assertEqual(report["witness"], ["1", "2", "3", "4", "5"])

    def test_solve_with_lists(self):
        graph = self.write("c5.col", C5)
        lists = self.write("c5.lists", "1: 1\n2: 1 2\n3: 2\n")
        result, report = self.invoke("solve", "-k", 3, "--lists", lists, graph)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "UNSAT")

    def test_p5_is_rejected(self):
        result, report = self.invoke("solve", "-k", 3, self.write("p6.col", P6))
        self.assertEqual(result.exit_code, EXIT_PRECONDITION)
        self.assertEqual(report["status"], "ERROR")
        self.assertEqual(report["witness"], ["1", "2", "3", "4", "5"])

    def test_bad_input(self):
        result, report = self.invoke("solve", "-k", 3, self.write("bad.col", "p edge 2 1\ne 1 3\n"))
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertEqual(report["status"], "ERROR")
        result, _report = self.invoke("solve", "-k", 3, str(self.dir / "missing.col"))
        self.assertEqual(result.exit_code, EXIT_INPUT)
        result, _report = self.invoke("solve", self.write("c5.col", C5))
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_malformed_environment(self):
        graph = self.write("c5.col", C5)
        result, report = self.invoke("solve", "-k", 3, graph, env={"P5COLOR_WORKERS": "many"})
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertEqual(report["status"], "ERROR")
        self.assertIn("P5COLOR_WORKERS", report["message"])
        output = self.dir / "g.col"
        result, report = self.invoke("gen", "--family", "SplitGraph", "--n", 8, "-o", output, env={"P5COLOR_SEED": "x"})
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertIn("P5COLOR_SEED", report["message"])
        self.assertFalse(output.exists())

    def test_timeout(self):
        result, report = self.invoke("solve", "-k", 4, "--timeout", "1e-9", self.write("k3333.col", k3333()))
        self.assertEqual(result.exit_code, EXIT_TIMEOUT)
        self.assertEqual(report["status"], "TIMEOUT")

    def test_parallel(self):
        result, report = self.invoke("solve", "-k", 4, "--parallel", self.write("k3333.col", k3333()))
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "SAT")

    def test_verify_replays_a_report(self):
        graph = self.write("c5.col", C5)
        _result, report = self.invoke("solve", "-k", 3, graph)
        replay = self.write("report.json", json.dumps(report))
        result, checked = self.invoke("solve", "--verify", replay, graph)
        self.assertEqual(result.exit_code, 0)
        self.assertTrue(checked["verified"])

        report["coloring"] = {label: 1 for label in report["coloring"]}
        tampered = self.write("tampered.json", json.dumps(report))
        result, checked = self.invoke("solve", "--verify", tampered, graph)
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertFalse(checked["verified"])

        result, _checked = self.invoke("solve", "--verify", self.write("junk.json", "{not json"), graph)
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_chromatic(self):
        result, report = self.invoke("chromatic", self.write("w5.col", W5))
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["chromatic_number"], 4)
        result, report = self.invoke("chromatic", "--cap", 3, self.write("w5.col", W5))
        self.assertEqual(report["status"], "UNSAT")

    def test_check_p5(self):
        _result, report = self.invoke("check-p5", self.write("c5.col", C5))
        self.assertTrue(report["p5_free"])
        self.assertIsNone(report["witness"])
        result, report = self.invoke("check-p5", self.write("p6.col", P6))
        self.assertEqual(result.exit_code, 0)
        self.assertFalse(report["p5_free"])
        self.assertEqual(report["witness"], ["1", "2", "3", "4", "5"])

    def test_dom(self):
        _result, report = self.invoke("dom", self.write("c5.col", C5))
        self.assertEqual(report["structures"], [{"kind": "PathP3", "vertices": ["1", "2", "3"]}])
        two = self.write("two.col", "p edge 5 3\ne 1 2\ne 3 4\ne 4 5\n")
        _result, report = self.invoke("dom", two)
        self.assertEqual([s["kind"] for s in report["structures"]], ["Clique", "Clique"])
        self.assertEqual(report["structures"][1]["vertices"], ["4"])

    def test_gen_then_solve(self):
        output = str(self.dir / "k222.col")
        result, report = self.invoke("gen", "--family", "CompleteMultipartite", "--parts", "2,2,2",
                                     "--seed", 3, "-k", 3, "--density", 0.8, "-o", output)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "OK")
        graph = read_dimacs(output)
        self.assertEqual(graph.edge_count, 12)
        self.assertEqual(read_lists(output + ".lists", graph, 3).universe, 3)

        _result, solved = self.invoke("solve", "-k", 3, "--lists", output + ".lists", output)
        _result, brute = self.invoke("oracle", "-k", 3, "--lists", output + ".lists", output)
        self.assertEqual(solved["status"], brute["status"])

    def test_gen_is_reproducible(self):
        first, second = str(self.dir / "a.col"), str(self.dir / "b.col")
        for output in (first, second):
            self.invoke("gen", "--family", "RejectionSampled", "--n", 8, "--p", 0.8, "--seed", 5, "-o", output)
        self.assertEqual(Path(first).read_text(), Path(second).read_text())

    def test_gen_bad_parts(self):
        result, _report = self.invoke("gen", "--family", "CompleteMultipartite", "--parts", "2,x",
                                      "-o", str(self.dir / "x.col"))
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_oracle(self):
        result, report = self.invoke("oracle", "-k", 2, self.write("c5.col", C5))
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "UNSAT")

    def test_bench(self):
        result, report = self.invoke("bench", "--suite", "chromatic", "--seed", 1)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(report["status"], "OK")
        self.assertEqual({row["case"] for row in report["rows"]}, {"known values", "random vs brute force"})
        self.assertTrue(all(row["failures"] == 0 for row in report["rows"]))

    def test_main_returns_exit_code(self):
        self.assertEqual(main(["check-p5", self.write("c5.col", C5)]), 0)
        self.assertEqual(main(["solve", "-k", "3", self.write("p6.col", P6)]), EXIT_PRECONDITION)


if __name__ == "__main__":
    unittest.main()
