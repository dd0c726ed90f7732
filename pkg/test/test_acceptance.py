import unittest

from tno.p5_coloring import bench


class AcceptanceTest(unittest.TestCase):
    """The bench suites at their default sizes, every trial must pass."""

    def assertAllPass(self, rows, expected_trials):
        self.assertEqual({row.case: row.trials for row in rows}, expected_trials)
        for row in rows:
            self.assertEqual(row.failures, 0, f"{row.suite}/{row.case}")

    def test_solver_agrees_with_brute_force(self):
        self.assertAllPass(bench.oracle_suite(), {"solve vs brute force": 500})

    def test_dominating_structures(self):
        self.assertAllPass(bench.dominating_suite(), {"dominating clique or P3": 200})

    def test_branch_postconditions(self):
        self.assertAllPass(bench.postconditions_suite(), {"pi_prime": 200, "theta_prime": 200, "algorithm_lambda": 200})

    def test_branch_compatibility(self):
        self.assertAllPass(bench.compatibility_suite(), {"pi_prime": 300, "theta_prime": 300, "algorithm_lambda": 300})

    def test_base_cases(self):
        self.assertAllPass(
            bench.base_cases_suite(),
            {"2-SAT, lists of size <= 2": 300, "universe 3, D colourings + 2-SAT": 200},
        )

    def test_smoke(self):
        rows = bench.smoke_suite()
        self.assertEqual(len(rows), 9)
        for row in rows:
            self.assertEqual(row.failures, 0, f"{row.case}: {row.detail}")
            self.assertLess(row.seconds, bench.SMOKE_DEADLINE)
        details = {row.case: row.detail for row in rows}
        self.assertTrue(details["K4 multipartite n=80"].startswith("SAT"))
        self.assertTrue(details["K5 multipartite n=80"].startswith("UNSAT"))

    def test_chromatic(self):
        self.assertAllPass(bench.chromatic_suite(), {"known values": 8, "random vs brute force": 50})

    def test_run_suites_table(self):
        table = bench.run_suites(["chromatic"], seed=2)
        self.assertEqual(list(table.columns), ["suite", "case", "trials", "failures", "seconds", "detail"])
        self.assertEqual(int(table["failures"].sum()), 0)


if __name__ == "__main__":
    unittest.main()
