"""
Acceptance suites behind `p5color bench`. Every suite is a pure function of its seed and returns
rows of (suite, case, trials, failures, seconds); `run_suites` collects them in a pandas table.
"""
import itertools
import sys
import time
from dataclasses import asdict, dataclass, fields
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from tno.p5_coloring.data_types import BranchStats, GenSpec, GraphFamily, SolveConfig
from tno.p5_coloring.exceptions import P5ColorError
from tno.p5_coloring.model.branching import (
    BranchContext,
    algorithm_lambda,
    cross_neighborhoods,
    d_colorings,
    pi_prime,
    theta_prime,
)
from tno.p5_coloring.model.graph_core import (
    Graph,
    VertexSet,
    find_dominating_structure,
    validate_dominating_structure,
)
from tno.p5_coloring.model.instance_model import (
    BagKey,
    Infeasible,
    InstanceSet,
    ListInstance,
    Sat,
    cross_essential_set,
    is_separated,
    simplify,
)
from tno.p5_coloring.model.sat2 import two_list_coloring
from tno.p5_coloring.model.solver import Solver, verify
from tno.p5_coloring.testkit.generators import (
    from_networkx,
    generate,
    generate_lists,
    largest_component,
    random_instances,
    random_spec,
)
from tno.p5_coloring.testkit.oracle import brute_force_solve
from tno.shared.log import get_logger
from tno.shared.utils import iter_bits, timed

logger = get_logger(__name__)

SMOKE_DEADLINE = 120.0


@dataclass
class SuiteRow:
    suite: str
    case: str
    trials: int = 0
    failures: int = 0
    seconds: float = 0.0
    detail: str = ""


class _Counter:
    """Accumulates one SuiteRow; `check` records a trial and logs failures."""

    def __init__(self, suite: str, case: str):
        self.row = SuiteRow(suite, case)
        self._start = time.monotonic()

    def check(self, passed: bool, **context):
        self.row.trials += 1
        if not passed:
            self.row.failures += 1
            logger.warning("Acceptance check failed", suite=self.row.suite, case=self.row.case, **context)

    def done(self, detail: str = "") -> SuiteRow:
        self.row.seconds = round(time.monotonic() - self._start, 3)
        self.row.detail = detail
        return self.row


def _solver(**overrides) -> Solver:
    return Solver(SolveConfig(**overrides))


def _contained(child: ListInstance, parent: ListInstance) -> bool:
    return all(c & ~p == 0 for c, p in zip(child.palettes, parent.palettes))


def _independent_subset(graph: Graph, vertices: VertexSet) -> VertexSet:
    chosen = 0
    for v in iter_bits(vertices):
        if not graph.adjacency[v] & chosen:
            chosen |= 1 << v
    return chosen


def dominated_instances(seed: int, k: int = 4, max_n: int = 10) -> Iterator[ListInstance]:
    """Endless stream of connected P5-free list instances with a dominating structure as D."""
    for _spec, inst in random_instances(sys.maxsize, seed, max_n, ks=(k,)):
        sub, _ids = inst.induced(largest_component(inst.graph))
        structure = find_dominating_structure(sub.graph, sub.vertex_count)
        yield sub.with_dominating(structure.vertices)


def color_dominating_set(inst: ListInstance) -> Optional[ListInstance]:
    """The first colouring of D that survives simplification, applied to `inst`."""
    for coloring in d_colorings(inst):
        fixed = simplify(inst.with_palettes({d: 1 << (c - 1) for d, c in coloring.items()}))
        if not isinstance(fixed, Infeasible):
            return fixed
    return None


def essential_bag_pair(inst: ListInstance) -> Optional[Tuple[BagKey, BagKey]]:
    for i_key, j_key in itertools.combinations(inst.bags, 2):
        if cross_essential_set(inst, i_key, j_key):
            return i_key, j_key
    return None


def independent_context(inst: ListInstance, i_key: BagKey, j_key: BagKey) -> BranchContext:
    graph = inst.graph
    s = _independent_subset(graph, cross_essential_set(inst, i_key, j_key))
    t = _independent_subset(graph, cross_essential_set(inst, j_key, i_key))
    return BranchContext(s, t, i_key, j_key)


BranchCase = Callable[[ListInstance], Optional[Tuple[ListInstance, InstanceSet, Callable[[ListInstance], bool]]]]


def _branch_cases(solver: Solver) -> Dict[str, BranchCase]:
    """Per branching op: (parent, outputs, postcondition on an output), or None when not applicable."""
    oracle = solver.chromatic_oracle

    def pi_case(inst):
        pair = essential_bag_pair(inst)
        if pair is None:
            return None
        ctx = independent_context(inst, *pair)
        return inst, pi_prime(inst, ctx), lambda out: cross_neighborhoods(out, ctx)[0] == 0

    def theta_case(inst):
        fixed = color_dominating_set(inst)
        pair = essential_bag_pair(fixed) if fixed is not None else None
        if pair is None:
            return None
        i_key, j_key = pair
        outputs = theta_prime(fixed, i_key, j_key, oracle(fixed.universe))
        return fixed, outputs, lambda out: cross_essential_set(out, i_key, j_key) == 0

    def lambda_case(inst):
        if not inst.bags:
            return None
        outputs = algorithm_lambda(inst, oracle(inst.universe))
        return inst, outputs, lambda out: all(is_separated(out, key) for key in out.bags)

    return {"pi_prime": pi_case, "theta_prime": theta_case, "algorithm_lambda": lambda_case}


def _run_branch_cases(suite: str, count: int, seed: int, judge) -> List[SuiteRow]:
    rows = []
    for case_name, case in _branch_cases(_solver()).items():
        counter = _Counter(suite, case_name)
        for inst in dominated_instances(seed):
            if counter.row.trials >= count:
                break
            prepared = case(inst)
            if prepared is not None:
                parent, outputs, post = prepared
                counter.check(judge(parent, outputs, post), n=parent.vertex_count)
        rows.append(counter.done())
    return rows


def postconditions_suite(count: int = 200, seed: int = 0) -> List[SuiteRow]:
    def judge(parent, outputs, post):
        return all(post(out) and _contained(out, parent) for out in outputs)

    return _run_branch_cases("postconditions", count, seed, judge)


def compatibility_suite(count: int = 300, seed: int = 0) -> List[SuiteRow]:
    def judge(parent, outputs, _post):
        parent_sat = brute_force_solve(parent).satisfiable
        return parent_sat == any(brute_force_solve(out).satisfiable for out in outputs)

    return _run_branch_cases("compatibility", count, seed, judge)


def oracle_suite(count: int = 500, seed: int = 0) -> List[SuiteRow]:
    solver = _solver()
    counter = _Counter("oracle", "solve vs brute force")
    for spec, inst in random_instances(count, seed):
        verdict = solver.solve(inst)
        expected = brute_force_solve(inst)
        sound = not isinstance(verdict, Sat) or verify(verdict.certificate, inst)
        counter.check(verdict.satisfiable == expected.satisfiable and sound, family=spec.family.value, seed=spec.seed)
    return [counter.done()]


def dominating_suite(count: int = 200, seed: int = 0) -> List[SuiteRow]:
    rng = np.random.default_rng(seed)
    counter = _Counter("dominating", "dominating clique or P3")
    while counter.row.trials < count:
        graph = generate(random_spec(rng, 14))
        connected, _ids = graph.induced_subgraph(largest_component(graph))
        try:
            structure = find_dominating_structure(connected, connected.vertex_count)
            counter.check(validate_dominating_structure(connected, structure))
        except P5ColorError as e:
            counter.check(False, error=str(e))
    return [counter.done()]


def base_cases_suite(count: int = 300, three_count: int = 200, seed: int = 0) -> List[SuiteRow]:
    rng = np.random.default_rng(seed)
    two = _Counter("base-cases", "2-SAT, lists of size <= 2")
    while two.row.trials < count:
        spec = random_spec(rng, 12)
        graph = generate(spec)
        k = int(rng.integers(2, 5))
        palettes = generate_lists(graph, k, float(rng.choice([0.5, 0.75, 1.0])), spec.seed + 1, max_size=2)
        inst = ListInstance(graph, palettes, 0, k)
        verdict = two_list_coloring(inst)
        sound = not isinstance(verdict, Sat) or verify(verdict.certificate, inst)
        two.check(verdict.satisfiable == brute_force_solve(inst).satisfiable and sound, seed=spec.seed)

    solver = _solver()
    three = _Counter("base-cases", "universe 3, D colourings + 2-SAT")
    for inst in dominated_instances(seed, k=3, max_n=12):
        if three.row.trials >= three_count:
            break
        verdict = solver.three_list_coloring(inst)
        sound = not isinstance(verdict, Sat) or verify(verdict.certificate, inst)
        three.check(verdict.satisfiable == brute_force_solve(inst).satisfiable and sound, n=inst.vertex_count)
    return [two.done(), three.done()]


def smoke_specs(sizes: Sequence[int] = (20, 40, 80)) -> List[Tuple[str, GenSpec]]:
    specs = []
    for n in sizes:
        specs.append((f"K4 multipartite n={n}", GenSpec(GraphFamily.COMPLETE_MULTIPARTITE, n, parts=[n // 4] * 4)))
        specs.append((f"K5 multipartite n={n}", GenSpec(GraphFamily.COMPLETE_MULTIPARTITE, n, parts=[n // 5] * 5)))
        specs.append((f"split n={n}", GenSpec(GraphFamily.SPLIT_GRAPH, n, edge_probability=0.3, clique_size=4, seed=n)))
    return specs


def smoke_suite(seed: int = 0, sizes: Sequence[int] = (20, 40, 80)) -> List[SuiteRow]:
    """k=4 full palettes on structured P5-free graphs, each within the smoke deadline."""
    rows = []
    for name, spec in smoke_specs(sizes):
        counter = _Counter("smoke", name)
        stats = BranchStats()
        solver = Solver(SolveConfig(deadline=SMOKE_DEADLINE), stats)
        graph = generate(spec)
        try:
            verdict = solver.k_colorability(graph, 4)
            counter.check(True)
            detail = f"{'SAT' if verdict.satisfiable else 'UNSAT'} depth={stats.recursion_depth}"
        except P5ColorError as e:
            counter.check(False, error=str(e))
            detail = type(e).__name__
        rows.append(counter.done(detail))
    return rows


def known_chromatic_graphs() -> List[Tuple[str, Graph, int]]:
    graphs = [
        ("C5", from_networkx(nx.cycle_graph(5)), 3),
        ("W5", from_networkx(nx.wheel_graph(6)), 4),
        ("K2,2,2", from_networkx(nx.complete_multipartite_graph(2, 2, 2)), 3),
    ]
    graphs.extend((f"K{t}", from_networkx(nx.complete_graph(t)), t) for t in range(1, 6))
    return graphs


def brute_force_chromatic(graph: Graph) -> int:
    if graph.vertex_count == 0:
        return 0
    for c in range(1, graph.vertex_count + 1):
        if brute_force_solve(ListInstance.full(graph, c)).satisfiable:
            return c
    return graph.vertex_count


def chromatic_suite(count: int = 50, seed: int = 0) -> List[SuiteRow]:
    solver = _solver()
    fixtures = _Counter("chromatic", "known values")
    for name, graph, chi in known_chromatic_graphs():
        found = solver.chromatic_coloring(graph, graph.vertex_count)
        fixtures.check(found is not None and found[1] == chi, graph=name)

    rng = np.random.default_rng(seed)
    sampled = _Counter("chromatic", "random vs brute force")
    while sampled.row.trials < count:
        graph = generate(random_spec(rng, 9))
        found = solver.chromatic_coloring(graph, graph.vertex_count)
        sampled.check(found is not None and found[1] == brute_force_chromatic(graph), n=graph.vertex_count)
    return [fixtures.done(), sampled.done()]


SUITES: Dict[str, Callable[..., List[SuiteRow]]] = {
    "oracle": oracle_suite,
    "dominating": dominating_suite,
    "postconditions": postconditions_suite,
    "compatibility": compatibility_suite,
    "base-cases": base_cases_suite,
    "smoke": smoke_suite,
    "chromatic": chromatic_suite,
}


@timed
def run_suites(names: Sequence[str], seed: int = 0) -> pd.DataFrame:
    rows: List[SuiteRow] = []
    for name in names:
        logger.info("Running suite", suite=name, seed=seed)
        rows.extend(SUITES[name](seed=seed))
    return pd.DataFrame([asdict(row) for row in rows], columns=[f.name for f in fields(SuiteRow)])
