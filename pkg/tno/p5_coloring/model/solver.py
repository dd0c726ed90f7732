"""
Exact k-list-colouring of P5-free graphs.

The solver is inductive in the size k of the colour universe:
  k <= 2, or all palettes of size <= 2   2-SAT
  k = 3                                  colour a dominating structure D, then 2-SAT
  k >= 4                                 colour D and separate all bags (algorithm_lambda), then
                                         solve every bag as an instance over at most k-1 colours
Every recursive call runs on a strictly smaller universe.
"""
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Iterable, Optional, Tuple

from tno.p5_coloring.data_types import BranchStats, SolveConfig
from tno.p5_coloring.exceptions import (
    ContractError,
    InputError,
    PreconditionViolated,
    RecursionInvariantError,
    SolveTimeout,
)
from tno.p5_coloring.model.branching import BranchTrace, ChromaticOracle, algorithm_lambda, d_colorings
from tno.p5_coloring.model.graph_core import (
    Graph,
    find_clique_exceeding,
    find_dominating_structure,
    find_induced_p5,
)
from tno.p5_coloring.model.instance_model import (
    Coloring,
    Infeasible,
    ListInstance,
    Sat,
    Unsat,
    Verdict,
    essential_components,
    restrict_bag_instance,
    simplify,
)
from tno.p5_coloring.model.sat2 import two_list_coloring
from tno.shared.log import get_logger
from tno.shared.utils import iter_bits, lowest_bit, popcount, timed

logger = get_logger(__name__)


def verify(certificate: Coloring, inst: ListInstance) -> bool:
    """True iff every vertex gets a colour of its palette and no edge is monochromatic."""
    missing = [v for v in range(inst.vertex_count) if v not in certificate]
    if missing:
        raise ContractError(f"Certificate is partial, missing vertices {missing[:10]}")
    for v, color in certificate.items():
        if not (1 <= color <= inst.universe) or not inst.palettes[v] >> (color - 1) & 1:
            return False
    return all(certificate[u] != certificate[v] for u, v in inst.graph.edges())


def glue(inst: ListInstance, parts: Iterable[Coloring]) -> Coloring:
    """Union of the D colouring and bag certificates already lifted to the ids of `inst`."""
    certificate: Coloring = {d: lowest_bit(inst.palettes[d]) + 1 for d in iter_bits(inst.dominating)}
    for part in parts:
        overlap = certificate.keys() & part.keys()
        if overlap:
            raise ContractError(f"Bag certificates overlap on {sorted(overlap)}")
        certificate.update(part)
    return certificate


class Solver:
    def __init__(self, config: Optional[SolveConfig] = None, stats: Optional[BranchStats] = None):
        self.config = config or SolveConfig.from_env()
        self.stats = stats if stats is not None else BranchStats()
        self._deadline_at: Optional[float] = None
        self.trace = BranchTrace(self.stats, self.config.trace, checkpoint=self._check_deadline)

    # Public entry points, each checks the input once

    @timed
    def solve(self, inst: ListInstance) -> Verdict:
        self._prepare(inst.graph, inst.universe)
        return self._timed_run(lambda: self._solve(inst, bound=None, depth=0))

    def solve_separated(self, inst: ListInstance) -> Verdict:
        self._prepare(inst.graph, inst.universe)
        return self._timed_run(lambda: self._solve_separated(inst, depth=0))

    @timed
    def k_colorability(self, graph: Graph, k: int) -> Verdict:
        self._prepare(graph, k)
        return self._timed_run(lambda: self._k_colorability(graph, k, bound=None, depth=0))

    @timed
    def chromatic_coloring(self, graph: Graph, cap: int) -> Optional[Tuple[Coloring, int]]:
        self._prepare(graph, min(cap, self.config.max_universe))
        return self._timed_run(lambda: self._chromatic(graph, cap, bound=None, depth=0))

    def _prepare(self, graph: Graph, universe: int):
        if universe > self.config.max_universe:
            raise InputError(f"Colour universe {universe} exceeds the configured maximum {self.config.max_universe}")
        if self.config.check_p5:
            witness = find_induced_p5(graph)
            if witness is not None:
                raise PreconditionViolated("The graph contains an induced P5", witness=witness)
        if self.config.deadline is not None:
            self._deadline_at = time.monotonic() + self.config.deadline

    def _timed_run(self, run):
        start = time.monotonic()
        try:
            return run()
        finally:
            self.stats.add_time(time.monotonic() - start)

    def _check_deadline(self):
        if self._deadline_at is not None and time.monotonic() > self._deadline_at:
            raise SolveTimeout(f"Deadline of {self.config.deadline}s exceeded")

    # Recursion

    def _solve(self, inst: ListInstance, bound: Optional[int], depth: int) -> Verdict:
        self._check_deadline()
        if bound is not None and inst.universe >= bound:
            raise RecursionInvariantError(f"Recursive solve on universe {inst.universe}, parent had {bound}")
        self.stats.reached_depth(depth)
        simplified = simplify(inst)
        if isinstance(simplified, Infeasible):
            return Unsat()
        certificate: Coloring = {}
        for component in essential_components(simplified):
            sub, ids = simplified.induced(component)
            verdict = self._solve_component(sub, depth)
            if isinstance(verdict, Unsat):
                clique = None
                if verdict.clique is not None:
                    clique = sum(1 << ids[v] for v in iter_bits(verdict.clique))
                return Unsat(clique)
            certificate.update({ids[v]: c for v, c in verdict.certificate.items()})
        return self._checked(Sat(certificate), inst)

    def _solve_component(self, inst: ListInstance, depth: int) -> Verdict:
        if inst.vertex_count == 1:
            return Sat({0: lowest_bit(inst.palettes[0]) + 1})
        k = inst.universe
        if k <= 2 or all(popcount(p) <= 2 for p in inst.palettes):
            return self._checked(two_list_coloring(inst, self.config.trace), inst)
        clique = find_clique_exceeding(inst.graph, k)
        if clique is not None:
            return Unsat(clique)
        structure = find_dominating_structure(inst.graph, k)
        dominated = inst.with_dominating(structure.vertices)
        if self.config.trace:
            logger.debug("Dominating structure", depth=depth, universe=k, kind=structure.kind.value,
                         vertices=structure.members(), n=inst.vertex_count)
        if k == 3:
            return self.three_list_coloring(dominated)
        instances = algorithm_lambda(dominated, self.chromatic_oracle(k, depth), self.trace)
        return self._first_sat(instances, depth)

    def three_list_coloring(self, inst: ListInstance) -> Verdict:
        """Colour the dominating set D in every way; each extension is then a 2-SAT instance."""
        for coloring in d_colorings(inst):
            fixed = simplify(inst.with_palettes({d: 1 << (c - 1) for d, c in coloring.items()}))
            if isinstance(fixed, Infeasible):
                continue
            if any(popcount(p) > 2 for p in fixed.palettes):
                raise ContractError("D does not dominate: a palette of size 3 survived")
            verdict = two_list_coloring(fixed, self.config.trace)
            if isinstance(verdict, Sat):
                return self._checked(verdict, inst)
        return Unsat()

    def _first_sat(self, instances: Iterable[ListInstance], depth: int) -> Verdict:
        instances = list(instances)
        if self.config.enable_parallel and depth == 0 and len(instances) > 1:
            executor = ThreadPoolExecutor(max_workers=self.config.workers)
            try:
                futures = [executor.submit(self._solve_separated, inst, depth) for inst in instances]
                for future in as_completed(futures):
                    verdict = future.result()
                    if isinstance(verdict, Sat) and self.config.short_circuit:
                        return verdict
                # first SAT in submission order
                verdicts = [future.result() for future in futures]
            finally:
                executor.shutdown(wait=False, cancel_futures=True)
        else:
            verdicts = []
            for inst in instances:
                verdict = self._solve_separated(inst, depth)
                if isinstance(verdict, Sat) and self.config.short_circuit:
                    return verdict
                verdicts.append(verdict)
        for verdict in verdicts:
            if isinstance(verdict, Sat):
                return verdict
        return Unsat()

    def _solve_separated(self, inst: ListInstance, depth: int) -> Verdict:
        """Solve every bag on its own over the colours its I leaves free and glue the results."""
        uncolored = [d for d in iter_bits(inst.dominating) if not inst.is_colored(d)]
        if uncolored:
            raise ContractError(f"Dominating vertices {uncolored} are not coloured")
        parts = []
        for key in inst.bags:
            sub, renaming = restrict_bag_instance(inst, key)
            verdict = self._solve(sub, bound=inst.universe, depth=depth + 1)
            if isinstance(verdict, Unsat):
                return Unsat()
            parts.append(renaming.lift(verdict.certificate))
        return self._checked(Sat(glue(inst, parts)), inst)

    def _k_colorability(self, graph: Graph, k: int, bound: Optional[int], depth: int) -> Verdict:
        clique = find_clique_exceeding(graph, k)
        if clique is not None:
            return Unsat(clique)
        return self._solve(ListInstance.full(graph, k), bound, depth)

    def _chromatic(self, graph: Graph, cap: int, bound: Optional[int], depth: int) -> Optional[Tuple[Coloring, int]]:
        if graph.vertex_count == 0:
            return {}, 0
        for c in range(1, min(cap, self.config.max_universe) + 1):
            verdict = self._k_colorability(graph, c, bound, depth + 1)
            if isinstance(verdict, Sat):
                return dict(verdict.certificate), c
        return None

    def chromatic_oracle(self, universe: int, depth: int = 0) -> ChromaticOracle:
        """Chromatic colourings for procedure_theta, solved below the given universe."""

        def oracle(graph: Graph, cap: int):
            return self._chromatic(graph, cap, bound=universe, depth=depth)

        return oracle

    def _checked(self, verdict: Verdict, inst: ListInstance) -> Verdict:
        if isinstance(verdict, Sat) and not verify(verdict.certificate, inst):
            raise ContractError("Produced a colouring that does not verify")
        return verdict


def solve(inst: ListInstance, config: Optional[SolveConfig] = None, stats: Optional[BranchStats] = None) -> Verdict:
    return Solver(config, stats).solve(inst)


def solve_separated(inst: ListInstance, config: Optional[SolveConfig] = None) -> Verdict:
    return Solver(config).solve_separated(inst)


def k_colorability(graph: Graph, k: int, config: Optional[SolveConfig] = None,
                   stats: Optional[BranchStats] = None) -> Verdict:
    return Solver(config, stats).k_colorability(graph, k)


def chromatic_coloring(graph: Graph, cap: int, config: Optional[SolveConfig] = None) -> Optional[Tuple[Coloring, int]]:
    return Solver(config).chromatic_coloring(graph, cap)
