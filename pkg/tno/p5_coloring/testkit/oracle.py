"""
Brute-force list colouring, independent of the branching machinery: plain backtracking over palette
choices with forward checking on the uncoloured neighbours.
"""
import math
from typing import List, Optional

from tno.p5_coloring.exceptions import OracleRefused
from tno.p5_coloring.model.instance_model import Coloring, ListInstance, Sat, Unsat, Verdict
from tno.shared.utils import iter_bits, popcount

MAX_SEARCH_SPACE = 10 ** 8
MAX_UNGUARDED_VERTICES = 14


def search_space(inst: ListInstance) -> int:
    return math.prod(popcount(p) for p in inst.palettes)


def brute_force_solve(inst: ListInstance) -> Verdict:
    if inst.vertex_count > MAX_UNGUARDED_VERTICES and search_space(inst) > MAX_SEARCH_SPACE:
        raise OracleRefused(
            f"{inst.vertex_count} vertices with a search space of {search_space(inst)} exceed the oracle guard"
        )
    adjacency = inst.graph.adjacency
    # highest degree first, then by id
    order = sorted(range(inst.vertex_count), key=lambda v: (-popcount(adjacency[v]), v))
    coloring: Coloring = {}

    def assign(position: int, domains: List[int]) -> Optional[Coloring]:
        if position == len(order):
            return dict(coloring)
        v = order[position]
        for bit in iter_bits(domains[v]):
            color = 1 << bit
            pruned = list(domains)
            pruned[v] = color
            wiped_out = False
            for w in iter_bits(adjacency[v]):
                if w not in coloring:
                    pruned[w] &= ~color
                    if not pruned[w]:
                        wiped_out = True
                        break
            if wiped_out:
                continue
            coloring[v] = bit + 1
            found = assign(position + 1, pruned)
            del coloring[v]
            if found is not None:
                return found
        return None

    certificate = assign(0, list(inst.palettes))
    if certificate is None:
        return Unsat()
    return Sat(certificate)
