import itertools
import unittest

from tno.p5_coloring import bench
from tno.p5_coloring.exceptions import ContractError, InputError, PreconditionViolated
from tno.p5_coloring.model.graph_core import build_graph, mask_of, members
from tno.p5_coloring.model.instance_model import (
    Infeasible,
    ListInstance,
    bag,
    canonical_set,
    compute_bags,
    cross_essential_set,
    essential_components,
    essential_neighbors,
    full_palette,
    is_separated,
    palette_colors,
    palette_of,
    restrict_bag_instance,
    simplify,
)
from tno.p5_coloring.testkit.generators import random_instances
from tno.shared.utils import iter_bits, popcount


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


class PaletteTest(unittest.TestCase):
    def test_helpers(self):
        self.assertEqual(full_palette(3), 0b111)
        self.assertEqual(full_palette(0), 0)
        self.assertEqual(palette_of([1, 3]), 0b101)
        self.assertEqual(palette_colors(0b1010), [2, 4])


class ListInstanceTest(unittest.TestCase):
    def test_validation(self):
        graph = build_graph(2, [(0, 1)])
        with self.assertRaises(InputError):
            ListInstance(graph, (1,), 0, 2)
        with self.assertRaises(InputError):
            ListInstance(graph, (1, 0b100), 0, 2)
        with self.assertRaises(InputError):
            ListInstance(graph, (1, 1), 0b100, 2)
        with self.assertRaises(InputError):
            ListInstance.full(graph, 65)

    def test_palette_changes_return_new_instances(self):
        inst = ListInstance.full(build_graph(3, [(0, 1)]), 3)
        changed = inst.with_palette(1, 0b010)
        self.assertEqual(inst.palettes, (7, 7, 7))
        self.assertEqual(changed.palettes, (7, 2, 7))
        self.assertEqual(inst.with_palettes({0: 1, 2: 4}).palettes, (1, 7, 4))
        self.assertEqual(inst.palette_union(0b011), 7)
        self.assertNotEqual(inst.fingerprint, changed.fingerprint)

    def test_induced_keeps_dominating_vertices(self):
        inst = ListInstance.full(cycle(5), 3, dominating=mask_of([0, 2]))
        sub, ids = inst.induced(mask_of([1, 2, 3]))
        self.assertEqual(ids, (1, 2, 3))
        self.assertEqual(members(sub.dominating), [1])
        self.assertEqual(sub.universe, 3)


class SimplifyTest(unittest.TestCase):
    def test_propagates_to_fixpoint(self):
        graph = build_graph(3, [(0, 1), (1, 2)])
        inst = ListInstance(graph, (palette_of([1]), palette_of([1, 2]), palette_of([2, 3])), 0, 3)
        result = simplify(inst)
        self.assertEqual(result.palettes, (palette_of([1]), palette_of([2]), palette_of([3])))
        self.assertTrue(result.is_simplified())
        self.assertFalse(inst.is_simplified())

    def test_infeasible(self):
        inst = ListInstance(build_graph(2, [(0, 1)]), (1, 1), 0, 1)
        self.assertIsInstance(simplify(inst), Infeasible)
        self.assertIsInstance(simplify(ListInstance(build_graph(1, []), (0,), 0, 2)), Infeasible)

    def test_unchanged_instance_is_returned_as_is(self):
        inst = ListInstance.full(cycle(5), 3)
        self.assertIs(simplify(inst), inst)

    def test_cascade_along_a_path(self):
        graph = build_graph(3, [(0, 1), (1, 2)])
        inst = ListInstance(graph, (palette_of([1]), palette_of([1, 2]), palette_of([2])), 0, 2)
        self.assertEqual(simplify(inst), Infeasible(2))

    def test_idempotent_and_never_enlarges_palettes(self):
        for spec, inst in random_instances(80, seed=13, ks=(3, 4, 5)):
            with self.subTest(family=spec.family.value, seed=spec.seed):
                result = simplify(inst)
                if isinstance(result, Infeasible):
                    self.assertLess(result.vertex, inst.vertex_count)
                    continue
                self.assertTrue(result.is_simplified())
                self.assertIs(simplify(result), result)
                for before, after in zip(inst.palettes, result.palettes):
                    self.assertEqual(after & ~before, 0)
                    self.assertNotEqual(after, 0)


class EssentialEdgesTest(unittest.TestCase):
    def test_disjoint_palettes_split_components(self):
        graph = build_graph(3, [(0, 1), (1, 2)])
        inst = ListInstance(graph, (palette_of([1]), palette_of([2, 3]), palette_of([3])), 0, 3)
        self.assertEqual(essential_neighbors(inst, 1), mask_of([2]))
        self.assertEqual([members(c) for c in essential_components(inst)], [[0], [1, 2]])

    def test_essential_neighbors_are_symmetric(self):
        for spec, inst in random_instances(60, seed=21, ks=(3, 4)):
            with self.subTest(family=spec.family.value, seed=spec.seed):
                for v in range(inst.vertex_count):
                    essential = essential_neighbors(inst, v)
                    self.assertEqual(essential & ~inst.graph.adjacency[v], 0)
                    for w in iter_bits(essential):
                        self.assertTrue(essential_neighbors(inst, w) >> v & 1)
                        self.assertNotEqual(inst.palettes[v] & inst.palettes[w], 0)


class BagTest(unittest.TestCase):
    def setUp(self):
        # C5 dominated by the P3 0-1-2
        self.inst = ListInstance.full(cycle(5), 3, dominating=mask_of([0, 1, 2]))

    def test_bags(self):
        self.assertEqual(compute_bags(self.inst), {(0,): mask_of([4]), (2,): mask_of([3])})
        self.assertEqual(bag(self.inst, (2,)), mask_of([3]))
        self.assertEqual(bag(self.inst, (1,)), 0)

    def test_undominated_vertex(self):
        with self.assertRaises(PreconditionViolated):
            compute_bags(ListInstance.full(cycle(5), 3, dominating=mask_of([0])))

    def test_cross_essential_sets(self):
        self.assertEqual(cross_essential_set(self.inst, (0,), (2,)), mask_of([4]))
        self.assertEqual(cross_essential_set(self.inst, (2,), (0,)), mask_of([3]))
        self.assertFalse(is_separated(self.inst, (0,)))
        with self.assertRaises(InputError):
            cross_essential_set(self.inst, (0,), (0,))

    def test_separation_after_palette_split(self):
        split = self.inst.with_palettes({3: palette_of([1]), 4: palette_of([2])})
        self.assertEqual(cross_essential_set(split, (0,), (2,)), 0)
        self.assertTrue(is_separated(split, (0,)))
        self.assertTrue(is_separated(split, (2,)))

    def test_bags_partition_the_undominated_vertices(self):
        for inst in itertools.islice(bench.dominated_instances(seed=3, k=5), 40):
            bags = compute_bags(inst)
            union = 0
            for key, u_i in bags.items():
                self.assertTrue(u_i)
                self.assertEqual(union & u_i, 0)
                union |= u_i
                for v in iter_bits(u_i):
                    self.assertEqual(mask_of(key), inst.graph.adjacency[v] & inst.dominating)
            self.assertEqual(union, inst.graph.all_vertices & ~inst.dominating)
            undominated = inst.vertex_count - popcount(inst.dominating)
            self.assertEqual(sum(popcount(u_i) for u_i in bags.values()), undominated)

    def test_cross_essential_sets_are_empty_together(self):
        checked = 0
        for inst in itertools.islice(bench.dominated_instances(seed=5, k=5), 60):
            fixed = bench.color_dominating_set(inst)
            for candidate in (inst, fixed):
                if candidate is None:
                    continue
                for i_key, j_key in itertools.combinations(candidate.bags, 2):
                    forward = cross_essential_set(candidate, i_key, j_key)
                    backward = cross_essential_set(candidate, j_key, i_key)
                    self.assertEqual(forward == 0, backward == 0)
                    checked += 1
        self.assertGreater(checked, 0)


class RestrictBagTest(unittest.TestCase):
    def setUp(self):
        # vertex 0 dominates the triangle 0-1-2, coloured 1
        graph = build_graph(3, [(0, 1), (0, 2), (1, 2)])
        self.inst = simplify(ListInstance.full(graph, 3, dominating=mask_of([0])).with_palette(0, palette_of([1])))

    def test_renames_remaining_colours(self):
        sub, renaming = restrict_bag_instance(self.inst, (0,))
        self.assertEqual(sub.universe, 2)
        self.assertEqual(sub.palettes, (full_palette(2), full_palette(2)))
        self.assertEqual(sub.dominating, 0)
        self.assertEqual(renaming.colors, {2: 1, 3: 2})
        self.assertEqual(renaming.lift({0: 1, 1: 2}), {1: 2, 2: 3})

    def test_contract_violations(self):
        with self.assertRaises(ContractError):
            restrict_bag_instance(self.inst, ())
        with self.assertRaises(ContractError):
            restrict_bag_instance(self.inst.with_palette(0, full_palette(3)), (0,))
        with self.assertRaises(ContractError):
            restrict_bag_instance(self.inst.with_palette(1, full_palette(3)), (0,))


class CanonicalSetTest(unittest.TestCase):
    def test_deduplicates(self):
        inst = ListInstance.full(cycle(5), 3)
        other = inst.with_palette(0, 1)
        result = canonical_set([inst, other, inst.with_palette(0, 7), other])
        self.assertEqual(len(result), 2)
        self.assertEqual(canonical_set(reversed(result)), result)


if __name__ == "__main__":
    unittest.main()
