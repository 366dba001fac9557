import math
import os
import tempfile
import unittest

import numpy as np

from .context import Builders as bu
from .context import Decompose as de
from .context import LightCone as lc


def random_schedule(rng, num_qubits, num_layers):
    layers = []
    for _ in range(num_layers):
        order = [int(q) for q in rng.permutation(num_qubits)]
        groups = []
        while order:
            size = int(rng.integers(1, 4))
            groups.append(order[:size])
            order = order[size:]
        layers.append(groups)
    return lc.GroupingSchedule(layers, range(num_qubits))


class TestLightCone(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(12)

    def test_single_layer_pairs(self):
        schedule = lc.GroupingSchedule([[{1, 4}, {2, 3}]])
        self.assertEqual(lc.light_cone(schedule, 1), {1, 4})
        self.assertEqual(lc.light_cone(schedule, 3), {2, 3})

    def test_singleton_groups_keep_cone_trivial(self):
        schedule = lc.GroupingSchedule([[], [], []], range(5))
        for j in range(5):
            self.assertEqual(lc.light_cone(schedule, j), {j})

    def test_cone_grows_backwards(self):
        schedule = lc.GroupingSchedule([[(0, 1), (2, 3)], [(1, 2)]])
        self.assertEqual(lc.light_cone(schedule, 1), {0, 1, 2, 3})
        self.assertEqual(lc.light_cone(schedule, 0), {0, 1})

    def test_cone_size_bounded_by_k_to_the_L(self):
        for _ in range(200):
            schedule = random_schedule(self.rng, int(self.rng.integers(2, 13)), int(self.rng.integers(1, 5)))
            for j in schedule.qubits:
                self.assertLessEqual(len(lc.light_cone(schedule, j)), schedule.k ** schedule.L)

    def test_splitting_a_group_never_enlarges_cones(self):
        for _ in range(50):
            schedule = random_schedule(self.rng, 10, 3)
            layer = int(self.rng.integers(schedule.L))
            raw = [[sorted(g) for g in schedule.groups(i)] for i in range(schedule.L)]
            big = max(range(len(raw[layer])), key=lambda i: len(raw[layer][i]))
            group = raw[layer].pop(big)
            raw[layer].extend([group[:1], group[1:]] if len(group) > 1 else [group])
            refined = lc.GroupingSchedule(raw, range(10))
            for j in range(10):
                self.assertLessEqual(lc.light_cone(refined, j), lc.light_cone(schedule, j))

    def test_duplicate_qubit_in_layer_rejected(self):
        with self.assertRaises(ValueError):
            lc.GroupingSchedule([[(0, 1), (1, 2)]])

    def test_depth_lower_bound(self):
        self.assertAlmostEqual(lc.depth_lower_bound(1 << 7, 2), 7.0)
        self.assertAlmostEqual(lc.depth_lower_bound(64, 64), 1.0)
        with self.assertRaises(ValueError):
            lc.depth_lower_bound(8, 1)

    def test_full_cone_needs_bound_layers(self):
        # random schedules on 8 qubits with a cone covering all of them
        for L in range(1, 5):
            for _ in range(100):
                schedule = random_schedule(self.rng, 8, L)
                if any(len(lc.light_cone(schedule, j)) == 8 for j in range(8)):
                    self.assertGreaterEqual(schedule.L, lc.depth_lower_bound(8, schedule.k) - 1e-12)

    def test_network_schedule_respects_bound(self):
        for n in range(2, 5):
            circuit, outputs = bu.build_network_circuit(n)
            schedule = lc.schedule_from_circuit(de.decompose(circuit))
            cone = set()
            for q in outputs[0]:
                cone |= lc.light_cone(schedule, q)
            self.assertTrue(set(range(1 << n)) <= cone)
            self.assertEqual(schedule.k, 2)
            self.assertGreaterEqual(schedule.L, lc.depth_lower_bound(1 << n, schedule.k))

    def test_schedule_file_round_trip(self):
        schedule = lc.GroupingSchedule([[(0, 3), (1, 2)], [], [(2, 3, 4)]], range(5))
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "schedule.txt")
            lc.write_schedule_file(path, schedule)
            again = lc.read_schedule_file(path)
        self.assertEqual(again.L, 3)
        for j in range(5):
            self.assertEqual(lc.light_cone(again, j), lc.light_cone(schedule, j))

    def test_read_schedule_accepts_spaces_and_comments(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "schedule.txt")
            with open(path, "w") as handle:
                handle.write("# two layers\n1 4; 2 3\n1,2\n")
            schedule = lc.read_schedule_file(path)
        self.assertEqual(lc.light_cone(schedule, 1), {1, 2, 3, 4})
        self.assertEqual(schedule.k, 2)
        self.assertTrue(math.isclose(lc.depth_lower_bound(len(schedule.qubits), schedule.k), 2.0))


if __name__ == "__main__":
    unittest.main()
