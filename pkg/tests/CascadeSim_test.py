import math
import os
import unittest

import numpy as np

from .context import CascadeSim as cs
from .context import ConcatProtocol as cp
from .context import PrepAlgorithms as pa
from .context import PrepMode
from .context import TrialPool as tp

LONG_TESTS = bool(os.environ.get("QSPREP_LONG_TESTS"))


def experiment(n_range, trials, **kwargs):
    return cs.ScalingExperiment(list(n_range), trials, **kwargs)


class TestSamplers(unittest.TestCase):
    def test_deterministic_parallel_cascade_when_p_is_one(self):
        for n in range(1, 8):
            exp = experiment([n], 20, p_plus_model=PrepMode.PPlusModel.FIXED, p_fixed=1.0)
            times, _ = cs.measure(exp, n)
            self.assertTrue(np.all(times == n * (n - 1) // 2))

    def test_deterministic_sequential_cascade_when_p_is_one(self):
        exp = experiment([3], 10, p_plus_model=PrepMode.PPlusModel.FIXED, p_fixed=1.0,
            mode=PrepMode.PrepMode.SEQUENTIAL)
        times, _ = cs.measure(exp, 3)
        self.assertTrue(np.all(times == 4))

    def test_sequential_mean_matches_recurrence(self):
        trials = 4000
        times, _ = cs.measure(experiment([4], trials, mode=PrepMode.PrepMode.SEQUENTIAL, seed=3), 4)
        self.assertLess(abs(times.mean() - 54.0), 5.0 * times.std() / math.sqrt(trials))

    def test_vectorized_sampler_agrees_with_tree_sampler(self):
        trials = 1500
        fast, _ = cs.measure(experiment([4], trials, c0_policy=pa.C0Policy("const", 2), seed=5), 4)
        slow, _ = cs.measure(experiment([4], trials, c0_policy=pa.C0Policy("const", 2), seed=6,
            sampler="tree"), 4)
        sigma = math.hypot(fast.std(), slow.std()) / math.sqrt(trials)
        self.assertLess(abs(fast.mean() - slow.mean()), 4.0 * sigma)

    def test_analytic_model_agrees_with_tree_sampler(self):
        trials = 1500
        common = dict(p_plus_model=PrepMode.PPlusModel.ANALYTIC, c0_policy=pa.C0Policy("const", 1))
        fast, _ = cs.measure(experiment([4], trials, seed=1, **common), 4)
        slow, _ = cs.measure(experiment([4], trials, seed=1, sampler="tree", **common), 4)
        sigma = math.hypot(fast.std(), slow.std()) / math.sqrt(trials)
        self.assertLess(abs(fast.mean() - slow.mean()), 4.0 * sigma)

    def test_same_seed_same_times(self):
        exp = experiment([5], 300, seed=12)
        first, _ = cs.measure(exp, 5)
        second, _ = cs.measure(exp, 5)
        self.assertTrue(np.array_equal(first, second))

    def test_times_do_not_depend_on_worker_count(self):
        exp = experiment([5], 300, seed=4)
        inline, _ = cs.measure(exp, 5, tp.TrialPool(chunk_size=64))
        with tp.TrialPool(threads=2, chunk_size=64) as pool:
            parallel, _ = cs.measure(exp, 5, pool)
        self.assertTrue(np.array_equal(inline, parallel))

    def test_single_pass_runs_until_root_holds_a_copy(self):
        exp = experiment([4], 200, c0_policy=pa.C0Policy("const", 1), mode=PrepMode.PrepMode.G_PARA, seed=2)
        times, details = cs.measure(exp, 4)
        self.assertTrue(np.all(times % 6 == 0))
        self.assertGreaterEqual(details["mean_passes"], 1.0)
        self.assertAlmostEqual(details["root_success_rate"], 1.0 / details["mean_passes"])
        self.assertEqual(len(details["fraction_above_c_bnd"]), 4)

    def test_level_p_plus_matches_compute_p_plus(self):
        entries = np.random.default_rng(8).random(16)
        values = cs.level_p_plus(entries, 3)
        for j in range(2):
            node = entries[8 * j:8 * (j + 1)]
            a = float(np.sum(node[:4] ** 2 + (1 - node[:4]) ** 2))
            b = float(np.sum(node[4:] ** 2 + (1 - node[4:]) ** 2))
            self.assertAlmostEqual(values[j], min(1.0, cp.compute_p_plus(a, b, 4)))

    def test_retry_cap_aborts_with_partial_report(self):
        exp = experiment([2, 3, 8], 50, retry_cap=30, seed=1)
        with self.assertRaises(pa.RetryCapExceededError) as context:
            cs.run_scaling(exp)
        self.assertIn("per_n_means", context.exception.partial)

    def test_experiment_validation(self):
        with self.assertRaises(ValueError):
            experiment([3, 4, 5], 0)
        with self.assertRaises(ValueError):
            experiment([3, 4, 5], 10, sampler="gpu")
        with self.assertRaises(ValueError):
            experiment([3, 4, 5], 10, p_plus_model=PrepMode.PPlusModel.FIXED, p_fixed=1.5)


class TestScaling(unittest.TestCase):
    def test_run_scaling_needs_three_sizes(self):
        with self.assertRaises(ValueError):
            cs.run_scaling(experiment([4, 5], 10))

    def test_worst_case_slope_when_one_copy(self):
        report = cs.run_scaling(experiment(range(3, 7), 400, seed=7))
        self.assertGreater(report.slope, 1.2)
        self.assertLess(report.slope, 1.9)
        self.assertEqual([row[0] for row in report.rows()], [3, 4, 5, 6])
        self.assertEqual(report.rows()[0][1], 8)

    def test_more_copies_run_faster(self):
        one = cs.run_scaling(experiment(range(3, 7), 300, seed=2))
        many = cs.run_scaling(experiment(range(3, 7), 300, seed=2, c0_policy=pa.C0Policy("power", 1.8)))
        self.assertLess(many.slope, one.slope)

    def test_bootstrap_stderr_is_reported(self):
        report = cs.run_scaling(experiment(range(2, 5), 100, seed=1), bootstrap=20)
        self.assertGreater(report.bootstrap_stderr, 0.0)

    def test_tradeoff_curve_rejects_quadratic_space(self):
        with self.assertRaises(ValueError):
            cs.tradeoff_curve([1.0, 2.0], experiment(range(3, 6), 10))

    def test_supra_runs_report_models(self):
        comparison = cs.supra_model_comparison(experiment(range(3, 7), 100, seed=3))
        self.assertIn("quadratic_preferred", comparison)
        for rate in comparison["root_success_rate"].values():
            self.assertGreater(rate, cs.PRODUCT_CLAIM)

    def test_stochastic_dominance(self):
        rows = cs.stochastic_dominance([2, 3, 4], trials=1000, seed=9)
        self.assertTrue(all(row["dominates"] for row in rows))

    def test_tradeoff_sweep_depths_and_qubits(self):
        rows = cs.tradeoff_sweep(4, [1, 2, 3], c0=2, trials=50, seed=1)
        self.assertEqual([row["depth"] for row in rows], [133, 104, 65])
        self.assertEqual(rows[0]["qubits"], 46)
        self.assertEqual(rows[0]["unitary_runtime"], 0)
        self.assertEqual(rows[2]["unitary_runtime"], 8)

    def test_table1_rows(self):
        report = cs.table1_report(trials=20, n_min=3, n_max=5, seed=1)
        methods = [row["method"] for row in report["rows"]]
        self.assertEqual(methods, ["Sequential", "Parallel-1", "Parallel-2", "Unitary"])
        sequential = report["rows"][0]
        self.assertEqual(sequential["measured_peak_qubits"]["qubits"], 2 * sequential["measured_peak_qubits"]["n"] + 1)
        paired = report["rows"][1]["paired_with_parallel"]
        self.assertEqual((paired["n"], paired["c0"], paired["trials"]), (3, 13, 20))

    def test_paired_single_pass_comparison(self):
        paired = cs.paired_single_pass_comparison(4, trials=300)
        self.assertEqual(paired["c0"], 24)
        self.assertAlmostEqual(paired["mean_difference"], paired["mean_f_para"] - paired["mean_g_para"], delta=1e-9)
        self.assertTrue(paired["g_para_not_slower"])
        self.assertGreaterEqual(paired["mean_g_para"], 6.0)

    def test_paired_comparison_needs_trials(self):
        with self.assertRaises(ValueError):
            cs.paired_single_pass_comparison(3, trials=1)

    @unittest.skipUnless(LONG_TESTS, "set QSPREP_LONG_TESTS to run reproduction runs")
    def test_one_copy_slope_reproduction(self):
        report = cs.run_scaling(experiment(range(4, 11), 1000, seed=1))
        self.assertLess(abs(report.slope - 1.52), 0.15)

    @unittest.skipUnless(LONG_TESTS, "set QSPREP_LONG_TESTS to run reproduction runs")
    def test_beta_sweep_is_nonincreasing(self):
        points = cs.tradeoff_curve([1.0, 1.2, 1.4, 1.6, 1.8], experiment(range(4, 11), 1000, seed=1))
        self.assertTrue(cs.nonincreasing_within_error(points))

    @unittest.skipUnless(LONG_TESTS, "set QSPREP_LONG_TESTS to run reproduction runs")
    def test_supra_runtime_is_quadratic_in_n(self):
        comparison = cs.supra_model_comparison(experiment(range(4, 13), 1000, seed=1))
        self.assertGreaterEqual(comparison["quadratic_r_squared"], 0.98)
        self.assertTrue(comparison["quadratic_preferred"])
        for key, rate in comparison["root_success_rate"].items():
            self.assertGreaterEqual(rate, cs.PRODUCT_CLAIM - 3 * comparison["root_success_sigma"][key])


class TestHoeffdingBound(unittest.TestCase):
    def test_level_bounds_are_probabilities(self):
        for n in range(2, 16):
            for f in cs.hoeffding_bound(n).per_level_f:
                self.assertGreater(f, 0.0)
                self.assertLess(f, 1.0)

    def test_log_space_matches_direct_product(self):
        for n in range(2, 13):
            log_space = cs.hoeffding_bound(n).product_lower_bound
            self.assertLess(abs(log_space - cs.direct_product(n)) / cs.direct_product(n), 1e-9)

    def test_claim_is_reported_literally(self):
        report = cs.hoeffding_bound(2)
        self.assertAlmostEqual(report.product_lower_bound, 4.3066e-4, delta=1e-6)
        self.assertFalse(report.claim_holds)
        self.assertFalse(any(report.preconditions))

    def test_sequence_reports_monotonicity(self):
        reports, monotone = cs.hoeffding_sequence(10)
        self.assertEqual([r.n for r in reports], list(range(2, 11)))
        self.assertIsInstance(monotone, bool)

    def test_small_n_rejected(self):
        with self.assertRaises(ValueError):
            cs.hoeffding_bound(1)

    def test_c_bnd_of_leaves_is_supra_copies(self):
        self.assertEqual(math.ceil(cs.c_bnd(6, 0)), pa.C0Policy("supra", 0).copies(64))


if __name__ == "__main__":
    unittest.main()
