import unittest

import numpy as np

from .context import ConcatProtocol as cp
from .context import LabelEncoding as le
from .context import StateVector as sv


def positive(rng, N):
    return le.ResizedVector(rng.uniform(0, 1, size=N))


def unit_disk(rng, N):
    radius = np.sqrt(rng.uniform(0, 1, size=N))
    return le.ResizedVector(radius * np.exp(2j * np.pi * rng.uniform(size=N)))


class TestConcatProtocol(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_p_plus_boundaries(self):
        self.assertAlmostEqual(cp.compute_p_plus(8, 8, 8), 0.5)
        self.assertAlmostEqual(cp.compute_p_plus(4, 4, 8), 1.0)
        self.assertAlmostEqual(cp.compute_p_plus(40, 40, 8), 0.1)

    def test_p_plus_rejects_nonpositive_norms(self):
        with self.assertRaises(ValueError):
            cp.compute_p_plus(0, 1, 2)

    def test_concatenate_basis_vectors(self):
        a = le.encode(le.ResizedVector([1, 0]))
        b = le.encode(le.ResizedVector([0, 1]))
        outcome, success, state = cp.concatenate(a, b, outcome=True)
        self.assertTrue(success)
        self.assertAlmostEqual(outcome.success_prob, 0.5, delta=1e-12)
        np.testing.assert_allclose(le.decode(outcome.post_state_on_success).entries, [1, 0, 0, 1], atol=1e-10)
        self.assertAlmostEqual(outcome.post_state_on_success.norm_sq, 4.0)
        self.assertAlmostEqual(outcome.prefactor_norm_sq, 2.0)
        self.assertEqual(state.num_qubits, 3)

    def test_concatenate_matches_directly_built_success_state(self):
        va = np.array([0.2, 0.9])
        vb = np.array([0.6, 0.1])
        a = le.encode(le.ResizedVector(va))
        b = le.encode(le.ResizedVector(vb))
        outcome, _, state = cp.concatenate(a, b, outcome=True)

        # merged label state tensored with the uniform label state
        merged = le.label_amplitudes(np.concatenate([va, vb]))
        uniform = le.label_amplitudes(np.full(2, 0.5))
        expected = sv.PureState(np.kron(merged, uniform))
        _, full = sv.project(
            _concat_unitary_part(a, b), 4, sv.PLUS)
        self.assertGreater(sv.fidelity(full, expected), 1 - 1e-10)
        self.assertGreater(sv.fidelity(state, sv.PureState(merged)), 1 - 1e-10)

    def test_concatenate_uniform_inputs_is_certain(self):
        a = le.encode(le.ResizedVector([0.5, 0.5]))
        outcome, success, _ = cp.concatenate(a, a, rng=self.rng)
        self.assertTrue(success)
        self.assertAlmostEqual(outcome.success_prob, 1.0, delta=1e-12)
        np.testing.assert_allclose(le.decode(outcome.post_state_on_success).entries, np.full(4, 0.5), atol=1e-10)

    def test_concatenate_rejects_dimension_mismatch(self):
        a = le.encode(le.ResizedVector([1, 0]))
        b = le.encode(le.ResizedVector([1, 0, 0, 1]))
        with self.assertRaises(ValueError):
            cp.concatenate(a, b, outcome=True)

    def test_concatenate_trailing_register_is_uniform_and_pure(self):
        for _ in range(20):
            a = le.encode(positive(self.rng, 4))
            b = le.encode(positive(self.rng, 4))
            outcome, _, _ = cp.concatenate(a, b, outcome=True)
            uniform = le.encode(le.ResizedVector(np.full(4, 0.5))).state
            self.assertGreater(sv.fidelity(outcome.disentangled_factor, uniform), 1 - 1e-10)

    def test_concatenate_norm_recursion(self):
        a = le.encode(positive(self.rng, 4))
        b = le.encode(positive(self.rng, 4))
        outcome, _, _ = cp.concatenate(a, b, outcome=True)
        self.assertAlmostEqual(outcome.post_state_on_success.norm_sq, a.norm_sq + b.norm_sq, delta=1e-12)
        self.assertAlmostEqual(outcome.prefactor_norm_sq, (a.norm_sq + b.norm_sq) / 2, delta=1e-12)

    def test_concatenate_failure_returns_orthogonal_branch(self):
        a = le.encode(le.ResizedVector([1, 0]))
        b = le.encode(le.ResizedVector([0, 1]))
        _, success, state = cp.concatenate(a, b, outcome=False)
        self.assertFalse(success)
        self.assertEqual(state.num_qubits, 5)
        probability, _ = sv.project(state, 4, sv.MINUS)
        self.assertAlmostEqual(probability, 1.0, delta=1e-12)

    def test_analytic_p_plus_matches_projection(self):
        for _ in range(200):
            N = 1 << int(self.rng.integers(1, 4))
            a = le.encode(unit_disk(self.rng, N))
            b = le.encode(unit_disk(self.rng, N))
            outcome, _, _ = cp.concatenate(a, b, outcome=True)
            self.assertAlmostEqual(outcome.success_prob, outcome.simulated_prob, delta=1e-10)

    def test_sampled_success_frequency_matches_p_plus(self):
        a = le.encode(positive(self.rng, 4))
        b = le.encode(positive(self.rng, 4))
        p = cp.compute_p_plus(a.norm_sq, b.norm_sq, 4)
        trials = 10000
        successes = sum(cp.concatenate(a, b, rng=self.rng)[1] for _ in range(trials))
        sigma = np.sqrt(p * (1 - p) / trials)
        self.assertLess(abs(successes / trials - p), 3 * sigma + 1e-12)

    def test_p_plus_range_for_positive_and_complex_vectors(self):
        for _ in range(10000):
            N = 1 << int(self.rng.integers(1, 6))
            p = cp.complex_p_plus(positive(self.rng, 2 * N))
            self.assertGreaterEqual(p, 0.5 - 1e-12)
            self.assertLessEqual(p, 1.0 + 1e-12)
            p = cp.complex_p_plus(unit_disk(self.rng, 2 * N))
            self.assertGreaterEqual(p, 0.1 - 1e-12)
            self.assertLessEqual(p, 1.0 + 1e-12)

    def test_concatenate_norms(self):
        p, A = cp.concatenate_norms(2.0, 3.0, 4)
        self.assertAlmostEqual(p, 4 * 5 / 24)
        self.assertEqual(A, 5.0)

    def test_project_value_qubit_all_ones(self):
        p_s, state = cp.project_value_qubit(le.encode(le.ResizedVector([1, 1])))
        self.assertAlmostEqual(p_s, 1.0, delta=1e-12)
        self.assertGreater(sv.fidelity(state, sv.PureState(sv.PLUS)), 1 - 1e-12)

    def test_project_value_qubit_uniform(self):
        p_s, _ = cp.project_value_qubit(le.encode(le.ResizedVector([0.5, 0.5])))
        self.assertAlmostEqual(p_s, 0.5, delta=1e-12)

    def test_project_value_qubit_lower_bound(self):
        for _ in range(100):
            v = positive(self.rng, 8)
            p_s, _ = cp.project_value_qubit(le.encode(v))
            self.assertGreaterEqual(p_s, np.mean(np.abs(v.entries) ** 2) - 1e-12)

    def test_project_value_qubit_rejects_zero_vector(self):
        with self.assertRaises(cp.ZeroSuccessProbabilityError) as context:
            cp.project_value_qubit(le.encode(le.ResizedVector([0, 0])))
        self.assertIn("zero success probability", str(context.exception))

    def test_decompose_real_vector(self):
        d = cp.decompose_complex(le.ResizedVector([1, -1]))
        np.testing.assert_array_equal(d.va.entries, [1, 0])
        np.testing.assert_array_equal(d.vb.entries, [0, 1])
        np.testing.assert_array_equal(d.vc.entries, [0, 0])
        np.testing.assert_array_equal(d.vd.entries, [0, 0])

    def test_decompose_imaginary_vector(self):
        d = cp.decompose_complex(le.ResizedVector([1j, 0]))
        np.testing.assert_array_equal(d.vc.entries, [1, 0])

    def test_decompose_reconstructs_exactly(self):
        for _ in range(50):
            v = unit_disk(self.rng, 16)
            d = cp.decompose_complex(v)
            np.testing.assert_array_equal(d.reconstruct(), v.entries)
            for left, right in ((d.va, d.vb), (d.vc, d.vd)):
                np.testing.assert_array_equal(np.minimum(left.entries.real, right.entries.real), 0)

    def test_ancilla_product_expansion(self):
        expected = np.array([1, -1, 1j, -1j]) / 2
        np.testing.assert_allclose(cp.ancilla_product().amps, expected, atol=1e-15)

    def test_assemble_complex_reaches_target(self):
        for n in (1, 2, 3):
            for _ in range(5):
                u = le.AmplitudeVector.from_raw(self.rng.normal(size=1 << n) + 1j * self.rng.normal(size=1 << n))
                d = cp.decompose_complex(le.resize(u))
                states = [le.encode(part) for part in d.parts()]
                report = cp.assemble_complex_report(d, states)
                self.assertGreater(sv.fidelity(report.amplitude_state, le.target_state(u)), 1 - 1e-9)
                self.assertAlmostEqual(report.p_s_prime, report.simulated_prob, delta=1e-10)
                self.assertGreaterEqual(report.p_s_prime, report.lower_bound - 1e-15)

    def test_assemble_complex_norm_identity(self):
        for n in (1, 2, 3):
            N = 1 << n
            u = le.AmplitudeVector.from_raw(self.rng.normal(size=N) + 1j * self.rng.normal(size=N))
            v = le.resize(u)
            d = cp.decompose_complex(v)
            states = [le.encode(part) for part in d.parts()]
            report = cp.assemble_complex_report(d, states)
            # measured from the simulated projections, not from the closed form
            self.assertEqual(report.psi1_norm_sq, report.simulated_prob * report.psi0_norm_sq)
            norms = 4.0 * np.prod([ls.norm_sq for ls in states])
            self.assertLess(abs(report.psi0_norm_sq - norms) / norms, 1e-12)
            expected = N ** 3 / 16 * np.sum(np.abs(v.entries) ** 2)
            self.assertLess(abs(report.psi1_norm_sq - expected) / expected, 1e-9)

    def test_assemble_complex_positive_input_matches_positive_path(self):
        v = positive(self.rng, 4)
        d = cp.decompose_complex(v)
        _, success, state = cp.assemble_complex(d, [le.encode(part) for part in d.parts()], outcome=True)
        self.assertTrue(success)
        _, positive_state = cp.project_value_qubit(le.encode(v))
        self.assertGreater(sv.fidelity(state, positive_state), 1 - 1e-10)

    def test_assemble_complex_rejects_mismatched_states(self):
        v = positive(self.rng, 2)
        d = cp.decompose_complex(v)
        states = [le.encode(le.ResizedVector([0.3, 0.3])) for _ in range(4)]
        with self.assertRaises(ValueError):
            cp.assemble_complex(d, states, outcome=True)


def _concat_unitary_part(a, b):
    state = sv.PureState(np.kron(sv.PLUS, np.kron(a.state.amps, b.state.amps)))
    for k in range(a.n + 1):
        state = sv.apply_cswap(state, 0, 1 + k, 2 + a.n + k)
    return state


if __name__ == "__main__":
    unittest.main()
