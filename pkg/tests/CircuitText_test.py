import os
import tempfile
import unittest

import numpy as np

from .context import Builders as bu
from .context import Circuit as ci
from .context import CircuitText as ct
from .context import Decompose as de
from .context import StateVector as sv

Gate = ci.Gate
GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "concat_n2.txt")


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_circuit(rng, num_qubits, count):
    circuit = ci.Circuit(num_qubits)
    for _ in range(count):
        kind = int(rng.integers(5))
        qubits = [int(q) for q in rng.choice(num_qubits, size=4, replace=False)]
        if kind == 0:
            circuit.append(Gate.u(qubits[0], random_unitary(rng)))
        elif kind == 1:
            circuit.append(Gate.cx(*qubits[:2]))
        elif kind == 2:
            circuit.append(Gate.cswap(*qubits[:3]))
        elif kind == 3:
            circuit.append(Gate.ccswap(qubits[0], qubits[1], int(rng.integers(2)), int(rng.integers(2)),
                qubits[2], qubits[3]))
        else:
            circuit.append(Gate.project(qubits[0], ["zero", "one", "plus", "minus"][int(rng.integers(4))]))
    return circuit


class TestCircuitText(unittest.TestCase):
    def test_emit_empty_circuit_is_header_only(self):
        self.assertEqual(ct.emit(ci.Circuit(3)), "qubits 3\ndepth 0\n")

    def test_parse_empty_circuit(self):
        self.assertEqual(ct.parse("qubits 3\ndepth 0\n"), ci.Circuit(3))

    def test_emit_concat_circuit_matches_golden_file(self):
        with open(GOLDEN, "r") as handle:
            self.assertEqual(ct.emit(bu.build_concat_circuit(2)), handle.read())

    def test_parse_reproduces_random_circuits(self):
        rng = np.random.default_rng(2026)
        for _ in range(10):
            circuit = random_circuit(rng, 6, 25)
            self.assertEqual(ct.parse(ct.emit(circuit)), circuit)

    def test_parse_reproduces_decomposed_circuit_with_comments(self):
        circuit = de.decompose(bu.build_concat_circuit(1))
        text = ct.emit(circuit, de.header_comments())
        self.assertIn("# cswap depth {}".format(de.D_CSWAP), text)
        self.assertEqual(ct.parse(text), circuit)

    def test_emit_gate_lines(self):
        self.assertEqual(ct.emit_gate(Gate.cx(3, 7)), "cx q3 q7")
        self.assertEqual(ct.emit_gate(Gate.project(5, "plus")), "proj q5 plus")
        self.assertEqual(ct.emit_gate(Gate.ccswap(0, 1, 0, 1, 2, 3)), "ccswap q0 q1 q2 q3 01")
        self.assertEqual(ct.emit_gate(Gate.u(2, sv.X)), "u q2 0.0 0.0 1.0 0.0 1.0 0.0 0.0 0.0")

    def test_parse_rejects_depth_mismatch(self):
        with self.assertRaises(ct.CircuitParseError):
            ct.parse("qubits 2\ndepth 2\ncx q0 q1\n")

    def test_parse_rejects_unknown_gate_with_line_number(self):
        with self.assertRaises(ct.CircuitParseError) as context:
            ct.parse("qubits 2\ndepth 1\nswap q0 q1\n")
        self.assertEqual(context.exception.line, 3)
        self.assertIn("line 3", str(context.exception))

    def test_parse_rejects_overlapping_layer(self):
        with self.assertRaises(ValueError):
            ct.parse("qubits 3\ndepth 1\ncx q0 q1\ncx q1 q2\n")

    def test_parse_rejects_missing_header(self):
        with self.assertRaises(ValueError):
            ct.parse("cx q0 q1\n")

    def test_parse_rejects_non_unitary_matrix(self):
        with self.assertRaises(ValueError):
            ct.parse("qubits 1\ndepth 1\nu q0 1 0 1 0 0 0 1 0\n")

    def test_write_then_read_file(self):
        circuit = bu.build_complex_circuit(1)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "complex.txt")
            ct.write_circuit(path, circuit)
            self.assertEqual(ct.read_circuit(path), circuit)


if __name__ == "__main__":
    unittest.main()
