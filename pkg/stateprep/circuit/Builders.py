"""
Circuits of the preparation protocol: the two qubit base case, one
concatenation, the four-vector complex assembly and the full network.
"""

# from the standard library
import logging

# third party
import numpy as np

# our code
from stateprep import LabelEncoding as le
from stateprep import StateVector as sv
from stateprep.ConcatProtocol import CCSWAP_GROUPS
from stateprep.circuit.Circuit import Circuit, Gate
from stateprep.circuit.Decompose import D_CSWAP

# S H |0> and H X |0>
ANCILLA_1_PREP = np.array([[1, 1], [1j, -1j]], dtype=complex) * np.sqrt(0.5)
ANCILLA_2_PREP = np.array([[1, 1], [-1, 1]], dtype=complex) * np.sqrt(0.5)

_BAD_SIZE_MSG = "{} needs n >= {}, got {}"


def _gates_from_base(pairs, qubits):
    gates = []
    for entry in pairs:
        if entry[0] == "u":
            gates.append(Gate.u(qubits[entry[1]], entry[2]))
        else:
            gates.append(Gate.cx(qubits[entry[1]], qubits[entry[2]]))
    return gates


def build_base_circuit(v):
    '''
    Two qubit circuit taking |00> to the label state of a real 2-entry vector
    '''
    return Circuit(2).extend(_gates_from_base(le.base_gates(v), (0, 1)))


def build_concat_circuit(n):
    '''
    Concatenation of two label states of n + 1 qubits.

    Qubit 0 is the control, qubits 1..n+1 hold input a and n+2..2n+2 input b.
    '''
    if n < 1:
        raise ValueError(_BAD_SIZE_MSG.format("build_concat_circuit", 1, n))
    width = n + 1
    circuit = Circuit(2 * width + 1)
    circuit.append(Gate.u(0, sv.H))
    for k in range(width):
        circuit.append(Gate.cswap(0, 1 + k, 1 + width + k))
    circuit.append(Gate.project(2 * width, "plus"))
    return circuit


def build_complex_circuit(n):
    '''
    Four-vector assembly: ancillas on qubits 0 and 1, then registers A, B, C
    and D of n + 1 qubits each
    '''
    if n < 1:
        raise ValueError(_BAD_SIZE_MSG.format("build_complex_circuit", 1, n))
    width = n + 1
    circuit = Circuit(2 + 4 * width)
    circuit.append(Gate.u(0, ANCILLA_1_PREP))
    circuit.append(Gate.u(1, ANCILLA_2_PREP))
    for register, (p1, p2) in CCSWAP_GROUPS:
        for k in range(width):
            circuit.append(Gate.ccswap(0, 1, p1, p2, 2 + k, 2 + register * width + k))
    for q in [0, 1] + [2 + register * width + width - 1 for register in (1, 2, 3)]:
        circuit.append(Gate.project(q, "plus"))
    return circuit


class _Allocator:
    def __init__(self):
        self.count = 0

    def take(self, size):
        start = self.count
        self.count += size
        return list(range(start, start + size))


def _network_gates(n, v, allocator, circuit_ops):
    '''
    Lay out one copy of the network, recording operations in circuit_ops as
    (gate) or ("barrier", qubits) entries

    @return the qubits of the final label register
    '''
    registers = []
    for j in range(1 << (n - 1)):
        qubits = allocator.take(2)
        pair = le.ResizedVector(v[2 * j:2 * j + 2])
        circuit_ops.extend(_gates_from_base(le.base_gates(pair), qubits))
        registers.append(qubits)

    while len(registers) > 1:
        merged = []
        for a, b in zip(registers[0::2], registers[1::2]):
            control = allocator.take(1)[0]
            circuit_ops.append(Gate.u(control, sv.H))
            for qa, qb in zip(a, b):
                circuit_ops.append(Gate.cswap(control, qa, qb))
            circuit_ops.append(Gate.project(b[-1], "plus"))
            circuit_ops.append(("barrier", [control] + a + b))
            merged.append([control] + a)
        registers = merged
    return registers[0]


def build_network_circuit(n, copies=1, v=None):
    '''
    One pass of the preparation network for 2^n entries: base case circuits on
    every pair of entries, then n - 1 levels of concatenations, each on fresh
    controls, with every block waiting on the projection that feeds it.

    @param copies - independent copies side by side (1 for the sequential
        algorithm, c0 for the parallel one)
    @param v - real vector of 2^n entries for the leaves, uniform by default
    @return (circuit, list of the final label registers, one per copy)
    '''
    if n < 1:
        raise ValueError(_BAD_SIZE_MSG.format("build_network_circuit", 1, n))
    if copies < 1:
        raise ValueError("copies must be positive, got {}".format(copies))
    v = np.full(1 << n, 0.5) if v is None else np.asarray(v, dtype=float).ravel()
    if v.shape[0] != 1 << n:
        raise ValueError("Network over 2^{} entries got a vector of {}".format(n, v.shape[0]))

    allocator = _Allocator()
    ops = []
    outputs = [_network_gates(n, v, allocator, ops) for _ in range(copies)]

    circuit = Circuit(allocator.count)
    for op in ops:
        if isinstance(op, Gate):
            circuit.append(op)
        else:
            circuit.barrier(op[1])
    logging.debug("Network for n=%d with %d copies uses %d qubits", n, copies, circuit.num_qubits)
    return circuit, outputs


def network_qubits(n, copies=1, n_u=1):
    '''
    Qubits of the network: 2^(n - n_u) leaf registers of n_u + 1 qubits and
    one control per concatenation, for every copy
    '''
    leaves = 1 << (n - n_u)
    return copies * (leaves * (n_u + 1) + leaves - 1)


def network_depth(n, n_u=1, unitary_depth=None):
    '''
    Decomposed depth of one network pass whose leaves hold 2^n_u entries.

    Leaves of two entries are the base case circuit of depth 4; larger leaves
    cost unitary_depth. Merging registers of i + 1 qubits costs i + 1 cswaps
    and one projection, the control's Hadamard running alongside the leaves.
    '''
    if not 1 <= n_u <= n:
        raise ValueError("Leaf size n_u must lie in [1, {}], got {}".format(n, n_u))
    if n_u == 1:
        leaf = 4
    elif unitary_depth is None:
        raise ValueError("unitary_depth is required for leaves larger than the base case")
    else:
        leaf = unitary_depth
    return leaf + sum(D_CSWAP * (i + 1) + 1 for i in range(n_u, n))
