"""
Fixed decomposition of controlled swaps into single qubit gates and CNOTs.

cswap(c; a, b)  = cx(b, a) . toffoli(c, a -> b) . cx(b, a)
toffoli         = H, T and CNOT table of ProjectQ's toffoli2cnotandtgate rule
ccswap(c1, c2; a, b) with polarities p1, p2
                = X on the controls with polarity 0, cx(b, a), H(b),
                  controlled-controlled-controlled Z on (c1, c2, a, b), H(b),
                  cx(b, a), X undone
The triple controlled Z is the phase polynomial
    pi x1 x2 x3 x4 = sum over nonempty S of (-1)^(|S|+1) (pi/8) parity(S)
with each parity computed by a CNOT ladder into the last qubit of S.

Each replaced gate is laid out as early as possible within its own block; the
blocks of one layer run side by side, so a layer costs its slowest block.
"""

# from the standard library
from itertools import combinations
import logging

# third party
import numpy as np

# our code
from stateprep import StateVector as sv
from stateprep.circuit.Circuit import Circuit, Gate
from stateprep.circuit.GateKind import GateKind

H = sv.H
X = sv.X


def phase(theta):
    return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)


T = phase(np.pi / 4)
TDAG = phase(-np.pi / 4)


def toffoli_gates(c0, c1, t):
    return [
        Gate.u(t, H),
        Gate.cx(c0, t),
        Gate.u(c0, T),
        Gate.u(t, TDAG),
        Gate.cx(c1, t),
        Gate.cx(c1, c0),
        Gate.u(c0, TDAG),
        Gate.u(t, T),
        Gate.cx(c1, c0),
        Gate.cx(c0, t),
        Gate.u(t, TDAG),
        Gate.cx(c1, t),
        Gate.u(t, T),
        Gate.u(c1, T),
        Gate.u(t, H),
    ]


def cswap_gates(c, a, b):
    return [Gate.cx(b, a)] + toffoli_gates(c, a, b) + [Gate.cx(b, a)]


def multi_cz_gates(qubits):
    '''
    Z controlled on every other qubit in qubits
    '''
    qubits = list(qubits)
    angle = np.pi / (1 << (len(qubits) - 1))
    gates = []
    for size in range(1, len(qubits) + 1):
        sign = 1.0 if size % 2 else -1.0
        for subset in combinations(qubits, size):
            target = subset[-1]
            ladder = [Gate.cx(q, target) for q in subset[:-1]]
            gates.extend(ladder)
            gates.append(Gate.u(target, phase(sign * angle)))
            gates.extend(reversed(ladder))
    return gates


def ccswap_gates(c1, c2, c1_polarity, c2_polarity, a, b):
    flips = [Gate.u(q, X) for q, p in ((c1, c1_polarity), (c2, c2_polarity)) if p == 0]
    return (flips
        + [Gate.cx(b, a), Gate.u(b, H)]
        + multi_cz_gates([c1, c2, a, b])
        + [Gate.u(b, H), Gate.cx(b, a)]
        + flips)


def expand(gate):
    '''
    @return the elementary gate sequence replacing gate
    '''
    if gate.kind is GateKind.CSWAP:
        return cswap_gates(*gate.qubits)
    if gate.kind is GateKind.CCSWAP:
        c1, c2, a, b = gate.qubits
        return ccswap_gates(c1, c2, gate.polarity[0], gate.polarity[1], a, b)
    return [gate]


def _block_depth(gates, width):
    return Circuit(width).extend(gates).depth


D_TOFFOLI = _block_depth(toffoli_gates(0, 1, 2), 3)
D_CSWAP = _block_depth(cswap_gates(0, 1, 2), 3)
D_CCSWAP = max(_block_depth(ccswap_gates(0, 1, p1, p2, 2, 3), 4) for p1 in (0, 1) for p2 in (0, 1))


def header_comments():
    return [
        "toffoli depth {}".format(D_TOFFOLI),
        "cswap depth {}".format(D_CSWAP),
        "ccswap depth at most {}".format(D_CCSWAP),
    ]


def decompose(circuit):
    '''
    Replace every cswap and ccswap by its fixed table, keeping single qubit
    gates, CNOTs and projections

    @return a new Circuit holding only u, cx and proj gates
    '''
    result = Circuit(circuit.num_qubits)
    for layer in circuit.layers:
        blocks = []
        for gate in layer:
            block = Circuit(circuit.num_qubits).extend(expand(gate))
            logging.debug("Gate %s on %s expands to depth %d", gate.kind.value, gate.qubits, block.depth)
            blocks.append(block.layers)
        height = max((len(block) for block in blocks), default=0)
        for row in range(height):
            result.add_layer([g for block in blocks if row < len(block) for g in block[row]])
    return result
