"""
Layered circuit representation.

A circuit is a list of layers; the gates of one layer act on pairwise disjoint
qubits. Gates appended one by one go to the earliest layer their qubits allow.
"""

# from the standard library
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

# third party
import numpy as np

# our code
from stateprep import StateVector as sv
from stateprep.circuit.GateKind import GateKind

ONTO_STATES = {
    "zero": sv.ZERO,
    "one": sv.ONE,
    "plus": sv.PLUS,
    "minus": sv.MINUS,
}

_BAD_QUBIT_VALUE_ERROR_MSG = ("Qubit {} is outside a circuit of {} qubits")
_BAD_ARITY_VALUE_ERROR_MSG = ("Gate {} expects {} distinct qubits, got {}")
_BAD_OVERLAP_VALUE_ERROR_MSG = ("Gates in one layer must act on disjoint qubits, "
                                "qubit {} is used twice")
_BAD_ONTO_VALUE_ERROR_MSG = "Projection target must be one of zero, one, plus, minus"
_BAD_POLARITY_VALUE_ERROR_MSG = "Control polarities are expected to be a pair of bits"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: Tuple[int, ...]
    matrix: Optional[Tuple[complex, ...]] = None
    polarity: Optional[Tuple[int, int]] = None
    onto: Optional[str] = None

    def __post_init__(self):
        if len(self.qubits) != self.kind.arity or len(set(self.qubits)) != len(self.qubits):
            raise ValueError(_BAD_ARITY_VALUE_ERROR_MSG.format(self.kind.value, self.kind.arity, self.qubits))
        if self.kind is GateKind.PROJECT and self.onto not in ONTO_STATES:
            raise ValueError(_BAD_ONTO_VALUE_ERROR_MSG)
        if self.kind is GateKind.CCSWAP and (self.polarity is None or any(p not in (0, 1) for p in self.polarity)):
            raise ValueError(_BAD_POLARITY_VALUE_ERROR_MSG)

    @classmethod
    def u(cls, q, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if not sv.is_unitary(matrix):
            raise sv.NonUnitaryGateError("non-unitary gate on qubit {}".format(q))
        return cls(GateKind.U1Q, (q,), matrix=tuple(complex(x) for x in matrix.ravel()))

    @classmethod
    def cx(cls, control, target):
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def cswap(cls, control, a, b):
        return cls(GateKind.CSWAP, (control, a, b))

    @classmethod
    def ccswap(cls, c1, c2, c1_polarity, c2_polarity, a, b):
        return cls(GateKind.CCSWAP, (c1, c2, a, b), polarity=(c1_polarity, c2_polarity))

    @classmethod
    def project(cls, q, onto):
        return cls(GateKind.PROJECT, (q,), onto=onto)

    @property
    def unitary(self):
        return np.array(self.matrix, dtype=complex).reshape(2, 2)

    def remapped(self, mapping):
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.matrix, self.polarity, self.onto)

    def sort_key(self):
        return (self.qubits, self.kind.value)


class Circuit:
    '''
    Gates arranged in layers of disjoint support
    '''

    def __init__(self, num_qubits):
        if num_qubits < 1:
            raise ValueError("A circuit needs at least one qubit")
        self.num_qubits = num_qubits
        self.layers = []
        self._frontier = [0] * num_qubits


    def _check(self, gate):
        for q in gate.qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(_BAD_QUBIT_VALUE_ERROR_MSG.format(q, self.num_qubits))


    def append(self, gate):
        '''
        Place gate in the earliest layer after every earlier gate on its qubits
        '''
        self._check(gate)
        layer = max(self._frontier[q] for q in gate.qubits)
        while len(self.layers) <= layer:
            self.layers.append([])
        self.layers[layer].append(gate)
        for q in gate.qubits:
            self._frontier[q] = layer + 1
        return self


    def extend(self, gates):
        for gate in gates:
            self.append(gate)
        return self


    def add_layer(self, gates):
        '''
        Append a whole layer after everything placed so far
        '''
        used = set()
        for gate in gates:
            self._check(gate)
            for q in gate.qubits:
                if q in used:
                    raise ValueError(_BAD_OVERLAP_VALUE_ERROR_MSG.format(q))
                used.add(q)
        self.layers.append(list(gates))
        self._frontier = [len(self.layers)] * self.num_qubits
        return self


    def barrier(self, qubits=None):
        '''
        Hold the given qubits (all by default) until the latest of them is free
        '''
        qubits = range(self.num_qubits) if qubits is None else list(qubits)
        mark = max(self._frontier[q] for q in qubits)
        for q in qubits:
            self._frontier[q] = mark
        return self


    @property
    def depth(self):
        return len(self.layers)


    def gates(self):
        for layer in self.layers:
            for gate in layer:
                yield gate


    def gate_count(self):
        return Counter(gate.kind for gate in self.gates())


    def validate(self):
        for layer in self.layers:
            used = set()
            for gate in layer:
                self._check(gate)
                for q in gate.qubits:
                    if q in used:
                        raise ValueError(_BAD_OVERLAP_VALUE_ERROR_MSG.format(q))
                    used.add(q)
        return True


    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.num_qubits == other.num_qubits
            and [frozenset(layer) for layer in self.layers] == [frozenset(layer) for layer in other.layers])


    def __repr__(self):
        return "Circuit(num_qubits={}, depth={}, gates={})".format(self.num_qubits, self.depth, sum(1 for _ in self.gates()))


def apply_gate(state, gate):
    '''
    @return (state, probability) where probability is 1 for unitary gates
    '''
    if gate.kind is GateKind.U1Q:
        return sv.apply_1q(state, gate.qubits[0], gate.unitary), 1.0
    if gate.kind is GateKind.CNOT:
        return sv.apply_cnot(state, *gate.qubits), 1.0
    if gate.kind is GateKind.CSWAP:
        return sv.apply_cswap(state, *gate.qubits), 1.0
    if gate.kind is GateKind.CCSWAP:
        c1, c2, a, b = gate.qubits
        return sv.apply_ccswap(state, c1, c2, gate.polarity[0], gate.polarity[1], a, b), 1.0
    probability, state = sv.project(state, gate.qubits[0], ONTO_STATES[gate.onto])
    return state, probability


def simulate(circuit, state):
    '''
    Run a circuit on a PureState, post-selecting every projection

    @return (state, product of the projection probabilities)
    '''
    if state.num_qubits != circuit.num_qubits:
        raise ValueError("Circuit has {} qubits, state has {}".format(circuit.num_qubits, state.num_qubits))
    total = 1.0
    for gate in circuit.gates():
        state, probability = apply_gate(state, gate)
        total *= probability
    return state, total
