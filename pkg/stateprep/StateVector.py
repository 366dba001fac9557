"""
Dense statevector engine.

Qubit 0 is the most significant bit of a basis index, so the amplitude array of an
n-qubit state reshaped to (2,)*n has qubit k on axis k. Kets that are only defined up
to normalization are carried as a normalized amplitude array plus the squared norm the
unnormalized ket would have had.
"""

# from the standard library
import logging

# third party
import numpy as np

# Definitions aka constants
MAX_DENSE_QUBITS = 24
UNITARY_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-12
PURITY_TOLERANCE = 1e-10

_BAD_QUBIT_INDEX_MSG = "Qubit index {} is out of range for a {} qubit state"
_BAD_DUPLICATE_MSG = "Qubit indices {} must be distinct"
_BAD_SUBSET_MSG = "Subset {} must be a nonempty proper subset of the {} qubits"

ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) * np.sqrt(0.5)
MINUS = np.array([1, -1], dtype=complex) * np.sqrt(0.5)

X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) * np.sqrt(0.5)


class NonUnitaryGateError(ValueError):
    """
    Exception to raise when a matrix handed to apply_1q is not unitary
    """

    pass


class ImpossibleOutcomeError(ArithmeticError):
    """
    Exception to raise when a projection selects a branch with zero norm
    """

    pass


class PureState:
    '''
    A normalized amplitude array together with the squared norm of the ket it
    stands for
    '''

    def __init__(self, amps, norm_sq=1.0, normalize=True):
        '''
        @param amps - array like of 2^k complex amplitudes
        @param (float)norm_sq - squared norm of the unnormalized ket
        @param (bool)normalize - rescale amps to unit norm, folding the scale
            into norm_sq
        '''
        amps = np.asarray(amps, dtype=complex).ravel()
        size = amps.shape[0]
        num_qubits = size.bit_length() - 1
        if size < 2 or (1 << num_qubits) != size:
            raise ValueError("Amplitude array length {} is not a power of two".format(size))
        if num_qubits > MAX_DENSE_QUBITS:
            raise ValueError("{} qubits exceeds the dense cap of {}".format(num_qubits, MAX_DENSE_QUBITS))

        if normalize:
            weight = float(np.vdot(amps, amps).real)
            if weight == 0.0:
                raise ImpossibleOutcomeError("impossible outcome: zero-norm amplitudes")
            amps = amps / np.sqrt(weight)
            norm_sq = norm_sq * weight

        if norm_sq < 0:
            raise ValueError("norm_sq must be nonnegative, got {}".format(norm_sq))

        self.num_qubits = num_qubits
        self.amps = amps
        self.norm_sq = float(norm_sq)


    @classmethod
    def basis(cls, bits):
        '''
        The computational basis state |bits>, bits given as a string or a
        sequence of 0/1 with qubit 0 first
        '''
        bits = [int(b) for b in bits]
        amps = np.zeros(1 << len(bits), dtype=complex)
        amps[int("".join(str(b) for b in bits), 2)] = 1.0
        return cls(amps)


    @classmethod
    def product(cls, *factors):
        '''
        Tensor product of single qubit vectors and/or PureStates, left factor
        on the lowest qubit indices. norm_sq multiplies.
        '''
        amps = np.ones(1, dtype=complex)
        norm_sq = 1.0
        for factor in factors:
            if isinstance(factor, PureState):
                amps = np.kron(amps, factor.amps)
                norm_sq *= factor.norm_sq
            else:
                amps = np.kron(amps, np.asarray(factor, dtype=complex))
        return cls(amps, norm_sq)


    def tensor(self):
        return self.amps.reshape((2,) * self.num_qubits)


    def copy(self):
        return PureState(self.amps.copy(), self.norm_sq, normalize=False)


    def with_amps(self, amps):
        return PureState(amps, self.norm_sq, normalize=False)


    def canonical(self):
        '''
        Copy of the state with the global phase fixed so the first amplitude
        with non-negligible modulus is real positive
        '''
        magnitudes = np.abs(self.amps)
        lead = int(np.argmax(magnitudes > NORM_TOLERANCE * magnitudes.max()))
        phase = self.amps[lead] / magnitudes[lead]
        return PureState(self.amps * np.conj(phase), self.norm_sq, normalize=False)


    def __repr__(self):
        return "PureState(num_qubits={}, norm_sq={})".format(self.num_qubits, self.norm_sq)


def fidelity(a, b):
    '''
    |<a|b>|^2 of two normalized states of the same size
    '''
    if a.num_qubits != b.num_qubits:
        raise ValueError("Cannot compare a {} qubit state with a {} qubit state".format(a.num_qubits, b.num_qubits))
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def _check_qubits(state, *qubits):
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise ValueError(_BAD_QUBIT_INDEX_MSG.format(q, state.num_qubits))
    if len(set(qubits)) != len(qubits):
        raise ValueError(_BAD_DUPLICATE_MSG.format(qubits))


def _selector(state, fixed):
    '''
    Index tuple picking the slice where each qubit in fixed has the given bit,
    and a function mapping a full qubit index to its axis in that slice
    '''
    index = tuple(fixed[q] if q in fixed else slice(None) for q in range(state.num_qubits))
    def axis(q):
        return q - sum(1 for f in fixed if f < q)
    return index, axis


def is_unitary(u, tolerance=UNITARY_TOLERANCE):
    u = np.asarray(u, dtype=complex)
    return u.shape == (2, 2) and np.allclose(u.conj().T @ u, np.eye(2), rtol=0.0, atol=tolerance)


def apply_1q(state, q, u):
    '''
    Apply a 2x2 unitary to qubit q

    @raise NonUnitaryGateError when u is not unitary within 1e-10
    '''
    _check_qubits(state, q)
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise NonUnitaryGateError("non-unitary gate: {}".format(u.tolist()))

    psi = np.tensordot(u, state.tensor(), axes=([1], [q]))
    psi = np.moveaxis(psi, 0, q)
    return state.with_amps(psi.reshape(-1))


def apply_cnot(state, control, target):
    _check_qubits(state, control, target)
    psi = state.tensor().copy()
    index, axis = _selector(state, {control: 1})
    psi[index] = np.flip(psi[index], axis=axis(target)).copy()
    return state.with_amps(psi.reshape(-1))


def apply_cswap(state, control, a, b):
    '''
    Exchange qubits a and b on the basis states where control is 1
    '''
    _check_qubits(state, control, a, b)
    psi = state.tensor().copy()
    index, axis = _selector(state, {control: 1})
    psi[index] = np.swapaxes(psi[index], axis(a), axis(b)).copy()
    return state.with_amps(psi.reshape(-1))


def apply_ccswap(state, c1, c2, c1_polarity, c2_polarity, a, b):
    '''
    Exchange qubits a and b on the basis states where c1 reads c1_polarity
    and c2 reads c2_polarity
    '''
    _check_qubits(state, c1, c2, a, b)
    if c1_polarity not in (0, 1) or c2_polarity not in (0, 1):
        raise ValueError("Control polarities must be 0 or 1, got ({}, {})".format(c1_polarity, c2_polarity))
    psi = state.tensor().copy()
    index, axis = _selector(state, {c1: c1_polarity, c2: c2_polarity})
    psi[index] = np.swapaxes(psi[index], axis(a), axis(b)).copy()
    return state.with_amps(psi.reshape(-1))


def project(state, q, onto):
    '''
    Project qubit q onto the single qubit state onto

    @return (probability, post_state) where post_state is renormalized and its
        norm_sq is the norm of the unnormalized branch, state.norm_sq * probability
    @raise ImpossibleOutcomeError when the branch has zero norm
    '''
    _check_qubits(state, q)
    onto = np.asarray(onto, dtype=complex)
    if abs(np.vdot(onto, onto).real - 1.0) > NORM_TOLERANCE:
        raise ValueError("Projection target must be normalized")

    reduced = np.tensordot(onto.conj(), state.tensor(), axes=([0], [q]))
    probability = float(np.vdot(reduced, reduced).real)
    if probability <= NORM_TOLERANCE ** 2:
        raise ImpossibleOutcomeError("impossible outcome: projecting qubit {} has probability {}".format(q, probability))

    psi = np.moveaxis(np.multiply.outer(onto, reduced), 0, q)
    amps = psi.reshape(-1) / np.sqrt(probability)
    logging.debug("Projected qubit %d with probability %.12g", q, probability)
    return probability, PureState(amps, state.norm_sq * probability, normalize=False)


def _bipartition(state, subset):
    subset = list(subset)
    _check_qubits(state, *subset)
    if not subset or len(subset) >= state.num_qubits:
        raise ValueError(_BAD_SUBSET_MSG.format(subset, state.num_qubits))
    rest = [q for q in range(state.num_qubits) if q not in subset]
    psi = np.transpose(state.tensor(), subset + rest)
    return psi.reshape(1 << len(subset), -1)


def purity(state, subset):
    '''
    tr(rho^2) of the reduced density matrix on subset
    '''
    weights = np.linalg.svd(_bipartition(state, subset), compute_uv=False) ** 2
    return float(np.sum(weights ** 2))


def factor_check(state, subset):
    '''
    Decide whether state is a product between subset and the remaining qubits

    @return (is_product, factor) where factor is the phase canonical state of
        the subset qubits (in the given order) or None when entangled
    '''
    matrix = _bipartition(state, subset)
    left, singular, _ = np.linalg.svd(matrix, full_matrices=False)
    weights = singular ** 2
    if float(np.sum(weights ** 2)) < 1.0 - PURITY_TOLERANCE:
        return False, None
    return True, PureState(left[:, 0]).canonical()


def remove_factor(state, subset):
    '''
    Split a product state, returning (factor on subset, factor on the rest),
    each phase canonical with norm_sq 1

    @raise ValueError when the state is entangled across the cut
    '''
    matrix = _bipartition(state, subset)
    left, singular, right = np.linalg.svd(matrix, full_matrices=False)
    if float(np.sum(singular ** 4)) < 1.0 - PURITY_TOLERANCE:
        raise ValueError("State is entangled across {}".format(list(subset)))
    return PureState(left[:, 0]).canonical(), PureState(right[0, :]).canonical()
