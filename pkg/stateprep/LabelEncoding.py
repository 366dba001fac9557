"""
Data vectors and their label encoding states.

The label state of a vector v of length N = 2^n lives on n + 1 qubits: the first n
hold the index i and the last one, the value qubit, holds v_i|0> + (1 - v_i)|1>. Its
squared norm is A = sum |v_i|^2 + |1 - v_i|^2.
"""

# from the standard library
import logging

# third party
import numpy as np

# our code
from stateprep.StateVector import PureState, apply_1q, apply_cnot, fidelity

# Definitions aka constants
NORM_TOLERANCE = 1e-12
DECODE_TOLERANCE = 1e-8

_BAD_LENGTH_MSG = "Vector length {} is not a power of two >= 2; zero-pad the data first"
_BAD_NORM_MSG = "Amplitude vector must have unit norm, got squared norm {}"


class NotALabelStateError(ValueError):
    """
    Exception to raise when a register does not have the label encoding form
    """

    pass


def _check_length(size):
    if size < 2 or size & (size - 1):
        raise ValueError(_BAD_LENGTH_MSG.format(size))


class AmplitudeVector:
    '''
    Classical data u with unit 2-norm
    '''

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=complex).ravel()
        _check_length(entries.shape[0])
        weight = float(np.vdot(entries, entries).real)
        if abs(weight - 1.0) > NORM_TOLERANCE:
            raise ValueError(_BAD_NORM_MSG.format(weight))
        self.entries = entries


    @classmethod
    def from_raw(cls, entries):
        '''
        Normalize arbitrary nonzero data
        '''
        entries = np.asarray(entries, dtype=complex).ravel()
        weight = float(np.vdot(entries, entries).real)
        if weight == 0.0:
            raise ValueError("All-zero data cannot be amplitude encoded")
        if abs(weight - 1.0) > NORM_TOLERANCE:
            logging.info("Renormalizing input vector with squared norm %.17g", weight)
        return cls(entries / np.sqrt(weight))


    @property
    def N(self):
        return self.entries.shape[0]


    @property
    def n(self):
        return self.N.bit_length() - 1


    @property
    def is_positive(self):
        return bool(np.all(np.abs(self.entries.imag) <= NORM_TOLERANCE) and np.all(self.entries.real >= 0))


class ResizedVector:
    '''
    A vector with entries in the closed unit disk. Vectors produced by resize
    have maximum modulus exactly one; decomposition parts and cutoff vectors
    may fall short of it.
    '''

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=complex).ravel()
        _check_length(entries.shape[0])
        if np.any(np.abs(entries) > 1.0 + NORM_TOLERANCE):
            raise ValueError("Resized entries must lie in the unit disk")
        self.entries = entries
        self.positive_only = bool(np.all(np.abs(entries.imag) <= NORM_TOLERANCE) and np.all(entries.real >= -NORM_TOLERANCE))


    @property
    def N(self):
        return self.entries.shape[0]


    @property
    def n(self):
        return self.N.bit_length() - 1


    def halves(self):
        middle = self.N // 2
        return ResizedVector(self.entries[:middle]), ResizedVector(self.entries[middle:])


    def __repr__(self):
        return "ResizedVector({})".format(np.array2string(self.entries, precision=6))


class LabelState:
    '''
    An (n+1)-qubit label encoding register with its squared norm
    '''

    def __init__(self, n, state, norm_sq):
        if state.num_qubits != n + 1:
            raise ValueError("A label state over {} entries needs {} qubits, got {}".format(1 << n, n + 1, state.num_qubits))
        self.n = n
        self.state = state
        self.norm_sq = float(norm_sq)


    @property
    def N(self):
        return 1 << self.n


    def __repr__(self):
        return "LabelState(n={}, norm_sq={})".format(self.n, self.norm_sq)


def resize(u):
    '''
    v = u / max|u_i|
    '''
    peak = float(np.max(np.abs(u.entries)))
    if peak == 0.0:
        raise ValueError("All-zero data cannot be resized")
    return ResizedVector(u.entries / peak)


def label_norm_sq(entries):
    entries = np.asarray(entries, dtype=complex)
    return float(np.sum(np.abs(entries) ** 2 + np.abs(1.0 - entries) ** 2))


def label_amplitudes(entries):
    '''
    Unnormalized amplitudes of sum_i |i>(v_i|0> + (1 - v_i)|1>)
    '''
    entries = np.asarray(entries, dtype=complex)
    return np.stack([entries, 1.0 - entries], axis=1).reshape(-1)


def encode(v):
    '''
    Label state of v by direct amplitude assignment, any power-of-two length
    '''
    amps = label_amplitudes(v.entries)
    return LabelState(v.n, PureState(amps), label_norm_sq(v.entries))


def base_gates(v):
    '''
    Two-qubit factorization of the base case for real entries.

    An RY on the label qubit splits the weight between i = 0 and i = 1, then a
    uniformly controlled RY rotates the value qubit: RY(phi_1), CNOT, RY(phi_2),
    CNOT gives RY(beta_0) when the label is 0 and RY(beta_1) when it is 1 with
    phi_1 = (beta_0 + beta_1)/2 and phi_2 = (beta_0 - beta_1)/2.

    @return list of ("u", qubit, matrix) and ("cx", control, target) tuples in
        application order, starting from |00>
    @raise ValueError for complex entries or N != 2
    '''
    if v.N != 2:
        raise ValueError("The base case needs N = 2, got {}".format(v.N))
    if np.any(np.abs(v.entries.imag) > NORM_TOLERANCE):
        raise ValueError("The gate factorization covers real entries only")

    entries = v.entries.real
    pairs = np.stack([entries, 1.0 - entries], axis=1)
    weights = np.sqrt(np.sum(pairs ** 2, axis=1))
    alpha = 2.0 * np.arctan2(weights[1], weights[0])
    beta = 2.0 * np.arctan2(pairs[:, 1], pairs[:, 0])
    phi_1 = (beta[0] + beta[1]) / 2.0
    phi_2 = (beta[0] - beta[1]) / 2.0

    return [
        ("u", 0, ry(alpha)),
        ("u", 1, ry(phi_1)),
        ("cx", 0, 1),
        ("u", 1, ry(phi_2)),
        ("cx", 0, 1),
    ]


def ry(theta):
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def build_base(v):
    '''
    Base case label state for N = 2: amplitudes assigned directly, then, for
    real entries, checked against the gate factorization run from |00>
    '''
    if v.N != 2:
        raise ValueError("The base case needs N = 2, got {}".format(v.N))

    label = encode(v)
    if not np.any(np.abs(v.entries.imag) > NORM_TOLERANCE):
        state = PureState.basis("00")
        for gate in base_gates(v):
            if gate[0] == "u":
                state = apply_1q(state, gate[1], gate[2])
            else:
                state = apply_cnot(state, gate[1], gate[2])
        if fidelity(state, label.state) < 1.0 - 1e-10:
            raise ArithmeticError("Base case factorization disagrees with amplitude assignment for {}".format(v))
    return label


def decode(ls):
    '''
    Read v back from a label state.

    For each label i the two value amplitudes must sum to one common constant
    c (relative tolerance 1e-8); then v_i = amp(i, 0) / c.

    @raise NotALabelStateError otherwise
    '''
    pairs = ls.state.amps.reshape(-1, 2)
    sums = pairs[:, 0] + pairs[:, 1]
    common = sums[int(np.argmax(np.abs(sums)))]
    if abs(common) == 0.0 or np.max(np.abs(sums - common)) > DECODE_TOLERANCE * abs(common):
        raise NotALabelStateError("not a label state: value amplitudes do not share a common sum")

    entries = pairs[:, 0] / common
    expected = abs(common) ** 2 * ls.norm_sq
    if abs(expected - 1.0) > DECODE_TOLERANCE:
        logging.debug("Label state norm bookkeeping off by %.3g", expected - 1.0)
    return ResizedVector(entries)


def target_state(u):
    '''
    n-qubit amplitude encoding sum_i u_i |i>
    '''
    return PureState(u.entries)


def pad_to_power_of_two(entries):
    entries = np.asarray(entries, dtype=complex).ravel()
    size = max(2, 1 << max(0, (entries.shape[0] - 1).bit_length()))
    padded = np.zeros(size, dtype=complex)
    padded[:entries.shape[0]] = entries
    return padded


def read_vector_file(path, pad=False):
    '''
    Read one complex entry per line written as "re im". Blank lines and lines
    starting with # are skipped.

    @return AmplitudeVector, renormalized when needed
    '''
    values = []
    with open(path, "r", encoding="ascii") as handle:
        for number, line in enumerate(handle, start=1):
            tokens = line.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            if len(tokens) != 2:
                raise ValueError("{}:{}: expected 're im', got {!r}".format(path, number, line.strip()))
            values.append(complex(float(tokens[0]), float(tokens[1])))
    if pad:
        values = pad_to_power_of_two(values)
    return AmplitudeVector.from_raw(values)


def write_vector_file(path, entries):
    with open(path, "w", encoding="ascii") as handle:
        for value in np.asarray(entries, dtype=complex):
            handle.write("{} {}\n".format(format(value.real + 0.0, ".17g"), format(value.imag + 0.0, ".17g")))
