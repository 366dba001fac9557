"""
The concatenation circuit, the value qubit projection, and the four-vector
assembly for complex data.

Register layout of a concatenation: qubit 0 is the |+> control, then the n + 1
qubits of input a, then the n + 1 qubits of input b. Qubit k of a is swapped with
qubit k of b under the control, and the value qubit of b (the last qubit) is
projected onto |+>. On success the first n + 2 qubits hold the label state of
a (+) b and the last n + 1 qubits hold the uniform label state.
"""

# from the standard library
from dataclasses import dataclass
import logging
from typing import Optional

# third party
import numpy as np

# our code
from stateprep.LabelEncoding import LabelState, ResizedVector, decode, encode, label_norm_sq
from stateprep.StateVector import (ImpossibleOutcomeError, MINUS, PLUS, ZERO, PureState,
    apply_ccswap, apply_cswap, fidelity, project, remove_factor)

# Definitions aka constants
PROBABILITY_TOLERANCE = 1e-10
RELATIVE_TOLERANCE = 1e-9

ANCILLA_1 = np.array([1, 1j], dtype=complex) * np.sqrt(0.5)
ANCILLA_2 = np.array([1, -1], dtype=complex) * np.sqrt(0.5)

# register swapped with A, and the control polarities of (ancilla 1, ancilla 2)
CCSWAP_GROUPS = (
    (1, (0, 1)),
    (2, (1, 0)),
    (3, (1, 1)),
)


class ZeroSuccessProbabilityError(ValueError):
    """
    Exception to raise when a projection can never succeed because the data
    vector is zero
    """

    pass


class ProbabilityMismatchError(ArithmeticError):
    """
    Exception to raise when the closed form probability and the simulated
    projection probability disagree
    """

    pass


@dataclass
class ConcatOutcome:
    success_prob: float
    simulated_prob: float
    post_state_on_success: LabelState
    disentangled_factor: PureState
    prefactor_norm_sq: float


@dataclass
class ComplexDecomposition:
    va: ResizedVector
    vb: ResizedVector
    vc: ResizedVector
    vd: ResizedVector

    def parts(self):
        return (self.va, self.vb, self.vc, self.vd)

    def reconstruct(self):
        return self.va.entries - self.vb.entries + 1j * self.vc.entries - 1j * self.vd.entries


@dataclass
class ComplexOutcome:
    p_s_prime: float
    simulated_prob: float
    psi0_norm_sq: float
    psi1_norm_sq: float
    lower_bound: float
    amplitude_state: PureState


def compute_p_plus(A_a, A_b, N):
    '''
    Success probability N (A_a + A_b) / (4 A_a A_b) of merging two label
    states of dimension N with squared norms A_a and A_b
    '''
    if A_a <= 0 or A_b <= 0:
        raise ValueError("Label norms must be positive, got {} and {}".format(A_a, A_b))
    return N * (A_a + A_b) / (4.0 * A_a * A_b)


def concatenate_norms(A_a, A_b, N):
    '''
    @return (p_plus, norm_sq of the merged label state)
    '''
    return compute_p_plus(A_a, A_b, N), A_a + A_b


def complex_p_plus(v):
    '''
    p_plus of merging the two halves of v directly, for the complex route
    '''
    left, right = np.split(np.asarray(v.entries, dtype=complex), 2)
    return compute_p_plus(label_norm_sq(left), label_norm_sq(right), left.shape[0])


def positive_success_prob(entries):
    '''
    p_s = sum |v_i|^2 / A of projecting the value qubit onto |0>
    '''
    entries = np.asarray(entries, dtype=complex)
    return float(np.sum(np.abs(entries) ** 2)) / label_norm_sq(entries)


def complex_success_prob(entries, norms):
    '''
    p_s' = N^3 sum |v_i|^2 / (64 A_a A_b A_c A_d) of the four-vector assembly
    '''
    entries = np.asarray(entries, dtype=complex)
    N = entries.shape[0]
    return N ** 3 * float(np.sum(np.abs(entries) ** 2)) / (64.0 * float(np.prod(norms)))


def _check_close(what, expected, actual, tolerance=PROBABILITY_TOLERANCE):
    if abs(expected - actual) > tolerance:
        raise ProbabilityMismatchError("{}: closed form {!r} vs simulated {!r}".format(what, expected, actual))


def concatenate(a, b, rng=None, outcome=None):
    '''
    Run the concatenation circuit on label states a and b.

    @param rng - numpy Generator used to sample the projection when outcome
        is None
    @param (bool)outcome - force the sampled result
    @return (ConcatOutcome, sampled_success, state); state is the merged
        LabelState's PureState on success and the full orthogonal branch
        otherwise
    '''
    if a.n != b.n:
        raise ValueError("Cannot concatenate label states of {} and {} entries".format(a.N, b.N))

    width = a.n + 1
    value_qubit = 2 * width
    amps = np.kron(PLUS, np.kron(a.state.amps, b.state.amps))
    state = PureState(amps, a.norm_sq * b.norm_sq, normalize=False)
    for k in range(width):
        state = apply_cswap(state, 0, 1 + k, 1 + width + k)

    p_plus = compute_p_plus(a.norm_sq, b.norm_sq, a.N)
    simulated, success_state = project(state, value_qubit, PLUS)
    _check_close("p_plus", p_plus, simulated)

    merged, residue = remove_factor(success_state, list(range(width + 1)))
    if fidelity(residue, encode(ResizedVector(np.full(a.N, 0.5))).state) < 1.0 - PROBABILITY_TOLERANCE:
        raise ArithmeticError("Trailing register is not the uniform label state")

    label = LabelState(a.n + 1, merged, a.norm_sq + b.norm_sq)
    attempted = ConcatOutcome(p_plus, simulated, label, residue, (a.norm_sq + b.norm_sq) / 2.0)

    if outcome is None:
        if rng is None:
            raise ValueError("Either rng or outcome is required")
        outcome = bool(rng.random() < p_plus)

    if outcome:
        return attempted, True, label.state

    logging.debug("Concatenation of %d-entry inputs failed", a.N)
    _, failed_state = project(state, value_qubit, MINUS)
    return attempted, False, failed_state


def project_value_qubit(ls):
    '''
    Project the value qubit onto |0>, turning the label state into the
    amplitude encoding of v

    @return (p_s, n-qubit amplitude state)
    '''
    v = decode(ls).entries
    weight = float(np.sum(np.abs(v) ** 2))
    if weight == 0.0:
        raise ZeroSuccessProbabilityError("zero success probability: the data vector is zero")
    p_s = positive_success_prob(v)

    try:
        simulated, state = project(ls.state, ls.n, ZERO)
    except ImpossibleOutcomeError as e:
        raise ZeroSuccessProbabilityError("zero success probability: {}".format(e))
    _check_close("p_s", p_s, simulated)

    amps = state.amps.reshape(-1, 2)[:, 0]
    return p_s, PureState(amps)


def decompose_complex(v):
    '''
    Split v into four nonnegative vectors with v = va - vb + i vc - i vd
    '''
    entries = v.entries
    return ComplexDecomposition(
        ResizedVector(np.maximum(entries.real, 0.0)),
        ResizedVector(np.maximum(-entries.real, 0.0)),
        ResizedVector(np.maximum(entries.imag, 0.0)),
        ResizedVector(np.maximum(-entries.imag, 0.0)),
    )


def ancilla_product():
    return PureState(np.kron(ANCILLA_1, ANCILLA_2))


def assemble_complex_report(d, states):
    '''
    Simulate the four-vector assembly and return every probability involved.

    Qubits 0 and 1 are the ancillas, followed by registers A, B, C and D of
    n + 1 qubits each. Three groups of CC-swaps exchange A with B, C and D; then
    both ancillas and the value qubits of B, C and D are projected onto |+>,
    leaving sum_i v_i|i>|-> in register A.
    '''
    if len(states) != 4:
        raise ValueError("Four label states are required, got {}".format(len(states)))
    for part, ls in zip(d.parts(), states):
        if ls.N != part.N or not np.allclose(decode(ls).entries, part.entries, rtol=0.0, atol=1e-8):
            raise ValueError("Label state does not decode to its decomposition part")

    width = states[0].n + 1
    N = states[0].N
    amps = ancilla_product().amps
    psi0_norm_sq = 1.0
    for ls in states:
        amps = np.kron(amps, ls.state.amps)
        psi0_norm_sq *= ls.norm_sq
    state = PureState(amps, psi0_norm_sq, normalize=False)

    base = 2
    for register, (p1, p2) in CCSWAP_GROUPS:
        for k in range(width):
            state = apply_ccswap(state, 0, 1, p1, p2, base + k, base + register * width + k)

    simulated = 1.0
    for q in [0, 1] + [base + register * width + width - 1 for register in (1, 2, 3)]:
        probability, state = project(state, q, PLUS)
        simulated *= probability

    v = d.reconstruct()
    weight = float(np.sum(np.abs(v) ** 2))
    # ancillas written unnormalized, as sums of four unit-weight terms
    psi0_norm_sq *= 4.0
    psi1_norm_sq = simulated * psi0_norm_sq
    p_s_prime = complex_success_prob(v, [ls.norm_sq for ls in states])
    _check_close("p_s_prime", p_s_prime, simulated)

    amplitude_state, _ = remove_factor(state, list(range(base, base + width - 1)))
    return ComplexOutcome(p_s_prime, simulated, psi0_norm_sq, psi1_norm_sq,
        weight / (64.0 * N), amplitude_state)


def assemble_complex(d, states, rng=None, outcome=None):
    '''
    @return (p_s_prime, sampled_success, state); state is the amplitude
        encoding on success and None otherwise
    '''
    report = assemble_complex_report(d, states)
    if outcome is None:
        if rng is None:
            raise ValueError("Either rng or outcome is required")
        outcome = bool(rng.random() < report.p_s_prime)
    if outcome:
        return report.p_s_prime, True, report.amplitude_state
    return report.p_s_prime, False, None
