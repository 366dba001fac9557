"""
Random data models and empirical checks of the projection probability bounds.

Two data models are drawn: case 1 takes a_i = b_i e^(i phi_i) with b_i uniform
on [-1, 1] and phi_i uniform on [0, pi]; case 2 takes real and imaginary parts
i.i.d. standard normal. Positive data uses u_i = |a_i| / ||a||, complex data
u_i = a_i / ||a||.

Proven bounds are checked one-sided: a bound that fails with probability at
most q passes when the observed failure fraction is below q plus three binomial
standard deviations. The Chernoff and Markov stages behind each bound are
evaluated from their definitions and reported next to the targets they are
meant to reach; a stage that misses its target is reported, never patched.
"""

# from the standard library
from dataclasses import asdict, dataclass, field
import functools
import logging
import math
from typing import List, Optional

# third party
import numpy as np
from scipy import optimize, special

# our code
from stateprep import ConcatProtocol as cp
from stateprep import LabelEncoding as le
from stateprep.PrepMode import SamplingCase
from stateprep.TrialPool import TrialPool

# Definitions aka constants
SIGMAS = 3.0
ASSEMBLY_FACTOR = 64.0
DAWSON_RELAXATION = 0.9
RESULT4_KEY = 4
RESULT5_KEY = 5
TAIL_KEY = 6

_BAD_PROBABILITY_MSG = "{} must lie in (0, 1), got {}"


def _check_open_unit(name, value):
    if not 0.0 < value < 1.0:
        raise ValueError(_BAD_PROBABILITY_MSG.format(name, value))


def _check_size(N):
    if N < 2 or N & (N - 1):
        raise ValueError("N must be a power of two >= 2, got {}".format(N))


@dataclass
class SamplingModel:
    case: SamplingCase
    N: int
    seed: int = 0

    def __post_init__(self):
        self.case = SamplingCase(self.case)
        _check_size(self.N)


    def draw(self, rng):
        '''
        Raw data a of length N
        '''
        if self.case is SamplingCase.UNIFORM:
            b = rng.uniform(-1.0, 1.0, self.N)
            phi = rng.uniform(0.0, math.pi, self.N)
            return b * np.exp(1j * phi)
        return rng.standard_normal(self.N) + 1j * rng.standard_normal(self.N)


    def sample(self, rng, positive=False):
        return amplitude_vector(self.draw(rng), positive)


def amplitude_vector(a, positive=False):
    '''
    u = a / ||a||, or |a| / ||a|| for positive data
    '''
    a = np.abs(a) if positive else np.asarray(a, dtype=complex)
    return le.AmplitudeVector(a / np.linalg.norm(a))


def sample(model, rng, positive=False):
    return model.sample(rng, positive)


def positive_success(u):
    '''
    p_s of preparing the positive data |u|
    '''
    return cp.positive_success_prob(le.resize(le.AmplitudeVector(np.abs(u.entries))).entries)


def complex_success(entries):
    '''
    p_s' of the four-vector assembly of a vector in the unit disk
    '''
    parts = cp.decompose_complex(le.ResizedVector(entries)).parts()
    return cp.complex_success_prob(entries, [le.label_norm_sq(part.entries) for part in parts])


def success_probabilities(u):
    '''
    @return (p_s of |u|, p_s' of u)
    '''
    return positive_success(u), complex_success(le.resize(u).entries)


@dataclass
class CutoffPlan:
    u_cut: float
    epsilon_th: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        if not self.u_cut > 0.0:
            raise ValueError("u_cut must be positive, got {}".format(self.u_cut))
        if self.epsilon_th is not None:
            _check_open_unit("epsilon_th", self.epsilon_th)
        if self.delta is not None:
            _check_open_unit("delta", self.delta)


    @classmethod
    def prescribed(cls, epsilon_th, delta, N):
        '''
        u_cut^2 = (8/N) (4/delta)^(1/N) log(12 / (epsilon_th delta))
        '''
        _check_open_unit("epsilon_th", epsilon_th)
        _check_open_unit("delta", delta)
        return cls(math.sqrt(prescribed_u_cut_sq(epsilon_th, delta, N)), epsilon_th, delta)


def prescribed_u_cut_sq(epsilon_th, delta, N):
    return 8.0 / N * (4.0 / delta) ** (1.0 / N) * math.log(12.0 / (epsilon_th * delta))


def cutoff_vector(u, plan):
    '''
    v~_i = arg(u_i) min(|u_i| / u_cut, 1)
    '''
    entries = np.asarray(u.entries, dtype=complex)
    modulus = np.abs(entries)
    phase = np.divide(entries, modulus, out=np.zeros_like(entries), where=modulus > 0)
    return le.ResizedVector(phase * np.minimum(modulus / plan.u_cut, 1.0))


def fidelity(u, vtilde):
    '''
    |<phi(v~)|phi(u)>|^2 with phi(v~) the normalized v~
    '''
    target = np.asarray(u.entries, dtype=complex)
    prepared = np.asarray(vtilde.entries, dtype=complex)
    if target.shape != prepared.shape:
        raise ValueError("Vectors of {} and {} entries cannot be compared".format(target.shape[0], prepared.shape[0]))
    weight = float(np.vdot(prepared, prepared).real)
    if weight == 0.0:
        raise ValueError("The cut-off vector is zero")
    return min(1.0, float(abs(np.vdot(prepared, target)) ** 2) / (weight * float(np.vdot(target, target).real)))


# Moment generating functions behind the Chernoff steps

def mgf_neg_uniform_sq(t):
    '''
    mean(exp(-t v^2)) for v uniform on [0, 1]
    '''
    root = math.sqrt(t)
    return math.sqrt(math.pi) * special.erf(root) / (2.0 * root)


def mgf_label_uniform(t):
    '''
    mean(exp(t (v^2 + (1 - v)^2))) for v uniform on [0, 1]
    '''
    # e^(t/2) sqrt(pi/2) erfi(sqrt(t/2)) / sqrt(t), through Dawson's function
    return math.exp(t) * math.sqrt(2.0) * special.dawsn(math.sqrt(t / 2.0)) / math.sqrt(t)


def mgf_neg_exponential(t):
    '''
    mean(exp(-t |a|^2)) for case 2 data
    '''
    return 1.0 / (1.0 + 2.0 * t)


def mgf_pos_exponential(t):
    if not t < 0.5:
        raise ValueError("mean(exp(t |a|^2)) diverges for t >= 1/2, got {}".format(t))
    return 1.0 / (1.0 - 2.0 * t)


def mgf_neg_clipped_exponential(t, c):
    '''
    mean(exp(-t min(|a|^2, c)))
    '''
    tail = math.exp(-c * (1.0 + 2.0 * t) / 2.0)
    return (1.0 + 2.0 * t * tail) / (1.0 + 2.0 * t)


def mean_clipped_exponential(c):
    return 2.0 - 2.0 * math.exp(-c / 2.0)


def mean_cut_excess(c):
    '''
    mean(|a| max(0, |a| - c)) for Rayleigh distributed |a|
    '''
    return 2.0 * math.exp(-c * c / 2.0) - c * math.sqrt(math.pi / 2.0) * special.erfc(c / math.sqrt(2.0))


def dawson_relaxation_constant():
    '''
    max over t of mean(exp(t (v^2 + (1 - v)^2))) sqrt(t) / e^t, which the case 1
    derivation relaxes to 0.9
    '''
    best = optimize.minimize_scalar(lambda s: -special.dawsn(s), bounds=(0.0, 3.0), method="bounded")
    return math.sqrt(2.0) * float(special.dawsn(best.x))


def _stage(value, target):
    return {"value": value, "target": target, "within": bool(value <= target * (1.0 + 1e-12))}


def _power(base, N):
    return math.exp(N * math.log(base))


def result4_constants(case, N, delta):
    '''
    @return (C for p_s, C' for p_s')
    '''
    case = SamplingCase(case)
    if case is SamplingCase.UNIFORM:
        x = 0.2 * (delta / 2.0) ** (2.0 / N)
        return x / (1.0 - x), x / ASSEMBLY_FACTOR
    constant = (delta / 2.0) ** (1.0 / N) / (4.0 * math.log(2.0 * N / delta))
    return constant, constant / ASSEMBLY_FACTOR


def case1_chernoff_terms(N, delta):
    '''
    Stages of the case 1 bound on p_s: the lower tail of mean |v|^2 and the
    upper tail of the label norm, each at most delta/2
    '''
    _check_open_unit("delta", delta)
    x = 0.2 * (delta / 2.0) ** (2.0 / N)
    y = 1.0 - x
    t1 = 1.0 / (2.0 * x)
    t2 = 1.0 / (2.0 - 2.0 * y)
    dawson = dawson_relaxation_constant()
    return {
        "x": x,
        "y": y,
        "t1": t1,
        "t2": t2,
        "low_tail": _stage(_power(mgf_neg_uniform_sq(t1) * math.exp(t1 * x), N), delta / 2.0),
        "low_tail_relaxed": _stage(_power(math.sqrt(math.pi) / 2.0 * math.exp(t1 * x) / math.sqrt(t1), N),
            delta / 2.0),
        "high_tail": _stage(_power(mgf_label_uniform(t2) * math.exp(-t2 * y), N), delta / 2.0),
        "high_tail_relaxed": _stage(_power(DAWSON_RELAXATION * math.exp(t2 * (1.0 - y)) / math.sqrt(t2), N),
            delta / 2.0),
        "dawson_constant": _stage(dawson, DAWSON_RELAXATION),
        "constant": x / y,
    }


def case2_chernoff_terms(N, delta):
    '''
    Stages of the case 2 bound on p_s: the lower tail of mean |a|^2 and the
    upper tail of max |a|^2, each at most delta/2
    '''
    _check_open_unit("delta", delta)
    x = 0.5 * (delta / 2.0) ** (1.0 / N)
    t = 1.0 / x
    a_m_sq = 2.0 * math.log(2.0 * N / delta)
    return {
        "x": x,
        "t": t,
        "a_m_sq": a_m_sq,
        "low_tail": _stage(_power(math.exp(t * x) * mgf_neg_exponential(t), N), delta / 2.0),
        "low_tail_relaxed": _stage(_power(math.exp(t * x) / (2.0 * t), N), delta / 2.0),
        "max_tail": _stage(1.0 - _power(1.0 - math.exp(-a_m_sq / 2.0), N), delta / 2.0),
        "max_tail_union": _stage(N * math.exp(-a_m_sq / 2.0), delta / 2.0),
        "constant": x / (2.0 * math.log(2.0 * N / delta)),
    }


def markov_tail_chain(epsilon_th, delta, N):
    '''
    Markov bound on the clipped mass sum_i Delta_i > N epsilon_th x^2 / 2, one
    value per step of the chain
    '''
    x_sq = (delta / 4.0) ** (1.0 / N) / 2.0
    u_cut_sq = prescribed_u_cut_sq(epsilon_th, delta, N)
    c = math.sqrt(u_cut_sq * N * x_sq)
    exact_mean = mean_cut_excess(c)
    mean_bound = 2.0 * math.exp(-c * c / 2.0)
    steps = [
        ("exact_mean", 2.0 * exact_mean / (epsilon_th * x_sq)),
        ("mean_bound", 2.0 * mean_bound / (epsilon_th * x_sq)),
        ("log_substituted", 4.0 * math.exp(-math.log(144.0 / (epsilon_th * delta) ** 2)) / (epsilon_th * x_sq)),
        ("epsilon_cancelled", 4.0 * epsilon_th * delta ** 2 / (144.0 * x_sq)),
        ("epsilon_dropped", delta ** 2 / (18.0 * (delta / 4.0) ** (1.0 / N))),
        ("root_dropped", delta ** 2 / (18.0 * (delta / 4.0))),
    ]
    values = [value for _, value in steps]
    chain = {
        "x_sq": x_sq,
        "u_cut_sq": u_cut_sq,
        "clip_level": c,
        "mean_excess": exact_mean,
        "mean_excess_bound": mean_bound,
        "steps": [{"step": name, "value": value} for name, value in steps],
        "nondecreasing": all(b >= a * (1.0 - 1e-12) for a, b in zip(values, values[1:])),
        "final": _stage(values[-1], delta / 4.0),
    }
    if not chain["nondecreasing"]:
        logging.warning("Markov chain steps are not nondecreasing: %s", values)
    return chain


def cutoff_lemma_terms(epsilon_th, delta, N):
    '''
    Stages of the fidelity lemma and of the p_s lemma under the prescribed u_cut
    '''
    _check_open_unit("epsilon_th", epsilon_th)
    _check_open_unit("delta", delta)
    root = (delta / 4.0) ** (1.0 / N)
    x_sq = root / 2.0
    t = 1.0 / root
    u_cut_sq = prescribed_u_cut_sq(epsilon_th, delta, N)

    y_sq = 4.0 * N * math.log(8.0 / delta)
    t1 = 1.0 / (4.0 * N)
    t2 = 3.0 / root
    clip = u_cut_sq * y_sq
    return {
        "fidelity": {
            "norm_tail": _stage(_power(math.exp(t * x_sq) * mgf_neg_exponential(t), N), delta / 4.0),
            "norm_tail_relaxed": _stage(_power(math.exp(0.5) / 2.0, N) * delta / 4.0, delta / 4.0),
            "clipped_mass": markov_tail_chain(epsilon_th, delta, N),
        },
        "p_s": {
            "y_sq": y_sq,
            "norm_tail": _stage(math.exp(-t1 * y_sq) * _power(mgf_pos_exponential(t1), N), delta / 4.0),
            "clipped_mean": _stage(root / 3.0, mean_clipped_exponential(clip)),
            "clipped_tail": _stage(_power(mgf_neg_clipped_exponential(t2, clip), N) * math.exp(t2 * N * root / 3.0),
                delta / 4.0),
            "clipped_tail_relaxed": _stage(_power(math.e / 3.0 * root, N), delta / 4.0),
        },
    }


def cp_forms(epsilon_th, delta, N):
    '''
    C_p as stated with u_cut, in printed closed form, with u_cut substituted,
    and with the threshold the derivation carries (y^2 = 4 N log(8/delta))
    '''
    root = (delta / 4.0) ** (1.0 / N)
    u_cut_sq = prescribed_u_cut_sq(epsilon_th, delta, N)
    stated = root / (12.0 * N * u_cut_sq * math.log(4.0 / delta))
    closed = root ** 2 / (96.0 * math.log(8.0 / (epsilon_th * delta)) * math.log(4.0 / delta))
    substituted = root ** 2 / (96.0 * math.log(12.0 / (epsilon_th * delta)) * math.log(4.0 / delta))
    derived = root / (3.0 * u_cut_sq * 4.0 * N * math.log(8.0 / delta))
    forms = {
        "stated": stated,
        "closed": closed,
        "substituted": substituted,
        "derived": derived,
        "stated_matches_substituted": math.isclose(stated, substituted, rel_tol=1e-12),
        "stated_matches_closed": math.isclose(stated, closed, rel_tol=1e-12),
        "omega_form": delta ** (2.0 / N) / (math.log(1.0 / delta) * math.log(1.0 / (delta * epsilon_th))),
    }
    if not forms["stated_matches_closed"]:
        logging.info("C_p closed form %.6g differs from the substituted form %.6g", closed, substituted)
    return forms


@dataclass
class BoundReport:
    name: str
    parameters: dict
    checks: dict
    derivation: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    columns: tuple = ()
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check["passed"] for check in self.checks.values())


    def to_dict(self):
        report = asdict(self)
        del report["rows"]
        del report["columns"]
        report["passed"] = self.passed
        return report


def violation_check(violations, trials, allowed):
    '''
    One-sided check: the failure fraction may exceed allowed by SIGMAS
    binomial standard deviations
    '''
    fraction = violations / trials
    slack = SIGMAS * math.sqrt(allowed * (1.0 - allowed) / trials)
    return {"violations": int(violations), "trials": trials, "fraction": fraction, "allowed": allowed,
        "slack": slack, "passed": bool(fraction <= allowed + slack)}


def _result4_chunk(case, N, count, streams):
    rng = streams.generator()
    model = SamplingModel(case, N)
    rows = np.empty((count, 4))
    for trial in range(count):
        a = model.draw(rng)
        p_s, p_s_prime = success_probabilities(amplitude_vector(a))
        v = np.abs(a) / np.max(np.abs(a))
        rows[trial] = (p_s, p_s_prime, float(np.max(np.abs(a) ** 2)), float(np.mean(v ** 2)))
    return rows


def _run_chunks(task, trials, seed, key, pool):
    pool = TrialPool() if pool is None else pool
    return np.concatenate(pool.map_chunks(task, trials, seed, key=key))


def verify_result4(model, trials, delta, pool=None):
    '''
    Fraction of sampled instances whose p_s and p_s' fall below the explicit
    lower bounds of the data model
    '''
    if trials < 100:
        raise ValueError("The bound check needs at least 100 trials, got {}".format(trials))
    _check_open_unit("delta", delta)
    N = model.N
    rows = _run_chunks(functools.partial(_result4_chunk, model.case, N), trials, model.seed,
        (RESULT4_KEY, model.case.value, N), pool)
    constant, constant_prime = result4_constants(model.case, N, delta)

    checks = {
        "p_s": violation_check(np.count_nonzero(rows[:, 0] < constant), trials, delta),
        "p_s_prime": violation_check(np.count_nonzero(rows[:, 1] < constant_prime), trials, delta),
    }
    notes = []
    if model.case is SamplingCase.UNIFORM:
        derivation = case1_chernoff_terms(N, delta)
        notes.append("p_s' reuses the threshold x on mean |v|^2 from the p_s derivation with the 1/64 factor "
            "of the four-vector assembly")
        checks["mean_v_sq"] = violation_check(np.count_nonzero(rows[:, 3] < derivation["x"]), trials, delta / 2.0)
    else:
        derivation = case2_chernoff_terms(N, delta)
        checks["max_tail"] = violation_check(np.count_nonzero(rows[:, 2] >= derivation["a_m_sq"]), trials,
            delta / 2.0)

    report = BoundReport("result4", {"case": model.case.value, "N": N, "delta": delta, "trials": trials,
        "seed": model.seed, "constant_p_s": constant, "constant_p_s_prime": constant_prime}, checks, derivation,
        notes, ("trial", "p_s", "p_s_prime", "max_a_sq", "mean_v_sq"),
        [(trial,) + tuple(float(x) for x in row) for trial, row in enumerate(rows)])
    logging.info("Success bounds, case %d N=%d: p_s violations %d/%d, passed %s", model.case.value, N,
        checks["p_s"]["violations"], trials, report.passed)
    return report


def _tail_chunk(case, N, count, streams):
    rng = streams.generator()
    model = SamplingModel(case, N)
    return np.array([float(np.max(np.abs(model.draw(rng)) ** 2)) for _ in range(count)])


def max_tail_check(model, trials, delta, pool=None):
    '''
    Pr[max |a_i|^2 >= 2 log(2N/delta)] < delta/2
    '''
    _check_open_unit("delta", delta)
    peaks = _run_chunks(functools.partial(_tail_chunk, model.case, model.N), trials, model.seed,
        (TAIL_KEY, model.case.value, model.N), pool)
    level = 2.0 * math.log(2.0 * model.N / delta)
    checks = {"max_tail": violation_check(np.count_nonzero(peaks >= level), trials, delta / 2.0)}
    return BoundReport("max_tail", {"case": model.case.value, "N": model.N, "delta": delta, "trials": trials,
        "seed": model.seed, "level": level}, checks, columns=("trial", "max_a_sq"),
        rows=[(trial, float(peak)) for trial, peak in enumerate(peaks)])


def _result5_chunk(N, plan, count, streams):
    rng = streams.generator()
    model = SamplingModel(SamplingCase.GAUSSIAN, N)
    rows = np.empty((count, 3))
    for trial in range(count):
        u = model.sample(rng)
        vtilde = cutoff_vector(u, plan)
        positive = cutoff_vector(le.AmplitudeVector(np.abs(u.entries)), plan)
        rows[trial] = (fidelity(u, vtilde), cp.positive_success_prob(positive.entries),
            complex_success(vtilde.entries))
    return rows


def verify_result5(epsilon_th, delta, N, trials, seed=0, pool=None):
    '''
    Joint check of p_s >= C_p and F >= 1 - epsilon_th for case 2 data cut off
    at the prescribed u_cut
    '''
    _check_size(N)
    if trials < 1:
        raise ValueError("trials must be at least 1, got {}".format(trials))
    plan = CutoffPlan.prescribed(epsilon_th, delta, N)
    forms = cp_forms(epsilon_th, delta, N)
    c_p = forms["closed"]
    rows = _run_chunks(functools.partial(_result5_chunk, N, plan), trials, seed, (RESULT5_KEY, N), pool)

    good_fidelity = rows[:, 0] >= 1.0 - epsilon_th
    good_p_s = rows[:, 1] >= c_p
    good_p_s_prime = rows[:, 2] >= c_p / ASSEMBLY_FACTOR
    checks = {
        "joint": violation_check(np.count_nonzero(~(good_fidelity & good_p_s)), trials, delta),
        "joint_prime": violation_check(np.count_nonzero(~(good_fidelity & good_p_s_prime)), trials, delta),
        "fidelity": violation_check(np.count_nonzero(~good_fidelity), trials, delta / 2.0),
        "p_s": violation_check(np.count_nonzero(~good_p_s), trials, delta / 2.0),
    }
    report = BoundReport("result5", {"epsilon_th": epsilon_th, "delta": delta, "N": N, "trials": trials,
        "seed": seed, "u_cut": plan.u_cut, "c_p": c_p, "c_p_prime": c_p / ASSEMBLY_FACTOR}, checks,
        {"c_p_forms": forms, "lemmas": cutoff_lemma_terms(epsilon_th, delta, N)},
        ["p_s' is checked against C_p / 64, the four-vector assembly factor"],
        ("trial", "fidelity", "p_s", "p_s_prime"),
        [(trial,) + tuple(float(x) for x in row) for trial, row in enumerate(rows)])
    logging.info("Cutoff preparation N=%d: joint violations %d/%d, passed %s", N, checks["joint"]["violations"], trials,
        report.passed)
    return report


def chernoff_report(N, delta, epsilon_th):
    '''
    Every derivation stage without sampling
    '''
    return {
        "N": N,
        "delta": delta,
        "epsilon_th": epsilon_th,
        "case1": case1_chernoff_terms(N, delta),
        "case2": case2_chernoff_terms(N, delta),
        "cutoff": cutoff_lemma_terms(epsilon_th, delta, N),
        "c_p_forms": cp_forms(epsilon_th, delta, N),
    }
