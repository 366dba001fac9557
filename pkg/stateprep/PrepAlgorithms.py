"""
Drivers of the preparation algorithms.

A ResizedVector of 2^n entries is split in halves down to the leaves, the leaf
label states are built, and every internal node concatenates the copies of its
two children. A node whose vector has 2^k entries charges k - 1 steps per
concatenation batch. The modes differ in how children are scheduled and what a
failed batch does:

    seq       one copy per node, children one after the other, retry the
              subtree on failure
    para      c0 copies per leaf, children side by side, retry the subtree
              when a batch yields no copy
    gpara     side by side without retries; the whole tree is run again
              until the root holds a copy
    tradeoff  para with leaves of 2^n_u entries built by a dense unitary of
              configured cost

Both engines draw the batch outcome c ~ Binomial(c_min, p_plus) from the
node's own stream. The exact engine also carries the statevectors; the cascade
engine carries only the label norms, which is all p_plus depends on.
"""

# from the standard library
from dataclasses import dataclass, field, replace
import logging
import math
from typing import List, Optional

# third party
import numpy as np

# our code
from stateprep import ConcatProtocol as cp
from stateprep import LabelEncoding as le
from stateprep.PrepMode import Engine, PPlusModel, PrepMode
from stateprep.SeededStreams import SeededStreams
from stateprep.StateVector import MAX_DENSE_QUBITS, fidelity
from stateprep.circuit.Builders import network_depth
from stateprep.prep_fsm import run_node

# Definitions aka constants
DEFAULT_RETRY_CAP = 10 ** 9
EXACT_MAX_N = 6
CAP_WARNING_FRACTION = 0.9

_BAD_POLICY_MSG = "c0 policy must be an integer, const:<k>, power:<beta_q> or supra, got {!r}"
_BAD_NU_MSG = "n_u must lie in [1, {}], got {}"


class RetryCapExceededError(RuntimeError):
    """
    Exception to raise when a run charges more steps than the retry cap allows
    """

    def __init__(self, message, steps, partial):
        super().__init__(message)
        self.steps = steps
        self.partial = partial

    # keeps the extra fields when a worker process sends the error back
    def __reduce__(self):
        return (self.__class__, (str(self), self.steps, self.partial))


@dataclass(frozen=True)
class C0Policy:
    '''
    Number of copies per leaf: a constant k, ceil(N^(beta_q - 1)), or
    ceil(N + N^(3/4))
    '''
    kind: str = "const"
    value: float = 1

    def copies(self, N):
        if self.kind == "const":
            return int(self.value)
        if self.kind == "power":
            return int(math.ceil(N ** (self.value - 1.0) - 1e-12))
        return int(math.ceil(N + N ** 0.75 - 1e-12))

    @classmethod
    def parse(cls, text):
        text = str(text).strip().lower()
        if text == "supra":
            return cls("supra", 0)
        try:
            if text.startswith("power:"):
                beta = float(text.split(":", 1)[1])
            else:
                k = int(text.split(":", 1)[1]) if text.startswith("const:") else int(text)
        except ValueError as error:
            raise ValueError(_BAD_POLICY_MSG.format(text)) from error
        if text.startswith("power:"):
            if not 1.0 <= beta < 2.0:
                raise ValueError("beta_q must lie in [1, 2), got {}".format(beta))
            return cls("power", beta)
        if k < 1:
            raise ValueError("c0 must be at least 1, got {}".format(k))
        return cls("const", k)

    def __str__(self):
        if self.kind == "const":
            return "const:{}".format(int(self.value))
        if self.kind == "power":
            return "power:{}".format(self.value)
        return "supra"


@dataclass
class PrepConfig:
    mode: PrepMode = PrepMode.PARALLEL
    c0_policy: C0Policy = field(default_factory=C0Policy)
    n_u: int = 1
    engine: Engine = Engine.EXACT
    seed: int = 0
    retry_cap: int = DEFAULT_RETRY_CAP
    p_plus_model: PPlusModel = PPlusModel.ANALYTIC
    p_fixed: Optional[float] = None
    unitary_runtime_scale: float = 1.0
    unitary_depth_scale: float = 1.0
    exact_max_qubits: int = MAX_DENSE_QUBITS

    def unitary_costs(self, n_u):
        '''
        (T_u, D_u) of a dense preparation over 2^n_u entries; the two entry
        base case is free
        '''
        if n_u <= 1:
            return 0, 0
        size = 1 << n_u
        return (int(math.ceil(self.unitary_runtime_scale * size)),
            int(math.ceil(self.unitary_depth_scale * size)))


@dataclass
class NodeResult:
    count: int
    norm_sq: float
    label: Optional[le.LabelState] = None
    time: int = 0
    restarts: int = 0


@dataclass
class TreeNode:
    path: tuple
    entries: np.ndarray

    @property
    def k(self):
        return self.entries.shape[0].bit_length() - 1

    def child(self, bit):
        middle = self.entries.shape[0] // 2
        half = self.entries[:middle] if bit == 0 else self.entries[middle:]
        return TreeNode(self.path + (bit,), half)


@dataclass
class PrepResult:
    label_state: Optional[le.LabelState]
    vector: np.ndarray
    t_stp: int
    restarts: int
    peak_parallel_copies: int
    total_qubit_touches: int
    peak_block_qubits: int
    copies: int
    passes: int
    depth: int
    unitary_depth: int
    unitary_runtime: int

    def to_dict(self, include_vector=True):
        report = {
            "t_stp": self.t_stp,
            "restarts": self.restarts,
            "peak_copies": self.peak_parallel_copies,
            "total_qubit_touches": self.total_qubit_touches,
            "peak_block_qubits": self.peak_block_qubits,
            "copies": self.copies,
            "passes": self.passes,
            "depth_report": {
                "network_depth": self.depth,
                "unitary_depth": self.unitary_depth,
                "unitary_runtime": self.unitary_runtime,
            },
        }
        if include_vector:
            report["decoded_vector"] = [[float(x.real), float(x.imag)] for x in self.vector]
        return report


class _Preparer:
    '''
    Driver handed to the node state machine
    '''

    def __init__(self, cfg, c0, leaf_n, parallel, retries, streams):
        self.cfg = cfg
        self.c0 = c0
        self.leaf_n = leaf_n
        self.parallel = parallel
        self.retries = retries
        self.streams = streams
        self.exact = cfg.engine is Engine.EXACT
        self.leaf_time, _ = cfg.unitary_costs(leaf_n)
        self.charged = 0
        self.retry_count = 0
        self.touches = 0
        self.peak_block = 0
        self._warned = False


    def _charge(self, steps):
        self.charged += steps
        if self.charged > self.cfg.retry_cap:
            partial = {"steps": self.charged, "restarts": self.retry_count, "total_qubit_touches": self.touches}
            raise RetryCapExceededError("Retry cap of {} steps exceeded".format(self.cfg.retry_cap), self.charged, partial)
        if not self._warned and self.charged > CAP_WARNING_FRACTION * self.cfg.retry_cap:
            logging.warning("Run has charged %d of %d allowed steps", self.charged, self.cfg.retry_cap)
            self._warned = True


    def is_leaf(self, node):
        return node.k == self.leaf_n


    def prepare_leaf(self, node):
        vector = le.ResizedVector(node.entries)
        label = None
        if self.exact:
            label = le.build_base(vector) if self.leaf_n == 1 else le.encode(vector)
        self.touches += self.c0 * (self.leaf_n + 1)
        self._charge(self.leaf_time)
        return NodeResult(self.c0, le.label_norm_sq(node.entries), label, self.leaf_time)


    def prepare_children(self, node):
        a = run_node(self, node.child(0))
        b = run_node(self, node.child(1))
        elapsed = max(a.time, b.time) if self.parallel else a.time + b.time
        return a, b, elapsed


    def p_plus(self, a, b, N):
        model = self.cfg.p_plus_model
        if model is PPlusModel.WORST_CASE_HALF:
            return 0.5
        if model is PPlusModel.FIXED:
            return self.cfg.p_fixed
        return min(1.0, cp.compute_p_plus(a.norm_sq, b.norm_sq, N))


    def transform(self, node, a, b):
        c_min = min(a.count, b.count)
        p = self.p_plus(a, b, 1 << (node.k - 1))
        c = int(self.streams.node(node.path).binomial(c_min, p))
        charge = node.k - 1
        self.touches += c_min * (2 * node.k + 1)
        self._charge(charge)

        label = None
        if self.exact and c > 0:
            outcome, _, _ = cp.concatenate(a.label, b.label, outcome=True)
            label = outcome.post_state_on_success
            self.peak_block = max(self.peak_block, 2 * node.k + 1)
        return NodeResult(c, a.norm_sq + b.norm_sq, label), charge


    def on_retry(self, node):
        self.retry_count += 1


def _check_input(v, cfg):
    if not v.positive_only and cfg.p_plus_model is PPlusModel.ANALYTIC:
        raise ValueError("The tree algorithms take nonnegative real vectors; split complex data first")
    if cfg.engine is Engine.EXACT:
        if v.n > EXACT_MAX_N or 2 * v.n + 1 > cfg.exact_max_qubits:
            raise ValueError("The exact engine handles up to 2^{} entries, got {}".format(EXACT_MAX_N, v.N))
        if cfg.p_plus_model is not PPlusModel.ANALYTIC:
            raise ValueError("The exact engine only runs with the analytic p_plus model")
    if cfg.p_plus_model is PPlusModel.FIXED and not (cfg.p_fixed is not None and 0.0 < cfg.p_fixed <= 1.0):
        raise ValueError("A fixed p_plus must lie in (0, 1], got {}".format(cfg.p_fixed))


def _run(v, cfg, c0, leaf_n, parallel, retries, streams, passes_until_success=False):
    _check_input(v, cfg)
    if c0 < 1:
        raise ValueError("c0 must be at least 1, got {}".format(c0))
    if not 1 <= leaf_n <= v.n:
        raise ValueError(_BAD_NU_MSG.format(v.n, leaf_n))
    streams = SeededStreams(cfg.seed) if streams is None else streams

    entries = v.entries.real.copy() if cfg.p_plus_model is PPlusModel.ANALYTIC else v.entries.copy()
    root = TreeNode((), entries)
    driver = _Preparer(cfg, c0, leaf_n, parallel, retries, streams)

    t_stp = 0
    passes = 0
    restarts = 0
    while True:
        result = run_node(driver, root)
        passes += 1
        t_stp += result.time
        restarts += result.restarts
        if result.count > 0 or not passes_until_success:
            break
        restarts += 1
        driver.on_retry(root)
        logging.debug("Single pass %d ended with no copy at the root", passes)

    unitary_runtime, unitary_depth = cfg.unitary_costs(leaf_n)
    vector = le.decode(result.label).entries if result.label is not None else v.entries
    peak_copies = 1 if not parallel else c0 * (v.N >> leaf_n)
    return PrepResult(
        label_state=result.label,
        vector=vector,
        t_stp=t_stp,
        restarts=restarts,
        peak_parallel_copies=peak_copies,
        total_qubit_touches=driver.touches,
        peak_block_qubits=driver.peak_block,
        copies=result.count,
        passes=passes if passes_until_success else 0,
        depth=network_depth(v.n, leaf_n, unitary_depth),
        unitary_depth=unitary_depth,
        unitary_runtime=unitary_runtime,
    )


def f_seq(v, cfg, streams=None):
    '''
    Sequential preparation, one copy at a time
    '''
    return _run(v, cfg, 1, 1, parallel=False, retries=True, streams=streams)


def f_para(v, c0, cfg, streams=None):
    '''
    Parallel preparation with c0 copies of every leaf
    '''
    return _run(v, cfg, c0, 1, parallel=True, retries=True, streams=streams)


def g_hat(v, c0, cfg, streams=None):
    '''
    One pass of the tree without retries; result.copies may be zero
    '''
    return _run(v, cfg, c0, 1, parallel=True, retries=False, streams=streams)


def g_para(v, c0, cfg, streams=None):
    '''
    Repeat single passes until the root holds a copy
    '''
    return _run(v, cfg, c0, 1, parallel=True, retries=False, streams=streams, passes_until_success=True)


def f_tradeoff(v, c0, n_u, cfg, streams=None):
    '''
    Parallel preparation whose leaves hold 2^n_u entries
    '''
    if not 1 <= n_u <= v.n:
        raise ValueError(_BAD_NU_MSG.format(v.n, n_u))
    return _run(v, cfg, c0, n_u, parallel=True, retries=True, streams=streams)


def prepare(v, cfg, streams=None):
    '''
    Dispatch on cfg.mode with c0 from cfg.c0_policy
    '''
    c0 = cfg.c0_policy.copies(v.N)
    if cfg.mode is PrepMode.SEQUENTIAL:
        return f_seq(v, cfg, streams)
    if cfg.mode is PrepMode.PARALLEL:
        return f_para(v, c0, cfg, streams)
    if cfg.mode is PrepMode.G_PARA:
        return g_para(v, c0, cfg, streams)
    return f_tradeoff(v, c0, cfg.n_u, cfg, streams)


@dataclass
class AmplitudeResult:
    state: Optional[object]
    fidelity: Optional[float]
    success_prob: float
    positive: bool
    attempts: int
    t_stp: int
    restarts: int
    parts: List[PrepResult]

    def to_dict(self):
        return {
            "fidelity": self.fidelity,
            "success_prob": self.success_prob,
            "positive_path": self.positive,
            "attempts": self.attempts,
            "t_stp": self.t_stp,
            "restarts": self.restarts,
            "parts": [part.to_dict(include_vector=False) for part in self.parts],
        }


def prepare_amplitude(u, cfg):
    '''
    Prepare sum_i u_i |i> from an AmplitudeVector.

    Nonnegative data runs the tree once and projects the value qubit; other
    data is split into four nonnegative vectors whose label states are
    assembled. A failed final projection starts the attempt over.

    @return AmplitudeResult; state and fidelity are None on the cascade engine
    '''
    v = le.resize(u)
    positive = v.positive_only
    parts = [v] if positive else list(cp.decompose_complex(v).parts())
    _check_input(le.ResizedVector(parts[0].entries.real), cfg)
    root = SeededStreams(cfg.seed)

    if positive:
        success_prob = cp.positive_success_prob(v.entries)
    else:
        norms = [le.label_norm_sq(part.entries) for part in parts]
        success_prob = cp.complex_success_prob(v.entries, norms)

    # failed attempts only contribute steps, which both engines draw alike
    failed_cfg = replace(cfg, engine=Engine.CASCADE)
    t_stp = 0
    restarts = 0
    attempt = 0
    while True:
        succeeded = root.fork(attempt, len(parts)).generator().random() < success_prob
        run_cfg = cfg if succeeded else failed_cfg
        results = [prepare(le.ResizedVector(part.entries.real), run_cfg, root.fork(attempt, j))
            for j, part in enumerate(parts)]
        times = [r.t_stp for r in results]
        t_stp += sum(times) if cfg.mode is PrepMode.SEQUENTIAL else max(times)
        restarts += sum(r.restarts for r in results)
        if t_stp > cfg.retry_cap:
            raise RetryCapExceededError("Retry cap of {} steps exceeded".format(cfg.retry_cap), t_stp,
                {"steps": t_stp, "attempts": attempt + 1, "restarts": restarts})

        attempt += 1
        if succeeded:
            break
        logging.debug("Final projection of attempt %d failed", attempt)

    # the simulated projection is checked against the analytic probability
    state = None
    if cfg.engine is Engine.EXACT:
        if positive:
            success_prob, state = cp.project_value_qubit(results[0].label_state)
        else:
            success_prob, _, state = cp.assemble_complex(cp.decompose_complex(v),
                [r.label_state for r in results], outcome=True)

    logging.info("Prepared %d entries after %d attempts, t_stp %d", u.N, attempt, t_stp)
    match = fidelity(state, le.target_state(u)) if state is not None else None
    return AmplitudeResult(state, match, success_prob, positive, attempt, t_stp, restarts, results)


def recurrence_bound(i, k1, k0):
    '''
    Upper bound T(i) <= 2[2 T(i-1) + k1 i + k0] on the expected sequential
    runtime, with a free base case T(1) = 0
    '''
    if i < 1:
        raise ValueError("i must be at least 1, got {}".format(i))
    bound = 0.0
    for level in range(2, i + 1):
        bound = 2.0 * (2.0 * bound + k1 * level + k0)
    return bound
