"""
Monte Carlo runtime experiments over the preparation tree.

Only the copy counts and the elapsed steps of the tree are simulated. A node
of 2^k entries merges the copies of its children in a batch that charges k - 1
steps and keeps c ~ Binomial(min(c_a, c_b), p_plus) copies; with retries a
batch that keeps nothing reruns the node's subtree.

The retry tree is sampled level by level for many trials at once. Every level
(or, when p_plus depends on the node, every node) owns a buffer of i.i.d.
(count, elapsed) samples that its parent draws from; a sample is used at most
once, so the sampler is exact. The single pass algorithm is sampled on dense
arrays of copy counts.
"""

# from the standard library
from dataclasses import asdict, dataclass, field, replace
import decimal
import functools
import logging
import math
from typing import List, Optional, Tuple

# third party
import numpy as np
from scipy import stats

# our code
from stateprep import LabelEncoding as le
from stateprep import PrepAlgorithms as pa
from stateprep.PrepMode import Engine, PPlusModel, PrepMode
from stateprep.SeededStreams import SeededStreams
from stateprep.StateVector import MAX_DENSE_QUBITS
from stateprep.TrialPool import TrialPool
from stateprep.circuit.Builders import network_depth, network_qubits

# Definitions aka constants
MIN_BATCH = 128
TRIAL_KEY = 0
VECTOR_KEY = 1
PRODUCT_CLAIM = 0.006
SAMPLERS = ("vectorized", "tree")

_BAD_RANGE_MSG = "A scaling fit needs at least 3 sizes, got {}"
_BAD_BETA_MSG = "beta_q must lie in [1, 2), got {}"


@dataclass
class ScalingExperiment:
    n_range: List[int]
    trials: int = 1000
    c0_policy: pa.C0Policy = field(default_factory=pa.C0Policy)
    p_plus_model: PPlusModel = PPlusModel.WORST_CASE_HALF
    p_fixed: Optional[float] = None
    seed: int = 0
    mode: PrepMode = PrepMode.PARALLEL
    n_u: int = 1
    retry_cap: int = pa.DEFAULT_RETRY_CAP
    unitary_runtime_scale: float = 1.0
    unitary_depth_scale: float = 1.0
    sampler: str = "vectorized"

    def __post_init__(self):
        self.n_range = [int(n) for n in self.n_range]
        if self.trials < 1:
            raise ValueError("trials must be at least 1, got {}".format(self.trials))
        if not self.n_range or min(self.n_range) < 1:
            raise ValueError("Sizes must be positive, got {}".format(self.n_range))
        if self.sampler not in SAMPLERS:
            raise ValueError("sampler must be one of {}, got {!r}".format(SAMPLERS, self.sampler))
        if self.p_plus_model is PPlusModel.FIXED and not (self.p_fixed is not None and 0.0 < self.p_fixed <= 1.0):
            raise ValueError("A fixed p_plus must lie in (0, 1], got {}".format(self.p_fixed))
        if self.mode is PrepMode.TRADEOFF and self.n_u > min(self.n_range):
            raise ValueError("n_u = {} exceeds the smallest size {}".format(self.n_u, min(self.n_range)))


    def prep_config(self):
        return pa.PrepConfig(mode=self.mode, c0_policy=self.c0_policy, n_u=self.n_u, engine=Engine.CASCADE,
            seed=self.seed, retry_cap=self.retry_cap, p_plus_model=self.p_plus_model, p_fixed=self.p_fixed,
            unitary_runtime_scale=self.unitary_runtime_scale, unitary_depth_scale=self.unitary_depth_scale,
            exact_max_qubits=MAX_DENSE_QUBITS)


    def to_dict(self):
        report = asdict(self)
        report["c0_policy"] = str(self.c0_policy)
        report["p_plus_model"] = self.p_plus_model.value
        report["mode"] = self.mode.value
        return report


@dataclass
class FitReport:
    slope: float
    intercept: float
    r_squared: float
    stderr: float
    per_n_means: List[Tuple[int, float, float]]
    details: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)
    bootstrap_stderr: Optional[float] = None

    def rows(self):
        '''
        CSV rows (n, N, mean_tstp, std_tstp)
        '''
        return [(n, 1 << n, mean, std) for n, mean, std in self.per_n_means]


    def to_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "stderr": self.stderr,
            "bootstrap_stderr": self.bootstrap_stderr,
            "per_n_means": [{"n": n, "N": 1 << n, "mean_tstp": mean, "std_tstp": std}
                for n, mean, std in self.per_n_means],
            "details": {str(n): detail for n, detail in self.details.items()},
            "experiment": self.experiment,
        }


def c_bnd(n, i):
    '''
    Copies a level i node is expected to keep with c0 = N + N^(3/4)
    '''
    return 2.0 ** (n - i) + 2.0 ** (0.75 * (n - i))


def level_p_plus(entries, k):
    '''
    p_plus of every node of 2^k entries of a nonnegative vector, left to right
    '''
    half = 1 << (k - 1)
    blocks = np.asarray(entries, dtype=float).reshape(-1, half)
    norms = np.sum(blocks ** 2 + (1.0 - blocks) ** 2, axis=1)
    a, b = norms[0::2], norms[1::2]
    return np.minimum(1.0, half * (a + b) / (4.0 * a * b))


class _Source:
    '''
    Buffer of i.i.d. (count, elapsed) samples of one level or one node
    '''

    def __init__(self, sampler, path, rng):
        self.sampler = sampler
        self.path = path
        self.k = sampler.n - len(path)
        self.rng = rng
        self.counts = np.zeros(0, dtype=np.int64)
        self.times = np.zeros(0, dtype=np.int64)


    def take(self, m):
        short = m - self.counts.shape[0]
        if short > 0:
            counts, times = self.sampler.generate(self, max(2 * short, MIN_BATCH))
            self.counts = np.concatenate([self.counts, counts])
            self.times = np.concatenate([self.times, times])
        counts, times = self.counts[:m], self.times[:m]
        self.counts, self.times = self.counts[m:], self.times[m:]
        return counts, times


class _RetryTreeSampler:
    def __init__(self, n, c0, leaf_n, leaf_time, parallel, p_levels, per_node, streams, retry_cap):
        self.n = n
        self.c0 = c0
        self.leaf_n = leaf_n
        self.leaf_time = leaf_time
        self.parallel = parallel
        self.p_levels = p_levels
        self.per_node = per_node
        self.streams = streams
        self.retry_cap = retry_cap
        self._sources = {}


    def source(self, path):
        key = path if self.per_node else len(path)
        if key not in self._sources:
            rng = self.streams.node(path) if self.per_node else self.streams.fork(len(path)).generator()
            self._sources[key] = _Source(self, path, rng)
        return self._sources[key]


    def p_plus(self, source):
        p = self.p_levels[source.k]
        if np.ndim(p) == 0:
            return float(p)
        index = int("".join(str(bit) for bit in source.path), 2) if source.path else 0
        return float(p[index])


    def generate(self, source, m):
        if source.k == self.leaf_n:
            return np.full(m, self.c0, dtype=np.int64), np.full(m, self.leaf_time, dtype=np.int64)

        left = self.source(source.path + (0,))
        right = self.source(source.path + (1,))
        p = self.p_plus(source)
        charge = source.k - 1
        counts = np.zeros(m, dtype=np.int64)
        times = np.zeros(m, dtype=np.int64)
        pending = np.arange(m)
        while pending.size:
            ca, ta = left.take(pending.size)
            cb, tb = right.take(pending.size)
            c = source.rng.binomial(np.minimum(ca, cb), p)
            times[pending] += (np.maximum(ta, tb) if self.parallel else ta + tb) + charge
            if times[pending].max() > self.retry_cap:
                raise pa.RetryCapExceededError("Retry cap of {} steps exceeded".format(self.retry_cap),
                    int(times[pending].max()), {"n": self.n, "level": source.k})
            done = c > 0
            counts[pending[done]] = c[done]
            pending = pending[~done]
        return counts, times


    def sample(self, m):
        return self.source(()).take(m)


def _p_levels(exp, n, entries):
    levels = {}
    for k in range(2, n + 1):
        if exp.p_plus_model is PPlusModel.WORST_CASE_HALF:
            levels[k] = 0.5
        elif exp.p_plus_model is PPlusModel.FIXED:
            levels[k] = exp.p_fixed
        else:
            levels[k] = level_p_plus(entries, k)
    return levels


def _single_pass_chunk(n, c0, p_levels, retry_cap, count, rng):
    '''
    Repeat single passes until the root holds a copy, for count trials
    '''
    pass_time = n * (n - 1) // 2
    passes = np.zeros(count, dtype=np.int64)
    exceed = np.zeros(n, dtype=np.int64)
    nodes = np.zeros(n, dtype=np.int64)
    bounds = [c_bnd(n, i) for i in range(n)]
    first_pass_successes = 0
    pending = np.arange(count)
    while pending.size:
        counts = np.full((pending.size, 1 << (n - 1)), c0, dtype=np.int64)
        exceed[0] += np.count_nonzero(counts >= bounds[0])
        nodes[0] += counts.size
        for k in range(2, n + 1):
            counts = rng.binomial(np.minimum(counts[:, 0::2], counts[:, 1::2]), p_levels[k])
            exceed[k - 1] += np.count_nonzero(counts >= bounds[k - 1])
            nodes[k - 1] += counts.size
        first = passes[pending] == 0
        passes[pending] += 1
        succeeded = counts[:, 0] > 0
        first_pass_successes += int(np.count_nonzero(succeeded & first))
        pending = pending[~succeeded]
        if pending.size and passes[pending].max() * pass_time > retry_cap:
            raise pa.RetryCapExceededError("Retry cap of {} steps exceeded".format(retry_cap),
                int(passes[pending].max() * pass_time), {"n": n, "passes": int(passes[pending].max())})
    return passes * pass_time, passes, exceed, nodes, first_pass_successes


def _scaling_chunk(exp, n, entries, count, streams):
    '''
    Elapsed steps of count trials at size n; runs inside a TrialPool worker
    '''
    N = 1 << n
    c0 = 1 if exp.mode is PrepMode.SEQUENTIAL else exp.c0_policy.copies(N)
    chunk = {"times": None, "passes": None, "exceed": None, "nodes": None, "first_pass_successes": 0}

    if exp.sampler == "tree":
        cfg = exp.prep_config()
        v = le.ResizedVector(entries)
        results = [pa.prepare(v, cfg, streams.fork(trial)) for trial in range(count)]
        chunk["times"] = np.array([r.t_stp for r in results], dtype=np.int64)
        if exp.mode is PrepMode.G_PARA:
            chunk["passes"] = np.array([r.passes for r in results], dtype=np.int64)
            chunk["first_pass_successes"] = int(np.count_nonzero(chunk["passes"] == 1))
        return chunk

    p_levels = _p_levels(exp, n, entries)
    if exp.mode is PrepMode.G_PARA:
        times, passes, exceed, nodes, first = _single_pass_chunk(n, c0, p_levels, exp.retry_cap, count,
            streams.generator())
        chunk.update(times=times, passes=passes, exceed=exceed, nodes=nodes, first_pass_successes=first)
        return chunk

    leaf_n = exp.n_u if exp.mode is PrepMode.TRADEOFF else 1
    leaf_time, _ = exp.prep_config().unitary_costs(leaf_n)
    sampler = _RetryTreeSampler(n, c0, leaf_n, leaf_time, exp.mode is not PrepMode.SEQUENTIAL, p_levels,
        exp.p_plus_model is PPlusModel.ANALYTIC, streams, exp.retry_cap)
    _, chunk["times"] = sampler.sample(count)
    return chunk


def experiment_vector(exp, n):
    '''
    Entries the experiment runs on at size n: a random nonnegative vector for
    the analytic p_plus model, all ones otherwise
    '''
    N = 1 << n
    if exp.p_plus_model is not PPlusModel.ANALYTIC:
        return np.ones(N)
    raw = SeededStreams(exp.seed).fork(VECTOR_KEY, n).generator().random(N)
    return le.resize(le.AmplitudeVector(raw / np.linalg.norm(raw))).entries.real


def measure(exp, n, pool=None):
    '''
    Run exp.trials trials at size n

    @return (array of elapsed steps, details dict)
    '''
    pool = TrialPool() if pool is None else pool
    entries = experiment_vector(exp, n)
    task = functools.partial(_scaling_chunk, exp, n, entries)
    chunks = pool.map_chunks(task, exp.trials, exp.seed, key=(TRIAL_KEY, n))
    times = np.concatenate([chunk["times"] for chunk in chunks])

    details = {}
    if exp.mode is PrepMode.G_PARA:
        passes = np.concatenate([chunk["passes"] for chunk in chunks])
        total = int(passes.sum())
        details["mean_passes"] = float(passes.mean())
        details["root_success_rate"] = exp.trials / total
        details["root_success_sigma"] = math.sqrt(details["root_success_rate"]
            * (1.0 - details["root_success_rate"]) / total)
        details["first_pass_success_rate"] = sum(chunk["first_pass_successes"] for chunk in chunks) / exp.trials
        if chunks[0]["exceed"] is not None:
            exceed = sum(chunk["exceed"] for chunk in chunks)
            nodes = sum(chunk["nodes"] for chunk in chunks)
            details["fraction_above_c_bnd"] = [float(e) / float(c) for e, c in zip(exceed, nodes)]
    return times, details


def _fit(per_n_means):
    ns = np.array([row[0] for row in per_n_means], dtype=float)
    means = np.array([row[1] for row in per_n_means], dtype=float)
    if np.any(means <= 0):
        raise ValueError("Mean runtimes must be positive to fit a power law, got {}".format(list(means)))
    return stats.linregress(ns, np.log2(means))


def bootstrap_slope_stderr(samples, resamples, rng):
    '''
    Standard deviation of the fitted slope over bootstrap resamples of the
    per-size trial runtimes
    '''
    slopes = []
    for _ in range(resamples):
        means = [(n, float(rng.choice(times, times.shape[0]).mean()), 0.0) for n, times in samples]
        slopes.append(_fit(means).slope)
    return float(np.std(slopes, ddof=1))


def run_scaling(exp, pool=None, bootstrap=0):
    '''
    Mean runtime per size and the least squares slope of log2(mean t_stp)
    against log2(N)

    @param bootstrap - number of bootstrap resamples for a slope error, 0 to skip
    '''
    if len(exp.n_range) < 3:
        raise ValueError(_BAD_RANGE_MSG.format(len(exp.n_range)))

    per_n_means = []
    details = {}
    samples = []
    for n in exp.n_range:
        try:
            times, details[n] = measure(exp, n, pool)
        except pa.RetryCapExceededError as error:
            partial = {"per_n_means": per_n_means, "n": n, "abort": error.partial}
            raise pa.RetryCapExceededError(str(error), error.steps, partial) from error
        mean, std = float(times.mean()), float(times.std(ddof=1)) if times.shape[0] > 1 else 0.0
        per_n_means.append((n, mean, std))
        samples.append((n, times))
        logging.info("n=%d: mean t_stp %.6g (std %.6g) over %d trials", n, mean, std, exp.trials)

    fit = _fit(per_n_means)
    report = FitReport(float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2), float(fit.stderr),
        per_n_means, details, exp.to_dict())
    if bootstrap:
        rng = SeededStreams(exp.seed).fork(TRIAL_KEY, 1 << 16).generator()
        report.bootstrap_stderr = bootstrap_slope_stderr(samples, bootstrap, rng)
    logging.info("Fitted slope %.4f (R^2 %.4f) for c0 %s", report.slope, report.r_squared, exp.c0_policy)
    return report


def nonincreasing_within_error(points, sigmas=2.0):
    '''
    @param points - (beta_q, beta_t, stderr) triples in increasing beta_q
    '''
    for (_, t0, e0), (_, t1, e1) in zip(points, points[1:]):
        if t1 > t0 + sigmas * math.hypot(e0, e1):
            return False
    return True


def tradeoff_fits(beta_q_list, template, pool=None):
    '''
    run_scaling with c0 = ceil(N^(beta_q - 1)) for every space exponent beta_q

    @return list of (beta_q, FitReport) in increasing beta_q
    '''
    fits = []
    for beta in sorted(beta_q_list):
        if not 1.0 <= beta < 2.0:
            raise ValueError(_BAD_BETA_MSG.format(beta))
    for beta in sorted(beta_q_list):
        exp = replace(template, c0_policy=pa.C0Policy("power", float(beta)))
        fit = run_scaling(exp, pool)
        fits.append((float(beta), fit))
        logging.info("beta_q %.3f -> beta_t %.4f", beta, fit.slope)
    return fits


def tradeoff_curve(beta_q_list, template, pool=None):
    '''
    Runtime exponent beta_t for every space exponent beta_q

    @return list of (beta_q, beta_t, stderr)
    '''
    points = [(beta, fit.slope, fit.stderr) for beta, fit in tradeoff_fits(beta_q_list, template, pool)]
    if not nonincreasing_within_error(points):
        logging.warning("beta_t is not nonincreasing in beta_q: %s", points)
    return points


def supra_model_comparison(exp, pool=None):
    '''
    Fit the mean runtime of the single pass algorithm with c0 = N + N^(3/4)
    by a n^2 and by a power law in N, and compare the residuals
    '''
    exp = replace(exp, mode=PrepMode.G_PARA, c0_policy=pa.C0Policy("supra", 0))
    report = run_scaling(exp, pool)
    ns = np.array([row[0] for row in report.per_n_means], dtype=float)
    means = np.array([row[1] for row in report.per_n_means], dtype=float)

    a = float(np.sum(means * ns ** 2) / np.sum(ns ** 4))
    quadratic = a * ns ** 2
    power = 2.0 ** (report.intercept + report.slope * ns)
    total = float(np.sum((means - means.mean()) ** 2))
    rss_quadratic = float(np.sum((means - quadratic) ** 2))
    rss_power = float(np.sum((means - power) ** 2))
    log_rss_quadratic = float(np.sum((np.log2(means) - np.log2(quadratic)) ** 2))
    log_rss_power = float(np.sum((np.log2(means) - np.log2(power)) ** 2))

    comparison = {
        "quadratic_a": a,
        "quadratic_r_squared": 1.0 - rss_quadratic / total if total > 0 else 1.0,
        "power_slope": report.slope,
        "power_intercept": report.intercept,
        "rss_quadratic": rss_quadratic,
        "rss_power": rss_power,
        "log_rss_quadratic": log_rss_quadratic,
        "log_rss_power": log_rss_power,
        "quadratic_preferred": rss_quadratic < rss_power,
        "root_success_rate": {str(n): d["root_success_rate"] for n, d in report.details.items()},
        "root_success_sigma": {str(n): d["root_success_sigma"] for n, d in report.details.items()},
        "fit": report.to_dict(),
    }
    logging.info("Supra copies: a n^2 with a = %.4g, RSS %.4g vs power law RSS %.4g", a, rss_quadratic, rss_power)
    return comparison


def tradeoff_sweep(n, nu_list, c0, trials, seed=0, p_plus_model=PPlusModel.WORST_CASE_HALF,
        unitary_runtime_scale=1.0, unitary_depth_scale=1.0, pool=None):
    '''
    Depth, qubits and mean runtime of the trade-off algorithm for every leaf
    size n_u
    '''
    rows = []
    for n_u in nu_list:
        exp = ScalingExperiment([n], trials, pa.C0Policy("const", c0), p_plus_model, seed=seed,
            mode=PrepMode.TRADEOFF, n_u=n_u, unitary_runtime_scale=unitary_runtime_scale,
            unitary_depth_scale=unitary_depth_scale)
        unitary_runtime, unitary_depth = exp.prep_config().unitary_costs(n_u)
        times, _ = measure(exp, n, pool)
        rows.append({
            "n_u": n_u,
            "depth": network_depth(n, n_u, unitary_depth),
            "qubits": network_qubits(n, c0, n_u),
            "mean_tstp": float(times.mean()),
            "std_tstp": float(times.std(ddof=1)) if trials > 1 else 0.0,
            "unitary_runtime": unitary_runtime,
            "unitary_depth": unitary_depth,
        })
        logging.info("n_u=%d: depth %d, mean t_stp %.6g", n_u, rows[-1]["depth"], rows[-1]["mean_tstp"])
    return rows


@dataclass
class HoeffdingReport:
    n: int
    c_bnd: List[float]
    per_level_f: List[float]
    log_product: float
    product_lower_bound: float
    preconditions: List[bool]
    claim_holds: bool

    def to_dict(self):
        return asdict(self)


def _log_f(n, i):
    previous, current = c_bnd(n, i - 1), c_bnd(n, i)
    exponent = 2.0 * previous * (0.5 - current / previous) ** 2
    return math.log(-math.expm1(-exponent))


def hoeffding_bound(n):
    '''
    The level success bounds f(n, i) and prod_{i=1}^{n-1} f(n, i)^(2^(n-i)),
    summed in log space
    '''
    if n < 2:
        raise ValueError("The cascade bound needs n >= 2, got {}".format(n))
    levels = range(1, n)
    logs = [_log_f(n, i) for i in levels]
    log_product = math.fsum((2.0 ** (n - i)) * log_f for i, log_f in zip(levels, logs))
    preconditions = [c_bnd(n, i) / c_bnd(n, i - 1) < 0.5 for i in levels]
    product = math.exp(log_product)
    report = HoeffdingReport(n, [c_bnd(n, i) for i in range(n)], [math.exp(x) for x in logs], log_product,
        product, preconditions, product > PRODUCT_CLAIM)
    if not all(preconditions):
        logging.warning("n=%d: c_bnd(n,i)/c_bnd(n,i-1) < 1/2 fails at levels %s", n,
            [i for i, ok in zip(levels, preconditions) if not ok])
    if not report.claim_holds:
        logging.warning("n=%d: product %.6g is not above %g", n, product, PRODUCT_CLAIM)
    return report


def hoeffding_sequence(n_max):
    '''
    hoeffding_bound for n = 2..n_max and whether the products never increase
    '''
    reports = [hoeffding_bound(n) for n in range(2, n_max + 1)]
    products = [r.log_product for r in reports]
    monotone = all(b <= a for a, b in zip(products, products[1:]))
    if not monotone:
        logging.warning("Products are not nonincreasing in n up to %d", n_max)
    return reports, monotone


def direct_product(n, precision=60):
    '''
    The hoeffding_bound product evaluated directly in decimal arithmetic
    '''
    context = decimal.Context(prec=precision)
    one, half, two = decimal.Decimal(1), decimal.Decimal("0.5"), decimal.Decimal(2)

    def bound(i):
        return context.add(context.power(two, n - i), context.power(two, context.multiply(decimal.Decimal("0.75"),
            decimal.Decimal(n - i))))

    product = one
    for i in range(1, n):
        previous, current = bound(i - 1), bound(i)
        gap = context.subtract(half, context.divide(current, previous))
        exponent = context.multiply(context.multiply(two, previous), context.multiply(gap, gap))
        f = context.subtract(one, context.exp(context.minus(exponent)))
        product = context.multiply(product, context.power(f, 1 << (n - i)))
    return float(product)


def stochastic_dominance(n_range, p_low=0.5, p_high=0.75, trials=1000, c0=1, seed=0, sigmas=3.0, pool=None):
    '''
    Check that a smaller p_plus gives a larger mean runtime at every size
    '''
    rows = []
    for n in n_range:
        means = []
        for p in (p_low, p_high):
            exp = ScalingExperiment([n], trials, pa.C0Policy("const", c0), PPlusModel.FIXED, p_fixed=p, seed=seed)
            times, _ = measure(exp, n, pool)
            means.append((float(times.mean()), float(times.std(ddof=1)) / math.sqrt(trials)))
        difference = means[0][0] - means[1][0]
        sigma = math.hypot(means[0][1], means[1][1])
        rows.append({"n": n, "mean_low": means[0][0], "mean_high": means[1][0], "difference": difference,
            "sigma": sigma, "dominates": difference > sigmas * sigma})
    return rows


def paired_single_pass_comparison(n, trials=300, c0_policy=None, p_plus_model=PPlusModel.WORST_CASE_HALF,
        seed=0, sigmas=2.0):
    '''
    Run the single pass algorithm and the parallel algorithm on the same node
    streams, trial by trial, and compare their mean runtimes.

    Both read their node outcomes from identical streams, so they differ only
    where a merge below the root keeps no copy.
    '''
    if trials < 2:
        raise ValueError("A paired comparison needs at least 2 trials, got {}".format(trials))
    c0_policy = pa.C0Policy("supra", 0) if c0_policy is None else c0_policy
    v = le.ResizedVector(np.full(1 << n, 0.5))
    c0 = c0_policy.copies(v.N)
    cfg = pa.PrepConfig(engine=Engine.CASCADE, p_plus_model=p_plus_model, seed=seed)
    root = SeededStreams(seed)

    single = np.empty(trials)
    parallel = np.empty(trials)
    for trial in range(trials):
        single[trial] = pa.g_para(v, c0, cfg, root.fork(TRIAL_KEY, trial)).t_stp
        parallel[trial] = pa.f_para(v, c0, cfg, root.fork(TRIAL_KEY, trial)).t_stp
    difference = parallel - single
    mean_difference = float(difference.mean())
    sigma = float(difference.std(ddof=1)) / math.sqrt(trials)
    report = {
        "n": n,
        "c0": c0,
        "trials": trials,
        "mean_g_para": float(single.mean()),
        "mean_f_para": float(parallel.mean()),
        "mean_difference": mean_difference,
        "sigma": sigma,
        "differing_trials": int(np.count_nonzero(difference)),
        "g_para_not_slower": mean_difference >= -sigmas * sigma,
    }
    logging.info("Paired runtimes N=%d c0=%d: g_para %.4g, f_para %.4g, f - g = %.3g +- %.2g",
        v.N, c0, report["mean_g_para"], report["mean_f_para"], mean_difference, sigma)
    return report


def _sequential_peak_qubits(n):
    v = le.ResizedVector(np.full(1 << n, 0.5))
    result = pa.f_seq(v, pa.PrepConfig(mode=PrepMode.SEQUENTIAL, engine=Engine.EXACT, seed=0))
    return result.peak_block_qubits


def table1_report(trials=200, n_min=4, n_max=8, seed=0, cfg=None, pool=None):
    '''
    Measured depth, runtime scaling and qubits of the sequential and the two
    parallel algorithms next to their asymptotic claims; the unitary row holds
    the configured leaf costs
    '''
    cfg = pa.PrepConfig() if cfg is None else cfg
    n_range = list(range(n_min, n_max + 1))
    template = ScalingExperiment(n_range, trials, seed=seed, retry_cap=cfg.retry_cap)

    sequential = run_scaling(replace(template, mode=PrepMode.SEQUENTIAL), pool)
    supra = supra_model_comparison(template, pool)
    linear = run_scaling(replace(template, c0_policy=pa.C0Policy("const", 1)), pool)
    supra_copies = pa.C0Policy("supra", 0).copies(1 << n_max)
    paired = paired_single_pass_comparison(n_min, trials, seed=seed)
    check_n = min(n_max, pa.EXACT_MAX_N - 1)
    unitary_runtime, unitary_depth = cfg.unitary_costs(n_max)

    return {
        "n_range": n_range,
        "trials": trials,
        "rows": [
            {
                "method": "Sequential",
                "claims": {"depth": "O(n^2)", "runtime": "O(N^2)", "qubits": "O(n)"},
                "depth": network_depth(n_max),
                "runtime_exponent": sequential.slope,
                "runtime_r_squared": sequential.r_squared,
                "qubits": 2 * n_max + 1,
                "measured_peak_qubits": {"n": check_n, "qubits": _sequential_peak_qubits(check_n)},
            },
            {
                "method": "Parallel-1",
                "claims": {"depth": "O(n^2)", "runtime": "O(n^2)", "qubits": "O(N^2)"},
                "c0": "supra",
                "depth": network_depth(n_max),
                "runtime_quadratic_a": supra["quadratic_a"],
                "runtime_quadratic_r_squared": supra["quadratic_r_squared"],
                "quadratic_preferred": supra["quadratic_preferred"],
                "qubits": network_qubits(n_max, supra_copies),
                "peak_copies": supra_copies * (1 << (n_max - 1)),
                "paired_with_parallel": paired,
            },
            {
                "method": "Parallel-2",
                "claims": {"depth": "O(n^2)", "runtime": "O(N^1.52)", "qubits": "O(N)"},
                "c0": "const:1",
                "depth": network_depth(n_max),
                "runtime_exponent": linear.slope,
                "runtime_r_squared": linear.r_squared,
                "qubits": network_qubits(n_max),
            },
            {
                "method": "Unitary",
                "claims": {"depth": "configured", "runtime": "configured", "qubits": "n"},
                "depth": unitary_depth,
                "runtime": unitary_runtime,
                "qubits": n_max,
            },
        ],
    }
