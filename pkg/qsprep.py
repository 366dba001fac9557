#!python3

"""
2026-10-02 Version
  - table1 subcommand gathers the measured depth, runtime exponents and qubit
    counts of every algorithm in one report
  - Partial reports are written when a run hits the retry cap

2026-09-21 Version
  - Trials run in worker processes; the cap comes from --threads, then
    QSPREP_THREADS, then [runtime] threads
  - CSV series are written next to the JSON reports with --csv

2026-09-08 Version
  - bounds subcommand covers the success probability bounds, the cutoff
    preparation and the cascade product bound
  - emit and lightcone subcommands for the circuit text and schedule formats

2026-08-30 Version
  - First version: prepare, runtime and tradeoff subcommands
"""


# from the standard library
import argparse
import configparser
from dataclasses import asdict, dataclass, field
import logging
import os
import sys

# our code
from ReportWriter import ReportWriter
from stateprep import BoundsLab as bl
from stateprep import CascadeSim as cs
from stateprep import LabelEncoding as le
from stateprep import PrepAlgorithms as pa
from stateprep.PrepMode import Engine, PPlusModel, PrepMode, SamplingCase
from stateprep.SeededStreams import SeededStreams
from stateprep.StateVector import ImpossibleOutcomeError
from stateprep.TrialPool import TrialPool
from stateprep.circuit import Builders
from stateprep.circuit import CircuitText
from stateprep.circuit import Decompose
from stateprep.circuit import LightCone

# Definitions aka constants
DEFAULT_CONFIG_FILE_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.ini")
THREADS_ENV_VAR = "QSPREP_THREADS"
INPUT_KEY = 7

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ABORTED = 2
EXIT_IO = 3

LOG_LEVELS = {
    "critical": logging.CRITICAL,
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

DEFAULT_SETTINGS = {
    "logging": {"level": "error"},
    "runtime": {"threads": "1", "retry_cap": str(pa.DEFAULT_RETRY_CAP), "chunk_size": "250",
        "exact_max_qubits": "24"},
    "prepare": {"mode": "para", "c0": "const:1", "engine": "exact", "nu": "1", "seed": "0"},
    "tradeoff": {"unitary_runtime_scale": "1.0", "unitary_depth_scale": "1.0"},
    "bounds": {"trials": "1000", "delta": "0.1", "epsilon_th": "0.05"},
    "output": {"no_meta": "false"},
}

CLI_HELP_MSG = """
qsprep.py - Low depth probabilistic amplitude encoding toolkit

Usage
    python qsprep.py [--config FILE] [--threads T] [--no-meta] [--out JSON]
                     [--csv CSV] SUBCOMMAND [OPTIONS]

    Subcommands are prepare, runtime, tradeoff, bounds, emit, lightcone and
    table1. By default the config.ini file in the same directory as
    qsprep.py configures defaults when it exists; command line options
    override it. Reports are written as JSON to --out (stdout by default)
    and series as CSV to --csv.

Exit codes
    0 success, 1 invalid input, 2 run aborted (retry cap or impossible
    outcome), 3 file error
"""


class _ArgumentParser(argparse.ArgumentParser):
    '''
    Raise ValueError on bad arguments instead of exiting
    '''

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValueError(message)


def _int_list(text):
    return [int(token) for token in text.replace(",", " ").split()]


def _float_list(text):
    return [float(token) for token in text.replace(",", " ").split()]


def parse_p_plus(text):
    '''
    half | analytic | fixed:<p>

    @return (PPlusModel, p or None)
    '''
    text = text.strip().lower()
    if text.startswith("fixed:"):
        try:
            p = float(text.split(":", 1)[1])
        except ValueError as error:
            raise ValueError("Cannot read fixed p_plus from {!r}".format(text)) from error
        return PPlusModel.FIXED, p
    for model in (PPlusModel.WORST_CASE_HALF, PPlusModel.ANALYTIC):
        if text == model.value:
            return model, None
    raise ValueError("p_plus model must be half, analytic or fixed:<p>, got {!r}".format(text))


def build_parser():
    parser = _ArgumentParser(prog="qsprep.py", description=CLI_HELP_MSG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help="INI configuration file")
    parser.add_argument("--threads", type=int, help="worker process cap")
    parser.add_argument("--no-meta", action="store_true", default=None,
        help="leave timestamps and versions out of the JSON report")
    parser.add_argument("--out", help="JSON report path, stdout by default")
    parser.add_argument("--csv", help="CSV series path")
    commands = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    commands.required = True

    prepare = commands.add_parser("prepare", help="prepare one amplitude encoding")
    prepare.add_argument("--mode", choices=[m.value for m in PrepMode])
    prepare.add_argument("--n", type=int, help="qubits; 2^n entries")
    prepare.add_argument("--engine", choices=[e.value for e in Engine])
    prepare.add_argument("--seed", type=int)
    prepare.add_argument("--input", help="vector file of 're im' lines")
    prepare.add_argument("--pad", action="store_true", help="zero pad the input to a power of two")
    prepare.add_argument("--c0", help="copies policy: <k>, const:<k>, power:<beta_q> or supra")
    prepare.add_argument("--nu", type=int, help="leaf size n_u of the tradeoff mode")
    prepare.add_argument("--sample", choices=["positive", "uniform", "gaussian"], default="positive",
        help="random data drawn when there is no --input")

    runtime = commands.add_parser("runtime", help="runtime scaling fit")
    runtime.add_argument("--c0", default="const:1")
    runtime.add_argument("--pplus", default="half")
    runtime.add_argument("--mode", choices=["seq", "para", "gpara"], default="para")
    runtime.add_argument("--nmin", type=int, default=4)
    runtime.add_argument("--nmax", type=int, default=10)
    runtime.add_argument("--trials", type=int, default=1000)
    runtime.add_argument("--seed", type=int, default=0)
    runtime.add_argument("--bootstrap", type=int, default=0, help="bootstrap resamples of the slope")
    runtime.add_argument("--sampler", choices=list(cs.SAMPLERS), default="vectorized")

    tradeoff = commands.add_parser("tradeoff", help="space-time tradeoff")
    tradeoff.add_argument("--betaq", type=_float_list, default=[1.0, 1.2, 1.4, 1.6, 1.8])
    tradeoff.add_argument("--pplus", default="half")
    tradeoff.add_argument("--nmin", type=int, default=4)
    tradeoff.add_argument("--nmax", type=int, default=10)
    tradeoff.add_argument("--trials", type=int, default=1000)
    tradeoff.add_argument("--seed", type=int, default=0)
    tradeoff.add_argument("--nu", type=_int_list, help="sweep leaf sizes at --n instead of beta_q")
    tradeoff.add_argument("--n", type=int, default=8)
    tradeoff.add_argument("--c0", type=int, default=2, help="copies per leaf of the leaf size sweep")

    bounds = commands.add_parser("bounds", help="success probability and cascade bounds")
    bounds.add_argument("--result", choices=["4", "5", "hoeffding", "chernoff"], required=True)
    bounds.add_argument("--case", type=int, choices=[1, 2], default=1)
    bounds.add_argument("--n", type=int, default=6, help="qubits; N = 2^n")
    bounds.add_argument("--delta", type=float)
    bounds.add_argument("--epsth", type=float)
    bounds.add_argument("--trials", type=int)
    bounds.add_argument("--seed", type=int, default=0)
    bounds.add_argument("--nmax", type=int, default=12)

    emit = commands.add_parser("emit", help="write a circuit in the text format")
    emit.add_argument("--what", choices=["concat", "complex", "full-seq", "full-para"], required=True)
    emit.add_argument("--n", type=int, required=True)
    emit.add_argument("--decompose", action="store_true")
    emit.add_argument("--out", dest="circuit_out", help="circuit path, stdout by default")
    emit.add_argument("--c0", type=int, default=2, help="copies of the full-para network")
    emit.add_argument("--schedule-out", help="also write the grouping schedule of the circuit")

    lightcone = commands.add_parser("lightcone", help="light cone of one qubit")
    lightcone.add_argument("--schedule", required=True)
    lightcone.add_argument("--qubit", type=int, required=True)

    table1 = commands.add_parser("table1", help="resources of every algorithm")
    table1.add_argument("--trials", type=int, default=200)
    table1.add_argument("--nmin", type=int, default=4)
    table1.add_argument("--nmax", type=int, default=8)
    table1.add_argument("--seed", type=int, default=0)

    return parser


def load_settings(path=None):
    '''
    Defaults overlaid by the configuration file. A missing default file is
    fine; a missing file given explicitly is not.
    '''
    settings = configparser.ConfigParser()
    settings.read_dict(DEFAULT_SETTINGS)
    if path is None:
        settings.read(DEFAULT_CONFIG_FILE_PATH)
    else:
        with open(path, "r", encoding="utf-8") as handle:
            settings.read_file(handle)
    return settings


def configure_logging(settings):
    level = settings["logging"]["level"].strip().lower()
    if level not in LOG_LEVELS:
        raise ValueError("[logging] level must be one of {}, got {!r}".format(", ".join(LOG_LEVELS), level))
    logging.basicConfig(level=LOG_LEVELS[level])


def resolve_threads(args, settings, environ=None):
    environ = os.environ if environ is None else environ
    if args.threads is not None:
        threads = args.threads
    elif environ.get(THREADS_ENV_VAR):
        try:
            threads = int(environ[THREADS_ENV_VAR])
        except ValueError as error:
            raise ValueError("{} must be an integer, got {!r}".format(THREADS_ENV_VAR, environ[THREADS_ENV_VAR])) from error
    else:
        threads = settings.getint("runtime", "threads")
    if threads < 1:
        raise ValueError("threads must be at least 1, got {}".format(threads))
    return threads


def _check_seed(seed):
    if not 0 <= seed < 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer, got {}".format(seed))
    return seed


@dataclass
class RunConfig:
    '''
    Every option and setting a run resolved to
    '''
    subcommand: str
    options: dict
    settings: dict
    threads: int
    no_meta: bool
    out: str = None
    csv: str = None
    resolved: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


class QsprepApplication():
    """
    wrap the subcommands as a class to share the settings, the output sink
    and the worker pool
    """

    def __init__(self, run_config, settings, writer, pool):
        self.run_config = run_config
        self.settings = settings
        self.writer = writer
        self.pool = pool
        self.args = argparse.Namespace(**run_config.options)


    def report(self, report, columns=None, rows=None):
        if columns is not None and self.run_config.csv:
            self.writer.write_csv(self.run_config.csv, columns, rows)
        self.writer.write_json(self.run_config.subcommand, report, self.run_config.out, self.run_config.to_dict())


    def prep_config(self, mode, c0_policy, n_u, engine, seed, p_plus_model=PPlusModel.ANALYTIC, p_fixed=None):
        runtime = self.settings["runtime"]
        tradeoff = self.settings["tradeoff"]
        return pa.PrepConfig(mode=mode, c0_policy=c0_policy, n_u=n_u, engine=engine, seed=_check_seed(seed),
            retry_cap=runtime.getint("retry_cap"), p_plus_model=p_plus_model, p_fixed=p_fixed,
            unitary_runtime_scale=tradeoff.getfloat("unitary_runtime_scale"),
            unitary_depth_scale=tradeoff.getfloat("unitary_depth_scale"),
            exact_max_qubits=runtime.getint("exact_max_qubits"))


    def experiment(self, n_range, c0_policy, pplus, mode=PrepMode.PARALLEL, sampler="vectorized"):
        model, p_fixed = parse_p_plus(pplus)
        tradeoff = self.settings["tradeoff"]
        return cs.ScalingExperiment(n_range, self.args.trials, c0_policy, model, p_fixed,
            seed=_check_seed(self.args.seed), mode=mode, retry_cap=self.settings.getint("runtime", "retry_cap"),
            unitary_runtime_scale=tradeoff.getfloat("unitary_runtime_scale"),
            unitary_depth_scale=tradeoff.getfloat("unitary_depth_scale"), sampler=sampler)


    def _n_range(self):
        if self.args.nmin < 1 or self.args.nmax < self.args.nmin:
            raise ValueError("Need 1 <= nmin <= nmax, got {} and {}".format(self.args.nmin, self.args.nmax))
        return list(range(self.args.nmin, self.args.nmax + 1))


    def _input_vector(self, seed):
        args = self.args
        if args.input:
            u = le.read_vector_file(args.input, pad=args.pad)
            if args.n is not None and u.n != args.n:
                raise ValueError("--n {} does not match the {} entries of {}".format(args.n, u.N, args.input))
            return u
        if args.n is None:
            raise ValueError("prepare needs --input or --n")
        if args.n < 1:
            raise ValueError("--n must be at least 1, got {}".format(args.n))
        case = SamplingCase.GAUSSIAN if args.sample == "gaussian" else SamplingCase.UNIFORM
        rng = SeededStreams(seed).fork(INPUT_KEY).generator()
        return bl.SamplingModel(case, 1 << args.n, seed).sample(rng, positive=args.sample == "positive")


    def run_prepare(self):
        args = self.args
        section = self.settings["prepare"]
        seed = _check_seed(args.seed if args.seed is not None else section.getint("seed"))
        cfg = self.prep_config(PrepMode(args.mode or section["mode"]),
            pa.C0Policy.parse(args.c0 or section["c0"]),
            args.nu if args.nu is not None else section.getint("nu"),
            Engine(args.engine or section["engine"]), seed)
        u = self._input_vector(seed)
        self.run_config.resolved.update({"mode": cfg.mode.value, "c0": str(cfg.c0_policy), "n_u": cfg.n_u,
            "engine": cfg.engine.value, "seed": seed, "N": u.N})

        result = pa.prepare_amplitude(u, cfg)
        resized = le.resize(u).entries
        report = {
            "N": u.N,
            "n": u.n,
            "t_stp": result.t_stp,
            "restarts": result.restarts,
            "peak_copies": sum(part.peak_parallel_copies for part in result.parts),
            "depth_report": result.parts[0].to_dict(include_vector=False)["depth_report"],
            "resized_vector": [[x.real, x.imag] for x in resized],
            "amplitude": result.to_dict(),
        }
        if cfg.engine is Engine.EXACT:
            vectors = [[[x.real, x.imag] for x in part.vector] for part in result.parts]
            if result.positive:
                report["decoded_vector"] = vectors[0]
            else:
                report["decoded_vectors"] = vectors
        self.report(report)


    def run_runtime(self):
        args = self.args
        policy = pa.C0Policy.parse(args.c0)
        exp = self.experiment(self._n_range(), policy, args.pplus, PrepMode(args.mode), args.sampler)
        if policy.kind == "supra":
            comparison = cs.supra_model_comparison(exp, self.pool)
            rows = [tuple(row.values()) for row in comparison["fit"]["per_n_means"]]
            self.report(comparison, ("n", "N", "mean_tstp", "std_tstp"), rows)
            return
        fit = cs.run_scaling(exp, self.pool, bootstrap=args.bootstrap)
        self.report(fit.to_dict(), ("n", "N", "mean_tstp", "std_tstp"), fit.rows())


    def run_tradeoff(self):
        args = self.args
        if args.nu:
            model, _ = parse_p_plus(args.pplus)
            if model is PPlusModel.FIXED:
                raise ValueError("The leaf size sweep runs with the half or analytic p_plus model")
            tradeoff = self.settings["tradeoff"]
            rows = cs.tradeoff_sweep(args.n, args.nu, args.c0, args.trials, _check_seed(args.seed), model,
                tradeoff.getfloat("unitary_runtime_scale"), tradeoff.getfloat("unitary_depth_scale"), self.pool)
            columns = ("n_u", "depth", "qubits", "mean_tstp", "std_tstp", "unitary_runtime", "unitary_depth")
            self.report({"n": args.n, "c0": args.c0, "sweep": rows}, columns,
                [tuple(row[c] for c in columns) for row in rows])
            return

        template = self.experiment(self._n_range(), pa.C0Policy(), args.pplus)
        fits = cs.tradeoff_fits(args.betaq, template, self.pool)
        points = [(beta, fit.slope, fit.stderr) for beta, fit in fits]
        report = {
            "points": [{"beta_q": b, "beta_t": t, "stderr": e} for b, t, e in points],
            "nonincreasing": cs.nonincreasing_within_error(points),
            "fits": {str(beta): fit.to_dict() for beta, fit in fits},
        }
        rows = [(beta,) + row for beta, fit in fits for row in fit.rows()]
        self.report(report, ("beta_q", "n", "N", "mean_tstp", "std_tstp"), rows)


    def run_bounds(self):
        args = self.args
        section = self.settings["bounds"]
        delta = args.delta if args.delta is not None else section.getfloat("delta")
        epsilon_th = args.epsth if args.epsth is not None else section.getfloat("epsilon_th")
        trials = args.trials if args.trials is not None else section.getint("trials")
        seed = _check_seed(args.seed)
        self.run_config.resolved.update({"delta": delta, "epsilon_th": epsilon_th, "trials": trials})

        if args.result == "hoeffding":
            reports, monotone = cs.hoeffding_sequence(args.nmax)
            rows = [(r.n, r.log_product, r.product_lower_bound, r.claim_holds, all(r.preconditions))
                for r in reports]
            self.report({"reports": [r.to_dict() for r in reports], "monotone": monotone,
                "claim_holds": all(r.claim_holds for r in reports)},
                ("n", "log_product", "product_lower_bound", "claim_holds", "preconditions_hold"), rows)
            return

        if args.n < 1:
            raise ValueError("--n must be at least 1, got {}".format(args.n))
        N = 1 << args.n
        if args.result == "chernoff":
            self.report(bl.chernoff_report(N, delta, epsilon_th))
            return
        if args.result == "4":
            report = bl.verify_result4(bl.SamplingModel(SamplingCase(args.case), N, seed), trials, delta, self.pool)
        else:
            report = bl.verify_result5(epsilon_th, delta, N, trials, seed, self.pool)
        self.report(report.to_dict(), report.columns, report.rows)


    def run_emit(self):
        args = self.args
        if args.what == "concat":
            circuit = Builders.build_concat_circuit(args.n)
        elif args.what == "complex":
            circuit = Builders.build_complex_circuit(args.n)
        else:
            copies = 1 if args.what == "full-seq" else args.c0
            circuit, _ = Builders.build_network_circuit(args.n, copies)
        comments = ["{} n={}".format(args.what, args.n)]
        if args.decompose:
            circuit = Decompose.decompose(circuit)
            comments.extend(Decompose.header_comments())

        if args.schedule_out:
            LightCone.write_schedule_file(args.schedule_out, LightCone.schedule_from_circuit(circuit))
        if not args.circuit_out:
            sys.stdout.write(CircuitText.emit(circuit, comments))
            return
        CircuitText.write_circuit(args.circuit_out, circuit, comments)
        counts = {kind.value: count for kind, count in sorted(circuit.gate_count().items(), key=lambda x: x[0].value)}
        self.report({"what": args.what, "n": args.n, "decomposed": args.decompose, "qubits": circuit.num_qubits,
            "depth": circuit.depth, "gate_count": counts, "path": args.circuit_out})


    def run_lightcone(self):
        args = self.args
        schedule = LightCone.read_schedule_file(args.schedule)
        cone = sorted(LightCone.light_cone(schedule, args.qubit))
        minimum = LightCone.depth_lower_bound(len(cone), schedule.k) if schedule.k > 1 else 0.0
        self.report({"qubit": args.qubit, "light_cone": cone, "size": len(cone), "L": schedule.L,
            "k": schedule.k, "min_layers": minimum, "consistent": schedule.L >= minimum - 1e-12})


    def run_table1(self):
        args = self.args
        self._n_range()
        cfg = self.prep_config(PrepMode.PARALLEL, pa.C0Policy(), 1, Engine.CASCADE, args.seed)
        report = cs.table1_report(args.trials, args.nmin, args.nmax, _check_seed(args.seed), cfg, self.pool)
        rows = [(row["method"], row["depth"], row["qubits"], row.get("runtime_exponent", ""),
            row.get("runtime_quadratic_a", "")) for row in report["rows"]]
        self.report(report, ("method", "depth", "qubits", "runtime_exponent", "runtime_quadratic_a"), rows)


    def run(self):
        handler = getattr(self, "run_" + self.run_config.subcommand)
        logging.debug("Running %s", self.run_config.subcommand)
        handler()


def _write_partial(writer, run_config, error):
    try:
        writer.write_json(run_config.subcommand, {"error": str(error), "steps": error.steps,
            "partial": error.partial}, run_config.out, run_config.to_dict())
    except OSError as io_error:
        logging.error("Unable to write the partial report: %s", io_error)


def main(argv=None):
    '''
    Parse argv, run one subcommand and map its failure to an exit code
    '''
    argv = sys.argv[1:] if argv is None else list(argv)
    writer = None
    run_config = None
    try:
        args = build_parser().parse_args(argv)
        settings = load_settings(args.config)
        configure_logging(settings)

        no_meta = args.no_meta if args.no_meta is not None else settings.getboolean("output", "no_meta")
        output = dict(settings["output"])
        output["no_meta"] = str(no_meta)
        writer = ReportWriter(output)
        threads = resolve_threads(args, settings)
        options = dict(vars(args))
        run_config = RunConfig(args.subcommand, options,
            {name: dict(settings[name]) for name in settings.sections()}, threads, no_meta, args.out, args.csv)

        with TrialPool(threads, settings.getint("runtime", "chunk_size")) as pool:
            QsprepApplication(run_config, settings, writer, pool).run()
    except SystemExit as stop:
        # --help
        return stop.code if isinstance(stop.code, int) else EXIT_OK
    except (pa.RetryCapExceededError, ImpossibleOutcomeError) as error:
        logging.error("Run aborted: %s", error)
        if writer is not None and isinstance(error, pa.RetryCapExceededError):
            _write_partial(writer, run_config, error)
        return EXIT_ABORTED
    except (ValueError, configparser.Error) as error:
        logging.error("Invalid input: %s", error)
        return EXIT_INVALID
    except OSError as error:
        logging.error("File error: %s", error)
        return EXIT_IO
    return EXIT_OK


# Here is the main entry point.
if __name__ == "__main__":
    status = main()

    logging.shutdown()
    sys.exit(status)
