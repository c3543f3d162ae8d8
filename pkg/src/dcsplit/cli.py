"""``dc-split``: benchmark harness for the four experiment families.

Output layout under ``--out`` (default ``./dc-split-out``)::

    <subcommand>.csv            results table (one per subcommand; svm-bench
                                writes one table per split plus a long table)
    <subcommand>_summary.json   configuration and per-run terminal summaries
    traces/<run-id>.csv         per-iteration trace, columns
                                n,err,err_squared,err_relative,objective,time_s,
                                step_norm,gap_norm,lyap_c,lyap_a

Wall-time cells are the columns whose header contains ``time`` and the
``Time`` row of the per-split SVM tables; everything else is a deterministic
function of the arguments and ``--seed``.

Exit status: 0 on success, 1 on configuration errors, 2 on data errors.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import AlphaSchedule, KappaSchedule, SolverConfig, StopRule
from .data import (SplitSpec, load_csv, standardize, train_test_split,
                   undersample_majority)
from .errors import ConfigError, DataError
from .linalg import child_seeds, gaussian_vector
from .metrics import ClassificationReport
from .problems import (QuadL1HuberSpec, RlsLogSpec, SvmSpec, build_quad_l1_huber,
                       build_rls_log, build_svm, predict_svm)
from .solvers import Method, MethodTag, solve

DEFAULT_SPLITS = (0.1, 0.2, 0.3, 0.4)
RLS_METHODS = ("DRS_THETA", "DRS_ALPHA", "DCA", "GDCP")
SVM_METHODS = ("ADMM", "DRS_THETA", "DRS_ALPHA", "DCA", "GDCP")


# -- argument parsing ---------------------------------------------------------

def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _sizes(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower().strip("()")
        if not tok:
            continue
        try:
            a, b = tok.split("x")
            out.append((int(a), int(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"size {tok!r} is not of the form MxN")
    return out


def _methods(text):
    names = [t.strip().upper() for t in text.split(",") if t.strip()]
    for n in names:
        if n not in MethodTag.__members__:
            raise argparse.ArgumentTypeError(f"unknown method {n!r}")
    return names


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="dc-split", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=0):
        sp.add_argument("--seed", type=int, default=seed)
        sp.add_argument("--out", type=Path, default=Path("dc-split-out"))
        sp.add_argument("--max-iter", type=int)
        sp.add_argument("--no-traces", action="store_true", help="skip per-run trace files")

    sp = sub.add_parser("tune-theta", help="iterations of DRS-theta over a theta grid")
    common(sp)
    sp.add_argument("--sizes", type=_sizes,
                    default=_sizes("100x25,200x100,300x150,400x250,600x300,600x400"))
    sp.add_argument("--theta", type=_floats, default=[0.0005, 0.05, 0.5, 1, 5])
    sp.add_argument("--beta", type=float, default=0.1)
    _quad_args(sp)

    sp = sub.add_parser("tune-beta", help="iterations of DRS-theta over a beta grid")
    common(sp)
    sp.add_argument("--sizes", type=_sizes,
                    default=_sizes("100x25,200x100,300x150,400x250,600x300,600x400"))
    sp.add_argument("--beta", type=_floats, default=[0.0001, 0.001, 0.1, 1, 10])
    sp.add_argument("--theta", type=float, default=0.0005)
    _quad_args(sp)

    sp = sub.add_parser("rls-bench", help="least squares with log penalty: method comparison")
    common(sp)
    sp.add_argument("--sizes", type=_sizes,
                    default=_sizes("100x50,200x128,521x304,700x500,1000x700,1500x1000"))
    sp.add_argument("--methods", type=_methods, default=list(RLS_METHODS))
    sp.add_argument("--beta", type=float, default=0.04)
    sp.add_argument("--theta", type=float, default=0.9)
    sp.add_argument("--alpha-scale", type=float, default=1.0,
                    help="alpha_n = scale / (n + 1)")
    sp.add_argument("--kappa-offset", type=float, default=10.0,
                    help="kappa_n = n / (n + offset)")
    sp.add_argument("--mu", type=float, default=0.001)
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.add_argument("--solver", choices=("lu", "cg"), default="lu")

    sp = sub.add_parser("svm-bench", help="l1-regularized SVM on a CSV dataset")
    common(sp)
    sp.add_argument("--dataset", type=Path, required=True)
    sp.add_argument("--label-col", default="class")
    sp.add_argument("--positive", default="1")
    sp.add_argument("--no-header", action="store_true",
                    help="file has no header row; --label-col is a column index")
    sp.add_argument("--splits", type=_floats, default=list(DEFAULT_SPLITS))
    sp.add_argument("--methods", type=_methods, default=list(SVM_METHODS))
    sp.add_argument("--undersample", action="store_true")
    sp.add_argument("--no-standardize", action="store_true")
    sp.add_argument("--C", type=float, default=1.0)
    sp.add_argument("--lam", type=float, default=0.001)
    sp.add_argument("--beta", type=float, default=0.001)
    sp.add_argument("--theta", type=float, default=0.01)
    sp.add_argument("--kappa", type=float, default=0.3)
    sp.add_argument("--alpha-scale", type=float, default=0.1,
                    help="alpha_n = scale / (n + 1)")
    sp.add_argument("--admm-penalty", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-4)
    return p


def _quad_args(sp):
    sp.add_argument("--kappa", type=float, default=0.009)
    sp.add_argument("--delta", type=float, default=0.001)
    sp.add_argument("--l1-weight", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.add_argument("--spd", action="store_true",
                    help="use Q = G^T G + 0.1 I (square, positive definite)")


# -- jobs ----------------------------------------------------------------------

def _x0_pair(n, seed):
    sx, sv = child_seeds(seed, 2)
    return gaussian_vector(n, sx), gaussian_vector(n, sv)


def _run_quad(job):
    M, N = job["size"]
    problem = build_quad_l1_huber(QuadL1HuberSpec(
        M, N, kappa=job["kappa"], delta=job["delta"], l1_weight=job["l1_weight"],
        seed=job["problem_seed"], spd=job["spd"]))
    x0, v0 = _x0_pair(N, job["start_seed"])
    res = solve(problem, Method(MethodTag.DRS_THETA), job["config"], x0, v0)
    return res.trace


def _run_rls(job):
    m, N = job["size"]
    problem = build_rls_log(RlsLogSpec(m, N, mu=job["mu"], epsilon=job["epsilon"],
                                       seed=job["problem_seed"], solver=job["solver"]))
    x0, v0 = _x0_pair(N, job["start_seed"])
    res = solve(problem, Method(job["method"]), job["config"], x0, v0)
    return res.trace


def _run_svm(job):
    train, test = job["train"], job["test"]
    problem = build_svm(SvmSpec(C=job["C"], lam=job["lam"]), train)
    x0, v0 = _x0_pair(problem.dim, job["start_seed"])
    method = Method(job["method"], admm_penalty=job["admm_penalty"])
    t0 = time.perf_counter()
    res = solve(problem, method, job["config"], x0, v0)
    elapsed = time.perf_counter() - t0
    d = train.d
    pred = predict_svm(res.x[:d], res.x[d], test.X)
    report = ClassificationReport.from_predictions(test.y, pred, elapsed, res.iterations)
    return res.trace, report


def _workers(n_jobs):
    cap = os.environ.get("DC_SPLIT_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"DC_SPLIT_THREADS must be an integer, got {cap!r}")
    return max(1, min(n, n_jobs))


def _map(fn, jobs):
    workers = _workers(len(jobs))
    if workers == 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


# -- output --------------------------------------------------------------------

def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    path.write_text(buf.getvalue())


def _write_traces(out, runs, enabled):
    if not enabled:
        return
    tdir = out / "traces"
    tdir.mkdir(parents=True, exist_ok=True)
    for run_id, trace in runs:
        trace.to_csv(tdir / f"{run_id}.csv")


def _fmt_param(v):
    return f"{v:g}"


# -- subcommands ---------------------------------------------------------------

def _quad_config(args, beta, theta):
    return SolverConfig(beta=beta, theta=theta, kappa=KappaSchedule.constant(args.kappa),
                        max_iter=1000 if args.max_iter is None else args.max_iter,
                        stop_rule=StopRule("squared", args.tol), seed=args.seed,
                        record_objective=False)


def _tune(args, vary):
    """Shared body of tune-theta / tune-beta; ``vary`` names the swept parameter."""
    grid = args.theta if vary == "theta" else args.beta
    fixed = args.beta if vary == "theta" else args.theta
    if not grid:
        raise ConfigError(f"--{vary} grid is empty")
    if not args.sizes:
        raise ConfigError("--sizes is empty")
    configs = {}
    for val in grid:
        beta, theta = (fixed, val) if vary == "theta" else (val, fixed)
        configs[val] = _quad_config(args, beta, theta)
    seeds = child_seeds(args.seed, len(args.sizes))
    jobs, ids = [], []
    for (M, N), s in zip(args.sizes, seeds):
        ps, ss = child_seeds(s, 2)
        for val in grid:
            jobs.append(dict(size=(M, N), kappa=args.kappa, delta=args.delta,
                             l1_weight=args.l1_weight, spd=args.spd, problem_seed=ps,
                             start_seed=ss, config=configs[val]))
            ids.append(((M, N), val))
    traces = _map(_run_quad, jobs)

    header = ["M", "N"]
    for val in grid:
        header += [f"iter[{vary}={_fmt_param(val)}]", f"time[{vary}={_fmt_param(val)}]"]
    by_key = dict(zip(ids, traces))
    rows = []
    for M, N in args.sizes:
        row = [M, N]
        for val in grid:
            tr = by_key[((M, N), val)]
            row += [tr.total_iterations, tr.total_seconds]
        rows.append(row)
    name = f"tune_{vary}"
    write_table(args.out / f"{name}.csv", header, rows)
    runs = [(f"{name}_{M}x{N}_{vary}{_fmt_param(v)}", tr) for ((M, N), v), tr in zip(ids, traces)]
    _write_traces(args.out, runs, not args.no_traces)
    _write_summary(args.out / f"{name}_summary.json", args, runs)
    return rows


def _write_summary(path, args, runs):
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
           if k != "func"}
    data = {"arguments": cfg, "runs": {rid: tr.summary() for rid, tr in runs}}
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")


def cmd_tune_theta(args):
    return _tune(args, "theta")


def cmd_tune_beta(args):
    return _tune(args, "beta")


def cmd_rls_bench(args):
    if not args.sizes or not args.methods:
        raise ConfigError("--sizes and --methods must be non-empty")
    bad = set(args.methods) - set(RLS_METHODS)
    if bad:
        raise ConfigError(f"rls-bench supports {', '.join(RLS_METHODS)}; got {sorted(bad)}")
    config = SolverConfig(
        beta=args.beta, theta=args.theta, alpha=AlphaSchedule.harmonic(args.alpha_scale),
        kappa=KappaSchedule.ratio(args.kappa_offset),
        max_iter=1000 if args.max_iter is None else args.max_iter,
        stop_rule=StopRule("relative", args.tol), seed=args.seed, record_objective=True)
    seeds = child_seeds(args.seed, len(args.sizes))
    jobs, ids = [], []
    for (m, N), s in zip(args.sizes, seeds):
        ps, ss = child_seeds(s, 2)
        for meth in args.methods:
            jobs.append(dict(size=(m, N), method=meth, mu=args.mu, epsilon=args.epsilon,
                             solver=args.solver, problem_seed=ps, start_seed=ss, config=config))
            ids.append(((m, N), meth))
    traces = _map(_run_rls, jobs)
    by_key = dict(zip(ids, traces))
    header = ["m", "N"]
    for meth in args.methods:
        header += [f"iter[{meth}]", f"time[{meth}]"]
    rows = []
    for m, N in args.sizes:
        row = [m, N]
        for meth in args.methods:
            tr = by_key[((m, N), meth)]
            row += [tr.total_iterations, tr.total_seconds]
        rows.append(row)
    write_table(args.out / "rls_bench.csv", header, rows)
    runs = [(f"rls_{m}x{N}_{meth}", tr) for ((m, N), meth), tr in zip(ids, traces)]
    _write_traces(args.out, runs, not args.no_traces)
    _write_summary(args.out / "rls_bench_summary.json", args, runs)
    return rows


METRIC_ROWS = (("Accuracy", "accuracy"), ("Precision", "precision"), ("Time", "time_seconds"),
               ("MAE", "mae"), ("MSE", "mse"), ("RMSE", "rmse"), ("Iterations", "iterations"))


def cmd_svm_bench(args):
    if not args.splits or not args.methods:
        raise ConfigError("--splits and --methods must be non-empty")
    for f in args.splits:
        if not 0 < f < 1:
            raise ConfigError(f"split fraction {f} outside (0, 1)")
    config = SolverConfig(
        beta=args.beta, theta=args.theta, alpha=AlphaSchedule.harmonic(args.alpha_scale),
        kappa=KappaSchedule.constant(args.kappa),
        max_iter=2000 if args.max_iter is None else args.max_iter,
        stop_rule=StopRule("absolute", args.tol), seed=args.seed, record_objective=False)
    Method(MethodTag.ADMM, admm_penalty=args.admm_penalty)

    data = load_csv(args.dataset, args.label_col, args.positive, header=not args.no_header)
    s_under, s_split, s_start = child_seeds(args.seed, 3)
    if args.undersample:
        data = undersample_majority(data, s_under)
    jobs, ids = [], []
    for frac in args.splits:
        train, test = train_test_split(data, SplitSpec(frac, seed=s_split))
        if not args.no_standardize:
            train, test = standardize(train, test)
        if train.n == 0 or test.n == 0:
            raise DataError(f"split {frac} leaves an empty train or test set")
        for meth in args.methods:
            jobs.append(dict(train=train, test=test, method=meth, C=args.C, lam=args.lam,
                             admm_penalty=args.admm_penalty, start_seed=s_start, config=config))
            ids.append((frac, meth))
    outputs = _map(_run_svm, jobs)
    by_key = dict(zip(ids, outputs))

    long_rows = []
    for frac in args.splits:
        rows = []
        for label, attr in METRIC_ROWS:
            rows.append([label] + [getattr(by_key[(frac, m)][1], attr) for m in args.methods])
        write_table(args.out / f"svm_split{round(frac * 100):02d}.csv", ["metric"] + args.methods, rows)
        for m in args.methods:
            r = by_key[(frac, m)][1]
            long_rows.append([frac, m, r.accuracy, r.precision, r.mae, r.mse, r.rmse,
                              r.iterations, r.time_seconds, int(r.precision_degenerate)])
    write_table(args.out / "svm_bench.csv",
                ["split", "method", "accuracy", "precision", "mae", "mse", "rmse",
                 "iterations", "time_seconds", "precision_degenerate"], long_rows)
    runs = [(f"svm_split{round(f * 100):02d}_{m}", out[0]) for (f, m), out in zip(ids, outputs)]
    _write_traces(args.out, runs, not args.no_traces)
    _write_summary(args.out / "svm_bench_summary.json", args, runs)
    return long_rows


COMMANDS = {
    "tune-theta": cmd_tune_theta,
    "tune-beta": cmd_tune_beta,
    "rls-bench": cmd_rls_bench,
    "svm-bench": cmd_svm_bench,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.max_iter is not None and args.max_iter < 0:
            raise ConfigError("--max-iter must be non-negative")
        args.out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"dc-split: configuration error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"dc-split: data error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
