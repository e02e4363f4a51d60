"""Batch front-end: ``psthue <experiment> [flags]``.

Each run writes ``<experiment>.csv`` (one result record per line),
``<experiment>.dat`` (whitespace-separated plot columns) and
``<experiment>.meta`` (JSON: arguments, timings, versions, timestamp).
The CSV and .dat files depend only on the arguments; timings stay in .meta
unless ``--timings`` asks for them in the runtime_ms column.

Exit codes: 0 success, 1 numeric or diagnostic failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError

CSV_HEADER = ["name", "param_json", "value", "normalized", "runtime_ms"]


class UsageError(Exception):
    pass


class Output:
    """Collects records and plot rows for one experiment."""

    def __init__(self, dat_columns: list[str]):
        self.records: list[tuple] = []
        self.dat_columns = dat_columns
        self.dat_rows: list[tuple] = []

    def record(self, name: str, params: dict, value, normalized, runtime_ms: int = 0):
        normalized = float(normalized)
        if not math.isfinite(normalized):
            raise ArithmeticError(f"{name}: normalized value is not finite")
        self.records.append((name, params, value, normalized, int(runtime_ms)))

    def plot(self, *row):
        self.dat_rows.append(row)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _json(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"), default=str)


# --- experiments -----------------------------------------------------------


def run_orthogonality(a, out: Output):
    from .experiments import ExperimentConfig, mobius_orthogonality

    r = mobius_orthogonality(ExperimentConfig(c=a.c, N=a.N), workers=a.workers)
    for n, v in r.partials:
        p = {"c": a.c, "N": a.N, "n": n}
        if n == a.N:
            p.update(sum_01=r.sum_01, mertens=r.mertens)
        out.record("sum_pm", p, v, v / n)
        out.plot(n, v / n)


def run_ddkbsz(a, out: Output):
    from .experiments import ExperimentConfig, ddkbsz_harness

    for row in ddkbsz_harness(ExperimentConfig(c=a.c, N=a.N, theta=a.theta), workers=a.workers):
        p = {"c": a.c, "N": a.N, "theta": a.theta, "k": row.k, "primes": row.primes}
        out.record("aggregate", p, row.aggregate, row.ratio)
        out.record("diagonal", p, row.diagonal, row.diagonal / a.N)
        out.plot(row.k, row.ratio)


def run_patterns(a, out: Output):
    from .experiments import ExperimentConfig, pattern_frequencies

    r = pattern_frequencies(a.p, a.q, ExperimentConfig(c=a.c, N=a.N))
    for (x, y), cnt in sorted(r.counts.items()):
        dev = float(r.deviation(x, y))
        out.record(f"pattern_{x}{y}", {"p": a.p, "q": a.q, "c": a.c, "N": a.N, "diagonal": r.diagonal}, cnt, dev)
        out.plot(2 * x + y, dev)


def run_prop2(a, out: Output):
    from .experiments import ExperimentConfig, prop2_rhs

    cfg = ExperimentConfig(c=a.c, N=a.N, K=a.K, seed=a.seed)
    r = prop2_rhs(a.p, a.q, cfg, a.k, alpha_draws=a.alpha_draws)
    p = {"p": a.p, "q": a.q, "c": a.c, "N": a.N, "K": a.K, "k": a.k}
    for name in ("lhs", "term1", "term2", "J_hat", "J_stderr"):
        v = getattr(r, name)
        out.record(name, p, v, v / r.rhs)
    out.plot(a.K, r.lhs, r.rhs)


def _gowers_point(args):
    from .gowers import gowers_recursion

    m, rho = args
    return gowers_recursion(m, rho)


def run_gowers(a, out: Output):
    from .errors import SizeError
    from .gowers import RECURSION_BUDGET
    from .parallel import ordered_map

    if a.m > 2 and (a.m - 2) * a.rho_max > RECURSION_BUDGET:
        raise SizeError(f"(m-2) rho_max = {(a.m - 2) * a.rho_max} exceeds the recursion budget {RECURSION_BUDGET}")
    rhos = list(range(a.rho_min, a.rho_max + 1))
    for g in ordered_map(_gowers_point, [(a.m, r) for r in rhos], a.workers):
        out.record("gowers_power", {"m": a.m, "rho": g.rho, "method": g.method.value}, g.value, g.norm)
        out.plot(g.rho, math.log2(g.value))


def run_gowers_integral(a, out: Output):
    from .gowers import gowers_recursion, integral_gowers_mc

    est = integral_gowers_mc(a.m, a.rho, a.samples, a.seed)
    disc = gowers_recursion(a.m, a.rho).value
    p = {"m": a.m, "rho": a.rho, "samples": a.samples, "seed": a.seed}
    out.record("integral_estimate", p, est.estimate, est.estimate - disc)
    out.record("integral_stderr", p, est.stderr, est.stderr)
    out.record("discrete_value", p, disc, disc)
    out.plot(a.rho, est.estimate, est.stderr, disc)


def run_discrepancy(a, out: Output):
    from .equidist import PointSet, discrepancy_1d, discrepancy_2d, etk_bound

    n = np.arange(1, a.N + 1, dtype=np.float64)
    if a.alpha2 is None:
        ps = PointSet.from_values(a.alpha * n)
        d = discrepancy_1d(ps).value
    else:
        ps = PointSet.from_values(np.column_stack([a.alpha * n, a.alpha2 * n]))
        d = discrepancy_2d(ps).value
    p = {"alpha": a.alpha, "alpha2": a.alpha2, "N": a.N}
    out.record("discrepancy", p, d, d * a.N)
    e = etk_bound(ps, a.H)
    out.record("etk_bound", {**p, "H": a.H}, e, d / e)
    out.plot(a.N, d, e)


def _meansq_point(args):
    from .equidist import mean_square_discrepancy_estimate

    N, samples, seed = args
    return mean_square_discrepancy_estimate(N, samples, seed)


def run_meansq(a, out: Output):
    from .parallel import ordered_map, spawn_seeds

    Ns = a.Ns
    seeds = spawn_seeds(a.seed, len(Ns))
    for N, r in zip(Ns, ordered_map(_meansq_point, [(N, a.samples, s) for N, s in zip(Ns, seeds)], a.workers)):
        out.record("mean_discrepancy", {"N": N, "samples": a.samples, "seed": a.seed}, r.mean, r.ratio)
        out.plot(N, r.mean, r.stderr, r.ratio)


def _census_point(args):
    from .arith import primes_in_window, sieve
    from .diophantine import bad_pair_census

    k, c, eps, q_max = args
    w = primes_in_window(sieve(2 ** (k + 1)), k, 0.999, 2.0 ** (2 * (k + 1)))
    return bad_pair_census(w, c, eps, q_max)


def run_badpairs(a, out: Output):
    from .parallel import ordered_map

    jobs = [(a.k, a.c, e, a.q_max) for e in a.eps]
    for e, r in zip(a.eps, ordered_map(_census_point, jobs, a.workers)):
        p = {"k": a.k, "c": a.c, "eps": e, "q_max": a.q_max, "pairs": r.total_pairs}
        out.record("bad_pairs", p, r.bad_pairs, r.fraction)
        out.plot(e, r.fraction)


def run_s0(a, out: Output):
    from .reduction import s0_sample

    r = s0_sample(a.D, a.N, a.gamma, a.alpha_samples, a.beta_grid, a.seed)
    p = {"D": a.D, "N": a.N, "gamma": a.gamma, "alpha_samples": a.alpha_samples,
         "beta_grid": a.beta_grid, "seed": a.seed, "lower_bound": True}
    out.record("s0_estimate", p, r.estimate, r.ratio)
    out.record("s0_stderr", p, r.stderr, r.stderr / (a.D * a.N))
    out.plot(a.N, r.ratio)


def run_expsum_avg(a, out: Output):
    from .reduction import avg_linear_expsum

    for panels in (a.quad_points, 2 * a.quad_points):
        r = avg_linear_expsum(a.D, a.t, a.N, panels)
        out.record("W_hat", {"D": a.D, "t": a.t, "N": a.N, "panels": panels}, r.W_hat, r.ratio)
        out.plot(panels, r.W_hat, r.cap)


def run_complexity(a, out: Output):
    from .experiments import subword_complexity

    for H, cnt in subword_complexity(a.source, a.H_max, a.length, a.c if a.source == "ps" else None):
        out.record("factors", {"source": a.source, "H": H, "length": a.length}, cnt, cnt / H)
        out.plot(H, cnt)


def run_normality(a, out: Output):
    from .experiments import normality_stats

    t = normality_stats(a.c, a.H, a.N)
    for pat, f in sorted(t.frequencies.items()):
        bits = format(pat, f"0{a.H}b") if a.H else ""
        out.record("frequency", {"c": a.c, "H": a.H, "N": a.N, "pattern": bits}, f.numerator, float(f) * 2**a.H)
        out.plot(pat, float(f))


def run_params(a, out: Output):
    from .reduction import section9_parameters

    params, checks = section9_parameters(a.log2_N, a.log2_D, a.theta1, a.eta1)
    base = {"log2_N": a.log2_N, "log2_D": a.log2_D, "theta1": a.theta1, "eta1": str(params.eta1)}
    for key in ("lam", "mu", "sigma", "rho", "m", "l"):
        out.record(key, base, getattr(params, key), getattr(params, key))
    for i, ch in enumerate(checks):
        out.record(f"check: {ch.name}", base, int(ch.holds), float(ch.slack))
        out.plot(i, int(ch.holds), float(ch.slack))
    if not all(ch.holds for ch in checks):
        print("failing constraints: " + "; ".join(c.name for c in checks if not c.holds), file=sys.stderr)


def run_carry(a, out: Output):
    from .corput import carry_exception_count

    r = carry_exception_count(a.alpha, a.beta, a.r, a.lam, a.N)
    p = {"alpha": a.alpha, "beta": a.beta, "r": a.r, "lam": a.lam, "N": a.N}
    out.record("carry_exceptions", p, r.count, r.count / r.bound)
    out.plot(a.lam, r.count, r.bound)


def run_vdc(a, out: Output):
    from .corput import ComplexSeq, vdc_set, vdc_weighted

    rng = np.random.default_rng(a.seed)
    worst_w = worst_s = 0.0
    bad_w = bad_s = 0
    for _ in range(a.trials):
        n = int(rng.integers(1, a.N_max + 1))
        z = ComplexSeq(rng.normal(size=n) + 1j * rng.normal(size=n))
        w = vdc_weighted(z, int(rng.integers(1, a.R_max + 1)))
        K = rng.integers(0, a.R_max, size=int(rng.integers(1, 9)))
        s = vdc_set(z, K.tolist())
        bad_w += not w.holds
        bad_s += not s.holds
        worst_w = max(worst_w, w.lhs / w.rhs if w.rhs else 0.0)
        worst_s = max(worst_s, s.lhs / s.rhs if s.rhs else 0.0)
    p = {"trials": a.trials, "seed": a.seed, "N_max": a.N_max, "R_max": a.R_max}
    out.record("vdc_weighted_violations", p, bad_w, worst_w)
    out.record("vdc_set_violations", p, bad_s, worst_s)
    out.plot(0, bad_w, worst_w)
    out.plot(1, bad_s, worst_s)


# --- argument parsing ------------------------------------------------------


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.replace(",", " ").split()]


def _ints(s: str) -> list[int]:
    return [int(float(x)) for x in s.replace(",", " ").split()]


def _int(s: str) -> int:
    # accept 1e6 and 10**6 style sizes
    s = str(s).strip()
    if "**" in s:
        b, e = s.split("**")
        return int(b) ** int(e)
    v = float(s)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"{s} is not an integer")
    return int(v)


def _seed(s: str) -> int:
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


EXPERIMENTS = {
    "orthogonality": (run_orthogonality, ["n", "normalized_sum"],
                      [("--c", float, 1.5), ("--N", _int, 10**4)]),
    "ddkbsz": (run_ddkbsz, ["k", "ratio"],
               [("--c", float, 1.5), ("--N", _int, 10**5), ("--theta", float, 0.35)]),
    "patterns": (run_patterns, ["pattern", "deviation"],
                 [("--p", int, 11), ("--q", int, 13), ("--c", float, 1.3), ("--N", _int, 10**5)]),
    "prop2": (run_prop2, ["K", "lhs", "rhs"],
              [("--p", int, 11), ("--q", int, 13), ("--c", float, 1.3), ("--N", _int, 10**5),
               ("--K", _int, 200), ("--k", int, 3), ("--alpha-draws", int, 200)]),
    "gowers": (run_gowers, ["rho", "log2_value"],
               [("--m", int, 2), ("--rho-min", int, 2), ("--rho-max", int, 10)]),
    "gowers-integral": (run_gowers_integral, ["rho", "estimate", "stderr", "discrete"],
                        [("--m", int, 2), ("--rho", int, 2), ("--samples", _int, 10**5)]),
    "discrepancy": (run_discrepancy, ["N", "discrepancy", "etk_bound"],
                    [("--alpha", float, math.sqrt(2)), ("--alpha2", float, None), ("--N", _int, 1000),
                     ("--H", int, 64)]),
    "meansq": (run_meansq, ["N", "mean", "stderr", "ratio"],
               [("--Ns", _ints, [1000, 3000, 10000]), ("--samples", int, 50)]),
    "badpairs": (run_badpairs, ["eps", "fraction"],
                 [("--k", int, 8), ("--c", float, 1.5), ("--eps", _floats, [1e-3, 1e-4]),
                  ("--q-max", int, 50)]),
    "s0": (run_s0, ["N", "ratio"],
           [("--D", float, 50.0), ("--N", _int, 10**4), ("--gamma", float, 1.2247),
            ("--alpha-samples", int, 20), ("--beta-grid", int, 16)]),
    "expsum-avg": (run_expsum_avg, ["panels", "W_hat", "cap"],
                   [("--D", float, 100.0), ("--t", float, 0.37), ("--N", _int, 1000),
                    ("--quad-points", int, 20000)]),
    "complexity": (run_complexity, ["H", "count"],
                   [("--source", str, "thue_morse"), ("--H-max", int, 12), ("--length", _int, 2**16),
                    ("--c", float, 1.3)]),
    "normality": (run_normality, ["pattern", "frequency"],
                  [("--c", float, 1.3), ("--H", int, 4), ("--N", _int, 10**5)]),
    "params": (run_params, ["check", "holds", "slack"],
               [("--log2-N", _int, 2**26), ("--log2-D", _int, 12 * 2**26), ("--theta1", float, 0.05),
                ("--eta1", float, 0.1)]),
    "carry": (run_carry, ["lam", "count", "bound"],
              [("--alpha", float, math.sqrt(2)), ("--beta", float, 0.3), ("--r", int, 5),
               ("--lam", int, 8), ("--N", _int, 10**4)]),
    "vdc": (run_vdc, ["instance", "violations", "worst_ratio"],
            [("--trials", int, 1000), ("--N-max", int, 1000), ("--R-max", int, 50)]),
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key=value file; flags given on the command line win")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--timings", action="store_true", help="put measured runtimes in the CSV")


HELP = {
    "orthogonality": "sum of mu(n) (-1)^t(floor(n^c)) at ten checkpoints",
    "ddkbsz": "prime-pair correlation aggregates per dyadic window",
    "patterns": "joint digit-parity frequencies for a prime pair",
    "prop2": "correlation sum against the two-term upper bound",
    "gowers": "exact Gowers power values of the truncated Thue-Morse sign",
    "gowers-integral": "Monte-Carlo integral Gowers norm next to the discrete one",
    "discrepancy": "exact and grid-bounded discrepancy of Kronecker points",
    "meansq": "average discrepancy of {alpha n} over random alpha",
    "badpairs": "share of prime pairs with a well-approximable ratio power",
    "s0": "sampled lower bound for the digit-constrained double sum",
    "expsum-avg": "averaged linear exponential sum and its cap",
    "complexity": "distinct factor counts of Thue-Morse or its PS subsequence",
    "normality": "window frequencies of t(floor(n^c))",
    "params": "feasibility checks for the digit-cutting parameters",
    "carry": "carry exception count against its bound",
    "vdc": "random van der Corput inequality trials",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psthue", description="Run a numerical experiment and write CSV/.dat/.meta files.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="experiment", metavar="experiment", required=True)
    for name, (_, _, flags) in EXPERIMENTS.items():
        sp = sub.add_parser(name, help=HELP[name])
        _common(sp)
        for flag, typ, default in flags:
            sp.add_argument(flag, type=typ, default=default, help=f"default: {default}")
    return parser


def read_config(path: Path) -> dict:
    """Flat key=value lines; '#' starts a comment; keys may use - or _."""
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def parse(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    sub = parser._subparsers._group_actions[0].choices[args.experiment]
    known = {a.dest: a for a in sub._actions}
    cfg = read_config(args.config)
    unknown = sorted(set(cfg) - set(known) - {"experiment"})
    if unknown:
        raise UsageError(f"unknown config keys for {args.experiment}: {', '.join(unknown)}")
    if cfg.pop("experiment", args.experiment) != args.experiment:
        raise UsageError("config names a different experiment")
    # string defaults go through each option's type converter, so config
    # values behave exactly like flags; explicit flags still take priority
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def write_outputs(name: str, args, out: Output, elapsed_ms: int):
    args.out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec_name, params, value, normalized, rt in out.records:
        w.writerow([rec_name, _json(params), _fmt(value), _fmt(normalized), rt if args.timings else 0])
    (args.out / f"{name}.csv").write_text(buf.getvalue())
    lines = ["# " + " ".join(out.dat_columns)]
    lines += [" ".join(_fmt(v) for v in row) for row in out.dat_rows]
    (args.out / f"{name}.dat").write_text("\n".join(lines) + "\n")
    meta = {
        "experiment": name,
        "arguments": {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())},
        "runtime_ms": elapsed_ms,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    (args.out / f"{name}.meta").write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")


def main(argv=None) -> int:
    try:
        args = parse(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"psthue: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # argparse reports usage errors this way
        return int(e.code or 0)
    if args.workers < 1:
        print("psthue: --workers must be positive", file=sys.stderr)
        return 2
    func, columns, _ = EXPERIMENTS[args.experiment]
    out = Output(columns)
    t0 = time.perf_counter()
    try:
        func(args, out)
    except ConfigurationError as e:
        print(f"psthue: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as e:
        print(f"psthue: {args.experiment} failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    if args.timings:
        out.records = [r[:4] + (elapsed,) for r in out.records]
    write_outputs(args.experiment, args, out, elapsed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
