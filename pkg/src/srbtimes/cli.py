"""``srbtimes`` command line: times, classify, entropy and properties.

Exit codes: 0 success, 1 runtime error, 2 usage or configuration error,
3 property-suite failure.
"""
import argparse
import math
import os
import sys

import numpy as np

from . import properties
from .classify import ensemble_run, summarize
from .config import load_config
from .dynsys import make_system, observable_sequence
from .entropy import (GridPartition, decay_slope, misiurewicz_bound_fixed,
                      misiurewicz_bound_setvalued, unstable_volume_decay)
from .exceptions import ConfigError, InvalidParameter, SrbTimesError, UnknownSystem
from .measures import PointMeasure
from .reporting import (csv_text, density_curves_table, exponent_histogram_table, fmt,
                        json_text, records_table, write_atomic)
from .seeding import seed_points
from .timesets import (RealSequence, TimeSet, boundary, chain, density, dilate, g_double,
                       hyperbolic_times, mildly_hyperbolic_times, weakly_hyperbolic_times)

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_SUITE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, float(value)


def _read_sequences(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: no sequence rows")
    try:
        return [RealSequence.from_csv_row(ln) for ln in lines]
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def _time_lines(a, delta, M, N, n):
    E = hyperbolic_times(a, delta)
    F = weakly_hyperbolic_times(a, delta, M)
    G = mildly_hyperbolic_times(a, delta, M)
    sets = [
        ("E", E), ("F", F), ("G", G), ("G((N))", g_double(a, delta, M, N)),
        ("E(M)", dilate(E, M)), ("E<M>", chain(E, M)), ("F(M)", dilate(F, M)),
        ("boundary(E)", boundary(E)), ("boundary(F)", boundary(F)),
    ]
    rows = [(name, str(T)) for name, T in sets]
    for name in ("E", "F", "G", "E(M)", "E<M>"):
        rows.append((f"d_n({name})", fmt(density(dict(sets)[name], n))))
    return rows


def cmd_times(args):
    if args.seq is not None:
        sequences = _read_sequences(args.seq)
    else:
        system = make_system(args.system, dict(args.param))
        _, pts = seed_points(args.seed, 1, system.dim)
        sequences = [observable_sequence(system, pts[0], args.n or 1000, args.index)]
    M = args.m
    N = args.big_n or M
    out = []
    for r, a in enumerate(sequences):
        n = args.n or len(a)
        rows = _time_lines(a, args.delta, M, N, n)
        if args.format == "csv":
            if r == 0:
                out.append("row,name,value")
            out += [f'{r},{name},"{value}"' for name, value in rows]
        else:
            if len(sequences) > 1:
                out.append(f"# row {r}")
            out += [f"{name}: {value}" for name, value in rows]
    print("\n".join(out))
    return EXIT_OK


def _write_all(directory, files):
    """Write every ``name -> text`` atomically; on failure remove what this call wrote."""
    written = []
    try:
        for name, text in files.items():
            path = os.path.join(directory, name)
            write_atomic(path, text)
            written.append(path)
    except BaseException:
        for path in written:
            os.remove(path)
        raise
    return written


def _out_dir(args, cfg):
    return args.out if args.out is not None else cfg.output_dir


def cmd_classify(args):
    cfg = load_config(args.config)
    records = ensemble_run(cfg)
    k = len(records[0].exponents) - 2
    summary = summarize(records)
    summary["config"] = cfg.to_dict()
    files = {
        "records.csv": csv_text(*records_table(records, k)),
        "density_curves.csv": csv_text(*density_curves_table(records, k)),
        "exponent_histogram.csv": csv_text(*exponent_histogram_table(records, k)),
        "summary.json": json_text(summary),
    }
    directory = _out_dir(args, cfg)
    _write_all(directory, files)
    counts = ", ".join(f"{label}: {c}" for label, c in summary["label_counts"].items())
    print(f"{len(records)} records -> {directory} ({counts})")
    return EXIT_OK


def _bound_instances(cfg, system, partition):
    """Point-sample measure plus deterministic fixed and set-valued time sets."""
    e = cfg.entropy
    if e.sample_point is not None:
        if len(e.sample_point) != system.dim:
            raise ConfigError("config.entropy.sample_point", f"expected {system.dim} coordinates")
        pts = np.array([e.sample_point])
    else:
        _, pts = seed_points(cfg.master_seed, e.sample_size, system.dim)
    S = pts.shape[0]
    mu = PointMeasure(pts, np.full(S, 1.0 / S))
    rng = np.random.default_rng(cfg.master_seed)
    H = e.bound_horizon
    for case in range(e.bound_cases):
        if case == 0:
            F = TimeSet.interval(0, H)
        else:
            F = TimeSet(np.flatnonzero(rng.random(H) < 0.5), H)
            if len(F) == 0:
                F = TimeSet([0], H)
        yield case, "fixed", misiurewicz_bound_fixed(mu, partition, F, e.bound_m, system)
        pool = [F, TimeSet.interval(0, int(rng.integers(1, H + 1)), H)]
        times = [pool[int(b)] for b in rng.integers(0, 2, size=S)]
        yield case, "setvalued", misiurewicz_bound_setvalued(mu, partition, times, e.bound_m, system)


def cmd_entropy(args):
    cfg = load_config(args.config)
    e = cfg.entropy
    system = make_system(cfg.system, cfg.params)
    partition = GridPartition(system.dim, cfg.resolution)
    _, pts = seed_points(cfg.master_seed, e.segments, system.dim)
    curves = [unstable_volume_decay(system, x, e.decay_steps, partition, e.gamma) for x in pts]
    values = np.array([[v for _, v in c] for c in curves])
    mean = values.mean(axis=0)
    mean_curve = list(enumerate(mean.tolist()))

    rows = []
    for k in range(e.decay_steps + 1):
        hi = min(k, e.slope_to)
        slope = decay_slope(mean_curve, e.slope_from, hi) if hi > e.slope_from else float("nan")
        rows.append([k, mean[k], slope, *values[:, k]])
    header = ["k", "mean", "slope"] + [f"segment_{s}" for s in range(e.segments)]
    slope = decay_slope(mean_curve, e.slope_from, e.slope_to)
    expected = system.linear_unstable[0]

    bound_rows = [[case, kind, e.bound_m, cfg.resolution, pair.lhs, pair.rhs, pair.holds()]
                  for case, kind, pair in _bound_instances(cfg, system, partition)]
    summary = {"system": cfg.system, "slope": slope, "expected_slope": expected,
               "relative_error": abs(slope - expected) / expected,
               "bounds_hold": all(r[-1] for r in bound_rows), "config": cfg.to_dict()}
    files = {
        "decay.csv": csv_text(header, rows),
        "bounds.csv": csv_text(["case", "kind", "m", "resolution", "lhs", "rhs", "holds"],
                               bound_rows),
        "entropy_summary.json": json_text(summary),
    }
    directory = _out_dir(args, cfg)
    _write_all(directory, files)
    print(f"slope {fmt(slope)} (log lambda_u = {fmt(expected)}) -> {directory}")
    return EXIT_OK


def cmd_properties(args):
    names = list(properties.SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        failures = properties.run_suite(name, args.cases, args.seed)
        cases = args.cases if args.cases is not None else properties.DEFAULT_CASES.get(name, 1000)
        status = "PASS" if not failures else "FAIL"
        print(f"{status} {name}: {cases} cases, {len(failures)} failures")
        if failures:
            failed = True
            text = csv_text(["case", "check", "detail"],
                            [[f["case"], f["check"], f["detail"]] for f in failures])
            path = os.path.join(args.out, f"failures-{name}.csv")
            write_atomic(path, text)
            print(f"  failing cases written to {path}")
    return EXIT_SUITE if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="srbtimes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("times", help="hyperbolic-time sets of a sequence or observable orbit")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--seq", metavar="FILE", help="CSV file, one sequence per row")
    src.add_argument("--system", help="built-in system name")
    p.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--seed", type=_nonneg_int, default=0, help="master seed for the orbit")
    p.add_argument("--index", type=_nonneg_int, default=0, help="observable index i")
    p.add_argument("--delta", type=_positive_float, required=True)
    p.add_argument("--m", type=_positive_int, default=1, help="window / dilation length M")
    p.add_argument("--big-n", type=_positive_int, default=None, help="dilation N of G((N))")
    p.add_argument("--n", type=_positive_int, default=None,
                   help="density horizon (and orbit length for --system)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_times)

    p = sub.add_parser("classify", help="ensemble classification from a JSON config")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="override the configured output directory")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("entropy", help="volume decay and entropy bounds from a JSON config")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("properties", help="run an invariant suite")
    p.add_argument("--suite", required=True, choices=[*properties.SUITES, "all"])
    p.add_argument("--cases", type=_positive_int, default=None)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--out", default="out", help="directory for failure dumps")
    p.set_defaults(func=cmd_properties)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "times" and args.system is None and args.param:
            raise UsageError("--param only applies with --system")
        return args.func(args)
    except (UsageError, ConfigError, InvalidParameter, UnknownSystem) as exc:
        print(f"srbtimes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"srbtimes: error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_RUNTIME
    except (SrbTimesError, OSError, ValueError) as exc:
        print(f"srbtimes: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
