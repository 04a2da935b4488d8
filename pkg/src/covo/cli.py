"""``covo`` command line: bench, stats, denoise, plot.

Exit status: 0 success, 1 usage or configuration error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import io
from .experiment import (
    ConfigError,
    build_config,
    compare,
    comparison_matrix,
    final_errors_from_trace,
    load_config,
    run_experiment,
    summarize,
)

log = logging.getLogger("covo")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _functions(values):
    if values is None:
        return None
    out = []
    for v in values:
        out.extend(s.strip().upper() for s in v.split(",") if s.strip())
    if out == ["ALL"]:
        return None
    return out


def _algorithms(values):
    if values is None:
        return None
    return [s.strip() for v in values for s in v.split(",") if s.strip()]


def _overrides(pairs):
    if not pairs:
        return None
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"override {pair!r} is not KEY=VALUE")
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = float(value)
            except ValueError:
                raise ConfigError(f"override {key} needs a numeric value, got {value!r}") from None
    return out


def cmd_bench(args) -> int:
    file_values = load_config(args.config) if args.config else {}
    overrides = _overrides(args.set)
    if overrides is not None:
        overrides = {**file_values.get("overrides", {}), **overrides}
    config = build_config(
        file_values,
        functions=_functions(args.function),
        dimension=args.dim,
        algorithms=_algorithms(args.algo),
        preset=args.preset,
        overrides=overrides,
        seeds=args.seeds,
        budget=args.budget,
        out=args.out,
        timing=args.timing or None,
    )
    log.info("running %d functions x %d algorithms x %d seeds",
             len(config.functions), len(config.algorithms), len(config.seeds))
    outcomes = run_experiment(config)
    os.makedirs(config.out, exist_ok=True)
    trace = []
    timing = []
    for cell, res in outcomes:
        trace.extend(io.trace_rows(res, cell.run_id, cell.function, config.timing))
        timing.append([cell.run_id, res.seed, res.algorithm, cell.function, res.evals,
                       res.termination.value, io.fmt(res.wall_ms)])
    summary = [[r["function"], r["algorithm"], r["runs"]] + [io.fmt(r[k]) for k in io.SUMMARY_HEADER[3:]]
               for r in summarize(outcomes)]
    io.write_csv(os.path.join(config.out, "trace.csv"), io.TRACE_HEADER, trace)
    io.write_csv(os.path.join(config.out, "summary.csv"), io.SUMMARY_HEADER, summary)
    io.write_csv(os.path.join(config.out, "timing.csv"), io.TIMING_HEADER, timing)
    print(f"wrote {len(trace)} trace rows and {len(summary)} summary rows to {config.out}")
    return EXIT_OK


def _finals_from_summary(rows) -> dict:
    # a summary row stands for one block value: the mean final error
    return {(r["function"], r["algorithm"]): {0: r["mean"]} for r in rows}


def cmd_stats(args) -> int:
    finals: dict = {}
    for path in args.inputs:
        header = io.header_of(path)
        if "run_id" in header:
            part = final_errors_from_trace(io.read_trace(path))
        elif "median" in header:
            part = _finals_from_summary(io.read_summary(path))
        else:
            raise io.CsvFormatError(f"{path}: line 1: neither a trace nor a summary header")
        for key, by_seed in part.items():
            finals.setdefault(key, {}).update(by_seed)
    algorithms, matrix = comparison_matrix(finals)
    rows = compare(algorithms, matrix)
    io.write_csv(args.out, io.STATS_HEADER,
                 [[r["test"], r["algorithm_a"], r["algorithm_b"], io.fmt(r["statistic"]), io.fmt(r["p_value"])]
                  for r in rows])
    print(f"wrote {len(rows)} test rows to {args.out}")
    return EXIT_OK


def cmd_denoise(args) -> int:
    from .core import preset
    from .ecg import MixingModel, denoise_run, params_for_samples

    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    if args.budget < 1:
        raise ConfigError("--budget must be positive")
    signal = io.read_signal(args.input) if args.input else None
    samples = len(signal) if signal is not None else args.samples
    try:
        mixing = tuple(float(v) for v in args.mixing.split(","))
    except ValueError:
        raise ConfigError(f"--mixing needs four numbers, got {args.mixing!r}") from None
    if len(mixing) != 4:
        raise ConfigError(f"--mixing needs four numbers, got {args.mixing!r}")
    model = MixingModel(((mixing[0], mixing[1]), (mixing[2], mixing[3])))
    params = preset(args.preset, **{"max_iter": args.budget, **(_overrides(args.set) or {}), "max_evals": args.budget})
    ecg = params_for_samples(samples, args.sample_rate)
    report = denoise_run(ecg, model, params, args.seed, signal=signal)
    os.makedirs(args.out, exist_ok=True)
    t = np.arange(samples) / ecg.sample_rate
    io.write_csv(
        os.path.join(args.out, "signals.csv"),
        io.SIGNAL_HEADER,
        ([io.fmt(a), io.fmt(b), io.fmt(c), io.fmt(d)]
         for a, b, c, d in zip(t, report.original, report.contaminated, report.reconstructed)),
    )
    io.write_csv(
        os.path.join(args.out, "denoise_report.csv"),
        io.DENOISE_REPORT_HEADER,
        [[samples, io.fmt(report.mse_o_r), io.fmt(report.mse_o_c)]],
    )
    print(f"MSEo-r={report.mse_o_r:.6g} MSEo-c={report.mse_o_c:.6g} ({report.run.evals} evaluations)")
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plot import render_svg

    rows = io.read_trace(args.trace)
    if not rows:
        raise io.CsvFormatError(f"{args.trace}: trace has no data rows")
    svg = render_svg(rows)
    with open(args.out, "w", newline="\n") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="covo", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bench", help="run benchmark functions across algorithms and seeds")
    b.add_argument("--config", help="JSON experiment file; flags override its keys")
    b.add_argument("--function", nargs="+", help="F1..F13, comma or space separated, or 'all'")
    b.add_argument("--dim", type=int, help="problem dimension (default 30)")
    b.add_argument("--algo", nargs="+", help="covo, random_search, pso")
    b.add_argument("--preset", choices=["tableI", "tableII"])
    b.add_argument("--set", nargs="+", metavar="KEY=VALUE", help="override COVO parameters")
    b.add_argument("--seeds", help="COUNT, BASE:COUNT or a comma list (default 21)")
    b.add_argument("--budget", type=int, help="evaluations per run (default 100000)")
    b.add_argument("--out", help="output directory (default results)")
    b.add_argument("--timing", action="store_true", help="fill trace elapsed_ms (breaks byte reproducibility)")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("stats", help="Friedman, Wilcoxon and t tests over bench output")
    s.add_argument("inputs", nargs="+", help="trace or summary CSV files")
    s.add_argument("--out", default="stats.csv", help="report CSV path")
    s.set_defaults(func=cmd_stats)

    d = sub.add_parser("denoise", help="ECG noise removal with a COVO-optimised unmixing matrix")
    d.add_argument("--samples", type=int, default=1000)
    d.add_argument("--sample-rate", type=float, default=250.0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--budget", type=int, default=50_000)
    d.add_argument("--preset", choices=["tableI", "tableII"], default="tableII")
    d.add_argument("--set", nargs="+", metavar="KEY=VALUE")
    d.add_argument("--mixing", default="1,0.6,0.4,1", help="row-major 2x2 mixing matrix")
    d.add_argument("--input", help="CSV with header 'value', one sample per line")
    d.add_argument("--out", default="denoise", help="output directory")
    d.set_defaults(func=cmd_denoise)

    pl = sub.add_parser("plot", help="render convergence curves to SVG")
    pl.add_argument("trace", help="trace CSV")
    pl.add_argument("--out", default="convergence.svg")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, io.CsvFormatError, ValueError) as exc:
        print(f"covo {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"covo {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
