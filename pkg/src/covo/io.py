"""CSV schemas written and read by the command-line harness."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional

TRACE_HEADER = ["run_id", "seed", "algorithm", "function", "iteration", "evals", "best_error", "elapsed_ms"]
SUMMARY_HEADER = ["function", "algorithm", "runs", "best", "median", "worst", "mean", "std"]
STATS_HEADER = ["test", "algorithm_a", "algorithm_b", "statistic", "p_value"]
TIMING_HEADER = ["run_id", "seed", "algorithm", "function", "evals", "termination", "wall_ms"]
SIGNAL_HEADER = ["t", "original", "contaminated", "reconstructed"]
DENOISE_REPORT_HEADER = ["sample_size", "mse_o_r", "mse_o_c"]


class CsvFormatError(ValueError):
    """Malformed input file; the message carries the offending line."""


def fmt(x: float) -> str:
    return repr(float(x))


@dataclass
class TraceRow:
    run_id: str
    seed: int
    algorithm: str
    function: str
    iteration: int
    evals: int
    best_error: float
    elapsed_ms: Optional[float] = None


def compress_trace(points) -> list:
    """Keep the first point, every improvement and the last point.

    The trace is a step function, so this loses nothing.
    """
    pts = list(points)
    if len(pts) <= 2:
        return pts
    out = [pts[0]]
    for prev, cur in zip(pts, pts[1:-1]):
        if cur.best_error != prev.best_error:
            out.append(cur)
    out.append(pts[-1])
    return out


def write_csv(path, header: list[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def trace_rows(result, run_id: str, function: str, timing: bool = False) -> list[list]:
    return [
        [run_id, result.seed, result.algorithm, function, p.iteration, p.evals, fmt(p.best_error),
         fmt(p.elapsed_ms) if timing else ""]
        for p in compress_trace(result.trace)
    ]


def _read(path, expected: Optional[list[str]] = None) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: line 1: file is empty") from None
        if expected is not None:
            missing = [c for c in expected if c not in header]
            if missing:
                raise CsvFormatError(f"{path}: line 1: missing columns {', '.join(missing)}")
        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise CsvFormatError(
                    f"{path}: line {reader.line_num}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append((reader.line_num, row))
    return header, rows


def _num(path, line, name, text, kind=float):
    try:
        value = kind(text)
    except ValueError:
        raise CsvFormatError(f"{path}: line {line}: column {name!r} is not a number: {text!r}") from None
    if kind is float and math.isnan(value):
        raise CsvFormatError(f"{path}: line {line}: column {name!r} is NaN")
    return value


def read_trace(path) -> list[TraceRow]:
    header, rows = _read(path, TRACE_HEADER)
    ix = {c: header.index(c) for c in TRACE_HEADER}
    out = []
    for line, r in rows:
        el = r[ix["elapsed_ms"]]
        out.append(
            TraceRow(
                run_id=r[ix["run_id"]],
                seed=_num(path, line, "seed", r[ix["seed"]], int),
                algorithm=r[ix["algorithm"]],
                function=r[ix["function"]],
                iteration=_num(path, line, "iteration", r[ix["iteration"]], int),
                evals=_num(path, line, "evals", r[ix["evals"]], int),
                best_error=_num(path, line, "best_error", r[ix["best_error"]]),
                elapsed_ms=_num(path, line, "elapsed_ms", el) if el else None,
            )
        )
    return out


def read_summary(path) -> list[dict]:
    header, rows = _read(path, SUMMARY_HEADER)
    out = []
    for line, r in rows:
        rec = dict(zip(header, r))
        for col in SUMMARY_HEADER[3:]:
            rec[col] = _num(path, line, col, rec[col])
        rec["runs"] = _num(path, line, "runs", rec["runs"], int)
        out.append(rec)
    return out


def read_stats(path) -> list[dict]:
    header, rows = _read(path, STATS_HEADER)
    out = []
    for line, r in rows:
        rec = dict(zip(header, r))
        rec["statistic"] = _num(path, line, "statistic", rec["statistic"])
        rec["p_value"] = _num(path, line, "p_value", rec["p_value"])
        out.append(rec)
    return out


def header_of(path) -> list[str]:
    with open(path, newline="") as fh:
        try:
            return next(csv.reader(fh))
        except StopIteration:
            raise CsvFormatError(f"{path}: line 1: file is empty") from None


def read_signal(path) -> list[float]:
    """One-column signal file with header ``value``."""
    header, rows = _read(path, ["value"])
    i = header.index("value")
    values = [_num(path, line, "value", r[i]) for line, r in rows]
    if len(values) < 2:
        raise CsvFormatError(f"{path}: need at least two samples")
    return values


def read_signals(path) -> list[dict]:
    header, rows = _read(path, SIGNAL_HEADER)
    return [{c: _num(path, line, c, v) for c, v in zip(header, r)} for line, r in rows]


def read_denoise_report(path) -> list[dict]:
    header, rows = _read(path, DENOISE_REPORT_HEADER)
    out = []
    for line, r in rows:
        rec = dict(zip(header, r))
        out.append({
            "sample_size": _num(path, line, "sample_size", rec["sample_size"], int),
            "mse_o_r": _num(path, line, "mse_o_r", rec["mse_o_r"]),
            "mse_o_c": _num(path, line, "mse_o_c", rec["mse_o_c"]),
        })
    return out
