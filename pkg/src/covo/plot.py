"""Self-contained SVG convergence charts (log best error against iteration)."""
from __future__ import annotations

import math
from html import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
PANEL_W, PANEL_H = 640, 360
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 36, 46


def median_curve(runs: list[list[tuple[int, float]]]) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise median of step-function traces on the union of their iterations."""
    grid = np.array(sorted({it for r in runs for it, _ in r}), dtype=float)
    cols = []
    for r in runs:
        its = np.array([it for it, _ in r], dtype=float)
        vals = np.array([v for _, v in r], dtype=float)
        idx = np.searchsorted(its, grid, side="right") - 1
        col = np.where(idx >= 0, vals[np.clip(idx, 0, None)], np.nan)
        cols.append(col)
    return grid, np.nanmedian(np.vstack(cols), axis=0)


def _curves(rows) -> dict:
    """``{function: {algorithm: (iterations, median best_error)}}`` in first-seen order."""
    runs: dict = {}
    for r in rows:
        runs.setdefault(r.function, {}).setdefault(r.algorithm, {}).setdefault(r.run_id, []).append(
            (r.iteration, r.best_error)
        )
    out = {}
    for f, algos in runs.items():
        out[f] = {}
        for a, by_run in algos.items():
            out[f][a] = median_curve([sorted(v) for v in by_run.values()])
    return out


def _panel(fid: str, curves: dict, y0: int) -> list[str]:
    pw = PANEL_W - MARGIN_L - MARGIN_R
    ph = PANEL_H - MARGIN_T - MARGIN_B
    xs = np.concatenate([x for x, _ in curves.values()])
    ys = np.concatenate([y for _, y in curves.values()])
    pos = ys[ys > 0]
    floor = pos.min() / 10.0 if pos.size else 1e-20
    lo = math.floor(math.log10(floor))
    hi = math.ceil(math.log10(max(ys.max(), floor * 10)))
    if hi <= lo:
        hi = lo + 1
    xmax = max(xs.max(), 1.0)

    def px(x):
        return MARGIN_L + pw * x / xmax

    def py(y):
        ly = math.log10(max(y, floor))
        return y0 + MARGIN_T + ph * (hi - ly) / (hi - lo)

    out = [f'<g id="panel-{escape(fid)}">']
    out.append(f'<text x="{PANEL_W / 2:.2f}" y="{y0 + 22}" text-anchor="middle" font-size="15">{escape(fid)}</text>')
    out.append(
        f'<rect x="{MARGIN_L}" y="{y0 + MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>'
    )
    step = max(1, (hi - lo) // 8)
    for e in range(lo, hi + 1, step):
        y = py(10.0**e)
        out.append(f'<line x1="{MARGIN_L - 4}" y1="{y:.2f}" x2="{MARGIN_L + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{y + 4:.2f}" text-anchor="end" font-size="10">1e{e}</text>')
    for k in range(5):
        x = xmax * k / 4
        out.append(f'<text x="{px(x):.2f}" y="{y0 + MARGIN_T + ph + 16}" text-anchor="middle" font-size="10">{x:g}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{y0 + PANEL_H - 8}" text-anchor="middle" font-size="11">iteration</text>')
    out.append(
        f'<text x="14" y="{y0 + MARGIN_T + ph / 2:.2f}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 14 {y0 + MARGIN_T + ph / 2:.2f})">best error</text>'
    )
    for i, (algo, (x, y)) in enumerate(curves.items()):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline class="series" data-algorithm="{escape(algo)}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5" points="{pts}"/>')
        ly = y0 + MARGIN_T + 14 + 18 * i
        lx = MARGIN_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}" font-size="11">{escape(algo)}</text>')
    out.append("</g>")
    return out


def render_svg(rows) -> str:
    """One panel per function, one polyline per algorithm (median over runs)."""
    curves = _curves(rows)
    if not curves:
        raise ValueError("trace is empty")
    height = PANEL_H * len(curves)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" height="{height}" '
        f'viewBox="0 0 {PANEL_W} {height}" font-family="sans-serif">',
        f'<rect width="{PANEL_W}" height="{height}" fill="#fff"/>',
    ]
    for k, (fid, c) in enumerate(curves.items()):
        parts.extend(_panel(fid, c, k * PANEL_H))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
