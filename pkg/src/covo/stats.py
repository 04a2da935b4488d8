"""Descriptive statistics and the Friedman / Wilcoxon / Welch tests.

Ranks and test statistics are computed here; only the continuous reference
distributions (normal, chi-square, Student t) come from :mod:`scipy.stats`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _dist

from . import kernels

EXACT_MAX_N = 12


@dataclass(frozen=True)
class SampleSet:
    label: str
    values: tuple

    def __init__(self, label, values):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError(f"sample set {label!r} is empty")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"sample set {label!r} contains non-finite values")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values)


@dataclass(frozen=True)
class TestReport:
    test: str
    statistic: float
    p_value: float
    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "p_value", float(min(1.0, max(0.0, self.p_value))))


def _as_samples(x, label="sample") -> SampleSet:
    return x if isinstance(x, SampleSet) else SampleSet(label, x)


def describe(samples) -> dict:
    """Best, median, worst, mean and sample standard deviation (minimisation)."""
    v = np.sort(_as_samples(samples).array())
    n = v.shape[0]
    mid = n // 2
    median = v[mid] if n % 2 else 0.5 * (v[mid - 1] + v[mid])
    return {
        "best": float(v[0]),
        "median": float(median),
        "worst": float(v[-1]),
        "mean": float(v.mean()),
        "std": float(v.std(ddof=1)) if n > 1 else 0.0,
    }


def midranks(values) -> np.ndarray:
    """1-based ranks with ties sharing the mean of their positions."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(v.shape[0])
    sv = v[order]
    i = 0
    while i < sv.shape[0]:
        j = i
        while j + 1 < sv.shape[0] and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def wilcoxon_signed_rank(a, b, alternative: str = "two-sided") -> TestReport:
    """Paired signed-rank test of ``a - b``.

    The statistic is the positive-rank sum W+.  Zero differences are dropped
    and tied magnitudes get midranks.  Up to 12 non-zero pairs the p-value is
    exact (complete enumeration of sign assignments); beyond that a normal
    approximation with tie-corrected variance and continuity correction is
    used.  ``alternative="less"`` tests whether ``a`` tends to be smaller.
    """
    a, b = _as_samples(a, "a"), _as_samples(b, "b")
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    if alternative not in ("two-sided", "less", "greater"):
        raise ValueError(f"unknown alternative {alternative!r}")
    d = a.array() - b.array()
    d = d[d != 0]
    n = d.shape[0]
    if n == 0:
        return TestReport("wilcoxon", 0.0, 1.0, (len(a), len(b)))
    r = midranks(np.abs(d))
    w_plus = float(r[d > 0].sum())
    if n <= EXACT_MAX_N:
        ranks2 = np.rint(2 * r).astype(int)
        counts = kernels.signed_rank_null(ranks2)
        total = counts.sum()
        obs = int(round(2 * w_plus))
        p_le = counts[: obs + 1].sum() / total
        p_ge = counts[obs:].sum() / total
    else:
        mean = n * (n + 1) / 4.0
        _, tie_counts = np.unique(r, return_counts=True)
        var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts**3 - tie_counts) / 48.0
        sd = math.sqrt(var)
        p_le = _dist.norm.cdf((w_plus - mean + 0.5) / sd)
        p_ge = _dist.norm.sf((w_plus - mean - 0.5) / sd)
    if alternative == "less":
        p = p_le
    elif alternative == "greater":
        p = p_ge
    else:
        p = min(1.0, 2.0 * min(p_le, p_ge))
    return TestReport("wilcoxon", w_plus, float(p), (len(a), len(b)))


def friedman(matrix) -> TestReport:
    """Friedman rank test; rows are blocks, columns are treatments.

    Uses the tie-corrected statistic with a chi-square(k-1) upper tail.
    """
    rows = [list(r) for r in matrix]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("friedman needs a non-empty rectangular matrix")
    M = np.array(rows, dtype=float)
    n, k = M.shape
    if n < 2 or k < 2:
        raise ValueError("friedman needs at least 2 blocks and 2 treatments")
    R = np.vstack([midranks(row) for row in M])
    rank_sums = R.sum(axis=0)
    # tie-corrected form: (k-1) * sum(R_j - n(k+1)/2)^2 / (sum r^2 - nk(k+1)^2/4)
    num = (k - 1) * np.sum((rank_sums - n * (k + 1) / 2.0) ** 2)
    den = np.sum(R**2) - n * k * (k + 1) ** 2 / 4.0
    if den <= 0:
        return TestReport("friedman", 0.0, 1.0, (n, k))
    stat = float(num / den)
    return TestReport("friedman", stat, float(_dist.chi2.sf(stat, k - 1)), (n, k))


def t_test(a, b) -> TestReport:
    """Welch two-sample t test, two-sided."""
    a, b = _as_samples(a, "a"), _as_samples(b, "b")
    if len(a) < 2 or len(b) < 2:
        raise ValueError("t test needs at least two values per sample")
    x, y = a.array(), b.array()
    va, vb = x.var(ddof=1) / len(x), y.var(ddof=1) / len(y)
    diff = x.mean() - y.mean()
    se2 = va + vb
    if se2 == 0:
        if diff == 0:
            return TestReport("t_test", 0.0, 1.0, (len(a), len(b)))
        return TestReport("t_test", math.copysign(math.inf, diff), 0.0, (len(a), len(b)))
    t = diff / math.sqrt(se2)
    # Welch-Satterthwaite df is scale-free; normalise so tiny variances cannot underflow when squared
    ra, rb = va / max(va, vb), vb / max(va, vb)
    df = (ra + rb) ** 2 / (ra**2 / (len(x) - 1) + rb**2 / (len(y) - 1))
    return TestReport("t_test", float(t), float(2.0 * _dist.t.sf(abs(t), df)), (len(a), len(b)))
