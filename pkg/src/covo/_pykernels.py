"""Pure-Python/NumPy implementations of the hot kernels.

Mirrors the compiled ``_ckernels`` module function for function; used when the
extension is not built or when ``COVO_PURE_PYTHON`` is set.
"""
import math

import numpy as np

EPS0 = 1e-6


def _penalty(x, a, k, m):
    out = np.zeros_like(x)
    hi = x > a
    lo = x < -a
    out[hi] = k * (x[hi] - a) ** m
    out[lo] = k * (-x[lo] - a) ** m
    return out.sum(axis=1)


def _f1(X):
    return np.sum(X * X, axis=1)


def _f2(X):
    A = np.abs(X)
    return A.sum(axis=1) + A.prod(axis=1)


def _f3(X):
    return np.sum(np.cumsum(X, axis=1) ** 2, axis=1)


def _f4(X):
    return np.abs(X).max(axis=1)


def _f5(X):
    a = X[:, 1:] - X[:, :-1] ** 2
    b = X[:, :-1] - 1.0
    return np.sum(100.0 * a * a + b * b, axis=1)


def _f6(X):
    return np.sum(np.floor(X[:, :-1] + 0.5) ** 2, axis=1)


def _f7(X):
    i = np.arange(1, X.shape[1] + 1, dtype=float)
    return np.sum(i * X ** 4, axis=1)


def _f8(X):
    d = X.shape[1]
    return 418.9829 * d - np.sum(X * np.sin(np.sqrt(np.abs(X))), axis=1)


def _f9(X):
    return np.sum(X * X - 10.0 * np.cos(2.0 * np.pi * X) + 10.0, axis=1)


def _f10(X):
    d = X.shape[1]
    s1 = np.sum(X * X, axis=1) / d
    s2 = np.sum(np.cos(2.0 * np.pi * X), axis=1) / d
    return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + math.e


def _f11(X):
    i = np.sqrt(np.arange(1, X.shape[1] + 1, dtype=float))
    return np.sum(X * X, axis=1) / 4000.0 - np.prod(np.cos(X / i), axis=1) + 1.0


def _f12(X):
    d = X.shape[1]
    Y = 1.0 + (X + 1.0) / 4.0
    s = 10.0 * np.sin(np.pi * Y[:, 0]) ** 2
    s = s + np.sum((Y[:, :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * Y[:, 1:]) ** 2), axis=1)
    s = s + (Y[:, -1] - 1.0) ** 2
    return np.pi / d * s + _penalty(X, 10.0, 100.0, 4.0)


def _f13(X):
    s = np.sin(3.0 * np.pi * X[:, 0]) ** 2
    s = s + np.sum((X[:, :-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * X[:, 1:]) ** 2), axis=1)
    s = s + (X[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * X[:, -1]) ** 2)
    return 0.1 * s + _penalty(X, 5.0, 100.0, 4.0)


_FUNCS = (_f1, _f2, _f3, _f4, _f5, _f6, _f7, _f8, _f9, _f10, _f11, _f12, _f13)


def evaluate_batch(fid, X, noise):
    """Evaluate benchmark ``fid`` (1..13) on every row of ``X``.

    ``noise`` is added row-wise for F7 and ignored otherwise.
    """
    if not 1 <= fid <= 13:
        raise ValueError(f"unknown benchmark id {fid}")
    X = np.ascontiguousarray(X, dtype=float)
    out = _FUNCS[fid - 1](X)
    if fid == 7:
        out = out + np.asarray(noise, dtype=float)
    return np.asarray(out, dtype=float)


def penalty(x, a, k, m):
    if x > a:
        return k * (x - a) ** m
    if x < -a:
        return k * (-x - a) ** m
    return 0.0


def _sin2pi(v):
    # exact zero whenever 2v is an integer
    r = 2.0 * v
    if r == math.floor(r):
        return 0.0
    return math.sin(math.pi * r)


def chaotic_step(v, b, p):
    raw = abs(v + b - abs(p - 2.0 * math.pi)) * _sin2pi(v)
    w = math.fmod(abs(raw), 1.0)
    if w == 0.0:
        return EPS0
    return w


def signed_rank_null(ranks2):
    """Null distribution counts of the positive-rank sum.

    ``ranks2`` holds doubled (integer) ranks so midranks stay exact.  Entry
    ``s`` of the result counts sign assignments whose doubled positive sum is
    ``s``.
    """
    total = int(sum(ranks2))
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    top = 0
    for r in ranks2:
        r = int(r)
        counts[r:top + r + 1] += counts[:top + 1].copy()
        top += r
    return counts


def dedupe_mask(X, eps):
    X = np.asarray(X, dtype=float)
    m = X.shape[0]
    keep = np.ones(m, dtype=bool)
    if m < 2:
        return keep
    close = np.abs(X[:, None, :] - X[None, :, :]).max(axis=2) <= eps
    close = np.tril(close, k=-1)
    for i in np.flatnonzero(close.any(axis=1)):
        if np.any(close[i, :i] & keep[:i]):
            keep[i] = False
    return keep
