# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: benchmark evaluators, chaotic map, rank enumeration."""
import numpy as np

from libc.math cimport sin, cos, sqrt, exp, fabs, floor, fmod, pow, M_PI, M_E

cdef double EPS0 = 1e-6


cdef inline double _pen(double x, double a, double k, double m) noexcept nogil:
    if x > a:
        return k * pow(x - a, m)
    if x < -a:
        return k * pow(-x - a, m)
    return 0.0


cdef double _eval_row(int fid, const double[::1] x) noexcept nogil:
    cdef Py_ssize_t d = x.shape[0]
    cdef Py_ssize_t i
    cdef double s = 0.0, s2 = 0.0, t = 0.0, y, yn, xi
    if fid == 1:
        for i in range(d):
            s += x[i] * x[i]
        return s
    if fid == 2:
        s2 = 1.0
        for i in range(d):
            t = fabs(x[i])
            s += t
            s2 *= t
        return s + s2
    if fid == 3:
        for i in range(d):
            t += x[i]
            s += t * t
        return s
    if fid == 4:
        for i in range(d):
            t = fabs(x[i])
            if t > s:
                s = t
        return s
    if fid == 5:
        for i in range(d - 1):
            t = x[i + 1] - x[i] * x[i]
            y = x[i] - 1.0
            s += 100.0 * t * t + y * y
        return s
    if fid == 6:
        for i in range(d - 1):
            t = floor(x[i] + 0.5)
            s += t * t
        return s
    if fid == 7:
        for i in range(d):
            t = x[i] * x[i]
            s += (i + 1) * t * t
        return s
    if fid == 8:
        for i in range(d):
            s += x[i] * sin(sqrt(fabs(x[i])))
        return 418.9829 * d - s
    if fid == 9:
        for i in range(d):
            s += x[i] * x[i] - 10.0 * cos(2.0 * M_PI * x[i]) + 10.0
        return s
    if fid == 10:
        for i in range(d):
            s += x[i] * x[i]
            s2 += cos(2.0 * M_PI * x[i])
        return -20.0 * exp(-0.2 * sqrt(s / d)) - exp(s2 / d) + 20.0 + M_E
    if fid == 11:
        s2 = 1.0
        for i in range(d):
            s += x[i] * x[i]
            s2 *= cos(x[i] / sqrt(i + 1.0))
        return s / 4000.0 - s2 + 1.0
    if fid == 12:
        y = 1.0 + (x[0] + 1.0) / 4.0
        t = sin(M_PI * y)
        s = 10.0 * t * t
        for i in range(d - 1):
            yn = 1.0 + (x[i + 1] + 1.0) / 4.0
            t = sin(M_PI * yn)
            s += (y - 1.0) * (y - 1.0) * (1.0 + 10.0 * t * t)
            y = yn
        s += (y - 1.0) * (y - 1.0)
        for i in range(d):
            s2 += _pen(x[i], 10.0, 100.0, 4.0)
        return M_PI / d * s + s2
    if fid == 13:
        t = sin(3.0 * M_PI * x[0])
        s = t * t
        for i in range(d - 1):
            t = sin(3.0 * M_PI * x[i + 1])
            s += (x[i] - 1.0) * (x[i] - 1.0) * (1.0 + t * t)
        xi = x[d - 1]
        t = sin(2.0 * M_PI * xi)
        s += (xi - 1.0) * (xi - 1.0) * (1.0 + t * t)
        for i in range(d):
            s2 += _pen(x[i], 5.0, 100.0, 4.0)
        return 0.1 * s + s2
    return 0.0


def evaluate_batch(int fid, X, noise):
    """Evaluate benchmark ``fid`` (1..13) on every row of ``X``."""
    if fid < 1 or fid > 13:
        raise ValueError(f"unknown benchmark id {fid}")
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t m = Xv.shape[0], r
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef const double[::1] nv
    with nogil:
        for r in range(m):
            ov[r] = _eval_row(fid, Xv[r])
    if fid == 7:
        nv = np.ascontiguousarray(noise, dtype=np.float64)
        for r in range(m):
            ov[r] += nv[r]
    return out


def penalty(double x, double a, double k, double m):
    return _pen(x, a, k, m)


def chaotic_step(double v, double b, double p):
    cdef double r = 2.0 * v, s, raw, w
    if r == floor(r):
        s = 0.0
    else:
        s = sin(M_PI * r)
    raw = fabs(v + b - fabs(p - 2.0 * M_PI)) * s
    w = fmod(fabs(raw), 1.0)
    if w == 0.0:
        return EPS0
    return w


def signed_rank_null(ranks2):
    """Counts of doubled positive-rank sums over all sign assignments."""
    cdef long[::1] rv = np.ascontiguousarray(ranks2, dtype=np.int_)
    cdef Py_ssize_t n = rv.shape[0], i, s
    cdef long total = 0, top = 0, r
    for i in range(n):
        total += rv[i]
    counts = np.zeros(total + 1, dtype=np.float64)
    cdef double[::1] c = counts
    c[0] = 1.0
    for i in range(n):
        r = rv[i]
        # descending so each assignment is counted once
        for s in range(top, -1, -1):
            c[s + r] += c[s]
        top += r
    return counts


def dedupe_mask(X, double eps):
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t m = Xv.shape[0], d = Xv.shape[1], i, j, k
    keep = np.ones(m, dtype=bool)
    cdef unsigned char[::1] kv = keep.view(np.uint8)
    cdef double dist
    for i in range(1, m):
        for j in range(i):
            if not kv[j]:
                continue
            dist = 0.0
            for k in range(d):
                dist = max(dist, fabs(Xv[i, k] - Xv[j, k]))
                if dist > eps:
                    break
            if dist <= eps:
                kv[i] = 0
                break
    return keep
