"""ECG noise removal by optimising a 2x2 unmixing matrix with COVO.

A synthetic ECG ``S`` and unit Gaussian noise ``N`` are mixed as
``Y = A @ [S; N]``.  COVO searches ``W`` so that one row of ``W @ Y``,
after least-squares scaling, matches ``S``; the scaling removes the ICA
sign/scale ambiguity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .benchmarks import Modality, ObjectiveSpec
from .core import CovoParams, RunResult, run
from .rng import RngState

W_BOUND = 10.0
SENTINEL = 1e18


@dataclass(frozen=True)
class EcgParams:
    """Sum-of-Gaussians beat model.

    ``waves`` holds (amplitude, centre as a fraction of the RR interval,
    width in seconds) for the P, Q, R, S and T waves.
    """

    sample_rate: float = 250.0
    duration: float = 4.0
    heart_rate: float = 72.0
    hrv: float = 0.02
    waves: tuple = (
        (0.15, 0.20, 0.025),
        (-0.15, 0.37, 0.010),
        (1.00, 0.40, 0.012),
        (-0.25, 0.43, 0.010),
        (0.35, 0.70, 0.040),
    )

    def __post_init__(self):
        if not (self.sample_rate > 0 and self.duration > 0 and self.heart_rate > 0):
            raise ValueError("sample_rate, duration and heart_rate must be positive")
        if self.n_samples < 2:
            raise ValueError("signal must contain at least two samples")

    @property
    def n_samples(self) -> int:
        return int(round(self.sample_rate * self.duration))


@dataclass(frozen=True)
class MixingModel:
    A: tuple = ((1.0, 0.6), (0.4, 1.0))

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (2, 2) or not np.all(np.isfinite(A)):
            raise ValueError("mixing matrix must be a finite 2x2 matrix")
        if abs(np.linalg.det(A)) <= 1e-6:
            raise ValueError("mixing matrix is singular")

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.A, dtype=float)


@dataclass
class DenoiseReport:
    mse_o_r: float
    mse_o_c: float
    best_W: np.ndarray
    run: RunResult
    original: np.ndarray = field(repr=False)
    contaminated: np.ndarray = field(repr=False)
    reconstructed: np.ndarray = field(repr=False)
    sample_rate: float = 1.0


def normalize(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    sd = x.std()
    if not sd > 0:
        raise ValueError("signal is constant")
    return (x - x.mean()) / sd


def synth_ecg(params: EcgParams, rng: RngState) -> np.ndarray:
    """Zero-mean, unit-variance synthetic ECG of ``sample_rate * duration`` samples."""
    n = params.n_samples
    t = np.arange(n) / params.sample_rate
    rr_mean = 60.0 / params.heart_rate
    s = np.zeros(n)
    start = -rr_mean  # one beat of lead-in so the first window is not empty
    while start < t[-1] + rr_mean:
        rr = rr_mean * (1.0 + params.hrv * rng.normal())
        for amp, centre, width in params.waves:
            s += amp * np.exp(-0.5 * ((t - start - centre * rr) / width) ** 2)
        start += rr
    return normalize(s)


def contaminate(S, model: MixingModel, rng: RngState) -> tuple[np.ndarray, np.ndarray]:
    """Mix ``S`` with fresh N(0, 1) noise; returns the 2-channel observation and the noise."""
    S = np.asarray(S, dtype=float)
    N = rng.normal(S.shape[0])
    return model.matrix @ np.vstack([S, N]), N


def mse(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def align(channel, S) -> np.ndarray:
    """``channel`` scaled by the least-squares factor onto ``S`` (sign included)."""
    c = np.asarray(channel, dtype=float)
    cc = c @ c
    alpha = (c @ S) / cc if cc > 0 else 0.0
    return alpha * c


def _batch_fitness(Wb: np.ndarray, Y: np.ndarray, S: np.ndarray) -> np.ndarray:
    # Wb: (m, 4) -> aligned MSE of the better output channel
    finite = np.all(np.isfinite(Wb), axis=1)
    W = np.where(finite[:, None], Wb, 0.0).reshape(-1, 2, 2)
    C = np.einsum("mij,jt->mit", W, Y)
    cc = np.einsum("mit,mit->mi", C, C)
    cs = C @ S
    alpha = np.divide(cs, cc, out=np.zeros_like(cs), where=cc > 0)
    err = np.mean((alpha[..., None] * C - S) ** 2, axis=2).min(axis=1)
    return np.where(finite, err, SENTINEL)


def fitness_of_W(w_flat, Y, S) -> float:
    """Aligned reconstruction MSE of the best output channel of ``W @ Y``."""
    w = np.asarray(w_flat, dtype=float).reshape(1, 4)
    return float(_batch_fitness(w, np.asarray(Y, dtype=float), np.asarray(S, dtype=float))[0])


def unmixing_objective(Y, S) -> ObjectiveSpec:
    Y = np.asarray(Y, dtype=float)
    S = np.asarray(S, dtype=float)
    return ObjectiveSpec(
        "ECG-W",
        4,
        -W_BOUND,
        W_BOUND,
        lambda X, rng: _batch_fitness(X, Y, S),
        0.0,
        None,
        Modality.MULTIMODAL,
    )


def denoise_run(
    ecg: EcgParams,
    model: MixingModel,
    covo: CovoParams,
    seed: int,
    signal=None,
) -> DenoiseReport:
    """Contaminate an ECG and recover it with a COVO-optimised unmixing matrix.

    ``signal`` replaces the synthetic ECG (it is normalised first).
    """
    rng = RngState(seed)
    S = synth_ecg(ecg, rng) if signal is None else normalize(signal)
    Y, _ = contaminate(S, model, rng)
    spec = unmixing_objective(Y, S)
    result = run(spec, covo, rng.spawn().seed)
    W = np.array(result.best_position).reshape(2, 2)
    C = W @ Y
    errs = [mse(align(c, S), S) for c in C]
    reconstructed = align(C[int(np.argmin(errs))], S)
    return DenoiseReport(
        mse_o_r=result.best_error,
        mse_o_c=mse(align(Y[0], S), S),
        best_W=W,
        run=result,
        original=S,
        contaminated=Y[0],
        reconstructed=reconstructed,
        sample_rate=ecg.sample_rate,
    )


def params_for_samples(samples: int, sample_rate: float = 250.0) -> EcgParams:
    return EcgParams(sample_rate=sample_rate, duration=samples / sample_rate)
