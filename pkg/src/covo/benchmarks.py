"""The thirteen classical test functions F1..F13 and the objective record.

Every objective is evaluated in batches: ``func(X, rng)`` maps an ``(m, D)``
array to ``m`` values.  ``rng`` may be ``None`` for a noise-free evaluation
(only F7 draws noise).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Optional

import numpy as np

from . import kernels
from .rng import RngState

F8_OPTIMIZER = 420.9687


class Modality(str, Enum):
    UNIMODAL = "unimodal"
    MULTIMODAL = "multimodal"
    STEP = "step"
    NOISY = "noisy"


@dataclass(frozen=True)
class PenaltyParams:
    a: float
    k: float
    m: float

    def __post_init__(self):
        if not (self.a > 0 and self.k > 0 and self.m >= 1):
            raise ValueError(f"invalid penalty parameters {self}")


BatchFunc = Callable[[np.ndarray, Optional[RngState]], np.ndarray]


@dataclass(frozen=True)
class ObjectiveSpec:
    """One minimisation problem on the box ``[lower, upper]^dimension``."""

    id: str
    dimension: int
    lower: float
    upper: float
    func: BatchFunc = field(compare=False, repr=False)
    f_star: float = 0.0
    x_star: Optional[tuple] = None
    modality: Modality = Modality.MULTIMODAL

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if not self.lower < self.upper:
            raise ValueError(f"{self.id}: lower bound must be below upper bound")

    def batch(self, X: np.ndarray, rng: Optional[RngState] = None) -> np.ndarray:
        return self.func(X, rng)


def _benchmark(fid: int, X: np.ndarray, rng: Optional[RngState]) -> np.ndarray:
    noise = None
    if fid == 7:
        noise = rng.random(X.shape[0]) if rng is not None else np.zeros(X.shape[0])
    return kernels.evaluate_batch(fid, X, noise)


# id -> (lower, upper, modality, optimizer component)
TABLE = {
    "F1": (-100.0, 100.0, Modality.UNIMODAL, 0.0),
    "F2": (-10.0, 10.0, Modality.UNIMODAL, 0.0),
    "F3": (-100.0, 100.0, Modality.UNIMODAL, 0.0),
    "F4": (-100.0, 100.0, Modality.UNIMODAL, 0.0),
    "F5": (-30.0, 30.0, Modality.UNIMODAL, 1.0),
    "F6": (-100.0, 100.0, Modality.STEP, 0.0),
    "F7": (-1.28, 1.28, Modality.NOISY, 0.0),
    "F8": (-500.0, 500.0, Modality.MULTIMODAL, F8_OPTIMIZER),
    "F9": (-5.12, 5.12, Modality.MULTIMODAL, 0.0),
    "F10": (-32.0, 32.0, Modality.MULTIMODAL, 0.0),
    "F11": (-600.0, 600.0, Modality.MULTIMODAL, 0.0),
    "F12": (-50.0, 50.0, Modality.MULTIMODAL, -1.0),
    "F13": (-50.0, 50.0, Modality.MULTIMODAL, 1.0),
}

FUNCTION_IDS = tuple(TABLE)


def make_objective(fid: str, dimension: int = 30) -> ObjectiveSpec:
    """Build the benchmark named ``fid`` ("F1".."F13") in ``dimension`` variables."""
    if fid not in TABLE:
        raise ValueError(f"unknown benchmark {fid!r}; expected one of {', '.join(FUNCTION_IDS)}")
    if dimension < 2:
        raise ValueError("benchmark dimension must be at least 2")
    lower, upper, modality, xi = TABLE[fid]
    func = partial(_benchmark, int(fid[1:]))
    x_star = (xi,) * dimension
    f_star = 0.0
    if fid == "F8":
        # not exactly zero: the 418.9829 offset is rounded
        f_star = float(func(np.array([x_star]), None)[0])
    return ObjectiveSpec(fid, dimension, lower, upper, func, f_star, x_star, modality)


def make_suite(dimension: int = 30) -> list[ObjectiveSpec]:
    return [make_objective(fid, dimension) for fid in FUNCTION_IDS]


def check_point(spec: ObjectiveSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != spec.dimension:
        raise ValueError(f"{spec.id} expects a vector of length {spec.dimension}, got shape {x.shape}")
    if np.any(x < spec.lower) or np.any(x > spec.upper):
        raise ValueError(f"point outside [{spec.lower}, {spec.upper}]^{spec.dimension}")
    return x


def evaluate(spec: ObjectiveSpec, x, rng: Optional[RngState] = None) -> float:
    """Value of ``spec`` at one in-bounds point.

    F7 draws its additive uniform noise from ``rng``; pass ``None`` to get the
    noise-free quartic.
    """
    x = check_point(spec, x)
    return float(spec.func(x[None, :], rng)[0])


def penalty_u(x: float, p: PenaltyParams) -> float:
    """Boundary penalty used by F12 and F13."""
    return float(kernels.penalty(float(x), p.a, p.k, p.m))


def error_of(spec: ObjectiveSpec, f: float) -> float:
    """Distance of an objective value above the known optimum."""
    if not math.isfinite(f):
        raise ValueError(f"objective value is not finite: {f}")
    return f - spec.f_star
