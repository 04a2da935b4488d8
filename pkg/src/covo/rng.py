"""Seeded randomness, the chaotic parameter map and opposition points."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

EPS0 = 1e-6


class RngState:
    """Deterministic random stream owned by a single run.

    Wraps a PCG64 generator; ``gen`` is exposed for vectorised draws in the
    hot loops.
    """

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, lo=0.0, hi=1.0, size=None):
        return self.gen.uniform(lo, hi, size)

    def random(self, size=None):
        return self.gen.random(size)

    def signs(self, size):
        """Independent +1/-1 draws."""
        return np.where(self.gen.random(size) < 0.5, -1.0, 1.0)

    def bernoulli(self, p: float) -> bool:
        return bool(self.gen.random() < p)

    def normal(self, size=None):
        return self.gen.standard_normal(size)

    def spawn(self) -> "RngState":
        """Child stream derived deterministically from this one."""
        return RngState(int(self.gen.integers(0, 2**63)))


def next_uniform(rng: RngState, lo: float, hi: float) -> float:
    """Draw one value from ``[lo, hi)``."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ValueError(f"invalid range [{lo}, {hi})")
    u = lo + (hi - lo) * rng.gen.random()
    # rounding can land exactly on hi for wide ranges
    return u if u < hi else math.nextafter(hi, lo)


@dataclass
class ChaoticMapState:
    """Current value of a chaotically evolving rate and its map constants."""

    value: float
    b: float = 0.5
    p: float = 2 * math.pi


def chaotic_step(state: ChaoticMapState) -> float:
    """Advance ``state`` one step of ``|v + b - |p - 2pi|| * sin(2 pi v)``.

    The raw iterate is folded back into (0, 1) by absolute value and
    fractional part; an exact zero becomes ``EPS0``.
    """
    if not math.isfinite(state.value):
        raise FloatingPointError(f"chaotic map state is not finite: {state.value}")
    state.value = kernels.chaotic_step(state.value, state.b, state.p)
    return state.value


def opposition(x, lower: float, upper: float) -> np.ndarray:
    """Reflect ``x`` through the centre of the box: ``L + U - x``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < lower) or np.any(x > upper):
        raise ValueError("opposition input lies outside the bounds")
    return lower + upper - x
