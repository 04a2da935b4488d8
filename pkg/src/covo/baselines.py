"""Reference optimizers for equal-budget comparisons: random search and PSO."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .benchmarks import ObjectiveSpec
from .core import Evaluator, RunResult, Termination, TracePoint
from .rng import RngState


@dataclass(frozen=True)
class BaselineParams:
    id: str = "pso"
    population: int = 10
    budget: int = 10_000
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445

    def __post_init__(self):
        if self.id not in ("random_search", "pso"):
            raise ValueError(f"unknown baseline {self.id!r}")
        if self.population < 1 or self.budget < self.population:
            raise ValueError("need population >= 1 and budget >= population")
        if not all(np.isfinite([self.inertia, self.cognitive, self.social])):
            raise ValueError("PSO coefficients must be finite")


def _result(name, ev, trace, seed, t0) -> RunResult:
    notes = [f"discarded {ev.discarded} non-finite evaluations"] if ev.discarded else []
    return RunResult(
        algorithm=name,
        best_position=tuple(float(v) for v in ev.best_position),
        best_error=ev.best_error,
        trace=trace,
        termination=Termination.BUDGET_EXHAUSTED,
        seed=seed,
        evals=ev.evals,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        notes=notes,
    )


def random_search(spec: ObjectiveSpec, budget: int, seed: int, batch: int = 1) -> RunResult:
    """Uniform sampling of ``budget`` points; one trace entry per batch."""
    if budget < 1 or batch < 1:
        raise ValueError("budget and batch must be positive")
    t0 = time.perf_counter()
    rng = RngState(seed)
    ev = Evaluator(spec, rng, budget)
    trace = []
    it = 0
    while not ev.exhausted:
        m = int(min(batch, ev.remaining))
        ev(rng.uniform(spec.lower, spec.upper, (m, spec.dimension)))
        trace.append(TracePoint(it, ev.evals, ev.best_error, (time.perf_counter() - t0) * 1e3))
        it += 1
    return _result("random_search", ev, trace, seed, t0)


def pso(spec: ObjectiveSpec, params: BaselineParams, seed: int) -> RunResult:
    """Global-best particle swarm with velocity and position clamping."""
    t0 = time.perf_counter()
    rng = RngState(seed)
    ev = Evaluator(spec, rng, params.budget)
    L, U = spec.lower, spec.upper
    vmax = U - L
    n, d = params.population, spec.dimension
    X = rng.uniform(L, U, (n, d))
    V = rng.uniform(-vmax, vmax, (n, d)) * 0.1
    X, fit = ev(X)
    n = X.shape[0]
    V = V[:n]
    pbest, pfit = X.copy(), fit.copy()
    trace = [TracePoint(0, ev.evals, ev.best_error, (time.perf_counter() - t0) * 1e3)]
    it = 0
    while not ev.exhausted:
        it += 1
        g = ev.best_position
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        V = params.inertia * V + params.cognitive * r1 * (pbest - X) + params.social * r2 * (g - X)
        V = np.clip(V, -vmax, vmax)
        X = np.clip(X + V, L, U)
        Xe, fe = ev(X)
        k = fe.shape[0]
        # non-finite replacements may reorder rows; only trust a full batch row-for-row
        if Xe.shape[0] == k and np.array_equal(Xe, X[:k]):
            better = fe < pfit[:k]
            pbest[:k][better] = Xe[better]
            pfit[:k][better] = fe[better]
        trace.append(TracePoint(it, ev.evals, ev.best_error, (time.perf_counter() - t0) * 1e3))
    return _result("pso", ev, trace, seed, t0)
