"""Social-distancing coronavirus optimizer (COVO).

One run moves a population through three pools (infected, recovered, dead).
Each iteration refreshes a zero patient, lets live carriers spread to new
positions subject to social distancing, moves carriers with the
multiplicative update, kills/recovers/reinfects, removes duplicates and
records the best-so-far error.  Everything random flows from one seeded
:class:`~covo.rng.RngState`, so a seed fully determines a run.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import kernels
from .benchmarks import ObjectiveSpec
from .rng import ChaoticMapState, RngState, chaotic_step

STAGNATION_TOL = 1e-12


class Status(str, Enum):
    INFECTED = "infected"
    RECOVERED = "recovered"
    DEAD = "dead"


class Termination(str, Enum):
    BUDGET_EXHAUSTED = "budget_exhausted"
    STAGNATION = "stagnation"
    POPULATION_EXTINCT = "population_extinct"


@dataclass(frozen=True)
class CovoParams:
    """All tunables of a COVO run.

    Defaults are the ``tableII`` preset plus the values chosen for quantities
    the method names without fixing (spreader/reinfection/isolation
    probabilities, stopping rules).  A rate range with equal ends is a fixed
    rate.
    """

    N: int = 10
    S_rate_range: tuple[float, float] = (0.3575, 0.3575)
    SS_rate_range: tuple[float, float] = (0.80138, 0.80138)
    P_travel: float = 0.0
    P_die: float = 1.0
    D_rate: float = 0.888557
    delta: float = 0.41466
    H_dist_init: float = 0.87306
    T: float = 0.5
    L: float = -100.0
    U: float = 100.0
    P_spreader: float = 0.5
    super_contacts: int = 15
    P_reinfected: float = 0.1
    P_isolation: float = 0.5
    T_rate: float = 0.0  # kept for completeness; no update rule reads it
    max_iter: int = 1000
    max_evals: Optional[int] = None
    stagnation_K: int = 50
    dedupe_eps: float = 1e-9
    b: float = 0.5
    p: float = 2 * math.pi

    def __post_init__(self):
        probs = {
            "P_travel": self.P_travel,
            "P_spreader": self.P_spreader,
            "P_reinfected": self.P_reinfected,
            "P_isolation": self.P_isolation,
            "P_die": self.P_die,
            "D_rate": self.D_rate,
        }
        for name, value in probs.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        s_lo, s_hi = self.S_rate_range
        ss_lo, ss_hi = self.SS_rate_range
        if not 0.0 <= s_lo <= s_hi <= 0.5:
            raise ValueError(f"S_rate_range must be a sub-interval of [0, 0.5], got {self.S_rate_range}")
        if not 0.5 <= ss_lo <= ss_hi <= 1.0:
            raise ValueError(f"SS_rate_range must be a sub-interval of [0.5, 1], got {self.SS_rate_range}")
        if self.N < 2:
            raise ValueError("population size N must be at least 2")
        if not self.T > 0:
            raise ValueError("threshold T must be positive")
        if not self.delta > 0:
            raise ValueError("safe distance delta must be positive")
        if not self.L < self.U:
            raise ValueError("lower bound must be below upper bound")
        if self.super_contacts < 1 or self.max_iter < 0 or self.stagnation_K < 1:
            raise ValueError("super_contacts and stagnation_K must be positive, max_iter non-negative")
        if self.max_evals is not None and self.max_evals < 1:
            raise ValueError("max_evals must be positive")
        if self.dedupe_eps < 0:
            raise ValueError("dedupe_eps must be non-negative")
        for name in ("P_die", "D_rate", "H_dist_init", "b", "p"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


PRESETS = {
    "tableII": CovoParams(),
    "tableI": CovoParams(
        S_rate_range=(0.0, 0.5),
        SS_rate_range=(0.5, 1.0),
        P_travel=0.5,
        P_die=0.43597,
        D_rate=0.13955,
        delta=0.97248,
        H_dist_init=13.77323,
        T=0.5,
        L=-10.0,
        U=10.0,
    ),
}


def preset(name: str, **overrides) -> CovoParams:
    """Named parameter set with optional field overrides."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    return replace(PRESETS[name], **overrides)


@dataclass(eq=False)
class Individual:
    position: np.ndarray
    fitness: Optional[float] = None
    status: Status = Status.INFECTED


@dataclass
class TracePoint:
    iteration: int
    evals: int
    best_error: float
    elapsed_ms: float = field(default=0.0, compare=False)


@dataclass
class RunResult:
    """Outcome of one seeded run.  Timing fields are ignored by ``==``."""

    algorithm: str
    best_position: tuple
    best_error: float
    trace: list[TracePoint]
    termination: Termination
    seed: int
    evals: int
    wall_ms: float = field(default=0.0, compare=False)
    notes: list[str] = field(default_factory=list)


class Evaluator:
    """Budgeted batch evaluation returning errors above the known optimum.

    Rows beyond the remaining budget are not evaluated.  Non-finite results are
    discarded and replaced by fresh uniform points (evaluated once more).
    Tracks the best error ever seen, so the elite can never be lost.
    """

    def __init__(self, spec: ObjectiveSpec, rng: RngState, budget: Optional[int] = None):
        self.spec = spec
        self.rng = rng
        self.budget = budget
        self.evals = 0
        self.discarded = 0
        self.best_error = math.inf
        self.best_position: Optional[np.ndarray] = None

    @property
    def remaining(self) -> float:
        return math.inf if self.budget is None else self.budget - self.evals

    @property
    def exhausted(self) -> bool:
        return self.remaining <= 0

    def __call__(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=float)
        k = int(min(X.shape[0], self.remaining))
        if k <= 0:
            return X[:0], np.empty(0)
        X = X[:k]
        fit = self.spec.func(X, self.rng) - self.spec.f_star
        self.evals += k
        bad = ~np.isfinite(fit)
        if bad.any():
            self.discarded += int(bad.sum())
            X, fit = X[~bad], fit[~bad]
            fresh = self.rng.uniform(self.spec.lower, self.spec.upper, (int(bad.sum()), self.spec.dimension))
            k2 = int(min(fresh.shape[0], self.remaining))
            if k2 > 0:
                fresh = fresh[:k2]
                f2 = self.spec.func(fresh, self.rng) - self.spec.f_star
                self.evals += k2
                ok = np.isfinite(f2)
                self.discarded += int((~ok).sum())
                X = np.vstack([X, fresh[ok]])
                fit = np.concatenate([fit, f2[ok]])
        if fit.size:
            i = int(np.argmin(fit))
            if fit[i] < self.best_error:
                self.best_error = float(fit[i])
                self.best_position = X[i].copy()
        return X, fit


@dataclass
class TransitionLog:
    """Per-iteration movement counts between pools."""

    iteration: int
    spawned: int = 0
    died: int = 0
    regenerated: int = 0
    recovered: int = 0
    reinfected: int = 0
    dropped: int = 0
    deduped: int = 0
    culled_infected: int = 0
    culled_recovered: int = 0


@dataclass(eq=False)
class PopulationState:
    infected: list[Individual]
    recovered: list[Individual]
    deaths: list[Individual]
    p_die: ChaoticMapState
    d_rate: ChaoticMapState
    evaluator: Evaluator = field(repr=False)
    iteration: int = 0
    stagnation_counter: int = 0
    log: list[TransitionLog] = field(default_factory=list)

    @property
    def evals(self) -> int:
        return self.evaluator.evals

    @property
    def best(self) -> Individual:
        ev = self.evaluator
        return Individual(ev.best_position, ev.best_error)


def _draw_rate(rng: RngState, rate_range, size=None):
    lo, hi = rate_range
    if lo == hi:
        return lo if size is None else np.full(size, lo)
    return rng.uniform(lo, hi, size)


def _bounded(params: CovoParams, spec: ObjectiveSpec) -> CovoParams:
    # the objective's box overrides the preset's L/U
    if (params.L, params.U) == (spec.lower, spec.upper):
        return params
    return replace(params, L=spec.lower, U=spec.upper)


def _individuals(X: np.ndarray, fit: np.ndarray) -> list[Individual]:
    return [Individual(X[i], float(fit[i])) for i in range(fit.shape[0])]


def init_population(
    params: CovoParams,
    spec: ObjectiveSpec,
    rng: RngState,
    evaluator: Optional[Evaluator] = None,
) -> PopulationState:
    """Uniform population screened against its opposition points.

    The raw sample is the first draw taken from ``rng``; each point is kept
    or swapped for ``L + U - x``, whichever is fitter.
    """
    params = _bounded(params, spec)
    if evaluator is None:
        evaluator = Evaluator(spec, rng, params.max_evals)
    L, U = params.L, params.U
    X = rng.uniform(L, U, (params.N, spec.dimension))
    X, fit = evaluator(X)
    Xo, fo = evaluator(L + U - X)
    k = fo.shape[0]
    swap = fo < fit[:k]
    X = X.copy()
    fit = fit.copy()
    X[:k][swap] = Xo[swap]
    fit[:k][swap] = fo[swap]
    p_die = ChaoticMapState(params.P_die, params.b, params.p)
    d_rate = ChaoticMapState(params.D_rate, params.b, params.p)
    chaotic_step(p_die)
    chaotic_step(d_rate)
    return PopulationState(_individuals(X, fit), [], [], p_die, d_rate, evaluator)


def pair_distance(xi, xj) -> float:
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    if xi.shape != xj.shape:
        raise ValueError(f"length mismatch: {xi.shape} vs {xj.shape}")
    return float(np.linalg.norm(xi - xj))


def social_distance(dist: float, delta: float) -> float:
    """Safe-distance transform: ``delta - dist`` inside the safe radius, else ``dist``."""
    if dist < delta:
        return delta - dist
    return dist


def zero_patient_position(params: CovoParams, rng: RngState, dimension: int) -> np.ndarray:
    """Position of this generation's zero patient."""
    L, U = params.L, params.U
    if rng.bernoulli(params.P_travel):
        return np.full(dimension, L + (U - L) * _draw_rate(rng, params.SS_rate_range))
    if params.H_dist_init < params.T:
        return L + (U - L) * rng.random(dimension)
    return np.full(dimension, L + (U - L) * _draw_rate(rng, params.S_rate_range))


def _spread_candidates(P: np.ndarray, params: CovoParams, rng: RngState) -> np.ndarray:
    m, d = P.shape
    L, U = params.L, params.U
    is_super = rng.random(m) < params.P_spreader
    counts = np.where(is_super, params.super_contacts, 1)
    parents = np.repeat(np.arange(m), counts)
    sup = np.repeat(is_super, counts)
    n = parents.shape[0]
    rates = np.where(sup, _draw_rate(rng, params.SS_rate_range, n), _draw_rate(rng, params.S_rate_range, n))
    sigma = rng.signs((n, d))
    C = np.clip(P[parents] + (U - L) * rates[:, None] * sigma, L, U)
    dist = np.linalg.norm(C - P[parents], axis=1)
    # contact transmits when the safe distance is violated or the target does not isolate
    isolates = rng.random(n) < params.P_isolation
    return C[(dist < params.delta) | ~isolates]


def spread(
    state: PopulationState, params: CovoParams, spec: ObjectiveSpec, rng: RngState
) -> list[Individual]:
    """Evaluated contacts infected by the live carriers.

    Super-spreaders (probability ``P_spreader``) reach ``super_contacts``
    candidates at the super-spreading rate, ordinary spreaders one at the
    ordinary rate.
    """
    params = _bounded(params, spec)
    if not state.infected:
        return []
    P = np.array([ind.position for ind in state.infected])
    C = _spread_candidates(P, params, rng)
    X, fit = state.evaluator(C)
    return _individuals(X, fit)


def _update_batch(X: np.ndarray, fit: np.ndarray, p_die: float, L: float, U: float, rng: RngState) -> np.ndarray:
    step = np.minimum(1.0, np.maximum(fit, 0.0) * p_die)
    sigma = rng.signs(X.shape)
    return np.clip(X + sigma * X * step[:, None], L, U)


def update_individual(
    x_old, fit: float, params: CovoParams, rng: RngState, p_die: Optional[float] = None
) -> np.ndarray:
    """Multiplicative move ``x +/- x * min(1, fit * P_die)`` with a random sign per dimension."""
    x_old = np.asarray(x_old, dtype=float)
    if p_die is None:
        p_die = params.P_die
    return _update_batch(x_old[None, :], np.array([fit]), p_die, params.L, params.U, rng)[0]


def classify_and_transition(
    state: PopulationState, params: CovoParams, rng: RngState, log: Optional[TransitionLog] = None
) -> PopulationState:
    """Kill, recover and reinfect in place.

    Carriers with error at or below the current death probability die and are
    replaced by unevaluated uniform newcomers.  Survivors recover with the
    current death-rate value.  Previously recovered individuals return to the
    infected pool with probability ``P_reinfected`` unless they isolate.
    """
    if log is None:
        log = TransitionLog(state.iteration)
    p_die = state.p_die.value
    d_rate = state.d_rate.value
    dead = [ind for ind in state.infected if ind.fitness <= p_die]
    live = [ind for ind in state.infected if ind.fitness > p_die]
    for ind in dead:
        ind.status = Status.DEAD
    state.deaths.extend(dead)
    log.died += len(dead)
    fresh = []
    if dead:
        d = dead[0].position.shape[0]
        X = rng.uniform(params.L, params.U, (len(dead), d))
        fresh = [Individual(x) for x in X]
    log.regenerated += len(fresh)

    n_rec = len(state.recovered)
    u_re = rng.random(n_rec)
    u_iso = rng.random(n_rec)
    back = (u_re < params.P_reinfected) & (u_iso >= params.P_isolation)
    reinfected = [ind for ind, b in zip(state.recovered, back) if b]
    still = [ind for ind, b in zip(state.recovered, back) if not b]
    for ind in reinfected:
        ind.status = Status.INFECTED
    log.reinfected += len(reinfected)

    heal = rng.random(len(live)) < d_rate
    healed = [ind for ind, h in zip(live, heal) if h]
    carriers = [ind for ind, h in zip(live, heal) if not h]
    for ind in healed:
        ind.status = Status.RECOVERED
    log.recovered += len(healed)

    state.infected = carriers + fresh + reinfected
    state.recovered = still + healed
    return state


def dedupe(candidates: list[Individual], eps: float) -> list[Individual]:
    """Drop individuals within L-infinity distance ``eps`` of an earlier survivor."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if len(candidates) < 2:
        return list(candidates)
    keep = kernels.dedupe_mask(np.array([c.position for c in candidates]), eps)
    return [c for c, k in zip(candidates, keep) if k]


def should_terminate(state: PopulationState, params: CovoParams) -> tuple[bool, Optional[Termination]]:
    if state.iteration >= params.max_iter or state.evaluator.exhausted:
        return True, Termination.BUDGET_EXHAUSTED
    if state.stagnation_counter >= params.stagnation_K:
        return True, Termination.STAGNATION
    if not state.infected:
        can_return = bool(state.recovered) and params.P_reinfected > 0 and params.P_isolation < 1
        if not can_return:
            return True, Termination.POPULATION_EXTINCT
    return False, None


def _cull(pool: list[Individual], n: int) -> tuple[list[Individual], int]:
    if len(pool) <= n:
        return pool, 0
    order = sorted(range(len(pool)), key=lambda i: pool[i].fitness)
    return [pool[i] for i in sorted(order[:n])], len(pool) - n


def step(state: PopulationState, params: CovoParams, spec: ObjectiveSpec, rng: RngState) -> TransitionLog:
    """Advance ``state`` by one generation."""
    params = _bounded(params, spec)
    ev = state.evaluator
    state.iteration += 1
    log = TransitionLog(state.iteration)
    before = ev.best_error

    pz, pz_fit = ev(zero_patient_position(params, rng, spec.dimension)[None, :])
    newcomers = _individuals(pz, pz_fit) + spread(state, params, spec, rng)
    log.spawned = len(newcomers)

    p_die = state.p_die.value
    movers = [i for i, ind in enumerate(state.infected) if ind.fitness > p_die]
    if movers:
        X = np.array([state.infected[i].position for i in movers])
        fit = np.array([state.infected[i].fitness for i in movers])
        Xn, fn = ev(_update_batch(X, fit, p_die, params.L, params.U, rng))
        for j in range(fn.shape[0]):
            state.infected[movers[j]] = Individual(Xn[j], float(fn[j]))

    classify_and_transition(state, params, rng, log)

    pending = [ind for ind in state.infected if ind.fitness is None]
    if pending:
        X, fit = ev(np.array([ind.position for ind in pending]))
        settled = _individuals(X, fit)
        log.dropped = len(pending) - len(settled)
        state.infected = [ind for ind in state.infected if ind.fitness is not None] + settled

    merged = state.infected + newcomers
    state.infected = dedupe(merged, params.dedupe_eps)
    log.deduped = len(merged) - len(state.infected)
    state.infected, log.culled_infected = _cull(state.infected, params.N)
    state.recovered, log.culled_recovered = _cull(state.recovered, params.N)

    chaotic_step(state.p_die)
    chaotic_step(state.d_rate)
    if before - ev.best_error > STAGNATION_TOL:
        state.stagnation_counter = 0
    else:
        state.stagnation_counter += 1
    state.log.append(log)
    return log


def run(spec: ObjectiveSpec, params: CovoParams, seed: int) -> RunResult:
    """Full COVO optimisation of ``spec`` from ``seed``."""
    params = _bounded(params, spec)
    t0 = time.perf_counter()
    rng = RngState(seed)
    state = init_population(params, spec, rng)
    ev = state.evaluator
    trace = [TracePoint(0, ev.evals, ev.best_error, (time.perf_counter() - t0) * 1e3)]
    while True:
        stop, reason = should_terminate(state, params)
        if stop:
            break
        step(state, params, spec, rng)
        trace.append(TracePoint(state.iteration, ev.evals, ev.best_error, (time.perf_counter() - t0) * 1e3))
    notes = []
    if ev.discarded:
        notes.append(f"discarded {ev.discarded} non-finite evaluations")
    return RunResult(
        algorithm="covo",
        best_position=tuple(float(v) for v in ev.best_position),
        best_error=ev.best_error,
        trace=trace,
        termination=reason,
        seed=seed,
        evals=ev.evals,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        notes=notes,
    )
