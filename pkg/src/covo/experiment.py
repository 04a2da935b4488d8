"""Multi-seed experiment orchestration behind ``covo bench`` and ``covo stats``."""
from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

from .baselines import BaselineParams, pso, random_search
from .benchmarks import FUNCTION_IDS, make_objective
from .core import CovoParams, RunResult, preset, run
from .stats import describe, friedman, t_test, wilcoxon_signed_rank

ALGORITHMS = ("covo", "random_search", "pso")

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "functions": {"type": "array", "items": {"enum": list(FUNCTION_IDS)}, "minItems": 1},
        "dimension": {"type": "integer", "minimum": 2},
        "algorithms": {"type": "array", "items": {"enum": list(ALGORITHMS)}, "minItems": 1},
        "preset": {"enum": ["tableI", "tableII"]},
        "overrides": {"type": "object"},
        "seeds": {
            "oneOf": [
                {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
                {
                    "type": "object",
                    "properties": {
                        "base": {"type": "integer", "minimum": 0},
                        "count": {"type": "integer", "minimum": 1},
                    },
                    "required": ["count"],
                    "additionalProperties": False,
                },
            ]
        },
        "budget": {"type": "integer", "minimum": 1},
        "out": {"type": "string"},
        "timing": {"type": "boolean"},
    },
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    functions: list[str] = field(default_factory=lambda: list(FUNCTION_IDS))
    dimension: int = 30
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    preset: str = "tableII"
    overrides: dict = field(default_factory=dict)
    seeds: list[int] = field(default_factory=lambda: list(range(21)))
    budget: int = 100_000
    out: str = "results"
    timing: bool = False

    def covo_params(self) -> CovoParams:
        try:
            params = preset(self.preset, **{"max_iter": self.budget, **self.overrides, "max_evals": self.budget})
        except TypeError as exc:
            raise ConfigError(f"unknown parameter override: {exc}") from None
        return params

    def validate(self) -> "ExperimentConfig":
        if not self.functions or not self.algorithms or not self.seeds:
            raise ConfigError("need at least one function, one algorithm and one seed")
        bad = [f for f in self.functions if f not in FUNCTION_IDS]
        if bad:
            raise ConfigError(f"unknown functions: {', '.join(bad)}")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ConfigError(f"unknown algorithms: {', '.join(bad)}")
        if self.dimension < 2:
            raise ConfigError("dimension must be at least 2")
        if len(set(self.seeds)) != len(self.seeds) or min(self.seeds) < 0:
            raise ConfigError("seeds must be distinct non-negative integers")
        try:
            params = self.covo_params()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.budget < params.N:
            raise ConfigError(f"budget {self.budget} is smaller than the population size {params.N}")
        return self


def parse_seeds(value) -> list[int]:
    """``"21"`` (count from 0), ``"5:21"`` (base:count), ``"1,4,9"`` or JSON forms."""
    if isinstance(value, list):
        return [int(v) for v in value]
    if isinstance(value, dict):
        base = int(value.get("base", 0))
        return list(range(base, base + int(value["count"])))
    text = str(value).strip()
    try:
        if "," in text:
            return [int(v) for v in text.split(",") if v.strip()]
        if ":" in text:
            base, count = text.split(":")
            return list(range(int(base), int(base) + int(count)))
        return list(range(int(text)))
    except ValueError:
        raise ConfigError(f"cannot parse seeds {value!r}") from None


def load_config(path) -> dict:
    """Read and schema-check a JSON experiment file."""
    import jsonschema

    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"{path}: {exc.message}") from None
    if "seeds" in data:
        data["seeds"] = parse_seeds(data["seeds"])
    return data


def build_config(file_values: Optional[dict] = None, **flags) -> ExperimentConfig:
    """Merge defaults, config-file values and command-line flags (flags win)."""
    known = {f.name for f in fields(ExperimentConfig)}
    merged = {}
    for source in (file_values or {}, {k: v for k, v in flags.items() if v is not None}):
        for k, v in source.items():
            if k not in known:
                raise ConfigError(f"unknown configuration key {k!r}")
            merged[k] = v
    if "seeds" in merged:
        merged["seeds"] = parse_seeds(merged["seeds"])
    return ExperimentConfig(**merged).validate()


@dataclass(frozen=True)
class Cell:
    function: str
    algorithm: str
    seed: int

    @property
    def run_id(self) -> str:
        return f"{self.function}:{self.algorithm}:{self.seed}"


def cells(config: ExperimentConfig) -> list[Cell]:
    return [Cell(f, a, s) for f, a, s in itertools.product(config.functions, config.algorithms, config.seeds)]


def run_cell(cell: Cell, dimension: int, params: CovoParams, budget: int) -> RunResult:
    spec = make_objective(cell.function, dimension)
    if cell.algorithm == "covo":
        return run(spec, params, cell.seed)
    if cell.algorithm == "random_search":
        return random_search(spec, budget, cell.seed, batch=params.N)
    return pso(spec, BaselineParams("pso", params.N, budget), cell.seed)


def worker_count() -> int:
    env = os.environ.get("COVO_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"COVO_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def run_experiment(config: ExperimentConfig) -> list[tuple[Cell, RunResult]]:
    """Every (function, algorithm, seed) cell, returned in cell order."""
    todo = cells(config)
    params = config.covo_params()
    n = min(worker_count(), len(todo))
    args = [(c, config.dimension, params, config.budget) for c in todo]
    if n <= 1:
        results = [run_cell(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(run_cell, *zip(*args)))
    return list(zip(todo, results))


def summarize(outcomes) -> list[dict]:
    """Descriptive statistics of final errors per (function, algorithm)."""
    groups: dict[tuple[str, str], list[float]] = {}
    for cell, res in outcomes:
        groups.setdefault((cell.function, cell.algorithm), []).append(res.best_error)
    return [{"function": f, "algorithm": a, "runs": len(v), **describe(v)} for (f, a), v in groups.items()]


def final_errors_from_trace(rows) -> dict:
    """``{(function, algorithm): {seed: final best_error}}`` from trace rows."""
    last: dict[str, object] = {}
    for r in rows:
        cur = last.get(r.run_id)
        if cur is None or r.iteration >= cur.iteration:
            last[r.run_id] = r
    out: dict = {}
    for r in last.values():
        out.setdefault((r.function, r.algorithm), {})[r.seed] = r.best_error
    return out


def comparison_matrix(finals: dict) -> tuple[list[str], list[list[float]]]:
    """Blocks x algorithms matrix for the rank tests.

    With two or more functions a block is a function (mean final error over
    its seeds); with a single function a block is a seed shared by every
    algorithm.
    """
    algorithms = list(dict.fromkeys(a for _, a in finals))
    functions = list(dict.fromkeys(f for f, _ in finals))
    if len(algorithms) < 2:
        raise ConfigError("statistical comparison needs at least two algorithms")
    for f in functions:
        for a in algorithms:
            if (f, a) not in finals:
                raise ConfigError(f"function {f} has no results for algorithm {a}")
    if len(functions) >= 2:
        matrix = [[sum(finals[f, a].values()) / len(finals[f, a]) for a in algorithms] for f in functions]
    else:
        f = functions[0]
        seeds = sorted(set.intersection(*(set(finals[f, a]) for a in algorithms)))
        matrix = [[finals[f, a][s] for a in algorithms] for s in seeds]
    if len(matrix) < 2:
        raise ConfigError("statistical comparison needs at least two blocks (functions or shared seeds)")
    return algorithms, matrix


def compare(algorithms: list[str], matrix: list[list[float]]) -> list[dict]:
    rows = []
    fr = friedman(matrix)
    rows.append({"test": "friedman", "algorithm_a": "+".join(algorithms), "algorithm_b": "-",
                 "statistic": fr.statistic, "p_value": fr.p_value})
    cols = list(zip(*matrix))
    pairs = list(itertools.combinations(range(len(algorithms)), 2))
    for i, j in pairs:
        w = wilcoxon_signed_rank(cols[i], cols[j])
        rows.append({"test": "wilcoxon", "algorithm_a": algorithms[i], "algorithm_b": algorithms[j],
                     "statistic": w.statistic, "p_value": w.p_value})
    for i, j in pairs:
        t = t_test(cols[i], cols[j])
        rows.append({"test": "t_test", "algorithm_a": algorithms[i], "algorithm_b": algorithms[j],
                     "statistic": t.statistic, "p_value": t.p_value})
    return rows
