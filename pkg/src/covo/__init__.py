"""Social-distancing coronavirus optimization (COVO) toolkit."""
from .benchmarks import ObjectiveSpec, error_of, evaluate, make_objective, make_suite
from .core import CovoParams, RunResult, preset, run
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "CovoParams",
    "ObjectiveSpec",
    "RunResult",
    "error_of",
    "evaluate",
    "make_objective",
    "make_suite",
    "preset",
    "run",
]
__version__ = "0.1.0"
