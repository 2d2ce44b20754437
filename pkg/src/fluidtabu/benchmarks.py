"""Multi-modal test functions with their domains, step ladders and optima."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .space import DimensionMismatch, SearchSpace, StepSchedule

SCHWEFEL_DIM = 10
SCHWEFEL_ARGMIN = 420.9687


def rastrigin(x, y=None) -> float:
    """``x^2 + y^2 - cos(18x) - cos(18y)``; accepts ``(x, y)`` or a 2-vector."""
    if y is None:
        x, y = np.asarray(x, dtype=float)
    return float(x * x + y * y - np.cos(18.0 * x) - np.cos(18.0 * y))


def schwefel(x) -> float:
    """Negated Schwefel sum, minimized at ``x_i = 420.9687``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (SCHWEFEL_DIM,):
        raise DimensionMismatch(f"schwefel takes {SCHWEFEL_DIM} values, got shape {x.shape}")
    return float(-np.sum(x * np.sin(np.sqrt(np.abs(x)))))


@dataclass(frozen=True, eq=False)
class BenchmarkSpec:
    name: str
    evaluator: Callable[[np.ndarray], float]
    space: SearchSpace
    schedule: StepSchedule
    known_optimum_point: np.ndarray
    known_optimum_value: float


def rastrigin_spec() -> BenchmarkSpec:
    space = SearchSpace([-1.0, -1.0], [1.0, 1.0], 1e-4, names=("x", "y"))
    schedule = StepSchedule([0.5, 0.5], [1e-4, 1e-4])
    return BenchmarkSpec(
        "rastrigin", rastrigin, space, schedule, np.zeros(2), -2.0
    )


def schwefel_spec() -> BenchmarkSpec:
    d = SCHWEFEL_DIM
    space = SearchSpace(np.full(d, -500.0), np.full(d, 500.0), 0.01,
                        names=tuple(f"x{i + 1}" for i in range(d)))
    schedule = StepSchedule(np.full(d, 100.0), np.full(d, 0.01))
    opt = np.full(d, SCHWEFEL_ARGMIN)
    return BenchmarkSpec("schwefel", schwefel, space, schedule, opt, schwefel(opt))


BENCHMARKS = {"rastrigin": rastrigin_spec, "schwefel": schwefel_spec}
