"""Tabu search over quantized design lattices, with hydraulic circuit design problems."""

from .benchmarks import BENCHMARKS, rastrigin, schwefel
from .objectives import (
    actuator_objective,
    actuator_problem,
    penalty_multiplier,
    transmission_objective,
    transmission_problem,
    two_motor_objective,
    two_motor_problem,
)
from .space import SearchSpace, StepSchedule
from .tabu import RunResult, SearchConfig, Termination, run

__version__ = "0.1.0"

__all__ = [
    "BENCHMARKS", "RunResult", "SearchConfig", "SearchSpace", "StepSchedule", "Termination",
    "actuator_objective", "actuator_problem", "penalty_multiplier", "rastrigin", "run", "schwefel",
    "transmission_objective", "transmission_problem", "two_motor_objective", "two_motor_problem",
]
