"""Tabu-guided Hooke-Jeeves search over a quantized box.

The hill climber always takes the best admissible coordinate move, even when
every move is uphill. Recently accepted points are tabu; a tabu point can only
be re-entered when its (already known) value beats the best solution of the
run. Two thresholds on the control counter inside each step-size cycle trigger
intensification (restart from the centroid of the last ``m`` best solutions)
and diversification (random restart). When a whole cycle passes without a new
best the step sizes are reduced, and the run ends once they fall below their
minimum.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .space import SearchSpace, StepSchedule

log = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


class NeighborhoodExhausted(RuntimeError):
    """Every exploration candidate is tabu and none qualifies for aspiration."""


class BudgetExhausted(RuntimeError):
    """The evaluation budget of a run has been spent."""


class Termination(str, Enum):
    STEP_FLOOR = "step_floor"
    BUDGET = "budget"


@dataclass(frozen=True, eq=False)
class Evaluation:
    point: np.ndarray
    value: float

    def key(self) -> tuple:
        return tuple(self.point.tolist())


def _key(point) -> tuple:
    return tuple(np.asarray(point, dtype=float).tolist())


class TabuList:
    """FIFO of the last ``capacity`` accepted solutions.

    Entries keep the objective value they were accepted with, which lets the
    aspiration test run without spending an evaluation.
    """

    def __init__(self, capacity: int, entries: Iterable[Evaluation] = ()):
        if capacity < 1:
            raise ValueError("tabu list capacity must be >= 1")
        self.capacity = int(capacity)
        self._entries: deque[Evaluation] = deque(maxlen=self.capacity)
        for e in entries:
            self.record(e)

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> list[Evaluation]:
        return list(self._entries)

    def lookup(self, point) -> Evaluation | None:
        k = _key(point)
        for e in reversed(self._entries):
            if e.key() == k:
                return e
        return None

    def is_tabu(self, point) -> bool:
        return self.lookup(point) is not None

    def record(self, entry: Evaluation) -> None:
        self._entries.append(entry)


class IntermediateMemory:
    """Rolling list of the last ``capacity`` new-best solutions."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("intermediate memory capacity must be >= 1")
        self.capacity = int(capacity)
        self._entries: deque[Evaluation] = deque(maxlen=self.capacity)

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> list[Evaluation]:
        return list(self._entries)

    def add(self, entry: Evaluation) -> None:
        if self._entries and not entry.value < self._entries[-1].value:
            raise ValueError("intermediate memory only accepts strict new bests")
        self._entries.append(entry)


@dataclass(frozen=True)
class SearchConfig:
    """Memory sizes, control thresholds and budget of one run."""

    n: int = 7
    m: int = 4
    intense: int = 10
    diverse: int = 15
    end_of_cycle: int = 25
    pattern_factor: float = 2.0
    max_evaluations: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        for name in ("n", "m", "intense", "diverse", "end_of_cycle", "max_evaluations", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {v!r}")
        if not 0 < self.intense < self.diverse < self.end_of_cycle:
            raise ValueError("need 0 < intense < diverse < end_of_cycle")
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if not self.pattern_factor > 1:
            raise ValueError("pattern_factor must exceed 1")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class RunResult:
    best: Evaluation
    evaluations_used: int
    accepted_history: list[Evaluation]
    terminated_by: Termination
    step_reductions: int = 0
    nonfinite_evaluations: int = 0
    final_steps: np.ndarray = field(default_factory=lambda: np.empty(0))


class CountingObjective:
    """Budgeted evaluation counter that also remembers the best point seen.

    Non-finite objective values are reported as ``+inf``.
    """

    def __init__(self, fn: Objective, max_evaluations: int | None = None):
        self.fn = fn
        self.max_evaluations = max_evaluations
        self.calls = 0
        self.nonfinite = 0
        self.best: Evaluation | None = None

    def __call__(self, point) -> float:
        if self.max_evaluations is not None and self.calls >= self.max_evaluations:
            raise BudgetExhausted(self.calls)
        self.calls += 1
        value = float(self.fn(point))
        if not math.isfinite(value):
            self.nonfinite += 1
            log.warning("non-finite objective %r at %s; treated as +inf", value, point)
            value = math.inf
        if value < math.inf and (self.best is None or value < self.best.value):
            self.best = Evaluation(np.array(point, dtype=float), value)
        return value


def _evaluate(objective: Objective, point) -> Evaluation:
    value = float(objective(point))
    if not math.isfinite(value):
        value = math.inf
    return Evaluation(point, value)


def is_tabu(candidate, tabu: TabuList) -> bool:
    return tabu.is_tabu(candidate)


def record(tabu: TabuList, entry: Evaluation) -> TabuList:
    tabu.record(entry)
    return tabu


def aspiration_override(candidate_value: float, best_so_far: float) -> bool:
    return candidate_value < best_so_far


def explore(
    base: Evaluation,
    steps,
    space: SearchSpace,
    objective: Objective,
    tabu: TabuList,
    best_so_far: float,
) -> Evaluation:
    """Best admissible coordinate move around ``base``, uphill or not.

    Tabu candidates are never evaluated; they join the admissible set with
    their stored value only if that value aspirates. Ties keep the first
    candidate in neighborhood order.
    """
    admissible: list[Evaluation] = []
    for cand in space.neighborhood(base.point, steps):
        hit = tabu.lookup(cand)
        if hit is None:
            admissible.append(_evaluate(objective, cand))
        elif aspiration_override(hit.value, best_so_far):
            admissible.append(hit)
    if not admissible:
        raise NeighborhoodExhausted(base.point)
    return min(admissible, key=lambda e: e.value)


def pattern_move(
    old_base: Evaluation,
    new_base: Evaluation,
    pattern_factor: float,
    space: SearchSpace,
    objective: Objective,
    tabu: TabuList | None = None,
    best_so_far: float = math.inf,
) -> Evaluation:
    """Extrapolate ``old -> new`` by ``pattern_factor``; keep it only if better."""
    delta = new_base.point - old_base.point
    cand = space.quantize(space.clamp(old_base.point + pattern_factor * delta))
    if np.array_equal(cand, new_base.point) or np.array_equal(cand, old_base.point):
        return new_base
    if tabu is not None:
        hit = tabu.lookup(cand)
        if hit is not None:
            if aspiration_override(hit.value, best_so_far) and hit.value < new_base.value:
                return hit
            return new_base
    trial = _evaluate(objective, cand)
    return trial if trial.value < new_base.value else new_base


def intensify(memory: IntermediateMemory | Sequence[Evaluation], space: SearchSpace) -> np.ndarray | None:
    """Centroid of the stored best solutions, or ``None`` when memory is empty."""
    entries = memory.entries if isinstance(memory, IntermediateMemory) else list(memory)
    if not entries:
        return None
    pts = np.array([e.point for e in entries])
    return space.quantize(space.clamp(pts.mean(axis=0)))


def diversify(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    return space.random_point(rng)


_MAX_REDRAWS = 100


def run(
    space: SearchSpace,
    schedule: StepSchedule,
    objective: Objective,
    config: SearchConfig = SearchConfig(),
    start=None,
) -> RunResult:
    """Minimize ``objective`` over ``space``.

    Parameters
    ----------
    space, schedule
        Search domain and step-size ladder.
    objective
        Callable mapping a point to a scalar cost.
    config
        Memory sizes, control thresholds, budget and seed.
    start : array_like, optional
        Start point; drawn uniformly from the run's random stream if omitted.

    Notes
    -----
    Every exploration is followed by a pattern move along the same vector,
    uphill explorations included. At each step reduction the base moves back
    to the best point found so far; that repositioning is not an accepted
    move and is not recorded in the tabu list.
    """
    schedule.check_against(space)
    rng = np.random.default_rng(config.seed)
    f = CountingObjective(objective, config.max_evaluations)
    tabu = TabuList(config.n)
    memory = IntermediateMemory(config.m)
    history: list[Evaluation] = []
    best = Evaluation(np.full(space.dimension, np.nan), math.inf)
    improved = False

    def accept(ev: Evaluation) -> Evaluation:
        nonlocal best, improved
        tabu.record(ev)
        history.append(ev)
        if ev.value < best.value:
            best = ev
            memory.add(ev)
            improved = True
        return ev

    def fresh_random() -> Evaluation:
        p = diversify(space, rng)
        for _ in range(_MAX_REDRAWS):
            if not tabu.is_tabu(p):
                break
            p = diversify(space, rng)
        return accept(_evaluate(f, p))

    steps = schedule.initial.copy()
    reductions = 0
    termination = Termination.STEP_FLOOR
    try:
        x0 = space.random_point(rng) if start is None else space.quantize(space.clamp(start))
        base = accept(_evaluate(f, x0))
        while True:
            control = 0
            while control < config.end_of_cycle:
                improved = False
                if control == config.intense:
                    p = intensify(memory, space)
                    if p is not None and not tabu.is_tabu(p):
                        base = accept(_evaluate(f, p))
                if control == config.diverse:
                    base = fresh_random()
                try:
                    moved = explore(base, steps, space, f, tabu, best.value)
                except NeighborhoodExhausted:
                    base = fresh_random()
                else:
                    moved = pattern_move(base, moved, config.pattern_factor, space, f, tabu, best.value)
                    base = accept(moved)
                control = 0 if improved else control + 1
            steps = steps / schedule.reduction_factor
            reductions += 1
            if np.any(steps < schedule.minimum):
                break
            base = best
    except BudgetExhausted:
        termination = Termination.BUDGET

    if f.best is not None and f.best.value < best.value:
        best = f.best
    return RunResult(
        best=best,
        evaluations_used=f.calls,
        accepted_history=history,
        terminated_by=termination,
        step_reductions=reductions,
        nonfinite_evaluations=f.nonfinite,
        final_steps=steps,
    )
