"""Penalty-ratio objectives for the three circuits and the problems built on them.

Errors are in r/min for motor speeds and metres for actuator position. The
relief-valve penalty multiplies the error term by ``1 + Q_rv/Q_p``, so any
flow spilled over the relief valve makes a solution proportionally worse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hydraulics.circuits import simulate_actuator, simulate_transmission, simulate_two_motor
from .hydraulics.params import ActuatorParams, CircuitConstants, TransmissionParams, TwoMotorParams
from .hydraulics.trace import (
    DesiredProfile,
    DivergedTraceError,
    SimulationTrace,
    SteadyMetrics,
    steady_state_extract,
)
from .hydraulics.units import rad_s_to_rpm
from .space import SearchSpace, StepSchedule

TRANSMISSION_TARGET = 300.0
TWO_MOTOR_TARGETS = (120.0, 60.0)


def penalty_multiplier(relief_flow: float, pump_flow: float) -> float:
    """``1 + Q_rv / Q_p``; both flows in the same unit."""
    if not pump_flow > 0:
        raise ValueError("pump flow must be positive")
    if relief_flow < 0:
        raise ValueError("relief flow cannot be negative")
    return 1.0 + relief_flow / pump_flow


def _safe_multiplier(metrics: SteadyMetrics) -> float:
    try:
        return penalty_multiplier(metrics.relief_flow, metrics.pump_flow)
    except ValueError:
        return math.inf


def transmission_objective(metrics: SteadyMetrics, target: float = TRANSMISSION_TARGET) -> float:
    """Squared speed error times the relief penalty."""
    e = target - metrics.speeds[0]
    return e * e * _safe_multiplier(metrics)


def two_motor_objective(metrics: SteadyMetrics, target1: float = TWO_MOTOR_TARGETS[0],
                        target2: float = TWO_MOTOR_TARGETS[1]) -> float:
    """Square of the summed absolute speed errors, times the relief penalty."""
    e = abs(target1 - metrics.speeds[0]) + abs(target2 - metrics.speeds[1])
    return e * e * _safe_multiplier(metrics)


def actuator_objective(trace: SimulationTrace, profile: DesiredProfile, interval: float | None = None) -> float:
    """Sum over sample instants of ``|x_d - x_a|`` times the instantaneous penalty."""
    if trace.diverged:
        return math.inf
    times = profile.sample_times(trace.duration, interval)
    s = trace.sample(times)
    if np.any(s["q_pump"] <= 0):
        return math.inf
    err = np.abs(profile.position(times) - s["x"])
    mult = 1.0 + np.maximum(s["q_relief"], 0.0) / s["q_pump"]
    return float(np.sum(err * mult))


def transmission_pump_power_objective(trace: SimulationTrace, load_torque: float,
                                      target: float = TRANSMISSION_TARGET, window: float | None = None) -> float:
    """Squared speed error times ``1 + W_pump / W_load``.

    ``W_pump`` is the final-window mean of pump pressure times pump flow and
    ``W_load`` the shaft power the load absorbs at the target speed.
    """
    metrics = steady_state_extract(trace, window)
    mask = trace.window_mask(metrics.window)
    w_pump = float(np.mean(trace["p_motor"][mask] * trace["q_pump"][mask]))
    w_load = load_torque * target * 2.0 * math.pi / 60.0
    e = target - metrics.speeds[0]
    return e * e * (1.0 + max(w_pump, 0.0) / w_load)


@dataclass(eq=False)
class CircuitProblem:
    """A circuit design problem: search domain plus simulate-and-score objective.

    Calling the problem with a parameter vector returns the objective value,
    or ``+inf`` when the simulation diverges.
    """

    name: str
    space: SearchSpace
    schedule: StepSchedule
    build: Callable[[np.ndarray], object]
    simulate: Callable[[object], SimulationTrace]
    score: Callable[[SimulationTrace], float]
    success: Callable[[dict], bool]
    constants: CircuitConstants = field(default_factory=CircuitConstants)
    profile: DesiredProfile | None = None

    def __call__(self, x) -> float:
        trace = self.simulate(self.build(np.asarray(x, dtype=float)))
        try:
            return float(self.score(trace))
        except DivergedTraceError:
            return math.inf

    def describe(self, x) -> dict:
        """Steady metrics and objective for ``x`` in report-friendly units."""
        trace = self.simulate(self.build(np.asarray(x, dtype=float)))
        row: dict = {"diverged": trace.diverged}
        try:
            row["obfn"] = float(self.score(trace))
        except DivergedTraceError:
            row["obfn"] = math.inf
        if trace.diverged:
            return row
        m = steady_state_extract(trace)
        for i, w in enumerate(m.speeds, 1):
            row[f"speed_{i} [r/min]"] = w
        row["relief_flow [L/min]"] = m.relief_flow
        row["pump_flow [L/min]"] = m.pump_flow
        for i, dp in enumerate(m.pressure_drops, 1):
            row[f"dp_{i} [bar]"] = dp
        return row


def transmission_problem(
    constants: CircuitConstants = CircuitConstants(),
    dt: float = 1e-4,
    duration: float = 5.0,
    target: float = TRANSMISSION_TARGET,
    variant: str = "standard",
) -> CircuitProblem:
    space = SearchSpace([1.0, 1.0], [1000.0, 1000.0], [1.0, 1.0],
                        names=("pump_displacement", "motor_displacement"),
                        units=("cc/rev", "cc/rev"))
    schedule = StepSchedule([64.0, 64.0], [1.0, 1.0])

    def build(x):
        return TransmissionParams(float(x[0]), float(x[1]))

    def simulate(p):
        return simulate_transmission(p, constants, dt, duration)

    if variant == "standard":
        def score(trace):
            return transmission_objective(steady_state_extract(trace), target)
    elif variant == "pump_power":
        def score(trace):
            return transmission_pump_power_objective(trace, TransmissionParams.load_torque, target)
    else:
        raise ValueError(f"unknown transmission objective variant {variant!r}")

    def success(row):
        return (not row.get("diverged", True) and row["relief_flow [L/min]"] < 1e-3
                and abs(row["speed_1 [r/min]"] - target) <= 0.5)

    return CircuitProblem("transmission", space, schedule, build, simulate, score, success, constants)


def two_motor_problem(
    constants: CircuitConstants = CircuitConstants(),
    dt: float = 1e-4,
    duration: float = 2.0,
    targets: tuple[float, float] = TWO_MOTOR_TARGETS,
    load_torques: tuple[float, float] = (600.0, 600.0),
) -> CircuitProblem:
    space = SearchSpace(
        [1.0, 1.0, 1.0, 10.0, 10.0], [1000.0, 1000.0, 1000.0, 100.0, 100.0],
        [1.0, 1.0, 1.0, 0.5, 0.5],
        names=("pump_displacement", "motor1_displacement", "motor2_displacement", "pcfv1_flow", "pcfv2_flow"),
        units=("cc/rev", "cc/rev", "cc/rev", "L/min", "L/min"),
    )
    schedule = StepSchedule([64.0, 64.0, 64.0, 32.0, 32.0], [1.0, 1.0, 1.0, 0.5, 0.5])

    def build(x):
        return TwoMotorParams(*(float(v) for v in x), load_torque1=load_torques[0],
                              load_torque2=load_torques[1])

    def simulate(p):
        return simulate_two_motor(p, constants, dt, duration)

    def score(trace):
        return two_motor_objective(steady_state_extract(trace), *targets)

    def success(row):
        return (not row.get("diverged", True)
                and abs(row["speed_1 [r/min]"] - targets[0]) <= 0.5
                and abs(row["speed_2 [r/min]"] - targets[1]) <= 0.5)

    return CircuitProblem("two_motor", space, schedule, build, simulate, score, success, constants)


def actuator_problem(
    constants: CircuitConstants = CircuitConstants(),
    profile: DesiredProfile | None = None,
    dt: float = 1e-4,
) -> CircuitProblem:
    profile = DesiredProfile.trapezoid() if profile is None else profile
    space = SearchSpace(
        [1.0, 30.0, 0.01, 25.0, 1.0], [500.0, 70.0, 1.0, 75.0, 300.0],
        [1.0, 0.5, 0.01, 0.5, 1.0],
        names=("pump_displacement", "bore_diameter", "stroke", "dcv_flow", "proportional_gain"),
        units=("cc/rev", "mm", "m", "L/min", "-"),
    )
    schedule = StepSchedule([64.0, 32.0, 0.64, 32.0, 64.0], [1.0, 0.5, 0.01, 0.5, 1.0])

    def build(x):
        return ActuatorParams(*(float(v) for v in x))

    def simulate(p):
        return simulate_actuator(p, constants, profile, dt)

    def score(trace):
        return actuator_objective(trace, profile)

    def success(row):
        return not row.get("diverged", True) and math.isfinite(row["obfn"])

    return CircuitProblem("actuator", space, schedule, build, simulate, score, success, constants, profile)


def speed_rpm(trace: SimulationTrace, signal: str) -> np.ndarray:
    return rad_s_to_rpm(trace[signal])
