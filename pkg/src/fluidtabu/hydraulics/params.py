"""Design parameters of the three circuits and their shared physical constants.

Design parameters use catalogue units (cc/rev, L/min, mm, m, bar, r/min);
constants are SI.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class CircuitConstants:
    """Lumped physical constants shared by every circuit model.

    ``relief_valve_gradient=None`` sizes the relief valve per circuit so that
    it passes the largest pump flow allowed by the design bounds at 10 bar
    above cracking.
    """

    bulk_modulus: float = 1.4e9  # Pa
    line_volume: float = 1e-3  # m^3 per node
    motor_inertia: float = 0.5  # kg m^2
    viscous_damping: float = 0.05  # N m s/rad
    leakage_coefficient: float = 1e-12  # m^3/(s Pa)
    relief_valve_gradient: float | None = None  # m^3/(s Pa)
    relief_overpressure: float = 10e5  # Pa, used when sizing the gradient
    pcfv_compensation_margin: float = 5e5  # Pa
    payload_mass: float = 250.0  # kg
    rod_diameter_ratio: float = 0.6
    valve_rated_dp: float = 35e5  # Pa
    valve_laminar_dp: float = 1e5  # Pa, below this the orifice law is linearised
    piston_damping: float = 2000.0  # N s/m

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            _require(np.isfinite(v) and v > 0, f"{f.name} must be strictly positive, got {v}")
        _require(self.rod_diameter_ratio < 1, "rod_diameter_ratio must lie in (0, 1)")

    def relief_gradient(self, max_pump_flow: float) -> float:
        if self.relief_valve_gradient is not None:
            return self.relief_valve_gradient
        return max_pump_flow / self.relief_overpressure


@dataclass(frozen=True)
class TransmissionParams:
    pump_displacement: float  # cc/rev
    motor_displacement: float  # cc/rev
    pump_speed: float = 1500.0  # r/min
    load_torque: float = 100.0  # N m
    cracking_pressure: float = 100.0  # bar
    eta_vp: float = 0.95
    eta_vm: float = 0.95
    eta_mm: float = 0.95

    BOUNDS = {"pump_displacement": (1.0, 1000.0), "motor_displacement": (1.0, 1000.0)}

    def __post_init__(self):
        for name, (lo, hi) in self.BOUNDS.items():
            v = getattr(self, name)
            _require(lo <= v <= hi, f"{name}={v} outside [{lo}, {hi}]")
        for name in ("eta_vp", "eta_vm", "eta_mm"):
            v = getattr(self, name)
            _require(0 < v <= 1, f"{name} must lie in (0, 1]")


@dataclass(frozen=True)
class TwoMotorParams:
    pump_displacement: float  # cc/rev
    motor1_displacement: float  # cc/rev
    motor2_displacement: float  # cc/rev
    pcfv1_flow: float  # L/min
    pcfv2_flow: float  # L/min
    load_torque1: float = 600.0  # N m
    load_torque2: float = 600.0  # N m
    pump_speed: float = 1500.0  # r/min
    cracking_pressure: float = 100.0  # bar

    BOUNDS = {
        "pump_displacement": (1.0, 1000.0),
        "motor1_displacement": (1.0, 1000.0),
        "motor2_displacement": (1.0, 1000.0),
        "pcfv1_flow": (10.0, 100.0),
        "pcfv2_flow": (10.0, 100.0),
    }

    def __post_init__(self):
        for name, (lo, hi) in self.BOUNDS.items():
            v = getattr(self, name)
            _require(lo <= v <= hi, f"{name}={v} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class ActuatorParams:
    pump_displacement: float  # cc/rev
    bore_diameter: float  # mm
    stroke: float  # m
    dcv_flow: float  # L/min at the rated valve pressure drop
    proportional_gain: float  # spool fraction per metre of error
    pump_speed: float = 1500.0  # r/min
    cracking_pressure: float = 100.0  # bar

    BOUNDS = {
        "pump_displacement": (1.0, 500.0),
        "bore_diameter": (30.0, 70.0),
        "stroke": (0.01, 1.0),
        "dcv_flow": (25.0, 75.0),
        "proportional_gain": (1.0, 300.0),
    }

    def __post_init__(self):
        for name, (lo, hi) in self.BOUNDS.items():
            v = getattr(self, name)
            _require(lo <= v <= hi, f"{name}={v} outside [{lo}, {hi}]")
