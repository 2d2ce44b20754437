"""Lumped-parameter hydraulic circuit models integrated with fixed-step RK4."""

from .circuits import (
    actuator_areas,
    rk4_step,
    simulate_actuator,
    simulate_transmission,
    simulate_two_motor,
)
from .params import ActuatorParams, CircuitConstants, TransmissionParams, TwoMotorParams
from .steady import (
    motor_flow,
    motor_torque,
    predicted_motor_speed_rpm,
    predicted_pressure_bar,
    pump_flow,
    relief_valve_flow,
    size_transmission,
)
from .trace import (
    DesiredProfile,
    DivergedTraceError,
    Node,
    SimulationTrace,
    SteadyMetrics,
    node_balance,
    steady_state_extract,
)

__all__ = [
    "ActuatorParams", "CircuitConstants", "DesiredProfile", "DivergedTraceError", "Node",
    "SimulationTrace", "SteadyMetrics", "TransmissionParams", "TwoMotorParams", "actuator_areas",
    "motor_flow", "motor_torque", "node_balance", "predicted_motor_speed_rpm", "predicted_pressure_bar",
    "pump_flow", "relief_valve_flow", "rk4_step", "simulate_actuator", "simulate_transmission",
    "simulate_two_motor", "size_transmission", "steady_state_extract",
]
