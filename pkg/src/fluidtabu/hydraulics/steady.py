"""Steady-state motor/pump relations and the designer's sizing calculation.

All functions work in SI: displacement in m^3/rad, speed in rad/s, pressure in
Pa, flow in m^3/s. ``size_transmission`` takes and returns catalogue units.
"""

from __future__ import annotations

from .units import (
    bar_to_pa,
    cc_rev_to_m3_rad,
    m3_rad_to_cc_rev,
    rad_s_to_rpm,
    rpm_to_rad_s,
)


def _check_efficiency(eta: float, name: str) -> None:
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"{name} must lie in (0, 1], got {eta}")


def motor_torque(d_m: float, dp: float, eta_mm: float) -> float:
    """Shaft torque ``D_m * dP * eta_mm``."""
    if d_m < 0:
        raise ValueError("motor displacement must be non-negative")
    _check_efficiency(eta_mm, "eta_mm")
    return d_m * dp * eta_mm


def motor_flow(d_m: float, omega_m: float, eta_vm: float) -> float:
    """Flow demanded by a motor turning at ``omega_m``: ``D_m * w / eta_vm``."""
    _check_efficiency(eta_vm, "eta_vm")
    return d_m * omega_m / eta_vm


def pump_flow(d_p: float, omega_p: float, eta_vp: float) -> float:
    """Delivered pump flow ``D_p * w_p * eta_vp``."""
    _check_efficiency(eta_vp, "eta_vp")
    return d_p * omega_p * eta_vp


def relief_valve_flow(p: float, p_crack: float, gradient: float) -> float:
    """Static overflow law ``max(0, gradient * (p - p_crack))``."""
    if gradient <= 0:
        raise ValueError("relief valve gradient must be positive")
    return max(0.0, gradient * (p - p_crack))


def size_transmission(
    load_torque: float = 100.0,
    target_speed_rpm: float = 300.0,
    pump_speed_rpm: float = 1500.0,
    pressure_bar: float = 85.0,
    eta_mm: float = 0.95,
    eta_vm: float = 0.95,
    eta_vp: float = 0.95,
    cracking_pressure_bar: float | None = 100.0,
) -> tuple[float, float]:
    """Motor and pump displacement (cc/rev) for a hydrostatic transmission.

    The motor is sized to deliver ``load_torque`` at the assumed working
    pressure, then the pump is sized so that its delivered flow matches the
    motor's demand at ``target_speed_rpm``.

    >>> d_m, d_p = size_transmission()
    >>> round(d_m), round(d_p, 1)
    (78, 17.2)
    """
    if cracking_pressure_bar is not None and pressure_bar >= cracking_pressure_bar:
        raise ValueError("assumed working pressure must be below the cracking pressure")
    if load_torque <= 0 or target_speed_rpm <= 0 or pump_speed_rpm <= 0 or pressure_bar <= 0:
        raise ValueError("torque, speeds and pressure must be positive")
    _check_efficiency(eta_mm, "eta_mm")
    dp = bar_to_pa(pressure_bar)
    d_m = load_torque / (dp * eta_mm)
    q = motor_flow(d_m, rpm_to_rad_s(target_speed_rpm), eta_vm)
    _check_efficiency(eta_vp, "eta_vp")
    d_p = q / (rpm_to_rad_s(pump_speed_rpm) * eta_vp)
    return m3_rad_to_cc_rev(d_m), m3_rad_to_cc_rev(d_p)


def predicted_motor_speed_rpm(
    d_p_cc: float,
    d_m_cc: float,
    pump_speed_rpm: float = 1500.0,
    eta_vp: float = 0.95,
    eta_vm: float = 0.95,
) -> float:
    """Steady motor speed implied by flow balance for a given pair of units."""
    q = pump_flow(cc_rev_to_m3_rad(d_p_cc), rpm_to_rad_s(pump_speed_rpm), eta_vp)
    return rad_s_to_rpm(q * eta_vm / cc_rev_to_m3_rad(d_m_cc))


def predicted_pressure_bar(load_torque: float, d_m_cc: float, eta_mm: float = 0.95) -> float:
    """Motor pressure drop needed to hold ``load_torque``."""
    return load_torque / (cc_rev_to_m3_rad(d_m_cc) * eta_mm) / 1e5
