"""Lumped-parameter dynamic models of the three circuits.

Each node is a compressible volume, ``dP/dt = (B/V) * (sum in - sum out)``.
Motors are rigid inertias with viscous damping and a constant load torque;
the actuator is a mass-damper with end stops. Pumps are ideal fixed
displacement units at constant speed (volumetric losses live in the node
leakage), relief valves follow a static linear overflow law.

Integration is classical RK4 at a fixed step. ``dt`` is the record interval;
when the linearised stiffness of a circuit would make RK4 unstable at ``dt``
the step is split into equal substeps, so every circuit is integrated with
the same scheme and still yields ``duration/dt + 1`` records.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .params import ActuatorParams, CircuitConstants, TransmissionParams, TwoMotorParams
from .trace import DesiredProfile, Node, SimulationTrace
from .units import cc_rev_to_m3_rad, lpm_to_m3_s, MM_TO_M, rpm_to_rad_s

# |lambda * h| kept below this; RK4's real-axis limit is ~2.78, imaginary ~2.83
_RK4_SAFE = 2.0

_jit = numba.njit(cache=True, fastmath=False)


# ---------------------------------------------------------------- integrator


@_jit
def _rk4_substeps(rates, project, y, t, h, nsub, par, dy, fl, k1, k2, k3, k4, tmp):
    n = y.size
    for _ in range(nsub):
        rates(t, y, par, k1, fl)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * h * k1[i]
        rates(t + 0.5 * h, tmp, par, k2, fl)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * h * k2[i]
        rates(t + 0.5 * h, tmp, par, k3, fl)
        for i in range(n):
            tmp[i] = y[i] + h * k3[i]
        rates(t + h, tmp, par, k4, fl)
        for i in range(n):
            y[i] += h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
        t += h
        project(y, par)
    return t


@_jit
def _integrate(rates, project, y0, par, dt, nsteps, nsub, nflows):
    n = y0.size
    ys = np.empty((nsteps + 1, n))
    fs = np.empty((nsteps + 1, nflows))
    y = y0.copy()
    dy = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    fl = np.empty(nflows)
    h = dt / nsub
    last = nsteps
    for step in range(nsteps + 1):
        t = step * dt
        rates(t, y, par, dy, fl)
        ys[step, :] = y
        fs[step, :] = fl
        finite = True
        for i in range(n):
            if not np.isfinite(y[i]):
                finite = False
        for j in range(nflows):
            if not np.isfinite(fl[j]):
                finite = False
        if not finite:
            last = step
            break
        if step == nsteps:
            break
        _rk4_substeps(rates, project, y, t, h, nsub, par, dy, fl, k1, k2, k3, k4, tmp)
    return ys, fs, last


@_jit
def _no_projection(y, par):
    pass


def _substeps(stiffness: float, dt: float) -> int:
    return max(1, int(math.ceil(stiffness * dt / _RK4_SAFE)))


def _run(rates, project, y0, par, dt, duration, nflows, stiffness, min_substeps=1):
    nsteps = int(round(duration / dt))
    if nsteps < 1 or abs(nsteps * dt - duration) > 1e-9 * duration:
        raise ValueError("duration must be a positive multiple of dt")
    if min_substeps < 1:
        raise ValueError("min_substeps must be >= 1")
    nsub = max(_substeps(stiffness, dt), int(min_substeps))
    ys, fs, last = _integrate(rates, project, np.asarray(y0, float), np.asarray(par, float),
                              dt, nsteps, nsub, nflows)
    diverged = last < nsteps
    if diverged:
        ys[last:] = np.nan
        fs[last:] = np.nan
    return np.arange(nsteps + 1) * dt, ys, fs, diverged, nsub


@numba.njit(cache=True)
def _relief(p, p_crack, g):
    return g * (p - p_crack) if p > p_crack else 0.0


# -------------------------------------------------------------- transmission

# par: B/V, D_p*w_p, D_m, J, b, T_load, leak, p_crack, g_rv
# y: p, omega
# flows: q_pump, q_motor, q_relief, q_leak, q_store


@_jit
def _transmission_rates(t, y, par, dy, fl):
    bv, qp, dm, J, b, tl, leak, pc, g = par[0], par[1], par[2], par[3], par[4], par[5], par[6], par[7], par[8]
    p = y[0]
    w = y[1]
    qm = dm * w
    qrv = _relief(p, pc, g)
    ql = leak * p
    qs = qp - qm - qrv - ql
    dy[0] = bv * qs
    dy[1] = (dm * p - tl - b * w) / J
    fl[0] = qp
    fl[1] = qm
    fl[2] = qrv
    fl[3] = ql
    fl[4] = qs


TRANSMISSION_FLOWS = ("q_pump", "q_motor", "q_relief", "q_leak", "q_store")


def transmission_vector(p: TransmissionParams, c: CircuitConstants) -> np.ndarray:
    """Packed SI parameter vector handed to the jitted rate function."""
    q_max = cc_rev_to_m3_rad(TransmissionParams.BOUNDS["pump_displacement"][1]) * rpm_to_rad_s(p.pump_speed)
    return np.array([
        c.bulk_modulus / c.line_volume,
        cc_rev_to_m3_rad(p.pump_displacement) * rpm_to_rad_s(p.pump_speed),
        cc_rev_to_m3_rad(p.motor_displacement),
        c.motor_inertia,
        c.viscous_damping,
        p.load_torque,
        c.leakage_coefficient,
        p.cracking_pressure * 1e5,
        c.relief_gradient(q_max),
    ])


def simulate_transmission(
    p: TransmissionParams,
    c: CircuitConstants = CircuitConstants(),
    dt: float = 1e-4,
    duration: float = 5.0,
    min_substeps: int = 1,
) -> SimulationTrace:
    par = transmission_vector(p, c)
    bv, dm, J, b, leak, g = par[0], par[2], par[3], par[4], par[6], par[8]
    stiffness = max(bv * (g + leak) + b / J, math.sqrt(bv * dm * dm / J))
    t, ys, fs, diverged, nsub = _run(_transmission_rates, _no_projection, [0.0, 0.0], par,
                                     dt, duration, len(TRANSMISSION_FLOWS), stiffness, min_substeps)
    signals = {"p_motor": ys[:, 0], "omega_m": ys[:, 1]}
    signals.update({k: fs[:, i] for i, k in enumerate(TRANSMISSION_FLOWS)})
    units = {"p_motor": "Pa", "omega_m": "rad/s", **{k: "m3/s" for k in TRANSMISSION_FLOWS}}
    nodes = {"motor_line": Node(("q_pump",), ("q_motor", "q_relief", "q_leak"), "q_store")}
    return SimulationTrace("transmission", dt, duration, t, signals, units, nodes, diverged, nsub)


# ----------------------------------------------------------------- two motor

# par: B/V, Q_p, D_m1, D_m2, Q_set1, Q_set2, margin, J, b, T1, T2, leak, p_crack, g_rv
# y: p_s, p_1, p_2, omega_1, omega_2
# flows: q_pump, q_relief, q_valve_1, q_valve_2, q_motor_1, q_motor_2,
#        q_leak_s, q_leak_1, q_leak_2, q_store_s, q_store_1, q_store_2


@numba.njit(cache=True)
def _pcfv(q_set, dp, margin):
    if dp <= 0.0:
        return 0.0
    if dp >= margin:
        return q_set
    return q_set * dp / margin


@_jit
def _two_motor_rates(t, y, par, dy, fl):
    bv = par[0]
    qp = par[1]
    dm1 = par[2]
    dm2 = par[3]
    margin = par[6]
    J = par[7]
    b = par[8]
    leak = par[11]
    ps = y[0]
    p1 = y[1]
    p2 = y[2]
    w1 = y[3]
    w2 = y[4]
    qv1 = _pcfv(par[4], ps - p1, margin)
    qv2 = _pcfv(par[5], ps - p2, margin)
    qrv = _relief(ps, par[12], par[13])
    qm1 = dm1 * w1
    qm2 = dm2 * w2
    qls = leak * ps
    ql1 = leak * p1
    ql2 = leak * p2
    qss = qp - qv1 - qv2 - qrv - qls
    qs1 = qv1 - qm1 - ql1
    qs2 = qv2 - qm2 - ql2
    dy[0] = bv * qss
    dy[1] = bv * qs1
    dy[2] = bv * qs2
    dy[3] = (dm1 * p1 - par[9] - b * w1) / J
    dy[4] = (dm2 * p2 - par[10] - b * w2) / J
    fl[0] = qp
    fl[1] = qrv
    fl[2] = qv1
    fl[3] = qv2
    fl[4] = qm1
    fl[5] = qm2
    fl[6] = qls
    fl[7] = ql1
    fl[8] = ql2
    fl[9] = qss
    fl[10] = qs1
    fl[11] = qs2


TWO_MOTOR_FLOWS = (
    "q_pump", "q_relief", "q_valve_1", "q_valve_2", "q_motor_1", "q_motor_2",
    "q_leak_supply", "q_leak_1", "q_leak_2", "q_store_supply", "q_store_1", "q_store_2",
)


def two_motor_vector(p: TwoMotorParams, c: CircuitConstants) -> np.ndarray:
    q_max = cc_rev_to_m3_rad(TwoMotorParams.BOUNDS["pump_displacement"][1]) * rpm_to_rad_s(p.pump_speed)
    return np.array([
        c.bulk_modulus / c.line_volume,
        cc_rev_to_m3_rad(p.pump_displacement) * rpm_to_rad_s(p.pump_speed),
        cc_rev_to_m3_rad(p.motor1_displacement),
        cc_rev_to_m3_rad(p.motor2_displacement),
        lpm_to_m3_s(p.pcfv1_flow),
        lpm_to_m3_s(p.pcfv2_flow),
        c.pcfv_compensation_margin,
        c.motor_inertia,
        c.viscous_damping,
        p.load_torque1,
        p.load_torque2,
        c.leakage_coefficient,
        p.cracking_pressure * 1e5,
        c.relief_gradient(q_max),
    ])


def simulate_two_motor(
    p: TwoMotorParams,
    c: CircuitConstants = CircuitConstants(),
    dt: float = 1e-4,
    duration: float = 2.0,
    min_substeps: int = 1,
) -> SimulationTrace:
    par = two_motor_vector(p, c)
    bv, J, b, leak, g, margin = par[0], par[7], par[8], par[11], par[13], par[6]
    valve = (par[4] + par[5]) / margin
    stiffness = max(
        bv * (g + valve + leak) + b / J,
        math.sqrt(bv * max(par[2], par[3]) ** 2 / J),
    )
    t, ys, fs, diverged, nsub = _run(_two_motor_rates, _no_projection, np.zeros(5), par,
                                     dt, duration, len(TWO_MOTOR_FLOWS), stiffness, min_substeps)
    signals = {
        "p_supply": ys[:, 0], "p_motor_1": ys[:, 1], "p_motor_2": ys[:, 2],
        "omega_1": ys[:, 3], "omega_2": ys[:, 4],
    }
    signals.update({k: fs[:, i] for i, k in enumerate(TWO_MOTOR_FLOWS)})
    units = {k: "Pa" for k in ("p_supply", "p_motor_1", "p_motor_2")}
    units.update({"omega_1": "rad/s", "omega_2": "rad/s"})
    units.update({k: "m3/s" for k in TWO_MOTOR_FLOWS})
    nodes = {
        "supply": Node(("q_pump",), ("q_valve_1", "q_valve_2", "q_relief", "q_leak_supply"), "q_store_supply"),
        "motor_1": Node(("q_valve_1",), ("q_motor_1", "q_leak_1"), "q_store_1"),
        "motor_2": Node(("q_valve_2",), ("q_motor_2", "q_leak_2"), "q_store_2"),
    }
    return SimulationTrace("two_motor", dt, duration, t, signals, units, nodes, diverged, nsub)


# ------------------------------------------------------------------ actuator

# par: 0 B, 1 V0, 2 Q_p, 3 A_a, 4 A_b, 5 stroke, 6 Q_nom, 7 K_p, 8 dp_rated,
#      9 dp_lam, 10 m, 11 c, 12 leak, 13 p_crack, 14 g_rv, 15.. profile (n, t..., x...)
# y: p_s, p_a, p_b, x, v
# flows: q_pump, q_relief, q_pa, q_at, q_pb, q_bt, q_piston_a, q_piston_b,
#        q_leak_supply, q_leak_a, q_leak_b, q_store_supply, q_store_a, q_store_b,
#        x_d, u

_PROFILE_AT = 15


@numba.njit(cache=True)
def _orifice(dp, dp_rated, dp_lam):
    """Normalised turbulent orifice flow, linear below ``dp_lam``."""
    a = abs(dp)
    if a < dp_lam:
        return dp / math.sqrt(dp_lam * dp_rated)
    r = math.sqrt(a / dp_rated)
    return r if dp > 0 else -r


@numba.njit(cache=True)
def _profile_at(t, par):
    n = int(par[_PROFILE_AT])
    t0 = _PROFILE_AT + 1
    x0 = t0 + n
    if t <= par[t0]:
        return par[x0]
    for i in range(1, n):
        if t <= par[t0 + i]:
            ta = par[t0 + i - 1]
            tb = par[t0 + i]
            xa = par[x0 + i - 1]
            return xa + (par[x0 + i] - xa) * (t - ta) / (tb - ta)
    return par[x0 + n - 1]


@_jit
def _actuator_rates(t, y, par, dy, fl):
    B = par[0]
    v0 = par[1]
    qp = par[2]
    aa = par[3]
    ab = par[4]
    stroke = par[5]
    qn = par[6]
    dpr = par[8]
    dpl = par[9]
    leak = par[12]
    ps = y[0]
    pa = y[1]
    pb = y[2]
    x = y[3]
    v = y[4]
    xd = _profile_at(t, par)
    u = par[7] * (xd - x)
    if u > 1.0:
        u = 1.0
    elif u < -1.0:
        u = -1.0
    q_pa = 0.0
    q_bt = 0.0
    q_pb = 0.0
    q_at = 0.0
    if u > 0.0:
        q_pa = u * qn * _orifice(ps - pa, dpr, dpl)
        q_bt = u * qn * _orifice(pb, dpr, dpl)
    elif u < 0.0:
        q_pb = -u * qn * _orifice(ps - pb, dpr, dpl)
        q_at = -u * qn * _orifice(pa, dpr, dpl)
    qrv = _relief(ps, par[13], par[14])
    xc = min(max(x, 0.0), stroke)
    va = v0 + aa * xc
    vb = v0 + ab * (stroke - xc)
    qpis_a = aa * v
    qpis_b = ab * v
    qls = leak * ps
    qla = leak * pa
    qlb = leak * pb
    qss = qp - q_pa - q_pb - qrv - qls
    qsa = q_pa - q_at - qpis_a - qla
    qsb = q_pb + qpis_b - q_bt - qlb
    dy[0] = B / v0 * qss
    dy[1] = B / va * qsa
    dy[2] = B / vb * qsb
    force = pa * aa - pb * ab - par[11] * v
    acc = force / par[10]
    if x <= 0.0 and v <= 0.0 and acc < 0.0:
        acc = 0.0
    if x >= stroke and v >= 0.0 and acc > 0.0:
        acc = 0.0
    dy[3] = v
    dy[4] = acc
    fl[0] = qp
    fl[1] = qrv
    fl[2] = q_pa
    fl[3] = q_at
    fl[4] = q_pb
    fl[5] = q_bt
    fl[6] = qpis_a
    fl[7] = qpis_b
    fl[8] = qls
    fl[9] = qla
    fl[10] = qlb
    fl[11] = qss
    fl[12] = qsa
    fl[13] = qsb
    fl[14] = xd
    fl[15] = u


@_jit
def _actuator_stops(y, par):
    stroke = par[5]
    if y[3] <= 0.0:
        y[3] = 0.0
        if y[4] < 0.0:
            y[4] = 0.0
    elif y[3] >= stroke:
        y[3] = stroke
        if y[4] > 0.0:
            y[4] = 0.0


ACTUATOR_FLOWS = (
    "q_pump", "q_relief", "q_pa", "q_at", "q_pb", "q_bt", "q_piston_a", "q_piston_b",
    "q_leak_supply", "q_leak_a", "q_leak_b", "q_store_supply", "q_store_a", "q_store_b",
    "x_d", "u",
)


def actuator_areas(p: ActuatorParams, c: CircuitConstants) -> tuple[float, float]:
    """Cap-end and annulus piston areas in m^2."""
    a_cap = math.pi / 4.0 * (p.bore_diameter * MM_TO_M) ** 2
    return a_cap, a_cap * (1.0 - c.rod_diameter_ratio ** 2)


def actuator_vector(p: ActuatorParams, c: CircuitConstants, profile: DesiredProfile) -> np.ndarray:
    a_cap, a_ann = actuator_areas(p, c)
    q_max = cc_rev_to_m3_rad(ActuatorParams.BOUNDS["pump_displacement"][1]) * rpm_to_rad_s(p.pump_speed)
    head = [
        c.bulk_modulus,
        c.line_volume,
        cc_rev_to_m3_rad(p.pump_displacement) * rpm_to_rad_s(p.pump_speed),
        a_cap,
        a_ann,
        p.stroke,
        lpm_to_m3_s(p.dcv_flow),
        p.proportional_gain,
        c.valve_rated_dp,
        c.valve_laminar_dp,
        c.payload_mass,
        c.piston_damping,
        c.leakage_coefficient,
        p.cracking_pressure * 1e5,
        c.relief_gradient(q_max),
    ]
    assert len(head) == _PROFILE_AT
    return np.concatenate([head, [profile.times.size], profile.times, profile.positions])


def simulate_actuator(
    p: ActuatorParams,
    c: CircuitConstants = CircuitConstants(),
    profile: DesiredProfile | None = None,
    dt: float = 1e-4,
    duration: float | None = None,
    min_substeps: int = 1,
) -> SimulationTrace:
    profile = DesiredProfile.trapezoid() if profile is None else profile
    duration = profile.duration if duration is None else duration
    if duration > profile.duration + 1e-12:
        raise ValueError("profile does not cover the simulation duration")
    par = actuator_vector(p, c, profile)
    B, v0, a_cap, a_ann, qn, m = par[0], par[1], par[3], par[4], par[6], par[10]
    bv = B / v0
    orifice_slope = qn / math.sqrt(c.valve_laminar_dp * c.valve_rated_dp)
    stiffness = max(
        bv * (par[14] + 2 * orifice_slope + c.leakage_coefficient),
        math.sqrt(bv * (a_cap ** 2 + a_ann ** 2) / m),
        c.piston_damping / m,
    )
    t, ys, fs, diverged, nsub = _run(_actuator_rates, _actuator_stops, np.zeros(5), par,
                                     dt, duration, len(ACTUATOR_FLOWS), stiffness, min_substeps)
    signals = {"p_supply": ys[:, 0], "p_a": ys[:, 1], "p_b": ys[:, 2], "x": ys[:, 3], "v": ys[:, 4]}
    signals.update({k: fs[:, i] for i, k in enumerate(ACTUATOR_FLOWS)})
    units = {"p_supply": "Pa", "p_a": "Pa", "p_b": "Pa", "x": "m", "v": "m/s"}
    units.update({k: "m3/s" for k in ACTUATOR_FLOWS})
    units.update({"x_d": "m", "u": "-"})
    nodes = {
        "supply": Node(("q_pump",), ("q_pa", "q_pb", "q_relief", "q_leak_supply"), "q_store_supply"),
        "chamber_a": Node(("q_pa",), ("q_at", "q_piston_a", "q_leak_a"), "q_store_a"),
        "chamber_b": Node(("q_pb", "q_piston_b"), ("q_bt", "q_leak_b"), "q_store_b"),
    }
    return SimulationTrace("actuator", dt, duration, t, signals, units, nodes, diverged, nsub)


# -------------------------------------------------------- scalar RK4 (generic)


def rk4_step(state, derivative, t: float, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of ``dy/dt = derivative(t, y)``.

    Raises ``FloatingPointError`` if any stage is non-finite.
    """
    y = np.asarray(state, dtype=float)
    k1 = np.asarray(derivative(t, y), dtype=float)
    k2 = np.asarray(derivative(t + 0.5 * dt, y + 0.5 * dt * k1), dtype=float)
    k3 = np.asarray(derivative(t + 0.5 * dt, y + 0.5 * dt * k2), dtype=float)
    k4 = np.asarray(derivative(t + dt, y + dt * k3), dtype=float)
    for k in (k1, k2, k3, k4):
        if not np.all(np.isfinite(k)):
            raise FloatingPointError("non-finite RK4 stage")
    return y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
