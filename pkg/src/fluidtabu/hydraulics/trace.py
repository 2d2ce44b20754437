"""Simulation traces, desired motion profiles and steady-state extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .units import m3_s_to_lpm, pa_to_bar, rad_s_to_rpm


class DivergedTraceError(RuntimeError):
    """A trace went non-finite and has no meaningful steady state."""


@dataclass(frozen=True)
class Node:
    """Flow ledger of one hydraulic node, by signal name.

    ``storage`` is the compressibility flow ``(V/B) dP/dt``.
    """

    inflows: tuple[str, ...]
    outflows: tuple[str, ...]
    storage: str


@dataclass(eq=False)
class SimulationTrace:
    circuit: str
    dt: float
    duration: float
    time: np.ndarray
    signals: dict[str, np.ndarray]
    units: dict[str, str]
    nodes: dict[str, Node] = field(default_factory=dict)
    diverged: bool = False
    substeps: int = 1

    def __len__(self) -> int:
        return self.time.size

    def __getitem__(self, name: str) -> np.ndarray:
        return self.signals[name]

    @property
    def signal_names(self) -> list[str]:
        return list(self.signals)

    def window_mask(self, window: float) -> np.ndarray:
        if not 0 < window < self.duration:
            raise ValueError("window must lie in (0, duration)")
        return self.time >= self.duration - window - 0.5 * self.dt

    def sample(self, times) -> dict[str, np.ndarray]:
        """Signal values at the records nearest to ``times``."""
        idx = np.clip(np.rint(np.asarray(times) / self.dt).astype(int), 0, len(self) - 1)
        return {k: v[idx] for k, v in self.signals.items()}


@dataclass(frozen=True)
class SteadyMetrics:
    """Final-window means in catalogue units, plus peak-to-peak ripple."""

    speeds: tuple[float, ...]  # r/min
    relief_flow: float  # L/min
    pump_flow: float  # L/min
    pressure_drops: tuple[float, ...]  # bar
    ripple: dict[str, float]
    means: dict[str, float]
    window: float


def steady_state_extract(trace: SimulationTrace, window: float | None = None) -> SteadyMetrics:
    """Average every signal over the final ``window`` seconds.

    The default window is the final 20 % of the trace. Raises
    :class:`DivergedTraceError` for a diverged trace.
    """
    if trace.diverged:
        raise DivergedTraceError(f"{trace.circuit} trace diverged")
    window = 0.2 * trace.duration if window is None else window
    mask = trace.window_mask(window)
    means = {k: float(np.mean(v[mask])) for k, v in trace.signals.items()}
    ripple = {k: float(np.ptp(v[mask])) for k, v in trace.signals.items()}
    speed_keys = [k for k in trace.signals if k.startswith("omega")]
    dp_keys = [k for k in trace.signals if k.startswith("p_motor")]
    return SteadyMetrics(
        speeds=tuple(rad_s_to_rpm(means[k]) for k in speed_keys),
        relief_flow=max(0.0, m3_s_to_lpm(means["q_relief"])),
        pump_flow=m3_s_to_lpm(means["q_pump"]),
        pressure_drops=tuple(pa_to_bar(means[k]) for k in dp_keys),
        ripple=ripple,
        means=means,
        window=window,
    )


def node_balance(trace: SimulationTrace, window: float | None = None, include_storage: bool = True) -> dict[str, float]:
    """Window-mean flow residual (m^3/s) of every node: in - out [- storage]."""
    if trace.diverged:
        raise DivergedTraceError(f"{trace.circuit} trace diverged")
    window = 0.2 * trace.duration if window is None else window
    mask = trace.window_mask(window)
    out = {}
    for name, node in trace.nodes.items():
        total = np.zeros(int(mask.sum()))
        for s in node.inflows:
            total += trace.signals[s][mask]
        for s in node.outflows:
            total -= trace.signals[s][mask]
        if include_storage:
            total -= trace.signals[node.storage][mask]
        out[name] = float(np.mean(total))
    return out


@dataclass(frozen=True, eq=False)
class DesiredProfile:
    """Piecewise-linear position target ``x_d(t)`` in metres."""

    times: np.ndarray
    positions: np.ndarray
    sample_interval: float = 0.1

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.positions, dtype=float)
        if t.shape != x.shape or t.ndim != 1 or t.size < 2:
            raise ValueError("times and positions must be matching 1-D arrays")
        if np.any(np.diff(t) <= 0):
            raise ValueError("profile times must increase strictly")
        if np.any(x < 0):
            raise ValueError("profile positions must be non-negative")
        if not self.sample_interval > 0:
            raise ValueError("sample_interval must be positive")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", x)

    @classmethod
    def trapezoid(cls, extend_to: float = 0.45, sample_interval: float = 0.1) -> "DesiredProfile":
        """Extend over 0-2 s, hold to 2.5 s, retract by 4.5 s, hold to 5 s."""
        return cls(
            np.array([0.0, 2.0, 2.5, 4.5, 5.0]),
            np.array([0.0, extend_to, extend_to, 0.0, 0.0]),
            sample_interval,
        )

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def position(self, t):
        return np.interp(t, self.times, self.positions)

    def sample_times(self, duration: float | None = None, interval: float | None = None) -> np.ndarray:
        duration = self.duration if duration is None else duration
        interval = self.sample_interval if interval is None else interval
        n = int(round(duration / interval))
        return np.arange(n + 1) * interval

    def fits(self, stroke: float) -> bool:
        return bool(np.all(self.positions <= stroke))
