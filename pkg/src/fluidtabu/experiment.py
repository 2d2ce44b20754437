"""Seeded multi-run experiments, their CSV reports, sizing and trace export.

Config files are flat ``key = value`` text with dotted section prefixes::

    problem = transmission
    runs = 10
    base_seed = 42
    search.n = 10
    constants.line_volume = 0.002

Run ``i`` of an experiment uses seed ``base_seed + i`` so that any single row
can be reproduced on its own. Reports contain no timestamps or host details
and are written with shortest round-trip float formatting, so identical
configs produce byte-identical files.
"""

from __future__ import annotations

import ast
import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .benchmarks import BENCHMARKS
from .hydraulics.params import CircuitConstants
from .hydraulics.steady import predicted_motor_speed_rpm, predicted_pressure_bar, size_transmission
from .hydraulics.trace import DivergedTraceError, SimulationTrace
from .objectives import actuator_problem, transmission_problem, two_motor_problem
from .space import SearchSpace, StepSchedule
from .tabu import SearchConfig, run

log = logging.getLogger(__name__)

PROBLEMS = ("rastrigin", "schwefel", "transmission", "two_motor", "actuator")
VARIANTS = ("standard", "pump_power")
SEARCH_KEYS = {
    "n": "n", "m": "m", "intense": "intense", "diverse": "diverse",
    "end_of_cycle": "end_of_cycle", "k": "pattern_factor", "max_evaluations": "max_evaluations",
}
SIMULATION_KEYS = ("dt", "duration")
_SEED_LIMIT = 2**64


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.message = message
        self.line = line
        self.key = key


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    runs: int = 10
    base_seed: int = 0
    objective: str = "standard"
    workers: int = 1
    search: SearchConfig = field(default_factory=SearchConfig)
    reduction_factor: float = 2.0
    constants: CircuitConstants = field(default_factory=CircuitConstants)
    dt: float = 1e-4
    duration: float | None = None

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}, got {self.problem!r}", key="problem")
        if not isinstance(self.runs, int) or self.runs < 1:
            raise ConfigError(f"runs must be an integer >= 1, got {self.runs!r}", key="runs")
        if not isinstance(self.base_seed, int) or not 0 <= self.base_seed < _SEED_LIMIT:
            raise ConfigError("base_seed must be an integer in [0, 2**64)", key="base_seed")
        if self.base_seed + self.runs - 1 >= _SEED_LIMIT:
            raise ConfigError("base_seed + runs - 1 must stay below 2**64", key="base_seed")
        if self.objective not in VARIANTS:
            raise ConfigError(f"objective must be one of {VARIANTS}", key="objective")
        if self.objective != "standard" and self.problem != "transmission":
            raise ConfigError("the pump_power objective applies to the transmission only", key="objective")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers must be an integer >= 1", key="workers")
        if not self.reduction_factor > 1:
            raise ConfigError("reduction_factor must exceed 1", key="search.reduction_factor")
        if not self.dt > 0:
            raise ConfigError("dt must be positive", key="simulation.dt")
        if self.duration is not None and not self.duration > 0:
            raise ConfigError("duration must be positive", key="simulation.duration")

    def provenance(self) -> dict[str, object]:
        """Every resolved setting, flattened to dotted keys."""
        out: dict[str, object] = {
            "problem": self.problem, "runs": self.runs, "base_seed": self.base_seed,
            "objective": self.objective,
        }
        inverse = {v: k for k, v in SEARCH_KEYS.items()}
        for f in fields(SearchConfig):
            if f.name != "seed":
                out[f"search.{inverse[f.name]}"] = getattr(self.search, f.name)
        out["search.reduction_factor"] = self.reduction_factor
        if self.problem not in BENCHMARKS:
            for f in fields(CircuitConstants):
                out[f"constants.{f.name}"] = getattr(self.constants, f.name)
            out["simulation.dt"] = self.dt
            out["simulation.duration"] = self.duration
        return out


def _parse_value(text: str):
    if text.lower() == "none":
        return None
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def config_from_mapping(values: dict[str, object], lines: dict[str, int] | None = None) -> ExperimentConfig:
    """Build a config from dotted keys, applying documented defaults."""
    lines = lines or {}
    top: dict[str, object] = {}
    search: dict[str, object] = {}
    constants: dict[str, object] = {}
    const_names = {f.name for f in fields(CircuitConstants)}
    for key, value in values.items():
        section, _, name = key.rpartition(".")
        line = lines.get(key)
        if section == "":
            if key == "seed":
                key = "base_seed"
            if key not in ("problem", "runs", "base_seed", "objective", "workers"):
                raise ConfigError("unknown setting", line, key)
            top[key] = value
        elif section == "search":
            if name == "reduction_factor":
                top["reduction_factor"] = value
            elif name in SEARCH_KEYS:
                search[SEARCH_KEYS[name]] = value
            else:
                raise ConfigError("unknown search setting", line, key)
        elif section == "constants":
            if name not in const_names:
                raise ConfigError("unknown circuit constant", line, key)
            constants[name] = value
        elif section == "simulation":
            if name not in SIMULATION_KEYS:
                raise ConfigError("unknown simulation setting", line, key)
            top[name] = value
        else:
            raise ConfigError(f"unknown section {section!r}", line, key)
    if "problem" not in top:
        raise ConfigError("missing required setting", key="problem")
    try:
        sc = SearchConfig(**search)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), key="search") from exc
    try:
        cc = CircuitConstants(**constants)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), key="constants") from exc
    try:
        return ExperimentConfig(search=sc, constants=cc, **top)
    except ConfigError as exc:
        key = "seed" if exc.key == "base_seed" and "seed" in lines else exc.key
        if exc.line is None and key in lines:
            raise ConfigError(exc.message, lines[key], exc.key) from None
        raise


def parse_config_text(text: str) -> ExperimentConfig:
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError("expected 'key = value'", lineno, key or None)
        if key in values:
            raise ConfigError("duplicate setting", lineno, key)
        values[key] = _parse_value(value)
        lines[key] = lineno
    return config_from_mapping(values, lines)


def parse_config(path) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text())


@dataclass(eq=False)
class Problem:
    """Uniform view of a benchmark or circuit problem for the runner."""

    space: SearchSpace
    schedule: StepSchedule
    objective: Callable[[np.ndarray], float]
    describe: Callable[[np.ndarray], dict]
    success: Callable[[dict], bool]


def build_problem(config: ExperimentConfig) -> Problem:
    if config.problem in BENCHMARKS:
        spec = BENCHMARKS[config.problem]()
        f_min = spec.known_optimum_value
        tol = 1e-3 if config.problem == "rastrigin" else 1e-3 * abs(f_min)

        def describe(x):
            return {"obfn": float(spec.evaluator(x))}

        def success(row):
            return abs(row["obfn"] - f_min) <= tol

        space, schedule, objective = spec.space, spec.schedule, spec.evaluator
    else:
        kwargs = {"constants": config.constants, "dt": config.dt}
        if config.problem == "transmission":
            if config.duration is not None:
                kwargs["duration"] = config.duration
            cp = transmission_problem(variant=config.objective, **kwargs)
        elif config.problem == "two_motor":
            if config.duration is not None:
                kwargs["duration"] = config.duration
            cp = two_motor_problem(**kwargs)
        else:
            if config.duration is not None:
                raise ConfigError("the actuator duration follows its motion profile", key="simulation.duration")
            cp = actuator_problem(**kwargs)
        space, schedule, objective = cp.space, cp.schedule, cp
        describe, success = cp.describe, cp.success
    schedule = StepSchedule(schedule.initial, schedule.minimum, config.reduction_factor)
    return Problem(space, schedule, objective, describe, success)


def run_single(config: ExperimentConfig, index: int) -> dict:
    """Execute run ``index`` of ``config``; failures come back as a marked row."""
    seed = config.base_seed + index
    row: dict = {"run": index + 1, "seed": seed}
    try:
        problem = build_problem(config)
        result = run(problem.space, problem.schedule, problem.objective, replace(config.search, seed=seed))
        x = result.best.point
        for name, unit, v in zip(problem.space.names, problem.space.units, x):
            row[f"{name} [{unit}]" if unit else name] = float(v)
        details = problem.describe(x)
        details.pop("diverged", None)
        row.update(details)
        row["obfn"] = float(result.best.value)
        row["evaluations"] = result.evaluations_used
        row["terminated_by"] = result.terminated_by.value
        row["success"] = bool(problem.success({"diverged": False, **row}))
        row["status"] = "ok"
    except Exception as exc:  # a failed run is reported, not fatal
        log.warning("run %d (seed %d) failed: %s", index + 1, seed, exc)
        row["status"] = "failed"
        row["error"] = f"{type(exc).__name__}: {exc}"
        row["success"] = False
    return row


def _run_indexed(args):
    return run_single(*args)


@dataclass(eq=False)
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict]

    def __post_init__(self):
        if len(self.rows) != self.config.runs:
            raise ValueError("report must hold one row per run")

    @property
    def summary(self) -> dict[str, object]:
        ok = [r for r in self.rows if r["status"] == "ok"]
        evals = [r["evaluations"] for r in ok]
        out: dict[str, object] = {
            "runs": len(self.rows),
            "completed": len(ok),
            "failed": len(self.rows) - len(ok),
            "successes": sum(bool(r["success"]) for r in self.rows),
        }
        if ok:
            best = min(ok, key=lambda r: r["obfn"])
            out.update({
                "mean_evaluations": float(np.mean(evals)),
                "min_evaluations": min(evals),
                "max_evaluations": max(evals),
                "best_run": best["run"],
                "best_obfn": best["obfn"],
            })
        return out

    @property
    def columns(self) -> list[str]:
        cols: list[str] = []
        for r in self.rows:
            cols.extend(k for k in r if k not in cols)
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.config.provenance().items():
            buf.write(f"# {k} = {_fmt(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        cols = self.columns
        w.writerow(cols)
        for r in self.rows:
            w.writerow([_fmt(r.get(c, "")) for c in cols])
        for k, v in self.summary.items():
            buf.write(f"# summary.{k} = {_fmt(v)}\n")
        return buf.getvalue()

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_csv())
        return path

    def table(self, digits: int = 4) -> str:
        """Rounded, human-readable view; the CSV keeps full precision."""
        cols = self.columns
        body = [[_fmt(r.get(c, ""), digits) for c in cols] for r in self.rows]
        widths = [max(len(c), *(len(b[i]) for b in body)) for i, c in enumerate(cols)]
        lines = ["  ".join(c.rjust(wd) for c, wd in zip(cols, widths))]
        lines += ["  ".join(v.rjust(wd) for v, wd in zip(b, widths)) for b in body]
        return "\n".join(lines)


def _fmt(v, digits: int | None = None) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if digits is not None and math.isfinite(v):
            return f"{v:.{digits}g}"
        return repr(v)
    if v is None:
        return "none"
    return str(v)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every seed of ``config``; serial and pooled execution give identical reports."""
    jobs = [(config, i) for i in range(config.runs)]
    if config.workers > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, config.runs, os.cpu_count() or 1)) as pool:
            rows = list(pool.map(_run_indexed, jobs))
    else:
        rows = [run_single(*j) for j in jobs]
    return ExperimentReport(config, rows)


def sizing_report(
    load_torque: float = 100.0,
    target_speed_rpm: float = 300.0,
    pump_speed_rpm: float = 1500.0,
    pressure_bar: float = 85.0,
    eta: float = 0.95,
    compare: tuple[float, float] | None = None,
    cracking_pressure_bar: float | None = 100.0,
) -> dict[str, dict[str, float]]:
    """Designer's steady-state sizing, optionally beside an optimizer solution.

    The designer picks the nearest whole catalogue motor and sizes the pump
    for it, which is why the ``designer`` row quotes 17.3 cc/rev where the
    unrounded chain gives 17.24. ``compare`` is ``(D_p, D_m)`` in cc/rev.
    """
    d_m, d_p = size_transmission(load_torque, target_speed_rpm, pump_speed_rpm, pressure_bar, eta, eta, eta,
                                 cracking_pressure_bar)
    d_m_cat = float(round(d_m))
    d_p_cat = d_p * d_m_cat / d_m
    rows = {
        "exact": {"pump_displacement": d_p, "motor_displacement": d_m},
        "designer": {"pump_displacement": d_p_cat, "motor_displacement": d_m_cat},
    }
    if compare is not None:
        rows["optimizer"] = {"pump_displacement": float(compare[0]), "motor_displacement": float(compare[1])}
    for r in rows.values():
        r["predicted_speed"] = predicted_motor_speed_rpm(r["pump_displacement"], r["motor_displacement"],
                                                         pump_speed_rpm, eta, eta)
        r["predicted_pressure"] = predicted_pressure_bar(load_torque, r["motor_displacement"], eta)
    return rows


def format_sizing(rows: dict[str, dict[str, float]]) -> str:
    head = f"{'':10s}{'D_p [cc/rev]':>14s}{'D_m [cc/rev]':>14s}{'speed [r/min]':>15s}{'dP [bar]':>10s}"
    out = [head]
    for name, r in rows.items():
        out.append(f"{name:10s}{r['pump_displacement']:14.2f}{r['motor_displacement']:14.2f}"
                   f"{r['predicted_speed']:15.2f}{r['predicted_pressure']:10.2f}")
    return "\n".join(out)


def export_trace(trace: SimulationTrace, path, interval: float | None = None) -> Path:
    """Write ``trace`` as CSV, time first, optionally decimated to ``interval`` seconds."""
    if trace.diverged:
        raise DivergedTraceError(f"refusing to export diverged {trace.circuit} trace")
    if interval is None:
        idx = np.arange(len(trace))
    else:
        stride = interval / trace.dt
        if not interval > 0 or abs(stride - round(stride)) > 1e-6:
            raise ValueError("interval must be a positive multiple of the trace dt")
        idx = np.arange(0, len(trace), int(round(stride)))
    names = trace.signal_names
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time [s]"] + [f"{k} [{trace.units[k]}]" for k in names])
        cols = [trace.time[idx]] + [trace[k][idx] for k in names]
        for values in zip(*cols):
            w.writerow([repr(float(v)) for v in values])
    return path
