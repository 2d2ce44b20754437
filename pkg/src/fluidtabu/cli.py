"""Command-line front end: ``fluidtabu {bench,optimize,simulate,sizing,export}``.

Exit status is 0 on success, 2 on configuration or validation errors and 3
on I/O failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path


from .experiment import (
    ConfigError,
    ExperimentConfig,
    config_from_mapping,
    export_trace,
    format_sizing,
    parse_config,
    run_experiment,
    sizing_report,
)
from .hydraulics.circuits import simulate_actuator, simulate_transmission, simulate_two_motor
from .hydraulics.params import ActuatorParams, CircuitConstants, TransmissionParams, TwoMotorParams
from .hydraulics.trace import DesiredProfile, DivergedTraceError, steady_state_extract

CIRCUITS = ("transmission", "two_motor", "actuator")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _load_config(args, problem: str | None) -> ExperimentConfig:
    if args.config:
        config = parse_config(args.config)
        if problem is not None and problem != config.problem:
            config = replace(config, problem=problem)
    elif problem is not None:
        config = config_from_mapping({"problem": problem})
    else:
        raise ConfigError("name a problem or pass --config")
    updates = {}
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.runs is not None:
        updates["runs"] = args.runs
    if getattr(args, "objective", None):
        updates["objective"] = args.objective
    if getattr(args, "workers", None):
        updates["workers"] = args.workers
    return replace(config, **updates) if updates else config


def _experiment(args, problem) -> int:
    config = _load_config(args, problem)
    report = run_experiment(config)
    print(report.table())
    for k, v in report.summary.items():
        print(f"{k}: {v}")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        name = config.problem if config.objective == "standard" else f"{config.problem}_{config.objective}"
        path = report.write(out / f"{name}_seed{config.base_seed}_runs{config.runs}.csv")
        print(f"report written to {path}")
    return 0


def _simulate(args):
    constants = _load_config(args, args.circuit).constants if args.config else CircuitConstants()
    x = args.params
    if args.circuit == "transmission":
        p = TransmissionParams(*x)
        return simulate_transmission(p, constants, args.dt, args.duration or 5.0)
    if args.circuit == "two_motor":
        p = TwoMotorParams(*x)
        return simulate_two_motor(p, constants, args.dt, args.duration or 2.0)
    p = ActuatorParams(*x)
    return simulate_actuator(p, constants, DesiredProfile.trapezoid(), args.dt, args.duration)


def cmd_bench(args) -> int:
    return _experiment(args, args.problem)


def cmd_optimize(args) -> int:
    return _experiment(args, args.problem)


def cmd_simulate(args) -> int:
    trace = _simulate(args)
    if trace.diverged:
        print(f"{trace.circuit} simulation diverged", file=sys.stderr)
        return 1
    m = steady_state_extract(trace)
    for i, w in enumerate(m.speeds, 1):
        print(f"speed_{i}: {w:.4f} r/min")
    for i, dp in enumerate(m.pressure_drops, 1):
        print(f"pressure_drop_{i}: {dp:.4f} bar")
    print(f"pump_flow: {m.pump_flow:.4f} L/min")
    print(f"relief_flow: {m.relief_flow:.6f} L/min")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = export_trace(trace, out / f"{trace.circuit}_trace.csv", args.interval)
        print(f"trace written to {path}")
    return 0


def cmd_export(args) -> int:
    trace = _simulate(args)
    path = Path(args.output) if args.output else Path(args.out_dir or ".") / f"{trace.circuit}_trace.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    export_trace(trace, path, args.interval)
    print(f"trace written to {path}")
    return 0


def cmd_sizing(args) -> int:
    rows = sizing_report(args.load_torque, args.target_speed, args.pump_speed, args.pressure, args.eta,
                         tuple(args.compare) if args.compare else None)
    print(format_sizing(rows))
    return 0


def _global_flags(default) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=default)
    p.add_argument("--config", help="experiment config file (key = value)")
    p.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    p.add_argument("--out-dir", help="directory for CSV outputs")
    p.add_argument("--runs", type=int, help="number of seeded runs")
    return p


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = _global_flags(argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="fluidtabu", description=__doc__.splitlines()[0],
                                     parents=[_global_flags(None)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", parents=[common], help="benchmark function experiments")
    p.add_argument("problem", nargs="?", choices=("rastrigin", "schwefel"))
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("optimize", parents=[common], help="circuit design experiments")
    p.add_argument("problem", nargs="?", choices=CIRCUITS)
    p.add_argument("--objective", choices=("standard", "pump_power"))
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_optimize)

    for name, func, helptext in (("simulate", cmd_simulate, "simulate one design and print steady metrics"),
                                 ("export", cmd_export, "simulate one design and write its trace CSV")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("circuit", choices=CIRCUITS)
        p.add_argument("--params", type=_floats, required=True,
                       help="design vector in catalogue units, comma separated")
        p.add_argument("--dt", type=float, default=1e-4)
        p.add_argument("--duration", type=float)
        p.add_argument("--interval", type=float, help="output decimation interval in seconds")
        if name == "export":
            p.add_argument("-o", "--output", help="output CSV path")
        p.set_defaults(func=func)

    p = sub.add_parser("sizing", parents=[common], help="steady-state designer sizing")
    p.add_argument("--load-torque", type=float, default=100.0)
    p.add_argument("--target-speed", type=float, default=300.0)
    p.add_argument("--pump-speed", type=float, default=1500.0)
    p.add_argument("--pressure", type=float, default=85.0)
    p.add_argument("--eta", type=float, default=0.95)
    p.add_argument("--compare", type=_floats, help="optimizer solution D_p,D_m in cc/rev")
    p.set_defaults(func=cmd_sizing)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, DivergedTraceError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
