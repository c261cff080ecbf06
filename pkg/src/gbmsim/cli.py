"""Command-line interface: run, sweep, ode, presets.

Exit codes: 0 success, 1 runtime failure (with a diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import RunConfig, parse_config
from .errors import SimulationError
from .experiments import DEFAULT_PARAMETERS, PARAMETER_NAMES, PARAMETER_RANGES
from .output import write_metrics_csv, write_snapshot
from .solver import run, run_homogeneous

__all__ = ["main", "entry"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbmsim",
        description="Three-field glioblastoma growth simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="integrate one scenario")
    run_p.add_argument("--config", help="config file (omit for ring defaults)")
    run_p.add_argument("--out", required=True, help="output directory")

    sweep_p = sub.add_parser("sweep", help="one run per value of one parameter")
    sweep_p.add_argument("--config", help="config file (omit for ring defaults)")
    sweep_p.add_argument(
        "--param", required=True, choices=sorted(PARAMETER_NAMES)
    )
    sweep_p.add_argument(
        "--values", required=True, help="comma-separated parameter values"
    )
    sweep_p.add_argument("--out", required=True, help="output directory")

    ode_p = sub.add_parser("ode", help="spatially homogeneous mode")
    ode_p.add_argument("--config", help="config file (omit for defaults)")
    ode_p.add_argument("--out", required=True, help="output directory")

    sub.add_parser("presets", help="print the preset parameter values")
    return parser


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    return parse_config(Path(path).read_text())


def _write_run_outputs(result, out_dir: Path, vtk: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(result.metrics, out_dir / "metrics.csv")
    for state in result.snapshots:
        name = f"snapshot_t{state.time:.6f}.csv"
        write_snapshot(state, result.mesh, out_dir / name, vtk=vtk)
    for violation in result.bound_violations:
        print(
            f"warning: {violation.field} left its bounds at step "
            f"{violation.step_index} (t={violation.time:.6g}): "
            f"{violation.value:.6e}",
            file=sys.stderr,
        )


def _cmd_run(args) -> int:
    config = _load_config(args.config)
    result = run(config.to_scenario(), config.solver, theta=config.theta)
    _write_run_outputs(result, Path(args.out), config.vtk)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    tokens = [token.strip() for token in args.values.split(",") if token.strip()]
    if not tokens:
        raise SimulationError("--values must list at least one number")
    scenario = config.to_scenario()
    for token in tokens:
        value = float(token)
        varied = replace(
            scenario,
            params=replace(scenario.params, **{args.param: value}),
        )
        result = run(varied, config.solver, theta=config.theta)
        _write_run_outputs(
            result, Path(args.out) / f"{args.param}={token}", config.vtk
        )
    return 0


def _cmd_ode(args) -> int:
    config = _load_config(args.config)
    trajectory = run_homogeneous(
        config.ode_initial,
        config.params,
        config.solver.dt,
        config.solver.t_final,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stride = config.solver.metrics_every
    last = len(trajectory) - 1
    lines = ["t,T,N,Phi"]
    for i in range(len(trajectory)):
        if i % stride == 0 or i == last:
            lines.append(
                ",".join(
                    repr(float(v))
                    for v in (
                        trajectory.times[i],
                        trajectory.t_density[i],
                        trajectory.n_density[i],
                        trajectory.phi_density[i],
                    )
                )
            )
    (out_dir / "trajectory.csv").write_text("\n".join(lines) + "\n", newline="\n")
    return 0


def _cmd_presets(args) -> int:
    print("fixed defaults:")
    for name in PARAMETER_NAMES:
        print(f"  {name}={getattr(DEFAULT_PARAMETERS, name)}")
    print("sweep ranges:")
    for name in PARAMETER_NAMES:
        lo, hi = PARAMETER_RANGES[name]
        print(f"  {name} in [{lo}, {hi}]")
    print("ring preset: uniform vasculature 0.5, necrosis 0")
    print("surface preset: three vasculature discs (0.8/0.5/0.2) on base 0.1")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "ode": _cmd_ode,
    "presets": _cmd_presets,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        return _COMMANDS[args.command](args)
    except (SimulationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())
