"""Command-line entry point.

Subcommands:
  run          run a scenario from a YAML config file
  preset       run a named built-in scenario
  sweep        run a preset or config once per value of one parameter
  coeff-table  dump the time-dependent bath coefficients as CSV

Exit codes: 0 success, 2 configuration/validation error, 3 numerical
failure (diverging integration, truncation overflow, ...).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .model import ModelParams
from .scenario import (
    ConfigError,
    PRESETS,
    coeff_table,
    parse_config,
    preset_config,
    run_scenario,
    run_sweep,
    write_outputs,
    worker_count,
)
from .solvers import SolverError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load(args) -> "ScenarioConfig":
    if getattr(args, "config", None):
        with open(args.config) as fh:
            return parse_config(fh.read())
    return preset_config(args.preset)


def _run_and_write(config, out_dir: str):
    series, summary = run_scenario(config)
    csv_path, json_path = write_outputs(series, summary, out_dir, config.name)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    for dyn, info in summary["dynamics"].items():
        diag = info["diagnostics"]
        print(f"  {dyn}: t_final={info['t_final']:.4g} "
              f"trace_drift={diag['max_trace_drift']:.2e}")


def _check_strict(config, strict: bool):
    if not strict:
        return
    # strict mode: refuse configurations known to be numerically fragile
    if config.integrator.step(config.params) > 0.05 / config.params.J:
        raise ConfigError("strict mode: integrator step too large for J")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosedeph",
        description="Two-site two-component boson dynamics under local dephasing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a YAML file")
    p_run.add_argument("config", help="path to a YAML scenario config")
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.add_argument("--strict", action="store_true",
                       help="reject numerically fragile configurations")

    p_preset = sub.add_parser("preset", help="run a built-in scenario")
    p_preset.add_argument("preset", choices=sorted(PRESETS),
                          help="preset scenario name")
    p_preset.add_argument("--out", default="out")
    p_preset.add_argument("--strict", action="store_true")

    p_sweep = sub.add_parser("sweep", help="sweep one parameter")
    group = p_sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="path to a YAML scenario config")
    group.add_argument("--preset", choices=sorted(PRESETS))
    p_sweep.add_argument("--axis", required=True, help="parameter to sweep")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated list of values")
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="parallel worker processes")
    p_sweep.add_argument("--out", default="out")
    p_sweep.add_argument("--strict", action="store_true")

    p_coeff = sub.add_parser("coeff-table",
                             help="dump bath coefficient table as CSV")
    p_coeff.add_argument("--g0", type=float, default=0.1)
    p_coeff.add_argument("--lam", type=float, default=0.5)
    p_coeff.add_argument("--J", type=float, default=1.0)
    p_coeff.add_argument("--omega-0", type=float, default=1.0)
    p_coeff.add_argument("--t-end", type=float, default=20.0)
    p_coeff.add_argument("--steps", type=int, default=400)
    p_coeff.add_argument("--out", default=None,
                         help="output CSV path (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("run", "preset"):
            config = _load(args)
            _check_strict(config, args.strict)
            _run_and_write(config, args.out)
        elif args.command == "sweep":
            config = _load(args)
            _check_strict(config, args.strict)
            values = [float(v) for v in args.values.split(",") if v.strip()]
            agg = run_sweep(config, args.axis, values, args.out,
                            workers=worker_count(args.workers))
            print(f"wrote {agg}")
        elif args.command == "coeff-table":
            params = ModelParams(g0=args.g0, lam=args.lam, J=args.J,
                                 omega_0=args.omega_0)
            times = np.linspace(0.0, args.t_end, args.steps + 1)[1:]
            text = coeff_table(params, times)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
                print(f"wrote {args.out}")
            else:
                sys.stdout.write(text)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
