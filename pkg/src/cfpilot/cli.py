"""Command-line entry point.

Subcommands:
  run    execute the experiment in a config file, write the records CSV
  stats  nearest-rank percentile of a records CSV, per strategy
  sweep  re-run an experiment across a swept variable, write aggregated stats

Exit codes: 0 success, 2 configuration error, 3 enumeration/iteration budget.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import SWEEP_VARIABLES
from .errors import BudgetExceededError, ConfigError
from .harness import (PERCENTILE_NOTE, load_config, percentile, read_records,
                      run_experiment, run_sweep, throughput_by_strategy,
                      write_records, write_sweep)


def _build_parser():
    parser = argparse.ArgumentParser(prog="cfpilot",
                                     description="Uplink pilot-assignment simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.add_argument("--strategies", default=None, help="comma-separated strategy names")
    run.add_argument("--out", default=None, help="records CSV path (default: config output_path)")

    stats = sub.add_parser("stats", help="per-strategy percentile of a records CSV")
    stats.add_argument("--in", dest="infile", required=True)
    stats.add_argument("--percentile", type=float, default=95.0)

    sweep = sub.add_parser("sweep", help="sweep one variable and write aggregated stats")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--var", choices=SWEEP_VARIABLES, default=None)
    sweep.add_argument("--values", default=None, help="comma-separated positive integers")
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--percentile", type=float, default=95.0)
    sweep.add_argument("--out", default=None, help="stats CSV path (default: config output_path)")
    return parser


def _apply_overrides(cfg, args):
    sim = cfg.sim
    if getattr(args, "seed", None) is not None:
        sim = replace(sim, seed=args.seed)
    cfg = replace(cfg, sim=sim)
    if getattr(args, "strategies", None):
        names = tuple(s.strip() for s in args.strategies.split(",") if s.strip())
        cfg = replace(cfg, strategies=names)
    return cfg


def _output_path(cfg, args):
    path = args.out if args.out else cfg.output_path
    if not path:
        raise ConfigError("no output path: pass --out or set output_path in the config")
    return path


def _fraction(percent):
    if not 0 < percent <= 100:
        raise ConfigError("--percentile must lie in (0, 100]")
    return percent / 100.0


def _cmd_run(args):
    cfg = _apply_overrides(load_config(args.config), args)
    out = _output_path(cfg, args)
    write_records(run_experiment(cfg), out)
    return 0


def _cmd_stats(args):
    q = _fraction(args.percentile)
    grouped = throughput_by_strategy(read_records(args.infile))
    if not grouped:
        raise ConfigError(f"no records in {args.infile}")
    print(PERCENTILE_NOTE)
    print("strategy,n,percentile,throughput_bps")
    for strategy, samples in grouped.items():
        print(f"{strategy},{samples.size},{args.percentile:.9g},{percentile(samples, q):.9g}")
    return 0


def _cmd_sweep(args):
    cfg = _apply_overrides(load_config(args.config), args)
    if args.var is not None:
        cfg = replace(cfg, sweep_var=args.var)
    if args.values is not None:
        try:
            values = tuple(int(v) for v in args.values.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigError(f"bad --values list: {args.values!r}") from exc
        cfg = replace(cfg, sweep_values=values)
    out = _output_path(cfg, args)
    write_sweep(run_sweep(cfg, q=_fraction(args.percentile)), out)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "stats": _cmd_stats, "sweep": _cmd_sweep}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        guard = f" [{exc.guard}]" if exc.guard else ""
        print(f"budget error{guard}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
