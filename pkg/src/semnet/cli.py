"""Command line front end.

Three subcommands: ``run`` executes a sweep spec and writes results.csv,
summary.csv, and meta.json into the output directory; ``gen-scenario`` draws
a scenario from a generation config and saves it; ``solve-one`` solves a
single (device, station, subchannel) link of a saved scenario and prints the
decision.  Exit codes: 0 success, 2 configuration problem, 3 solver failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .experiments import (
    emit_csv,
    emit_meta,
    emit_summary,
    load_sweep_spec,
    run_sweep,
)
from .generate import ConfigError, GenerationConfig, generate
from .model import ModelError
from .serialization import (
    load_generation_config,
    load_scenario,
    save_scenario,
    scenario_hash,
)
from .solver import SolveStats, SolverMode, solve_joint

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semnet",
        description="Semantic network simulator: sweeps, scenario generation, single-link solves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a Monte Carlo sweep spec")
    run.add_argument("--spec", required=True, help="sweep spec YAML file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--workers", type=int, default=None, help="process count cap")
    run.add_argument("--grid-M", type=int, default=None, dest="grid_m",
                     help="override the extraction-ratio grid resolution")
    run.add_argument("--mode", action="append", default=None,
                     choices=[m.value for m in SolverMode],
                     help="override solver modes (repeatable)")

    gen = sub.add_parser("gen-scenario", help="draw and save a random scenario")
    gen.add_argument("--config", default=None, help="generation config YAML (defaults apply)")
    gen.add_argument("--seed", type=int, default=None, help="override the config seed")
    gen.add_argument("--out", required=True, help="scenario YAML destination")

    one = sub.add_parser("solve-one", help="solve a single link of a saved scenario")
    one.add_argument("--scenario", required=True, help="scenario YAML file")
    one.add_argument("--md", type=int, required=True)
    one.add_argument("--bs", type=int, required=True)
    one.add_argument("--subch", type=int, required=True)
    one.add_argument("--grid-M", type=int, default=50, dest="grid_m")
    one.add_argument("--mode", default=SolverMode.JOINT.value,
                     choices=[m.value for m in SolverMode])
    return parser


def _cmd_run(args) -> int:
    spec = load_sweep_spec(args.spec)
    if args.grid_m is not None:
        spec = dataclasses.replace(spec, grid_m=args.grid_m)
    if args.mode:
        spec = dataclasses.replace(
            spec, modes=tuple(SolverMode.from_name(name) for name in args.mode)
        )
    os.makedirs(args.out, exist_ok=True)
    result = run_sweep(spec, workers=args.workers)
    emit_csv(result, os.path.join(args.out, "results.csv"))
    emit_summary(result, os.path.join(args.out, "summary.csv"))
    emit_meta(result, os.path.join(args.out, "meta.json"))
    print(
        f"wrote {len(result.rows)} rows for {spec.swept_parameter} "
        f"({len(spec.values)} values x {len(spec.modes)} modes x {spec.num_runs} runs) "
        f"to {args.out}"
    )
    return EXIT_OK


def _cmd_gen_scenario(args) -> int:
    config = load_generation_config(args.config) if args.config else GenerationConfig()
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    scenario = generate(config)
    save_scenario(scenario, args.out)
    print(f"wrote scenario with {scenario.num_devices} devices, "
          f"{scenario.num_sbs} SBS, {scenario.num_subchannels} subchannels to {args.out}")
    print(f"sha256: {scenario_hash(scenario)}")
    return EXIT_OK


def _cmd_solve_one(args) -> int:
    scenario = load_scenario(args.scenario)
    if not (0 <= args.md < scenario.num_devices):
        raise ConfigError(f"md must be in [0, {scenario.num_devices})")
    if not (0 <= args.bs <= scenario.num_sbs):
        raise ConfigError(f"bs must be in [0, {scenario.num_sbs}]")
    if not (0 <= args.subch < scenario.num_subchannels):
        raise ConfigError(f"subch must be in [0, {scenario.num_subchannels})")
    stats = SolveStats()
    decision = solve_joint(
        scenario, args.md, args.bs, args.subch,
        grid_m=args.grid_m, mode=SolverMode.from_name(args.mode), stats=stats,
    )
    print(f"md: {decision.md}")
    print(f"bs: {decision.bs}")
    print(f"subchannel: {decision.subchannel}")
    print(f"mode: {args.mode}")
    print(f"feasible: {str(decision.feasible).lower()}")
    if decision.feasible:
        print(f"gestr_suts_per_s: {decision.gestr_value!r}")
        print(f"extraction_ratio: {decision.extraction_ratio!r}")
        print(f"grid_index: {decision.grid_index}")
        print(f"accuracy: {decision.accuracy!r}")
        print(f"semantic_mode: {list(decision.semantic_mode)}")
        print(f"upload_mode: {list(decision.upload_mode)}")
        t = decision.timing
        print(f"total_time_s: {t.total_time!r}")
        print(f"  upload_s: {t.upload_time!r}")
        print(f"  download_s: {t.download_time!r}")
        print(f"  semantic_tx_s: {t.semantic_tx_time!r}")
        print(f"  bit_tx_s: {t.bit_tx_time!r}")
        print(f"  semantic_compute_s: {t.semantic_compute_time!r}")
        print(f"  bit_compute_s: {t.bit_compute_time!r}")
    print(f"nodes_explored: {stats.nodes_explored}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "gen-scenario": _cmd_gen_scenario,
        "solve-one": _cmd_solve_one,
    }
    return handlers[args.command](args)


def entry(argv=None) -> int:
    try:
        return main(argv)
    except (ConfigError, ModelError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(entry())
