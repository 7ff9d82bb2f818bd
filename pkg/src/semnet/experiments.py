"""Monte Carlo sweep harness.

A sweep draws one scenario per run seed and re-solves it at every sweep value
under every solver mode, so curves are paired sample by sample.  Results are
written as a data CSV, a summary CSV of per-point means, and a JSON sidecar
with scenario hashes and real timings.

The data CSV is byte-deterministic for a given spec, independent of worker
count.  Real wall-clock time is therefore kept out of it; the ``wall_ms``
column carries the solver's simplex iteration count, a machine-independent
work measure, and measured times go to the sidecar instead.
"""
from __future__ import annotations

import dataclasses
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import yaml

from .assignment import build_assignment_problem, solve_assignment
from .generate import ConfigError, GenerationConfig, generate
from .model import Scenario
from .serialization import config_from_dict, parse_power, scenario_hash
from .solver import SolveStats, SolverMode, solve_joint

CSV_HEADER = "sweep_param,sweep_value,mode,run_seed,total_gestr_suts_per_s,matched_mds,nodes_explored,wall_ms"
WORKERS_ENV = "SEMNET_MAX_WORKERS"

SWEEPABLE = ("delay_tolerance", "accuracy_threshold", "md_tx_power", "bandwidth")
DEFAULT_MODES = (SolverMode.JOINT, SolverMode.NO_COLLABORATION, SolverMode.NO_SHARING)


@dataclass(frozen=True)
class SweepSpec:
    swept_parameter: str
    values: tuple[float, ...]
    num_runs: int
    base_config: GenerationConfig
    modes: tuple[SolverMode, ...] = DEFAULT_MODES
    grid_m: int = 20

    def __post_init__(self):
        if self.swept_parameter not in SWEEPABLE:
            raise ConfigError(
                f"swept_parameter must be one of {SWEEPABLE}, got {self.swept_parameter!r}"
            )
        if not self.values:
            raise ConfigError("values must be nonempty")
        if self.num_runs < 1:
            raise ConfigError("num_runs must be at least 1")
        if not self.modes:
            raise ConfigError("modes must be nonempty")
        if len(set(self.modes)) != len(self.modes):
            raise ConfigError("modes must be distinct")
        if self.grid_m < 1:
            raise ConfigError("grid_m must be at least 1")
        if any(v <= 0 for v in self.values):
            raise ConfigError("sweep values must be positive")


@dataclass(frozen=True)
class RunRecord:
    sweep_param: str
    sweep_value: float
    mode: str
    run_index: int
    run_seed: int
    total_gestr: float
    matched: int
    nodes_explored: int
    work_units: int  # simplex iterations; fills the wall_ms column
    wall_seconds: float  # measured, sidecar only
    scenario_sha256: str
    assignments: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class ExperimentResult:
    spec: SweepSpec
    rows: tuple[RunRecord, ...]  # ordered by (value, mode, run)

    def mean_total(self, value: float, mode: SolverMode) -> float:
        totals = [
            row.total_gestr
            for row in self.rows
            if row.sweep_value == value and row.mode == mode.value
        ]
        return sum(totals) / len(totals)


def apply_override(scenario: Scenario, parameter: str, value: float) -> Scenario:
    """Scenario with the swept parameter set uniformly across devices."""
    if parameter == "bandwidth":
        radio = dataclasses.replace(scenario.radio, subchannel_bandwidth=value)
        return dataclasses.replace(scenario, radio=radio)
    field = {
        "delay_tolerance": "delay_tolerance",
        "accuracy_threshold": "accuracy_threshold",
        "md_tx_power": "tx_power",
    }[parameter]
    devices = tuple(
        dataclasses.replace(dev, **{field: value}) for dev in scenario.devices
    )
    return dataclasses.replace(scenario, devices=devices)


def run_seed_for(base_seed: int, run_index: int) -> int:
    return int(np.random.SeedSequence([base_seed, run_index]).generate_state(1)[0])


def _execute_run(spec: SweepSpec, run_index: int) -> list[RunRecord]:
    seed = run_seed_for(spec.base_config.seed, run_index)
    scenario = generate(dataclasses.replace(spec.base_config, seed=seed))
    records = []
    for value in spec.values:
        adjusted = apply_override(scenario, spec.swept_parameter, value)
        sha = scenario_hash(adjusted)
        for mode in spec.modes:
            started = time.perf_counter()
            stats = SolveStats()
            try:
                solutions = {
                    (i, j, k): solve_joint(
                        adjusted, i, j, k, grid_m=spec.grid_m, mode=mode, stats=stats
                    )
                    for i in range(adjusted.num_devices)
                    for j in range(adjusted.num_sbs + 1)
                    for k in range(adjusted.num_subchannels)
                }
            except RuntimeError as exc:
                raise RuntimeError(
                    f"solver failed in run {run_index} (seed {seed}), "
                    f"{spec.swept_parameter}={value}, mode={mode.value}: {exc}"
                ) from exc
            assignment = solve_assignment(build_assignment_problem(adjusted, solutions))
            records.append(
                RunRecord(
                    sweep_param=spec.swept_parameter,
                    sweep_value=float(value),
                    mode=mode.value,
                    run_index=run_index,
                    run_seed=seed,
                    total_gestr=assignment.total_value,
                    matched=assignment.matched,
                    nodes_explored=stats.nodes_explored,
                    work_units=stats.pivots,
                    wall_seconds=time.perf_counter() - started,
                    scenario_sha256=sha,
                    assignments=assignment.triples,
                )
            )
    return records


def _worker_count(requested: int | None, num_runs: int) -> int:
    if requested is None:
        env = os.environ.get(WORKERS_ENV)
        if env is not None:
            requested = int(env)
    if requested is None:
        requested = os.cpu_count() or 1
    return max(1, min(requested, num_runs))


def run_sweep(spec: SweepSpec, workers: int | None = None) -> ExperimentResult:
    """All (run, value, mode) pipeline solves, parallel over runs."""
    count = _worker_count(workers, spec.num_runs)
    if count == 1:
        per_run = [_execute_run(spec, r) for r in range(spec.num_runs)]
    else:
        with ProcessPoolExecutor(max_workers=count) as pool:
            per_run = list(pool.map(_execute_run, [spec] * spec.num_runs, range(spec.num_runs)))

    # reorder to (value, mode, run); each run's list is already (value, mode)
    rows = []
    num_modes = len(spec.modes)
    for vi in range(len(spec.values)):
        for mi in range(num_modes):
            for r in range(spec.num_runs):
                rows.append(per_run[r][vi * num_modes + mi])
    return ExperimentResult(spec=spec, rows=tuple(rows))


def emit_csv(result: ExperimentResult, path) -> None:
    """Data rows, one per (value, mode, run), full-precision floats."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in result.rows:
            fh.write(
                f"{row.sweep_param},{row.sweep_value!r},{row.mode},{row.run_seed},"
                f"{row.total_gestr!r},{row.matched},{row.nodes_explored},{row.work_units}\n"
            )


def emit_summary(result: ExperimentResult, path) -> None:
    """Per (value, mode) means over runs."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("sweep_param,sweep_value,mode,num_runs,mean_total_gestr_suts_per_s\n")
        for value in result.spec.values:
            for mode in result.spec.modes:
                mean = result.mean_total(value, mode)
                fh.write(
                    f"{result.spec.swept_parameter},{float(value)!r},{mode.value},"
                    f"{result.spec.num_runs},{mean!r}\n"
                )


def emit_meta(result: ExperimentResult, path) -> None:
    """Sidecar with pairing hashes and measured wall times."""
    runs = {}
    timings = []
    for row in result.rows:
        entry = runs.setdefault(
            row.run_index, {"run_index": row.run_index, "run_seed": row.run_seed, "scenario_sha256": {}}
        )
        entry["scenario_sha256"][repr(row.sweep_value)] = row.scenario_sha256
        timings.append(
            {
                "sweep_value": row.sweep_value,
                "mode": row.mode,
                "run_index": row.run_index,
                "wall_seconds": row.wall_seconds,
                "nodes_explored": row.nodes_explored,
                "matched_mds": row.matched,
            }
        )
    doc = {
        "sweep_param": result.spec.swept_parameter,
        "values": [float(v) for v in result.spec.values],
        "modes": [m.value for m in result.spec.modes],
        "num_runs": result.spec.num_runs,
        "grid_m": result.spec.grid_m,
        "runs": [runs[r] for r in sorted(runs)],
        "timings": timings,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sweep_spec_from_dict(data: dict) -> SweepSpec:
    if not isinstance(data, dict):
        raise ConfigError("sweep spec must be a mapping")
    unknown = set(data) - {"sweep", "values", "num_runs", "modes", "grid_M", "base_config"}
    if unknown:
        raise ConfigError(f"unknown sweep spec keys: {sorted(unknown)}")
    try:
        parameter = data["sweep"]
        raw_values = data["values"]
    except KeyError as exc:
        raise ConfigError(f"sweep spec is missing {exc.args[0]!r}") from None
    if parameter == "md_tx_power":
        values = tuple(parse_power(v) for v in raw_values)
    else:
        values = tuple(float(v) for v in raw_values)
    modes = tuple(
        SolverMode.from_name(name) for name in data.get("modes", [m.value for m in DEFAULT_MODES])
    )
    base = config_from_dict(data.get("base_config", {}) or {})
    try:
        return SweepSpec(
            swept_parameter=parameter,
            values=values,
            num_runs=int(data.get("num_runs", 100)),
            base_config=base,
            modes=modes,
            grid_m=int(data.get("grid_M", 20)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_sweep_spec(path) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return sweep_spec_from_dict(data)
