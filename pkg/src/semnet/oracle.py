"""Exhaustive reference optimizer for single-link decisions.

Enumerates every point of the extraction-ratio grid against every binary
sharing/upload combination and evaluates each through the core model, with no
relaxation or pruning.  Exponential in the number of mismatched classes, so it
is gated to small instances; its purpose is to certify the branch-and-bound
solver on randomized tests, not to be fast.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import (
    InfeasibleAccuracyError,
    Scenario,
    extraction_grid,
    gestr,
    knowledge_split,
    min_extraction_ratio,
    timing,
)
from .solver import DELAY_SLACK, JointDecision, SolverMode, _infeasible_decision

MAX_ENUM_BITS = 20


@dataclass(frozen=True)
class OracleReport:
    best: JointDecision
    evaluated_points: int  # (grid point, decision) pairs tried, feasible or not
    feasible_points: int
    # best value over feasible points whose (transmission mode, grid index)
    # differs from the winner's; -inf when no such point exists.  Lets callers
    # decide whether the optimum is unique before comparing argmax results.
    runner_up_value: float = float("-inf")


def brute_force_joint(
    scenario: Scenario,
    md: int,
    bs: int,
    subchannel: int,
    grid_m: int = 50,
    mode: SolverMode = SolverMode.JOINT,
) -> OracleReport:
    """Grid search over extraction ratios crossed with full decision enumeration."""
    split = knowledge_split(scenario, md, bs)
    mismatched = split.mismatched
    n_mis = len(mismatched)
    if 2 * n_mis > MAX_ENUM_BITS:
        raise ValueError(
            f"refusing to enumerate {n_mis} mismatched classes; "
            f"limit is {MAX_ENUM_BITS // 2}"
        )
    dev = scenario.devices[md]
    try:
        xi_min = min_extraction_ratio(scenario.accuracy, dev.accuracy_threshold)
    except InfeasibleAccuracyError:
        return OracleReport(_infeasible_decision(md, bs, subchannel), 0, 0)
    grid = extraction_grid(xi_min, grid_m)
    shared = set(split.shared_at_mbs) if mode is SolverMode.JOINT else set()
    budget = dev.delay_tolerance + DELAY_SLACK

    if mode is SolverMode.NO_SHARING:
        semantic_options = [(0,) * n_mis]
    else:
        semantic_options = list(itertools.product((0, 1), repeat=n_mis))

    evaluated = 0
    feasible = 0
    best = None  # (gamma, semantic, upload, xi, grid_index)
    point_best: dict[tuple[tuple[int, ...], int], float] = {}
    for grid_index, xi in enumerate(grid):
        for semantic in semantic_options:
            # the upload choice is free only where a shared class is in semantic
            # mode; everywhere else it is pinned at 1
            free = [pos for pos in range(n_mis) if semantic[pos] == 1 and mismatched[pos] in shared]
            for bits in itertools.product((0, 1), repeat=len(free)):
                upload = [1] * n_mis
                for pos, bit in zip(free, bits):
                    upload[pos] = bit
                upload = tuple(upload)
                evaluated += 1
                breakdown = timing(scenario, md, bs, subchannel, semantic, upload, xi)
                if breakdown.total_time > budget:
                    continue
                feasible += 1
                gamma = gestr(scenario, md, bs, subchannel, semantic, upload, xi)
                key = (semantic, grid_index)
                if gamma > point_best.get(key, float("-inf")):
                    point_best[key] = gamma
                if best is None or gamma > best[0]:
                    best = (gamma, semantic, upload, xi, grid_index)

    if best is None:
        return OracleReport(_infeasible_decision(md, bs, subchannel), evaluated, feasible)
    runner_up = max(
        (v for k, v in point_best.items() if k != (best[1], best[4])),
        default=float("-inf"),
    )
    gamma, semantic, upload, xi, grid_index = best
    decision = JointDecision(
        md,
        bs,
        subchannel,
        True,
        semantic,
        upload,
        xi,
        grid_index,
        gamma,
        scenario.accuracy.value(xi),
        timing(scenario, md, bs, subchannel, semantic, upload, xi),
    )
    return OracleReport(decision, evaluated, feasible, runner_up)
