"""Joint optimization of sharing decisions and extraction ratio per link.

The extraction ratio is searched over a uniform grid on [xi_min, 1]; at each
grid point the binary sharing/upload decisions are found exactly by depth-first
branch and bound, using the Dinkelbach relaxation value of each node as an
upper bound.  Integer candidates are re-evaluated through the core model so the
reported GESTR is bit-identical to a direct evaluation of the decision.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .fractional import (
    DINKELBACH_MAX_ITER,
    DINKELBACH_TOL,
    SEMANTIC,
    UPLOAD,
    build_fractional_lp,
    dinkelbach_solve,
)
from .model import (
    MBS_ID,
    InfeasibleAccuracyError,
    Scenario,
    TimingBreakdown,
    extraction_grid,
    gestr,
    knowledge_split,
    min_extraction_ratio,
    timing,
)

DELAY_SLACK = 1e-9
_INTEGRALITY_TOL = 1e-9


class SolverMode(enum.Enum):
    JOINT = "joint"
    NO_COLLABORATION = "nocollab"  # shared classes must be uploaded by the device
    NO_SHARING = "noshare"  # every mismatched class stays in bit mode

    @classmethod
    def from_name(cls, name: str) -> "SolverMode":
        for mode in cls:
            if mode.value == name:
                return mode
        raise ValueError(f"unknown solver mode {name!r}")


@dataclass(frozen=True)
class JointDecision:
    md: int
    bs: int
    subchannel: int
    feasible: bool
    semantic_mode: tuple[int, ...]  # over mismatched classes, KnowledgeSplit order
    upload_mode: tuple[int, ...]  # canonical 1 wherever the semantic mode is 0
    extraction_ratio: float
    grid_index: int
    gestr_value: float  # suts/s; 0 when infeasible
    accuracy: float
    timing: TimingBreakdown | None


@dataclass
class SolveStats:
    """Aggregated solver counters, plus per-invocation records when requested."""

    nodes_explored: int = 0
    lp_solves: int = 0
    pivots: int = 0
    fp_iterations: int = 0
    eta_histories: list = field(default_factory=list)
    final_gaps: list = field(default_factory=list)
    bound_records: list = field(default_factory=list)  # (root bound, best value) normalized


def branch_and_bound(
    fp_builder,
    evaluate_point,
    incumbent_value: float = -math.inf,
    tol: float = DINKELBACH_TOL,
    max_iter: int = DINKELBACH_MAX_ITER,
    use_bounds: bool = True,
    stats: SolveStats | None = None,
    record: bool = False,
):
    """Exact maximization over binary decisions via relaxation-bounded DFS.

    ``fp_builder(fixed)`` returns the node's FractionalLp (None when the fixing
    is contradictory), ``evaluate_point(assignments)`` the exact objective of a
    full binary assignment as (value, payload), or None when infeasible.  Only
    candidates strictly better than ``incumbent_value`` are considered; returns
    (value, payload) of the best one, or None.  With ``use_bounds=False`` no
    relaxation pruning happens (every integer point found is still evaluated),
    which is useful to audit that pruning is lossless.
    """
    best_value = incumbent_value
    best_payload = None
    root_bound = None
    stack = [{}]
    while stack:
        fixed = stack.pop()
        if stats is not None:
            stats.nodes_explored += 1
        fp = fp_builder(fixed)
        if fp is None:
            continue
        result = dinkelbach_solve(fp, tol=tol, max_iter=max_iter, collect=record)
        if stats is not None:
            stats.lp_solves += result.lp_solves
            stats.pivots += result.pivots
            stats.fp_iterations += result.iterations
            if record and result.feasible:
                stats.eta_histories.append(result.eta_history)
                stats.final_gaps.append(result.final_gap)
        if not result.feasible:
            continue
        if not fixed and root_bound is None:
            root_bound = result.ratio
        if use_bounds and result.ratio <= best_value:
            continue
        x = result.x
        branch_pos = -1
        branch_dist = _INTEGRALITY_TOL
        for pos in range(len(x)):
            dist = min(x[pos], 1.0 - x[pos])
            if dist > branch_dist:
                branch_pos = pos
                branch_dist = dist
        if branch_pos < 0:
            assignments = dict(fp.assignments)
            for pos, key in enumerate(fp.variables):
                assignments[key] = int(round(x[pos]))
            candidate = evaluate_point(assignments)
            if candidate is not None and candidate[0] > best_value:
                best_value, best_payload = candidate
            continue
        key = fp.variables[branch_pos]
        stack.append({**fixed, key: 0})
        stack.append({**fixed, key: 1})  # popped first: prefer the sharing branch
    if stats is not None and record and root_bound is not None:
        found = best_value if best_payload is not None else None
        stats.bound_records.append((root_bound, found))
    if best_payload is None:
        return None
    return best_value, best_payload


def _infeasible_decision(md: int, bs: int, subchannel: int) -> JointDecision:
    return JointDecision(md, bs, subchannel, False, (), (), 0.0, -1, 0.0, 0.0, None)


def solve_joint(
    scenario: Scenario,
    md: int,
    bs: int,
    subchannel: int,
    grid_m: int = 50,
    mode: SolverMode = SolverMode.JOINT,
    stats: SolveStats | None = None,
    use_bounds: bool = True,
    record: bool = False,
) -> JointDecision:
    """Best sharing/upload decisions and extraction ratio for one link."""
    split = knowledge_split(scenario, md, bs)
    dev = scenario.devices[md]
    try:
        xi_min = min_extraction_ratio(scenario.accuracy, dev.accuracy_threshold)
    except InfeasibleAccuracyError:
        return _infeasible_decision(md, bs, subchannel)
    grid = extraction_grid(xi_min, grid_m)
    mismatched = split.mismatched
    n_mis = len(mismatched)
    shared = set(split.shared_at_mbs) if mode is SolverMode.JOINT else set()
    collaboration = mode is SolverMode.JOINT
    scale = sum(dev.semantic_info.values())
    budget = dev.delay_tolerance + DELAY_SLACK

    best_value = -math.inf
    best = None  # (semantic, upload, gamma, xi, grid_index)

    def evaluate(semantic, upload, xi, grid_index):
        nonlocal best_value, best
        breakdown = timing(scenario, md, bs, subchannel, semantic, upload, xi)
        if breakdown.total_time > budget:
            return None
        gamma = gestr(scenario, md, bs, subchannel, semantic, upload, xi)
        return gamma / scale, (semantic, upload, gamma, xi, grid_index)

    for grid_index, xi in enumerate(grid):
        if mode is SolverMode.NO_SHARING or n_mis == 0:
            if stats is not None:
                stats.nodes_explored += 1
            candidate = evaluate((0,) * n_mis, (1,) * n_mis, xi, grid_index)
            if candidate is not None and candidate[0] > best_value:
                best_value, best = candidate
            continue

        def builder(fixed, _xi=xi):
            return build_fractional_lp(
                scenario, md, bs, subchannel, _xi, fixed=fixed, collaboration=collaboration
            )

        def evaluate_point(assignments, _xi=xi, _gi=grid_index):
            semantic = tuple(assignments[(SEMANTIC, cls)] for cls in mismatched)
            upload = tuple(
                assignments[(UPLOAD, cls)]
                if cls in shared and assignments[(SEMANTIC, cls)] == 1
                else 1
                for cls in mismatched
            )
            return evaluate(semantic, upload, _xi, _gi)

        outcome = branch_and_bound(
            builder,
            evaluate_point,
            incumbent_value=best_value if use_bounds else -math.inf,
            use_bounds=use_bounds,
            stats=stats,
            record=record,
        )
        if outcome is not None and outcome[0] > best_value:
            best_value, best = outcome

    if best is None:
        return _infeasible_decision(md, bs, subchannel)
    semantic, upload, gamma, xi, grid_index = best
    breakdown = timing(scenario, md, bs, subchannel, semantic, upload, xi)
    return JointDecision(
        md,
        bs,
        subchannel,
        True,
        tuple(semantic),
        tuple(upload),
        xi,
        grid_index,
        gamma,
        scenario.accuracy.value(xi),
        breakdown,
    )
