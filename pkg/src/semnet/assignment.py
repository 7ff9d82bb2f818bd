"""Maximum-total-rate matching of devices to subchannels.

Each device may be served on at most one subchannel and each subchannel may
serve at most one device; the weight of a pair is the best achievable GESTR
over all base stations.  The matching is solved exactly with a Kuhn-Munkres
variant on a padded square matrix: the real block is bordered by zero-weight
dummy rows and columns (one per opposite-side node) so that leaving a device
or subchannel unmatched is always expressible, and pairs with no feasible
serving station carry a large negative sentinel so they are never selected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .solver import JointDecision

FORBIDDEN_SENTINEL = -1e18


@dataclass(frozen=True)
class AssignmentProblem:
    """Per (device, subchannel) weights with the station attaining each one.

    ``weights[i][k]`` is -inf when no station serves the pair feasibly;
    ``best_bs[i][k]`` is -1 there, and ``decisions[i][k]`` is None.
    """

    num_devices: int
    num_subchannels: int
    weights: tuple[tuple[float, ...], ...]
    best_bs: tuple[tuple[int, ...], ...]
    decisions: tuple[tuple[JointDecision | None, ...], ...]


@dataclass(frozen=True)
class Assignment:
    triples: tuple[tuple[int, int, int], ...]  # (md, bs, subchannel), ascending md
    decisions: tuple[JointDecision, ...]  # aligned with triples
    total_value: float

    @property
    def matched(self) -> int:
        return len(self.triples)


def build_assignment_problem(scenario, joint_solutions) -> AssignmentProblem:
    """Reduce per-link decisions to a device-by-subchannel weight matrix.

    ``joint_solutions`` maps every (md, bs, subchannel) triple to its
    JointDecision; the weight of (md, subchannel) is the best feasible value
    over stations, the lowest station index winning ties.
    """
    num_md = scenario.num_devices
    num_bs = scenario.num_sbs + 1
    num_k = scenario.num_subchannels
    missing = [
        (i, j, k)
        for i in range(num_md)
        for j in range(num_bs)
        for k in range(num_k)
        if (i, j, k) not in joint_solutions
    ]
    if missing:
        raise ValueError(f"joint_solutions is missing {len(missing)} entries, first {missing[0]}")

    weights = []
    best_bs = []
    decisions = []
    for i in range(num_md):
        w_row = []
        b_row = []
        d_row = []
        for k in range(num_k):
            best = -math.inf
            best_j = -1
            best_d = None
            for j in range(num_bs):
                decision = joint_solutions[(i, j, k)]
                if decision.feasible and decision.gestr_value > best:
                    best = decision.gestr_value
                    best_j = j
                    best_d = decision
            w_row.append(best)
            b_row.append(best_j)
            d_row.append(best_d)
        weights.append(tuple(w_row))
        best_bs.append(tuple(b_row))
        decisions.append(tuple(d_row))
    return AssignmentProblem(num_md, num_k, tuple(weights), tuple(best_bs), tuple(decisions))


def _square_max_matching(weight):
    """Column-to-row matching maximizing total weight on a square matrix.

    Kuhn-Munkres with potentials and shortest augmenting paths, run on the
    negated matrix.  Returns match_col[c] = row assigned to column c.
    """
    n = len(weight)
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    match_col = [0] * (n + 1)  # 1-indexed; 0 means free
    way = [0] * (n + 1)
    for row in range(1, n + 1):
        match_col[0] = row
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match_col[j0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = -weight[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_col[j0] = match_col[j1]
            j0 = j1
    return [match_col[j] - 1 for j in range(1, n + 1)]


def solve_assignment(problem: AssignmentProblem) -> Assignment:
    """Exact maximum-total matching; devices may stay unmatched."""
    num_md = problem.num_devices
    num_k = problem.num_subchannels
    n = num_md + num_k
    # real rows/columns first, then one dummy column per device and one dummy
    # row per subchannel; every node can thus opt out at zero weight and a
    # sentinel pair is never part of an optimal matching
    padded = [[0.0] * n for _ in range(n)]
    for i in range(num_md):
        row = problem.weights[i]
        for k in range(num_k):
            padded[i][k] = row[k] if row[k] > -math.inf else FORBIDDEN_SENTINEL

    match_col = _square_max_matching(padded)
    chosen = [-1] * num_md  # subchannel per device
    for c in range(num_k):
        r = match_col[c]
        if r < num_md and problem.decisions[r][c] is not None:
            chosen[r] = c

    # an optimal matching may park a zero-weight pair on the dummies; prefer
    # the real edge so the device is actually served
    free_k = [c for c in range(num_k) if match_col[c] >= num_md or chosen[match_col[c]] != c]
    for i in range(num_md):
        if chosen[i] >= 0:
            continue
        for c in list(free_k):
            if problem.decisions[i][c] is not None and problem.weights[i][c] >= 0.0:
                chosen[i] = c
                free_k.remove(c)
                break

    triples = []
    picked = []
    total = 0.0
    for i in range(num_md):
        c = chosen[i]
        if c < 0:
            continue
        triples.append((i, problem.best_bs[i][c], c))
        picked.append(problem.decisions[i][c])
        total += problem.weights[i][c]
    return Assignment(tuple(triples), tuple(picked), total)
