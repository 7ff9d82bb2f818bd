"""Linear-fractional subproblem over the binary sharing decisions, fixed ratio.

For one (device, BS, subchannel) triple and a fixed extraction ratio the GESTR
objective is a ratio of two affine functions of the relaxed decision variables:
the semantic-mode indicator per mismatched class ("semantic") and the coupled
upload share per MBS-shared class ("upload", the product variable of the
semantic indicator and the upload choice, constrained by upload <= semantic).
Upload-only classes have their upload share identified with the semantic
indicator and contribute no extra variable.

Dinkelbach's method reduces the ratio maximization to a short sequence of
linear programs.  The numerator is normalized by the device's total semantic
information so the parametric gaps are O(1) regardless of instance scale;
``ratio * scale`` converts back to suts/s.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import (
    MBS_ID,
    DegenerateInstanceError,
    Scenario,
    access_rate,
    backhaul_rate,
    knowledge_split,
)
from .simplex import LinearProgram, LpStatus, solve_lp

DINKELBACH_TOL = 1e-9
DINKELBACH_MAX_ITER = 50

SEMANTIC = "semantic"
UPLOAD = "upload"


@dataclass(frozen=True)
class AffineForm:
    constant: float
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=float))

    def value(self, x) -> float:
        return float(self.constant + np.dot(self.coefficients, x))


@dataclass(frozen=True)
class FractionalLp:
    """max numerator(x) / denominator(x) over the relaxed decision box.

    Feasible region: total_time(x) <= delay_budget, couplings @ x <= coupling_rhs
    and x in [0, 1]^n.  The denominator must be positive on the region.
    """

    variables: tuple[tuple[str, int], ...]
    numerator: AffineForm
    denominator: AffineForm
    total_time: AffineForm
    delay_budget: float
    couplings: np.ndarray
    coupling_rhs: np.ndarray
    scale: float = 1.0
    mismatched: tuple[int, ...] = ()
    shared: tuple[int, ...] = ()
    assignments: dict = field(default_factory=dict)  # fixed and forced (kind, class) -> 0/1

    def __post_init__(self):
        n = len(self.variables)
        rows = np.asarray(self.couplings, dtype=float)
        if rows.ndim != 2:
            rows = rows.reshape(-1, n) if n else rows.reshape(0, 0)
        object.__setattr__(self, "couplings", rows)
        object.__setattr__(self, "coupling_rhs", np.asarray(self.coupling_rhs, dtype=float))

    def linear_program(self, eta: float) -> LinearProgram:
        n = len(self.variables)
        objective = self.numerator.coefficients - eta * self.denominator.coefficients
        rows = np.vstack([self.total_time.coefficients.reshape(1, n), self.couplings])
        rhs = np.concatenate(
            [[self.delay_budget - self.total_time.constant], self.coupling_rhs]
        )
        return LinearProgram(objective, rows, rhs, np.zeros(n), np.ones(n))

    def ratio(self, x) -> float:
        den = self.denominator.value(x)
        if den <= 0.0:
            raise DegenerateInstanceError("denominator must be positive on the region")
        return self.numerator.value(x) / den


def _normalize_assignments(split, collaboration: bool, fixed) -> dict | None:
    """Canonical (kind, class) -> value map; None signals a contradiction."""
    shared = set(split.shared_at_mbs) if collaboration else set()
    result = {}
    for (kind, cls), value in (fixed or {}).items():
        if kind not in (SEMANTIC, UPLOAD):
            raise ValueError(f"unknown variable kind {kind!r}")
        if cls not in split.mismatched:
            raise ValueError(f"class {cls} is not a mismatched class")
        if value not in (0, 1):
            raise ValueError("fixed values must be binary")
        # upload share of a non-shared class is the semantic indicator itself
        key = (SEMANTIC, cls) if kind == UPLOAD and cls not in shared else (kind, cls)
        if result.get(key, value) != value:
            return None
        result[key] = value
    for cls in shared:
        sem = result.get((SEMANTIC, cls))
        up = result.get((UPLOAD, cls))
        if sem == 0:
            if up == 1:
                return None
            result[(UPLOAD, cls)] = 0
        if up == 1 and sem is None:
            result[(SEMANTIC, cls)] = 1
    return result


def build_fractional_lp(
    scenario: Scenario,
    md: int,
    bs: int,
    subchannel: int,
    extraction_ratio: float,
    fixed=None,
    collaboration: bool = True,
) -> FractionalLp | None:
    """Assemble the fixed-ratio subproblem; None when it is infeasible as built.

    ``fixed`` maps (kind, class) pairs to binary values; contradictory fixings
    (upload share 1 with semantic mode 0) yield None.  ``collaboration=False``
    forces every shared class to be uploaded by the device, removing its upload
    variable exactly like an upload-only class.
    """
    if not 0.0 <= extraction_ratio <= 1.0:
        raise ValueError("extraction_ratio must lie in [0, 1]")
    split = knowledge_split(scenario, md, bs)
    assignments = _normalize_assignments(split, collaboration, fixed)
    if assignments is None:
        return None
    shared = split.shared_at_mbs if collaboration else ()
    shared_set = set(shared)

    dev = scenario.devices[md]
    xi = extraction_ratio
    eps = scenario.accuracy.value(xi)
    rate = access_rate(scenario, md, bs, subchannel)
    down_rate = backhaul_rate(scenario, md, bs, subchannel) if shared else None
    speed = scenario.base_stations[bs].compute_speed
    rho = scenario.compression_exponent

    matched_bits = sum(dev.source_bits[c] for c in split.matched)
    matched_cycles = sum(dev.compute_load[c] for c in split.matched)
    matched_info = sum(dev.semantic_info[c] for c in split.matched)
    scale = sum(dev.semantic_info.values())

    if xi == 0.0:
        # Recovery workload diverges: any semantic payload is infeasible.
        if matched_cycles > 0.0:
            return None
        for cls in split.mismatched:
            if assignments.get((SEMANTIC, cls)) == 1:
                return None
            assignments[(SEMANTIC, cls)] = 0
            if cls in shared_set:
                assignments[(UPLOAD, cls)] = 0
        omega = 1.0
    else:
        omega = xi ** (-rho)

    variables = [(SEMANTIC, c) for c in split.mismatched if (SEMANTIC, c) not in assignments]
    variables += [(UPLOAD, c) for c in shared if (UPLOAD, c) not in assignments]
    index = {key: pos for pos, key in enumerate(variables)}
    n = len(variables)

    num = np.zeros(n)
    den = np.zeros(n)
    tot = np.zeros(n)
    num_const = eps * matched_info / scale
    den_const = xi * matched_bits / rate
    tot_const = xi * matched_bits / rate + omega * matched_cycles / speed

    def add(key, num_c, den_c, tot_c):
        nonlocal num_const, den_const, tot_const
        if key in assignments:
            value = assignments[key]
            num_const += num_c * value
            den_const += den_c * value
            tot_const += tot_c * value
        else:
            pos = index[key]
            num[pos] += num_c
            den[pos] += den_c
            tot[pos] += tot_c

    for cls in split.mismatched:
        info = dev.semantic_info[cls]
        bits = dev.source_bits[cls]
        cycles = dev.compute_load[cls]
        knowledge = dev.knowledge_bits[cls]
        # bit-mode share: info delivered raw, payload and processing in full
        num_const += info / scale
        den_const += bits / rate
        tot_const += bits / rate + cycles / speed
        # switching to semantic mode trades raw payload for extracted payload
        sem_key = (SEMANTIC, cls)
        add(sem_key, (eps - 1.0) * info / scale, (xi - 1.0) * bits / rate,
            (xi - 1.0) * bits / rate + (omega - 1.0) * cycles / speed)
        if cls in shared_set:
            # uploaded share goes over the access link, the rest over the backhaul
            add(sem_key, 0.0, knowledge / down_rate, knowledge / down_rate)
            add((UPLOAD, cls), 0.0, knowledge / rate - knowledge / down_rate,
                knowledge / rate - knowledge / down_rate)
        else:
            add(sem_key, 0.0, knowledge / rate, knowledge / rate)

    couplings = []
    coupling_rhs = []
    for cls in shared:
        sem_key = (SEMANTIC, cls)
        up_key = (UPLOAD, cls)
        sem_fixed = assignments.get(sem_key)
        up_fixed = assignments.get(up_key)
        if sem_fixed is not None and up_fixed is not None:
            if up_fixed > sem_fixed:
                return None
            continue
        row = np.zeros(n)
        rhs = 0.0
        if up_fixed is not None:
            row[index[sem_key]] = -1.0
            rhs = -float(up_fixed)
        elif sem_fixed is not None:
            row[index[up_key]] = 1.0
            rhs = float(sem_fixed)
        else:
            row[index[up_key]] = 1.0
            row[index[sem_key]] = -1.0
        couplings.append(row)
        coupling_rhs.append(rhs)

    if not np.isfinite(tot_const):
        return None
    coupling_matrix = np.array(couplings) if couplings else np.zeros((0, n))
    return FractionalLp(
        variables=tuple(variables),
        numerator=AffineForm(num_const, num),
        denominator=AffineForm(den_const, den),
        total_time=AffineForm(tot_const, tot),
        delay_budget=dev.delay_tolerance,
        couplings=coupling_matrix,
        coupling_rhs=np.array(coupling_rhs),
        scale=scale,
        mismatched=split.mismatched,
        shared=tuple(shared),
        assignments=assignments,
    )


@dataclass
class DinkelbachResult:
    feasible: bool
    x: np.ndarray | None
    ratio: float  # normalized; multiply by FractionalLp.scale for suts/s
    iterations: int
    lp_solves: int
    pivots: int
    eta_history: list[float]
    final_gap: float | None = None  # F(eta*), computed only when collect=True


def dinkelbach_solve(
    fp: FractionalLp,
    tol: float = DINKELBACH_TOL,
    max_iter: int = DINKELBACH_MAX_ITER,
    collect: bool = False,
) -> DinkelbachResult:
    """Maximize the affine ratio by Dinkelbach's parametric iteration.

    Starts at eta = 0; each step solves max numerator - eta * denominator and
    updates eta to the ratio at the maximizer until the parametric gap drops
    to ``tol``.  Infeasibility is detected by the first LP (phase-1 simplex).
    """
    eta = 0.0
    history = [0.0]
    pivots = 0
    for iteration in range(1, max_iter + 1):
        solution = solve_lp(fp.linear_program(eta))
        pivots += solution.pivots
        if solution.status is LpStatus.INFEASIBLE:
            return DinkelbachResult(False, None, -np.inf, iteration, iteration, pivots, history)
        if solution.status is not LpStatus.OPTIMAL:
            raise RuntimeError("fractional subproblem must be bounded")
        x = solution.x
        num = fp.numerator.value(x)
        den = fp.denominator.value(x)
        if den <= 0.0:
            raise DegenerateInstanceError("denominator must be positive on the region")
        gap = num - eta * den
        if gap <= tol:
            ratio = num / den
            final_gap = None
            if collect:
                check = solve_lp(fp.linear_program(ratio))
                pivots += check.pivots
                # x itself achieves exactly zero at eta = ratio, so the true
                # parametric optimum is never negative; clamp float noise.
                raw = check.objective_value + fp.numerator.constant - ratio * fp.denominator.constant
                final_gap = max(raw, 0.0)
            return DinkelbachResult(
                True, x, ratio, iteration, iteration + (1 if collect else 0), pivots, history, final_gap
            )
        eta = num / den
        history.append(eta)
    raise RuntimeError("Dinkelbach iteration failed to converge")
