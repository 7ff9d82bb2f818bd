"""Dense two-phase simplex for small linear programs with variable bounds.

Maximizes c.x subject to A x <= b and lo <= x <= hi.  Bounds are handled
natively (bounded-variable simplex) instead of as extra rows, and Bland's
rule is used throughout so the method terminates on degenerate problems.
The per-problem sizes in this package are tiny (a handful of variables and
rows), so the kernel favours flat loops over vectorized linear algebra and
is compiled with numba when available.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

FEASIBILITY_TOL = 1e-9
REDUCED_COST_TOL = 1e-10
_PIVOT_TOL = 1e-11
_MAX_ITER = 10000

_OPTIMAL, _INFEASIBLE, _UNBOUNDED, _STALLED = 0, 1, 2, 3


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """max objective . x  s.t.  constraints @ x <= rhs,  lower <= x <= upper."""

    objective: np.ndarray
    constraints: np.ndarray
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "objective", np.asarray(self.objective, dtype=float))
        rows = np.asarray(self.constraints, dtype=float)
        if rows.ndim != 2:
            rows = rows.reshape(-1, self.objective.size) if self.objective.size else rows.reshape(0, 0)
        object.__setattr__(self, "constraints", rows)
        if rows.shape[1] != self.objective.size:
            raise ValueError("constraint columns must match the number of variables")
        object.__setattr__(self, "rhs", np.asarray(self.rhs, dtype=float))
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=float))
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=float))
        n = self.objective.size
        if self.lower.size != n or self.upper.size != n:
            raise ValueError("bounds must match the number of variables")
        if self.rhs.size != self.constraints.shape[0]:
            raise ValueError("rhs must match the number of rows")
        if not np.all(np.isfinite(self.lower)):
            raise ValueError("lower bounds must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bounds must not exceed upper bounds")
        if not (np.all(np.isfinite(self.objective)) and np.all(np.isfinite(self.constraints))):
            raise ValueError("objective and constraints must be finite")
        if not np.all(np.isfinite(self.rhs)):
            raise ValueError("rhs must be finite")


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: np.ndarray | None
    objective_value: float | None
    pivots: int  # simplex iterations, bound flips included; a deterministic work measure


def _kernel(c, A, b, lo_s, hi_s):
    m, n = A.shape

    # Structural variables start at their lower bounds; slack i picks up the
    # residual of row i.  Rows with negative residual get an artificial
    # variable (the row is negated so the artificial column is +e_i).
    resid = np.empty(m)
    for i in range(m):
        acc = b[i]
        for j in range(n):
            acc -= A[i, j] * lo_s[j]
        resid[i] = acc
    n_art = 0
    for i in range(m):
        if resid[i] < 0.0:
            n_art += 1

    total = n + m + n_art
    T = np.zeros((m, total))
    lo = np.empty(total)
    hi = np.empty(total)
    v = np.empty(total)
    basis = np.empty(m, dtype=np.int64)
    in_basis = np.zeros(total, dtype=np.bool_)
    at_upper = np.zeros(total, dtype=np.bool_)
    is_art = np.zeros(total, dtype=np.bool_)

    for j in range(n):
        lo[j] = lo_s[j]
        hi[j] = hi_s[j]
        v[j] = lo_s[j]
    for i in range(m):
        lo[n + i] = 0.0
        hi[n + i] = math.inf
        v[n + i] = 0.0

    art = n + m
    for i in range(m):
        if resid[i] >= 0.0:
            for j in range(n):
                T[i, j] = A[i, j]
            T[i, n + i] = 1.0
            basis[i] = n + i
            in_basis[n + i] = True
            v[n + i] = resid[i]
        else:
            for j in range(n):
                T[i, j] = -A[i, j]
            T[i, n + i] = -1.0
            T[i, art] = 1.0
            lo[art] = 0.0
            hi[art] = math.inf
            v[art] = -resid[i]
            is_art[art] = True
            basis[i] = art
            in_basis[art] = True
            art += 1

    obj = np.zeros(total)
    pivots = 0

    for phase in range(2):
        if phase == 0:
            if n_art == 0:
                continue
            for j in range(total):
                obj[j] = -1.0 if is_art[j] else 0.0
        else:
            for j in range(total):
                obj[j] = c[j] if j < n else 0.0

        finished = False
        for _ in range(_MAX_ITER):
            entering = -1
            direction = 1.0
            for j in range(total):
                if in_basis[j] or hi[j] - lo[j] <= 0.0:
                    continue
                rc = obj[j]
                for i in range(m):
                    bi = basis[i]
                    if obj[bi] != 0.0:
                        rc -= obj[bi] * T[i, j]
                if not at_upper[j] and rc > REDUCED_COST_TOL:
                    entering = j
                    direction = 1.0
                    break
                if at_upper[j] and rc < -REDUCED_COST_TOL:
                    entering = j
                    direction = -1.0
                    break
            if entering < 0:
                finished = True
                break

            best = hi[entering] - lo[entering]
            leave_row = -1
            leave_to_upper = False
            for i in range(m):
                t = T[i, entering] * direction
                bi = basis[i]
                if t > _PIVOT_TOL:
                    room = (v[bi] - lo[bi]) / t
                    if room < best or (room == best and leave_row >= 0 and bi < basis[leave_row]):
                        best = room
                        leave_row = i
                        leave_to_upper = False
                elif t < -_PIVOT_TOL and not math.isinf(hi[bi]):
                    room = (hi[bi] - v[bi]) / (-t)
                    if room < best or (room == best and leave_row >= 0 and bi < basis[leave_row]):
                        best = room
                        leave_row = i
                        leave_to_upper = True
            if math.isinf(best):
                return _UNBOUNDED, v[:n].copy(), pivots

            if best < 0.0:
                best = 0.0
            v[entering] += direction * best
            for i in range(m):
                v[basis[i]] -= direction * best * T[i, entering]
            pivots += 1

            if leave_row < 0:
                at_upper[entering] = not at_upper[entering]
                continue

            leaving = basis[leave_row]
            piv = T[leave_row, entering]
            inv = 1.0 / piv
            for j in range(total):
                T[leave_row, j] *= inv
            for i in range(m):
                if i != leave_row:
                    factor = T[i, entering]
                    if factor != 0.0:
                        for j in range(total):
                            T[i, j] -= factor * T[leave_row, j]
            basis[leave_row] = entering
            in_basis[entering] = True
            in_basis[leaving] = False
            at_upper[entering] = False
            at_upper[leaving] = leave_to_upper
            v[leaving] = hi[leaving] if leave_to_upper else lo[leaving]
        if not finished:
            return _STALLED, v[:n].copy(), pivots

        if phase == 0:
            infeas = 0.0
            for j in range(total):
                if is_art[j]:
                    infeas += v[j]
            if infeas > FEASIBILITY_TOL:
                return _INFEASIBLE, v[:n].copy(), pivots
            # Lock artificials at zero.  Basic ones sit in all-zero rows
            # (redundant constraints) or get pivoted out degenerately.
            for j in range(total):
                if is_art[j]:
                    lo[j] = 0.0
                    hi[j] = 0.0
                    v[j] = 0.0
            for i in range(m):
                if is_art[basis[i]]:
                    target = -1
                    for j in range(total):
                        if not is_art[j] and not in_basis[j] and abs(T[i, j]) > 1e-9:
                            target = j
                            break
                    if target >= 0:
                        leaving = basis[i]
                        piv = T[i, target]
                        inv = 1.0 / piv
                        for j in range(total):
                            T[i, j] *= inv
                        for r in range(m):
                            if r != i:
                                factor = T[r, target]
                                if factor != 0.0:
                                    for j in range(total):
                                        T[r, j] -= factor * T[i, j]
                        basis[i] = target
                        in_basis[target] = True
                        in_basis[leaving] = False
                        at_upper[leaving] = False
                        v[leaving] = 0.0
                        pivots += 1

    return _OPTIMAL, v[:n].copy(), pivots


try:  # pragma: no cover - exercised implicitly by every test
    from numba import njit

    _kernel = njit(cache=True)(_kernel)
except ImportError:  # pragma: no cover
    pass


def solve_lp(problem: LinearProgram) -> LpSolution:
    """Solve a small bounded LP; statuses are optimal, infeasible or unbounded."""
    code, x, pivots = _kernel(
        problem.objective,
        problem.constraints,
        problem.rhs,
        problem.lower,
        problem.upper,
    )
    if code == _STALLED:
        raise RuntimeError("simplex exceeded its iteration cap")
    if code == _OPTIMAL:
        value = float(np.dot(problem.objective, x))
        return LpSolution(LpStatus.OPTIMAL, x, value, pivots)
    if code == _INFEASIBLE:
        return LpSolution(LpStatus.INFEASIBLE, None, None, pivots)
    return LpSolution(LpStatus.UNBOUNDED, None, None, pivots)
