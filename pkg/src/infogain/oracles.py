"""Brute-force optimality oracles for the scalar problem.

Both search directly over controls using the exact constant-control flow
:func:`numerics.riccati_flow`; neither touches the region-wise solutions
used by the scheduler.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .numerics import evaluate_cost, riccati_flow, riccati_step
from .problem import Case, ScalarProblem, classify_case
from .schedule import GainSchedule, Segment, piecewise


@dataclass(frozen=True)
class PatternResult:
    best: GainSchedule
    cost: float
    grid_cost: float
    n_candidates: int


def candidate_levels(problem: ScalarProblem) -> list[float]:
    levels = [0.0, 1.0]
    if classify_case(problem).label is Case.B:
        u = min(1.0, max(0.0, problem.u_dwell))
        if 0.0 < u < 1.0:
            levels.insert(1, u)
    return levels


def _stage(x, u, a, alpha, tau):
    x_end, integral = riccati_flow(x, u, a, tau)
    return x_end, (1.0 + alpha * u) * integral


def oracle_pattern_search(problem: ScalarProblem, n_grid: int = DEFAULT.pattern_grid,
                          eval_steps: int = DEFAULT.pattern_eval_steps) -> PatternResult:
    """Best schedule with at most two switches on an ``n_grid``-point grid.

    Candidates are enumerated without repeats: neighbouring levels differ
    and switches sit at interior grid points.  Ties go to the
    lexicographically smallest (levels, switch times).  The winner is
    re-costed with :func:`numerics.evaluate_cost`.
    """
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    pr = problem
    a, alpha, x0 = pr.a, pr.alpha, pr.x0
    levels = candidate_levels(pr)
    grid = np.linspace(pr.t0, pr.t1, n_grid)
    inner = grid[1:-1]
    m = len(inner)
    i_idx, j_idx = np.triu_indices(m, k=1)
    results = []
    n_candidates = 0

    for u in levels:
        _, cost = _stage(x0, u, a, alpha, pr.horizon)
        results.append((float(cost), (u,), ()))
        n_candidates += 1
    if m:
        for u1, u2 in itertools.permutations(levels, 2):
            x1, c1 = _stage(x0, u1, a, alpha, inner - pr.t0)
            _, c2 = _stage(x1, u2, a, alpha, pr.t1 - inner)
            total = c1 + c2
            k = int(np.argmin(total))
            results.append((float(total[k]), (u1, u2), (float(inner[k]),)))
            n_candidates += m
    if len(i_idx):
        for u1 in levels:
            x1, c1 = _stage(x0, u1, a, alpha, inner - pr.t0)
            for u2 in levels:
                if u2 == u1:
                    continue
                x2, c2 = _stage(x1[i_idx], u2, a, alpha, inner[j_idx] - inner[i_idx])
                head = c1[i_idx] + c2
                for u3 in levels:
                    if u3 == u2:
                        continue
                    _, c3 = _stage(x2, u3, a, alpha, pr.t1 - inner[j_idx])
                    total = head + c3
                    k = int(np.argmin(total))
                    results.append((float(total[k]), (u1, u2, u3),
                                    (float(inner[i_idx[k]]), float(inner[j_idx[k]]))))
                    n_candidates += len(total)

    grid_cost, pattern, times = min(results, key=lambda r: (r[0], r[1], r[2]))
    best = piecewise(pr.t0, pr.t1, times, pattern)
    cost = evaluate_cost(pr, best, pr.horizon / eval_steps).total
    return PatternResult(best, cost, grid_cost, n_candidates)


# ------------------------------------------------------ direct transcription


@dataclass(frozen=True)
class DiscretizedControl:
    t_grid: np.ndarray
    u_values: np.ndarray
    cost: float
    iterations: int
    converged: bool

    @property
    def non_convergence(self) -> bool:
        return not self.converged

    def as_schedule(self) -> GainSchedule:
        segs = tuple(Segment(float(lo), float(hi), float(u))
                     for lo, hi, u in zip(self.t_grid, self.t_grid[1:], self.u_values))
        return GainSchedule(segs)


def _cells_forward(problem: ScalarProblem, u: np.ndarray, h: float):
    a, alpha = problem.a, problem.alpha
    x = np.empty(len(u) + 1)
    x[0] = problem.x0
    xi = float(problem.x0)
    for i, ui in enumerate(u.tolist()):
        xi = riccati_step(xi, ui, a, h)
        x[i + 1] = xi
    _, integral = riccati_flow(x[:-1], u, a, h)
    return x, integral


def cell_cost(problem: ScalarProblem, u: np.ndarray, h: float) -> float:
    _, integral = _cells_forward(problem, u, h)
    return float(np.sum((1.0 + problem.alpha * u) * integral))


def cell_cost_and_gradient(problem: ScalarProblem, u: np.ndarray, h: float):
    """Cost of a cellwise-constant control and its exact gradient.

    The costate at the cell edges comes from a backward sweep through the
    exact cell maps (derivatives by complex step), so the gradient
    component for cell i equals the integral of ``x (alpha - x p)`` over
    that cell.  Returns ``(cost, gradient, x_edges, p_edges)``.
    """
    a, alpha = problem.a, problem.alpha
    x, integral = _cells_forward(problem, u, h)
    eps = 1e-30
    xs = x[:-1]
    phi_x, int_x = riccati_flow(xs + 1j * eps, u, a, h)
    phi_u, int_u = riccati_flow(xs, u + 1j * eps, a, h)
    dphi_dx, dint_dx = phi_x.imag / eps, int_x.imag / eps
    dphi_du, dint_du = phi_u.imag / eps, int_u.imag / eps
    weight = 1.0 + alpha * u
    n = len(u)
    p = np.zeros(n + 1)
    for i in range(n - 1, -1, -1):
        p[i] = weight[i] * dint_dx[i] + p[i + 1] * dphi_dx[i]
    grad = alpha * integral + weight * dint_du + p[1:] * dphi_du
    return float(np.sum(weight * integral)), grad, x, p


def projected_stationarity(u: np.ndarray, g: np.ndarray, h: float) -> float:
    """``max |P(u - g/h) - u|``: zero exactly at a KKT point of the box problem.

    Dividing by the cell width turns each gradient component into the
    cell-average switching function, so the measure does not shrink with N.
    """
    return float(np.max(np.abs(np.clip(u - g / h, 0.0, 1.0) - u)))


def oracle_direct(problem: ScalarProblem, N: int = DEFAULT.direct_cells,
                  iters: int = DEFAULT.direct_iters, u_init: float = 0.5,
                  rel_decrease: float = DEFAULT.direct_rel_decrease,
                  stationarity: float = DEFAULT.direct_stationarity) -> DiscretizedControl:
    """Projected gradient descent over ``N`` equal cells.

    Steps follow the Barzilai-Borwein rule with Armijo backtracking along
    the projected direction.  The run stops at a point whose
    :func:`projected_stationarity` is below ``stationarity``, or when
    backtracking can no longer find a decrease in floating point.  Hitting
    ``iters`` with a relative decrease above ``rel_decrease`` in the last
    step sets the non-convergence flag.
    """
    if N < 10:
        raise ValueError("N must be at least 10")
    pr = problem
    h = pr.horizon / N
    t_grid = np.linspace(pr.t0, pr.t1, N + 1)
    u = np.full(N, float(u_init))
    J, g, _, _ = cell_cost_and_gradient(pr, u, h)
    step = 1.0 / max(np.max(np.abs(g)), 1e-300)
    converged = False
    decrease = math.inf
    k = 0
    for k in range(1, iters + 1):
        if projected_stationarity(u, g, h) <= stationarity:
            converged = True
            break
        d = np.clip(u - step * g, 0.0, 1.0) - u
        slope = float(g @ d)
        if slope >= 0:
            converged = True
            break
        lam = 1.0
        for _ in range(40):
            u_new = u + lam * d
            J_new = cell_cost(pr, u_new, h)
            if J_new <= J + 1e-4 * lam * slope:
                break
            lam *= 0.5
        else:
            # no representable decrease left along this direction
            converged = True
            break
        J_new, g_new, _, _ = cell_cost_and_gradient(pr, u_new, h)
        s_vec, y_vec = u_new - u, g_new - g
        sy = float(s_vec @ y_vec)
        step = float(s_vec @ s_vec) / sy if sy > 0 else 1e6 * step
        step = min(max(step, 1e-12), 1e12)
        decrease = (J - J_new) / max(abs(J), 1e-300)
        u, J, g = u_new, J_new, g_new
    else:
        converged = decrease <= rel_decrease
    return DiscretizedControl(t_grid, u, J, k, converged)


def structure_report(result: DiscretizedControl, schedule: GainSchedule,
                     tol: float = 1e-2, reach: int = 3) -> dict:
    """Compare a discretized control with a piecewise-constant schedule.

    A cell whose interior contains a switch time is a junction cell and is
    skipped.  Every other cell should sit within ``tol`` of the schedule
    level on that cell.  Misfits within ``reach`` cells of a switch are
    charged to it; the rest are counted as ``unassigned``.
    """
    edges = result.t_grid
    u = result.u_values
    switches = np.asarray(schedule.switch_times, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    junction = np.zeros(len(u), dtype=bool)
    for ts in switches:
        junction |= (lo < ts) & (ts < hi)
    expected = np.asarray(schedule.u_at(0.5 * (lo + hi)), dtype=float)
    misfit = (~junction) & (np.abs(u - expected) > tol)
    idx = np.flatnonzero(misfit)
    per_switch = [0] * len(switches)
    unassigned = 0
    for i in idx:
        mid = 0.5 * (lo[i] + hi[i])
        dist = np.abs(switches - mid) / (hi[i] - lo[i])
        if len(switches) and dist.min() <= reach:
            per_switch[int(np.argmin(dist))] += 1
        else:
            unassigned += 1
    return {
        "misfit_cells": idx.tolist(),
        "junction_cells": np.flatnonzero(junction).tolist(),
        "per_switch": per_switch,
        "unassigned": unassigned,
        "max_deviation": float(np.max(np.abs(u - expected)[~junction])) if (~junction).any() else 0.0,
    }
