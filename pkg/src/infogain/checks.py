"""Residual checks of the necessary conditions and the oracle comparisons.

The same checks run on a scheduler :class:`~infogain.scheduler.Solution`
or, through :func:`solution_from_schedule`, on an arbitrary schedule whose
state and costate are integrated numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .numerics import evaluate_cost, hamiltonian, integrate_canonical
from .oracles import oracle_direct, oracle_pattern_search
from .problem import ScalarProblem
from .schedule import GainSchedule, piecewise
from .scheduler import Piece, Solution


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float
    passed: bool

    def row(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{self.name:<22} {self.value:12.3e} {self.limit:12.3e}  {flag}"


def _check(name, value, limit) -> Check:
    value = float(value)
    return Check(name, value, float(limit), bool(value <= limit))


def solution_from_schedule(problem: ScalarProblem, schedule: GainSchedule,
                           dt: float | None = None) -> Solution:
    """Wrap an RK4 trajectory of ``schedule`` in the :class:`Solution` shape.

    Pieces interpolate the integration nodes linearly; switch times are
    grid nodes, so each piece starts and ends on an exact node value.
    """
    dt = problem.horizon / 1e4 if dt is None else dt
    traj = integrate_canonical(problem, schedule, dt)
    pieces = []
    for seg in schedule.segments:
        mask = (traj.times >= seg.t_start) & (traj.times <= seg.t_end)
        ts, xs, ps = traj.times[mask], traj.x[mask], traj.p[mask]
        pieces.append(Piece(seg.t_start, seg.t_end, seg.u,
                            lambda t, ts=ts, xs=xs: np.interp(t, ts, xs),
                            lambda t, ts=ts, ps=ps: np.interp(t, ts, ps)))
    u = np.asarray(schedule.u_at(traj.times), dtype=float)
    traj = type(traj)(traj.times, traj.x, traj.p, u)
    return Solution(problem, schedule, tuple(pieces), traj)


def necessary_conditions(solution: Solution, tol: Tolerances = DEFAULT,
                         samples_per_segment: int = 100) -> list[Check]:
    """Boundary, switching, continuity, sign-rule and Hamiltonian checks."""
    pr = solution.problem
    alpha = pr.alpha
    first, last = solution.pieces[0], solution.pieces[-1]
    checks = [
        _check("initial state", abs(solution.trajectory.x[0] - pr.x0), 0.0),
        _check("terminal costate", abs(float(last.p(pr.t1))), tol.terminal_costate),
    ]
    # the first piece must also meet x0, up to the same tolerance as a switch
    switch_res, jump = 0.0, abs(float(first.x(pr.t0)) - pr.x0)
    for _, (xl, pl), (xr, pr_) in solution.switch_states():
        switch_res = max(switch_res, abs(xl * pl - alpha), abs(xr * pr_ - alpha))
        jump = max(jump, abs(xl - xr), abs(pl - pr_))
    checks.append(_check("switch residual", switch_res, tol.switch_residual))
    checks.append(_check("continuity", jump, tol.continuity))

    # sign rule: positive entries are violations
    worst = 0.0
    for piece in solution.pieces:
        t = np.linspace(piece.t_start, piece.t_end, samples_per_segment + 2)[1:-1]
        v = np.asarray(piece.x(t)) * np.asarray(piece.p(t)) - alpha
        if piece.u == 0.0:
            bad = v
        elif piece.u == 1.0:
            bad = -v
        else:
            bad = np.abs(v) - tol.switch_residual
        worst = max(worst, float(np.max(bad)))
    scale = tol.sign_rule * max(1.0, alpha)
    checks.append(Check("sign rule", worst, scale, bool(worst <= scale)))

    traj = solution.trajectory
    H = hamiltonian(traj.x, traj.p, traj.u, pr.a, alpha)
    checks.append(_check("hamiltonian std", np.std(H), tol.hamiltonian_rel * (1.0 + abs(np.mean(H)))))
    return checks


def oracle_checks(problem: ScalarProblem, schedule: GainSchedule, n_grid: int = DEFAULT.pattern_grid,
                  n_cells: int = DEFAULT.direct_cells) -> list[Check]:
    """Cost of ``schedule`` against the pattern-search and direct oracles."""
    cost = evaluate_cost(problem, schedule, problem.horizon / DEFAULT.pattern_eval_steps).total
    pattern = oracle_pattern_search(problem, n_grid)
    direct = oracle_direct(problem, n_cells)
    return [
        _check("pattern-search gap", cost - pattern.cost, 1e-5),
        _check("direct-oracle gap", abs(cost - direct.cost), 1e-3),
    ]


def perturb_switches(schedule: GainSchedule, delta: float) -> GainSchedule:
    """Shift every switch time by ``delta``, staying inside the horizon."""
    t0, t1 = schedule.t0, schedule.t1
    span = t1 - t0
    moved = [min(max(t + delta, t0 + 1e-6 * span), t1 - 1e-6 * span) for t in schedule.switch_times]
    return piecewise(t0, t1, moved, schedule.levels, schedule.case, schedule.subcase)
