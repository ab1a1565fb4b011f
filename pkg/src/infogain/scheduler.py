"""Optimal gain schedule for the scalar problem.

Every extremal ends on the Region-1 costate ``pbar`` that vanishes at
``t1``; what precedes it depends on the case (position of the stationary
point) and on where ``x0`` sits relative to the switching curve
``x p = alpha`` and the tangency point ``K = (sqrt(alpha), sqrt(alpha))``.

Subcases and their controls:

    A1, B1, B2, C1, C2   u = 0 throughout
    A2, B4, C3           u = 1, then 0
    B3                   u = 0, dwell at K with u*, then 0
    B5                   u = 1, dwell at K with u*, then 0
    C4                   u = 0, then 1, then 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_form as cf
from .config import DEFAULT, Tolerances
from .errors import NoBracket, NumericalFailure, SingularInput
from .numerics import find_root
from .problem import Case, ScalarProblem, classify_case
from .schedule import CanonicalTrajectory, GainSchedule, Segment


@dataclass(frozen=True)
class Piece:
    """One segment of the extremal with its closed-form state and costate."""

    t_start: float
    t_end: float
    u: float
    x: Callable
    p: Callable


@dataclass(frozen=True)
class Solution:
    problem: ScalarProblem
    schedule: GainSchedule
    pieces: tuple[Piece, ...]
    trajectory: CanonicalTrajectory

    def state(self, t):
        """``(x_t, p_t)`` from the piece covering ``t`` (right-continuous)."""
        piece = self.pieces[self.schedule.segment_index(t)]
        return float(piece.x(t)), float(piece.p(t))

    def switch_states(self):
        """Left and right limits of ``(x, p)`` at each switch time."""
        out = []
        for left, right in zip(self.pieces, self.pieces[1:]):
            t = left.t_end
            out.append((t, (float(left.x(t)), float(left.p(t))),
                        (float(right.x(t)), float(right.p(t)))))
        return out


def _const(value: float) -> Callable:
    return lambda t: value + 0.0 * np.asarray(t, dtype=float)


class _Builder:
    """Quantities shared by the case A, B and C rules for one problem."""

    def __init__(self, problem: ScalarProblem, tol: Tolerances):
        self.pr = problem
        self.tol = tol
        a, t0, t1 = problem.a, problem.t0, problem.t1
        self.s = problem.sqrt_alpha
        self.bar = cf.region1_solve(problem.x0, t0, t1, a)
        self.prod0 = problem.x0 * float(self.bar.p(t0))
        self.xbar_t1 = float(self.bar.x(t1))
        self.x_K = cf.terminal_tangency_state(a, problem.alpha)

    # final Region-1 arc with the terminal costate pbar
    def tail(self, t_start: float, x_start: float) -> Piece:
        pr = self.pr
        sol = cf.Region1Solution.through(pr.a, t_start, x_start, pr.t1, 0.0)
        return Piece(t_start, pr.t1, 0.0, sol.x, sol.p)

    def all_zero(self) -> list[Piece]:
        pr = self.pr
        return [Piece(pr.t0, pr.t1, 0.0, self.bar.x, self.bar.p)]

    def exit_time(self) -> float:
        return cf.case_b_boundary(self.pr.a, self.pr.alpha, self.pr.t1,
                                  self.tol.degenerate_log_arg)["t_doubleprime"]

    def downward_switch(self, r3, t_from: float) -> float | None:
        """Time ``t'`` in ``(t_from, t1)`` with ``xhat pbar = alpha`` on ``x > sqrt(alpha)``.

        ``r3`` is the Region-3 state through the start point.  Only
        crossings with ``x > sqrt(alpha)`` leave Region 3 downward; on
        that set the residual has a single root.
        """
        pr, s = self.pr, self.s
        resid = lambda t: float(r3.x(t)) * float(self.bar.p(t)) - pr.alpha
        x_start = float(r3.x(t_from))
        lo, hi = t_from, pr.t1
        x_eq = 1.0 / (pr.c - pr.a)
        if x_start > s:
            if x_eq < s and x_start > x_eq:
                hi = min(hi, r3.time_at_x(s))
        else:
            if not x_eq > s:
                return None
            lo = r3.time_at_x(s) if x_start < s else t_from
            if lo >= pr.t1:
                return None
        if resid(lo) < 0 or resid(hi) > 0:
            return None
        try:
            return find_root(resid, lo, hi, self.tol.root_t, self.tol.root_maxiter)
        except NoBracket:
            return None

    def one_then_zero(self, r3, t_sw: float) -> list[Piece]:
        pr = self.pr
        r3p = r3.with_costate(t_sw, float(self.bar.p(t_sw)))
        return [Piece(pr.t0, t_sw, 1.0, r3p.x, r3p.p), self.tail(t_sw, float(r3p.x(t_sw)))]

    def dwell(self, first: list[Piece], t_in: float, t_out: float) -> list[Piece]:
        pr = self.pr
        return first + [Piece(t_in, t_out, pr.u_dwell, _const(self.s), _const(self.s)),
                        self.tail(t_out, self.s)]


def _subcase_a(b: _Builder):
    pr = b.pr
    if b.prod0 <= pr.alpha:
        return "A1", b.all_zero()
    r3 = cf.region3_branch(pr.x0, pr.t0, pr.a, pr.alpha)
    t_sw = b.downward_switch(r3, pr.t0)
    if t_sw is None:
        raise NumericalFailure("subcase A2 has no switching time in (t0, t1)",
                               _diagnostics(b, r3))
    return "A2", b.one_then_zero(r3, t_sw)


def _subcase_b(b: _Builder):
    pr, s = b.pr, b.s
    if b.xbar_t1 <= b.x_K:
        return "B1", b.all_zero()
    if b.prod0 <= pr.alpha and pr.x0 > s:
        return "B2", b.all_zero()
    if pr.x0 <= s:
        # Region-1 arc up to K, dwell, exit along the terminal arc.
        t_in = b.bar.time_at_x(s) if pr.x0 < s else pr.t0
        t_out = b.exit_time()
        first = cf.Region1Solution.through(pr.a, pr.t0, pr.x0, t_in, s)
        return "B3", b.dwell([Piece(pr.t0, t_in, 0.0, first.x, first.p)], t_in, t_out)
    r3 = cf.region3_branch(pr.x0, pr.t0, pr.a, pr.alpha)
    t_sw = b.downward_switch(r3, pr.t0)
    if t_sw is not None:
        return "B4", b.one_then_zero(r3, t_sw)
    t_in = r3.time_at_x(s)
    t_out = b.exit_time()
    if t_in > t_out:
        raise NumericalFailure("subcase B5 reaches K after the exit time", _diagnostics(b, r3))
    r3p = r3.with_costate(t_in, s)
    return "B5", b.dwell([Piece(pr.t0, t_in, 1.0, r3p.x, r3p.p)], t_in, t_out)


def _subcase_c(b: _Builder):
    pr, s = b.pr, b.s
    if b.xbar_t1 <= b.x_K:
        return "C1", b.all_zero()
    if b.prod0 <= pr.alpha and pr.x0 > s:
        return "C2", b.all_zero()
    r3 = cf.region3_branch(pr.x0, pr.t0, pr.a, pr.alpha)
    t_sw = b.downward_switch(r3, pr.t0)
    if t_sw is not None:
        pieces = b.one_then_zero(r3, t_sw)
        if pr.x0 * float(pieces[0].p(pr.t0)) > pr.alpha:
            return "C3", pieces
    if pr.x0 > s:
        raise NumericalFailure("subcase C3 expected for x0 > sqrt(alpha)", _diagnostics(b, r3))
    return "C4", _shoot_c4(b)


def _c4_pieces(b: _Builder, t_up: float):
    """Candidate 0-1-0 extremal given the upward switch time.

    Returns ``(residual, pieces)``; the residual is ``x p - alpha`` at the
    upward switch and None when no admissible second switch exists.  The
    Region-3 costate is anchored at the downward switch, where it must equal
    ``pbar``, and evaluated backwards: forwards its homogeneous part grows
    like ``e^{2ct}`` and the residual would lose all precision on long arcs.
    """
    pr = b.pr
    x_up = float(b.bar.x(t_up))
    if not 0.0 < x_up < b.s:
        return None, None
    try:
        r3 = cf.region3_solve_x(x_up, t_up, pr.a, pr.alpha)
    except SingularInput:
        return None, None
    t_down = b.downward_switch(r3, t_up)
    if t_down is None:
        return None, None
    r3p = r3.with_costate(t_down, float(b.bar.p(t_down)))
    p_up = float(r3p.p(t_up))
    resid = x_up * p_up - pr.alpha
    first = cf.Region1Solution.through(pr.a, pr.t0, pr.x0, t_up, p_up)
    pieces = [Piece(pr.t0, t_up, 0.0, first.x, first.p),
              Piece(t_up, t_down, 1.0, r3p.x, r3p.p),
              b.tail(t_down, float(r3p.x(t_down)))]
    return resid, pieces


def _shoot_c4(b: _Builder) -> list[Piece]:
    pr, tol = b.pr, b.tol
    t_cap = b.bar.time_at_x(b.s) if b.xbar_t1 > b.s else pr.t1
    t_cap = min(t_cap, pr.t1)
    grid = np.linspace(pr.t0, t_cap, tol.c4_scan_points + 1)[:-1]
    values = [(_c4_pieces(b, t)[0], t) for t in grid]
    trace = [(t, r) for r, t in values]
    for (r_lo, t_lo), (r_hi, t_hi) in zip(values, values[1:]):
        if r_lo is None or r_hi is None:
            continue
        if r_lo == 0 or r_lo * r_hi < 0:
            f = lambda t: _c4_pieces(b, t)[0]
            t_up = find_root(f, t_lo, t_hi, tol.root_t, tol.root_maxiter)
            return _c4_pieces(b, t_up)[1]
    raise NumericalFailure("no bracketing interval for the C4 shooting residual",
                           {"trace": trace})


def _diagnostics(b: _Builder, r3) -> dict:
    pr = b.pr
    f = lambda t: float(r3.x(t)) * float(b.bar.p(t)) - pr.alpha
    return {"residual_t0": f(pr.t0), "residual_t1": f(pr.t1)}


def _sample(pieces, problem: ScalarProblem, n: int) -> CanonicalTrajectory:
    grid = np.linspace(problem.t0, problem.t1, n)
    ts, xs, ps, us = [], [], [], []
    for piece in pieces:
        inner = grid[(grid > piece.t_start) & (grid < piece.t_end)]
        t = np.concatenate(([piece.t_start], inner, [piece.t_end]))
        ts.append(t)
        xs.append(np.asarray(piece.x(t), dtype=float))
        ps.append(np.asarray(piece.p(t), dtype=float))
        us.append(np.full(t.shape, piece.u))
    x = np.concatenate(xs)
    p = np.concatenate(ps)
    # boundary conditions hold exactly by construction
    x[0] = problem.x0
    p[-1] = 0.0
    return CanonicalTrajectory(np.concatenate(ts), x, p, np.concatenate(us))


def _assemble(problem, case, subcase, pieces, tol) -> Solution:
    pieces = [pc for pc in pieces if pc.t_end > pc.t_start]
    segments = tuple(Segment(pc.t_start, pc.t_end, pc.u) for pc in pieces)
    schedule = GainSchedule(segments, case, subcase, tuple(pc.t_start for pc in pieces[1:]))
    return Solution(problem, schedule, tuple(pieces),
                    _sample(pieces, problem, tol.trajectory_points))


def _solve_case(problem: ScalarProblem, expected: Case, rule, tol: Tolerances) -> Solution:
    label = classify_case(problem, tol.threshold_rel).label
    if label is not expected:
        raise ValueError(f"problem is in case {label.value}, not {expected.value}")
    subcase, pieces = rule(_Builder(problem, tol))
    return _assemble(problem, label.value, subcase, pieces, tol)


def solve_case_a(problem: ScalarProblem, tol: Tolerances = DEFAULT) -> Solution:
    return _solve_case(problem, Case.A, _subcase_a, tol)


def solve_case_b(problem: ScalarProblem, tol: Tolerances = DEFAULT) -> Solution:
    return _solve_case(problem, Case.B, _subcase_b, tol)


def solve_case_c(problem: ScalarProblem, tol: Tolerances = DEFAULT) -> Solution:
    return _solve_case(problem, Case.C, _subcase_c, tol)


def solve(problem: ScalarProblem, tol: Tolerances = DEFAULT) -> Solution:
    """Optimal schedule and its canonical trajectory."""
    label = classify_case(problem, tol.threshold_rel).label
    solver = {Case.A: solve_case_a, Case.B: solve_case_b, Case.C: solve_case_c}[label]
    return solver(problem, tol)
