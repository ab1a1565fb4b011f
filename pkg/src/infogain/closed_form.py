"""Analytic solutions of the scalar canonical system.

With control ``u`` the state/costate pair obeys

    xdot = 2 a x - x**2 u + 1
    pdot = 2 x p u - 2 a p - 1 - alpha u

For ``u = 0`` (Region 1, below the switching curve ``x p = alpha``) the
system is linear; for ``u = 1`` (Region 3, above it) the state equation is
a Riccati equation with an explicit solution.  Solutions are kept as
constants plus a formula so they can be evaluated at any time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DegenerateCase, DomainError, SingularInput


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self):
        if self.x < 0:
            raise DomainError("phase point must have x >= 0")


def vector_field(point, u, a, alpha):
    """Right-hand side of the canonical system at ``point`` under ``u``.

    ``point`` may be a :class:`PhasePoint` or an ``(x, p)`` pair of floats
    or arrays; ``u = 0`` gives f1, ``u = 1`` gives f3, anything between f2.
    """
    if isinstance(point, PhasePoint):
        x, p = point.x, point.p
    else:
        x, p = point
    xdot = 2.0 * a * x - x * x * u + 1.0
    pdot = 2.0 * x * p * u - 2.0 * a * p - 1.0 - alpha * u
    return xdot, pdot


# ---------------------------------------------------------------- Region 1


@dataclass(frozen=True)
class Region1Solution:
    """``x = (k1 e^{2at} - 1)/(2a)``, ``p = (k2 e^{-2at} - 1)/(2a)``."""

    a: float
    k1: float
    k2: float

    def x(self, t):
        return (self.k1 * np.exp(2.0 * self.a * t) - 1.0) / (2.0 * self.a)

    def p(self, t):
        return (self.k2 * np.exp(-2.0 * self.a * t) - 1.0) / (2.0 * self.a)

    def time_at_x(self, value: float) -> float:
        """Time at which the state passes through ``value``."""
        if self.k1 == 0:
            raise SingularInput("state sits at the Region-1 equilibrium")
        ratio = (2.0 * self.a * value + 1.0) / self.k1
        if not ratio > 0:
            raise SingularInput(f"state never reaches {value!r} on this solution")
        return math.log(ratio) / (2.0 * self.a)

    @classmethod
    def through(cls, a, t_x, x_value, t_p, p_value) -> "Region1Solution":
        """Solution with ``x(t_x) = x_value`` and ``p(t_p) = p_value``."""
        k1 = (2.0 * a * x_value + 1.0) * math.exp(-2.0 * a * t_x)
        k2 = (2.0 * a * p_value + 1.0) * math.exp(2.0 * a * t_p)
        return cls(a, k1, k2)


def region1_solve(x0: float, t0: float, t1: float, a: float) -> Region1Solution:
    """Region-1 solution with ``x(t0) = x0`` and ``p(t1) = 0``."""
    return Region1Solution.through(a, t0, x0, t1, 0.0)


# ---------------------------------------------------------------- Region 3


@dataclass(frozen=True)
class Region3Solution:
    """Region-3 solution with ``c = sqrt(a^2 + 1)``.

        x = a + c - 2c / (k3 e^{2ct} + 1)
        p = k4 (k3 e^{2ct} + 1)^2 / e^{2ct} + (1 + alpha)(k3 e^{2ct} + 1) / (2 c k3 e^{2ct})

    ``k3`` is held as ``sign * exp(log_abs_k3)`` so that ``k3 e^{2ct}`` is
    formed in log space.  The homogeneous costate term is stored relative
    to its value at the anchor time, ``coef * g(t)^2 / g(t_anchor)^2`` with
    ``g = k3 e^{ct} + e^{-ct}``, which stays finite where ``k4`` itself
    would overflow.  Both are None until the costate has been anchored.
    """

    a: float
    alpha: float
    c: float
    log_abs_k3: float
    k3_sign: float
    t_anchor: float | None = None
    coef: float | None = None

    @property
    def k3(self) -> float:
        return self.k3_sign * math.exp(self.log_abs_k3)

    @property
    def k4(self) -> float | None:
        if self.coef is None:
            return None
        g = self.k3 * math.exp(self.c * self.t_anchor) + math.exp(-self.c * self.t_anchor)
        return self.coef / (g * g)

    def _k3_exp(self, t, scale):
        return self.k3_sign * np.exp(self.log_abs_k3 + scale * self.c * t)

    def x(self, t):
        w = self._k3_exp(t, 2.0) + 1.0
        return self.a + self.c - 2.0 * self.c / w

    def p_particular(self, t):
        return (1.0 + self.alpha) * (1.0 + 1.0 / self._k3_exp(t, 2.0)) / (2.0 * self.c)

    def _log_g(self, t):
        """``(m, r)`` with ``g(t) = e^m r``, where ``|r| <= 2``."""
        t = np.asarray(t, dtype=float)
        e1 = self.log_abs_k3 + self.c * t
        e2 = -self.c * t
        m = np.maximum(e1, e2)
        return m, self.k3_sign * np.exp(e1 - m) + np.exp(e2 - m)

    def p_homogeneous(self, t):
        # (k3 e^{2ct} + 1)^2 / e^{2ct} == (k3 e^{ct} + e^{-ct})^2
        m, r = self._log_g(t)
        return np.exp(2.0 * m) * r * r

    def homogeneous_ratio(self, t, t_ref):
        """``p_homogeneous(t) / p_homogeneous(t_ref)`` without overflow."""
        m, r = self._log_g(t)
        m0, r0 = self._log_g(t_ref)
        return np.exp(2.0 * (m - m0)) * (r / r0) ** 2

    def p(self, t):
        if self.coef is None:
            raise SingularInput("costate constant k4 has not been set")
        return self.coef * self.homogeneous_ratio(t, self.t_anchor) + self.p_particular(t)

    def time_at_x(self, value: float) -> float:
        """Time at which the state passes through ``value``."""
        gap = self.a + self.c - value
        if gap == 0:
            raise SingularInput("stationary value is reached only asymptotically")
        ratio = (2.0 * self.c / gap - 1.0) * self.k3_sign
        if not ratio > 0:
            raise SingularInput(f"state never reaches {value!r} on this solution")
        return (math.log(ratio) - self.log_abs_k3) / (2.0 * self.c)

    def with_costate(self, t_anchor: float, p_anchor: float) -> "Region3Solution":
        return region3_solve_p(self, t_anchor, p_anchor)


@dataclass(frozen=True)
class Region3Constant:
    """Region-3 branch sitting on the state equilibrium ``x = a + c``.

    Here the costate equation is ``pdot = 2 c p - (1 + alpha)`` so
    ``p = (1 + alpha)/(2c) + k e^{2ct}``.
    """

    a: float
    alpha: float
    c: float
    k: float | None = None

    @property
    def x_e(self) -> float:
        return 1.0 / (self.c - self.a)

    def x(self, t):
        return self.x_e + 0.0 * np.asarray(t, dtype=float)

    def p(self, t):
        if self.k is None:
            raise SingularInput("costate constant has not been set")
        base = (1.0 + self.alpha) / (2.0 * self.c)
        return base + self.k * np.exp(2.0 * self.c * np.asarray(t, dtype=float))

    def time_at_x(self, value: float) -> float:
        raise SingularInput("state is constant on the stationary branch")

    def with_costate(self, t_anchor: float, p_anchor: float) -> "Region3Constant":
        base = (1.0 + self.alpha) / (2.0 * self.c)
        k = (p_anchor - base) * math.exp(-2.0 * self.c * t_anchor)
        return Region3Constant(self.a, self.alpha, self.c, k)


def region3_solve_x(x0: float, t0: float, a: float, alpha: float = 1.0,
                    tol: float = DEFAULT.singular_k3) -> Region3Solution:
    """Region-3 state solution through ``x(t0) = x0``.

    Raises SingularInput on the stationary branch ``x0 = a + c`` where the
    ``k3`` formula has a pole; use :func:`region3_branch` to get the
    constant solution there instead.
    """
    c = math.sqrt(a * a + 1.0)
    x_e = 1.0 / (c - a)
    if abs(x0 - x_e) < tol:
        raise SingularInput("x0 equals a + c; the state solution is constant")
    ratio = (c - a + x0) / (c + a - x0)
    if ratio == 0:
        raise SingularInput("k3 vanishes for x0 = a - c")
    return Region3Solution(a, alpha, c, math.log(abs(ratio)) - 2.0 * c * t0,
                           math.copysign(1.0, ratio))


def region3_branch(x0: float, t0: float, a: float, alpha: float):
    """Region-3 state solution, falling back to the constant branch."""
    try:
        return region3_solve_x(x0, t0, a, alpha)
    except SingularInput:
        return Region3Constant(a, alpha, math.sqrt(a * a + 1.0))


def region3_solve_p(solution: Region3Solution, t_anchor: float, p_anchor: float) -> Region3Solution:
    """Fix ``k4`` so that ``p(t_anchor) = p_anchor``."""
    if solution.k3_sign == 0 or not math.isfinite(solution.log_abs_k3):
        raise SingularInput("k3 must be nonzero")
    particular = float(solution.p_particular(t_anchor))
    _, r = solution._log_g(t_anchor)
    if r == 0:
        raise SingularInput("homogeneous costate term vanishes at the anchor")
    return Region3Solution(solution.a, solution.alpha, solution.c, solution.log_abs_k3,
                           solution.k3_sign, float(t_anchor), p_anchor - particular)


def region3_from_constants(a: float, alpha: float, k3: float, k4: float | None = None) -> Region3Solution:
    if k3 == 0:
        raise SingularInput("k3 must be nonzero")
    c = math.sqrt(a * a + 1.0)
    sol = Region3Solution(a, alpha, c, math.log(abs(k3)), math.copysign(1.0, k3))
    if k4 is None:
        return sol
    # anchor at t = 0, where the homogeneous term equals (k3 + 1)^2
    return Region3Solution(a, alpha, c, sol.log_abs_k3, sol.k3_sign, 0.0, k4 * (k3 + 1.0) ** 2)


# ---------------------------------------------------- switching surface


def switching_values(point: PhasePoint, alpha: float) -> dict:
    """Level-set value ``V = x p - alpha`` and the Lie derivative on S.

    On ``x p = alpha`` all three vector fields give the same derivative
    ``alpha/x - x``: positive (upward crossing) for ``x < sqrt(alpha)``,
    negative for ``x > sqrt(alpha)`` and zero at the tangency point.
    """
    if point.x <= 0:
        raise DomainError("switching values need x > 0")
    return {"V": point.x * point.p - alpha, "lie": alpha / point.x - point.x}


def terminal_tangency_state(a: float, alpha: float) -> float:
    """State reached at ``t1`` by the Region-1 solution leaving (sqrt(alpha), sqrt(alpha))."""
    return 2.0 * a * alpha + 2.0 * math.sqrt(alpha)


def case_b_boundary(a: float, alpha: float, t1: float,
                    tol: float = DEFAULT.degenerate_log_arg) -> dict:
    """``x_K`` and the exit time ``t''`` from the tangency point."""
    arg = 2.0 * a * math.sqrt(alpha) + 1.0
    if arg <= tol:
        raise DegenerateCase(f"2 a sqrt(alpha) + 1 = {arg:.3g}; exit time diverges")
    return {
        "x_K": terminal_tangency_state(a, alpha),
        "t_doubleprime": t1 - math.log(arg) / (2.0 * a),
    }


# ------------------------------------------------------------ phase field


def region_label(x, p, alpha, tol=0.0):
    """Vectorised region label: 1 below S, 2 on S, 3 above S."""
    v = np.asarray(x) * np.asarray(p) - alpha
    return np.where(v < -tol, 1, np.where(v > tol, 3, 2))


def phase_field(a: float, alpha: float, x_range, p_range, nx: int, ny: int) -> dict:
    """Sample the switched vector field on a rectangular (x, p) grid.

    Returns a dict of flat arrays ``x, p, u, xdot, pdot, region`` with
    ``x`` varying fastest.  On S the dwell control is used, clipped to
    ``[0, 1]``.
    """
    if nx < 1 or ny < 1:
        raise DomainError("grid must have at least one point per axis")
    if x_range[0] < 0 or x_range[1] < x_range[0] or p_range[1] < p_range[0]:
        raise DomainError("invalid phase-plane bounds")
    xs = np.linspace(x_range[0], x_range[1], nx)
    ps = np.linspace(p_range[0], p_range[1], ny)
    X, P = np.meshgrid(xs, ps)
    X, P = X.ravel(), P.ravel()
    region = region_label(X, P, alpha, tol=1e-12 * max(alpha, 1.0))
    u_dwell = min(1.0, max(0.0, 2.0 * a / math.sqrt(alpha) + 1.0 / alpha))
    u = np.where(region == 1, 0.0, np.where(region == 3, 1.0, u_dwell))
    xdot, pdot = vector_field((X, P), u, a, alpha)
    return {"x": X, "p": P, "u": u, "xdot": xdot, "pdot": pdot, "region": region}


def switching_curve(alpha: float, x_range, n: int) -> dict:
    """Polyline samples of ``p = alpha / x`` for ``x > 0``."""
    lo = max(x_range[0], 1e-12)
    xs = np.linspace(lo, x_range[1], n)
    return {"x": xs, "p": alpha / xs}
