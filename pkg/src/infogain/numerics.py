"""RK4 integration of the canonical system, cost evaluation, root finding.

Nothing here uses the region-wise closed forms of :mod:`closed_form`, so
these routines can serve as an independent check on the scheduler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT
from .errors import DomainError, NoBracket
from .problem import ScalarProblem
from .schedule import CanonicalTrajectory, GainSchedule


@dataclass(frozen=True)
class CostBreakdown:
    """Objective split into its two parts.

    ``mse_integral`` is the integrated error variance and ``mutual_info``
    the information rate integral in nats, so that
    ``total = mse_integral + 2 alpha mutual_info``.
    """

    mse_integral: float
    mutual_info: float
    total: float

    def to_dict(self) -> dict:
        return {"mse_integral": self.mse_integral, "mutual_info": self.mutual_info,
                "total": self.total}


def find_root(f, lo: float, hi: float, tol: float = DEFAULT.root_t,
              maxiter: int = DEFAULT.root_maxiter) -> float:
    """Root of ``f`` on ``[lo, hi]`` given a sign change (Brent's method)."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        raise NoBracket(f"no sign change on [{lo}, {hi}]",
                        {"f_lo": f_lo, "f_hi": f_hi, "lo": lo, "hi": hi})
    return brentq(f, lo, hi, xtol=tol, maxiter=maxiter)


def riccati_flow(x0, u, a: float, tau):
    """Exact flow of ``xdot = 1 + 2 a x - u x^2`` over time ``tau``.

    Returns ``(x(tau), integral of x over [0, tau])`` for constant ``u`` in
    ``[0, 1]``.  Works elementwise on arrays, including complex ``u`` for
    complex-step differentiation.  Writing ``x = r + y`` with ``r`` the
    positive equilibrium, ``y`` solves a logistic equation::

        s = sqrt(a^2 + u),  r = 1 / (s - a)
        y(tau) = y0 e^{-2 s tau} / (1 + y0 u (1 - e^{-2 s tau}) / (2 s))
        int y  = log1p(y0 u (1 - e^{-2 s tau}) / (2 s)) / u

    which stays smooth as ``u -> 0``.
    """
    s = np.sqrt(a * a + u)
    r = 1.0 / (s - a)
    y0 = x0 - r
    decay = np.exp(-2.0 * s * tau)
    q = y0 * (-np.expm1(-2.0 * s * tau)) / (2.0 * s)
    z = u * q
    x_tau = r + y0 * decay / (1.0 + z)
    small = np.abs(z) < 1e-6
    z_safe = np.where(small, 1.0, z)
    ratio = np.where(small, 1.0 - z / 2.0 + z * z / 3.0 - z ** 3 / 4.0, np.log1p(z_safe) / z_safe)
    return x_tau, r * tau + q * ratio


def riccati_step(x0: float, u: float, a: float, tau: float) -> float:
    """Scalar ``x(tau)`` of :func:`riccati_flow` without numpy overhead."""
    s = math.sqrt(a * a + u)
    r = 1.0 / (s - a)
    y0 = x0 - r
    z = u * y0 * (-math.expm1(-2.0 * s * tau)) / (2.0 * s)
    return r + y0 * math.exp(-2.0 * s * tau) / (1.0 + z)


# ------------------------------------------------------------------ RK4


def _grid(t0: float, t1: float, dt: float, breakpoints) -> np.ndarray:
    edges = sorted({t0, t1, *(b for b in breakpoints if t0 < b < t1)})
    pieces = []
    for lo, hi in zip(edges, edges[1:]):
        n = max(1, math.ceil((hi - lo) / dt - 1e-9))
        pieces.append(np.linspace(lo, hi, n + 1)[:-1])
    pieces.append(np.array([t1]))
    return np.concatenate(pieces)


def _control_stages(control, times):
    """Per-step control values at (left, mid, right) stage times."""
    if isinstance(control, Real):
        u = np.full(len(times) - 1, float(control))
        return u, u, u, []
    if isinstance(control, GainSchedule):
        mid = 0.5 * (times[:-1] + times[1:])
        u = np.asarray(control.u_at(mid), dtype=float)
        return u, u, u, control.breakpoints
    left = np.array([control(t) for t in times[:-1]], dtype=float)
    mid = np.array([control(0.5 * (a + b)) for a, b in zip(times[:-1], times[1:])], dtype=float)
    # the right stage takes the limit from inside the step
    right = np.array([control(np.nextafter(t, -np.inf)) for t in times[1:]], dtype=float)
    return left, mid, right, None


def _forward(problem: ScalarProblem, control, dt: float, breakpoints=()):
    if not dt > 0:
        raise DomainError("dt must be positive")
    if dt >= problem.horizon / 10.0:
        raise DomainError("dt must be smaller than a tenth of the horizon")
    bps = list(breakpoints)
    if isinstance(control, GainSchedule):
        bps += control.breakpoints
    times = _grid(problem.t0, problem.t1, dt, bps)
    u_l, u_m, u_r, _ = _control_stages(control, times)
    a, alpha = problem.a, problem.alpha
    n = len(times) - 1
    x = np.empty(n + 1)
    x[0] = xk = problem.x0
    mse = info = total = 0.0
    for k in range(n):
        h = times[k + 1] - times[k]
        ul, um, ur = u_l[k], u_m[k], u_r[k]
        x1 = xk
        k1 = 2.0 * a * x1 - ul * x1 * x1 + 1.0
        x2 = xk + 0.5 * h * k1
        k2 = 2.0 * a * x2 - um * x2 * x2 + 1.0
        x3 = xk + 0.5 * h * k2
        k3 = 2.0 * a * x3 - um * x3 * x3 + 1.0
        x4 = xk + h * k3
        k4 = 2.0 * a * x4 - ur * x4 * x4 + 1.0
        # RK4 on the quadrature components is Simpson's rule with the
        # stage states as midpoint estimates.
        w = h / 6.0
        mse += w * (x1 + 2.0 * x2 + 2.0 * x3 + x4)
        ux = w * (ul * x1 + 2.0 * um * (x2 + x3) + ur * x4)
        info += 0.5 * ux
        total += w * (x1 + 2.0 * x2 + 2.0 * x3 + x4) + alpha * ux
        xk = xk + w * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x[k + 1] = xk
    return times, x, (u_l, u_m, u_r), CostBreakdown(float(mse), float(info), float(total))


def integrate_canonical(problem: ScalarProblem, control, dt: float,
                        breakpoints=()) -> CanonicalTrajectory:
    """Forward RK4 for ``x`` from ``x0``, backward RK4 for ``p`` from 0.

    ``control`` is a float, a :class:`GainSchedule` (its switch times are
    put on the grid) or a callable ``t -> u``.  The backward sweep reads
    ``x`` between nodes from a cubic Hermite interpolant whose slopes come
    from the state equation.
    """
    times, x, (u_l, u_m, u_r), _ = _forward(problem, control, dt, breakpoints)
    a, alpha = problem.a, problem.alpha
    n = len(times) - 1
    p = np.empty(n + 1)
    p[n] = pk = 0.0
    for k in range(n - 1, -1, -1):
        h = times[k + 1] - times[k]
        ul, um, ur = u_l[k], u_m[k], u_r[k]
        xl, xr = x[k], x[k + 1]
        fl = 2.0 * a * xl - ul * xl * xl + 1.0
        fr = 2.0 * a * xr - ur * xr * xr + 1.0
        xm = 0.5 * (xl + xr) + 0.125 * h * (fl - fr)
        K1 = (2.0 * xr * ur - 2.0 * a) * pk - 1.0 - alpha * ur
        q = pk - 0.5 * h * K1
        K2 = (2.0 * xm * um - 2.0 * a) * q - 1.0 - alpha * um
        q = pk - 0.5 * h * K2
        K3 = (2.0 * xm * um - 2.0 * a) * q - 1.0 - alpha * um
        q = pk - h * K3
        K4 = (2.0 * xl * ul - 2.0 * a) * q - 1.0 - alpha * ul
        pk = pk - h / 6.0 * (K1 + 2.0 * K2 + 2.0 * K3 + K4)
        p[k] = pk
    u_nodes = np.append(u_l, u_r[-1])
    return CanonicalTrajectory(times, x, p, u_nodes)


def evaluate_cost(problem: ScalarProblem, control, dt: float, breakpoints=()) -> CostBreakdown:
    """Objective of ``control`` by RK4/Simpson on a grid of step ``<= dt``."""
    return _forward(problem, control, dt, breakpoints)[3]


def hamiltonian(x, p, u, a: float, alpha: float):
    """``x + alpha u x + p (2 a x - x^2 u + 1)``."""
    return x + alpha * u * x + p * (2.0 * a * x - x * x * u + 1.0)
