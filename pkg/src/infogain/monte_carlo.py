"""Monte Carlo check of the filter error and the Duncan information identity.

Each path simulates the source ``dx = a x dt + dw`` with ``x_{t0} ~ N(0, x0)``,
the sensor ``dy = C_t x dt + dv`` and the Kalman-Bucy filter

    dxhat = a xhat dt + X_t C_t (dy - C_t xhat dt),   xhat_{t0} = 0,

by Euler-Maruyama.  ``X_t`` is the deterministic error variance, computed
once by RK4 and read by index.  Noise for path ``i`` comes from Philox
streams keyed by ``(seed, i, stream)``, so a path's draws do not depend on
how paths are batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DomainError
from .numerics import evaluate_cost
from .problem import ScalarProblem, gain_from_control
from .schedule import GainSchedule

_STREAM_INIT, _STREAM_W, _STREAM_V = 0, 1, 2


@dataclass(frozen=True)
class MCEstimate:
    value: float
    std_error: float
    n_paths: int
    dt: float

    def __post_init__(self):
        if not self.std_error >= 0:
            raise DomainError("std_error must be nonnegative")
        if self.n_paths < 1:
            raise DomainError("n_paths must be at least 1")

    @classmethod
    def from_samples(cls, samples: np.ndarray, dt: float) -> "MCEstimate":
        n = len(samples)
        std = float(np.std(samples, ddof=1)) if n > 1 else 0.0
        return cls(float(np.mean(samples)), std / math.sqrt(n), n, dt)

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error}


@dataclass(frozen=True)
class PathState:
    """State of one path after a step."""

    x: float
    xhat: float
    y_increment: float


@dataclass(frozen=True)
class SimulationResult:
    mse: MCEstimate
    mi_duncan: MCEstimate
    mi_riccati: float
    # integral of X_t, the value mse should reproduce
    mse_riccati: float
    orthogonality: MCEstimate
    n_paths: int
    dt: float
    seed: int
    # per-path integrals, kept only on request
    samples: dict | None = None


def _path_streams(seed: int, path: int, n_steps: int):
    draws = []
    for stream, size in ((_STREAM_INIT, 1), (_STREAM_W, n_steps), (_STREAM_V, n_steps)):
        ss = np.random.SeedSequence(seed, spawn_key=(path, stream))
        draws.append(np.random.Generator(np.random.Philox(ss)).standard_normal(size))
    return draws


def riccati_nodes(problem: ScalarProblem, schedule: GainSchedule, times: np.ndarray) -> np.ndarray:
    """``X_t`` at ``times`` by RK4, splitting each step at switch times."""
    a = problem.a
    bps = np.asarray(schedule.breakpoints[1:-1], dtype=float)
    out = np.empty(len(times))
    out[0] = xk = problem.x0
    for k in range(len(times) - 1):
        lo, hi = times[k], times[k + 1]
        inner = bps[(bps > lo) & (bps < hi)]
        edges = [lo, *inner.tolist(), hi]
        for t_a, t_b in zip(edges, edges[1:]):
            u = schedule.u_at(0.5 * (t_a + t_b))
            h = t_b - t_a
            f = lambda x: 2.0 * a * x - u * x * x + 1.0
            k1 = f(xk)
            k2 = f(xk + 0.5 * h * k1)
            k3 = f(xk + 0.5 * h * k2)
            k4 = f(xk + h * k3)
            xk = xk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = xk
    return out


def simulate(problem: ScalarProblem, schedule: GainSchedule, n_paths: int,
             dt: float = DEFAULT.mc_dt, seed: int = 0, gain_fn=gain_from_control,
             filter_gain_scale: float = 1.0, chunk: int = 1000,
             keep_samples: bool = False) -> SimulationResult:
    """Simulate ``n_paths`` source/sensor/filter paths under ``schedule``.

    ``gain_fn`` maps the control to the channel gain ``C_t`` (``sqrt(u)`` by
    default) and ``filter_gain_scale`` multiplies the Kalman gain; both are
    hooks for mutation tests.  Per-path integrals use left-point sums on a
    uniform grid of ``round(T / dt)`` steps.
    """
    pr = problem
    if n_paths < 100:
        raise DomainError("n_paths must be at least 100")
    if not dt > 0 or dt > 1e-2 * pr.horizon:
        raise DomainError("dt must be positive and at most 1% of the horizon")
    if abs(schedule.t0 - pr.t0) > 1e-12 or abs(schedule.t1 - pr.t1) > 1e-12:
        raise DomainError("schedule does not cover the problem horizon")
    n_steps = int(round(pr.horizon / dt))
    h = pr.horizon / n_steps
    times = pr.t0 + h * np.arange(n_steps + 1)
    X = riccati_nodes(pr, schedule, times)
    u = np.asarray(schedule.u_at(times[:-1] + 0.5 * h), dtype=float)
    C = np.array([gain_fn(float(v)) for v in u])
    K = filter_gain_scale * X[:-1] * C
    a, sqrt_h = pr.a, math.sqrt(h)

    mse = np.empty(n_paths)
    duncan = np.empty(n_paths)
    ortho = np.empty(n_paths)
    for start in range(0, n_paths, chunk):
        paths = range(start, min(start + chunk, n_paths))
        draws = [_path_streams(seed, i, n_steps) for i in paths]
        x = math.sqrt(pr.x0) * np.array([d[0][0] for d in draws])
        dw = sqrt_h * np.stack([d[1] for d in draws], axis=1)
        dv = sqrt_h * np.stack([d[2] for d in draws], axis=1)
        xhat = np.zeros_like(x)
        err_int = np.zeros_like(x)
        info_int = np.zeros_like(x)
        for k in range(n_steps):
            err2 = (x - xhat) ** 2
            err_int += err2 * h
            info_int += (C[k] * C[k] * h) * err2
            dy = C[k] * x * h + dv[k]
            xhat = xhat + a * xhat * h + K[k] * (dy - C[k] * xhat * h)
            x = x + a * x * h + dw[k]
        sl = slice(start, start + len(paths))
        mse[sl] = err_int
        duncan[sl] = 0.5 * info_int
        ortho[sl] = xhat * (x - xhat)

    ref = evaluate_cost(pr, schedule, min(h, pr.horizon / 1e4))
    return SimulationResult(
        mse=MCEstimate.from_samples(mse, h),
        mi_duncan=MCEstimate.from_samples(duncan, h),
        mi_riccati=ref.mutual_info,
        mse_riccati=ref.mse_integral,
        orthogonality=MCEstimate.from_samples(ortho, h),
        n_paths=n_paths,
        dt=h,
        seed=seed,
        samples={"mse": mse, "mi_duncan": duncan, "orthogonality": ortho} if keep_samples else None,
    )


def simulate_path(problem: ScalarProblem, schedule: GainSchedule, dt: float,
                  seed: int, path: int = 0) -> list[PathState]:
    """Step-by-step record of a single path, same draws as :func:`simulate`."""
    pr = problem
    n_steps = int(round(pr.horizon / dt))
    h = pr.horizon / n_steps
    times = pr.t0 + h * np.arange(n_steps + 1)
    X = riccati_nodes(pr, schedule, times)
    z0, w, v = _path_streams(seed, path, n_steps)
    x, xhat = math.sqrt(pr.x0) * float(z0[0]), 0.0
    states = [PathState(x, xhat, 0.0)]
    for k in range(n_steps):
        c = gain_from_control(float(schedule.u_at(times[k] + 0.5 * h)))
        dy = c * x * h + math.sqrt(h) * v[k]
        xhat = xhat + pr.a * xhat * h + X[k] * c * (dy - c * xhat * h)
        x = x + pr.a * x * h + math.sqrt(h) * w[k]
        states.append(PathState(x, xhat, dy))
    return states


@dataclass(frozen=True)
class DuncanReport:
    identity_gap: float
    within_3se: bool

    def to_dict(self) -> dict:
        return {"identity_gap": self.identity_gap, "within_3se": self.within_3se}


def duncan_report(sim: SimulationResult) -> DuncanReport:
    """Compare the path estimate of the information with ``1/2 int u X dt``."""
    gap = abs(sim.mi_duncan.value - sim.mi_riccati)
    return DuncanReport(gap, bool(gap <= 3.0 * sim.mi_duncan.std_error))


def report_dict(sim: SimulationResult) -> dict:
    """Flat summary in the layout of the MC report file."""
    return {
        "mse": sim.mse.to_dict(),
        "mi_duncan": sim.mi_duncan.to_dict(),
        "mi_riccati": sim.mi_riccati,
        "identity_gap": duncan_report(sim).identity_gap,
        "n_paths": sim.n_paths,
        "dt": sim.dt,
        "seed": sim.seed,
    }
