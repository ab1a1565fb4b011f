"""Scalar problem data, case classification and stationary points.

The scalar instance is a stable source ``dx = a x dt + dw`` observed
through ``dy = C_t x dt + dv``.  The control is ``u_t = C_t**2`` in
``[0, 1]`` and the state is the filter error variance ``x_t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from enum import Enum

from .config import DEFAULT
from .errors import DomainError


@dataclass(frozen=True)
class ScalarProblem:
    a: float
    alpha: float
    x0: float
    t0: float
    t1: float

    def __post_init__(self):
        for name in ("a", "alpha", "x0", "t0", "t1"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.a >= 0:
            raise DomainError("a must be negative")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if self.x0 < 0:
            raise DomainError("x0 must be nonnegative")
        if self.t1 <= self.t0:
            raise DomainError("t1 must be greater than t0")

    @property
    def c(self) -> float:
        return math.sqrt(self.a * self.a + 1.0)

    @property
    def horizon(self) -> float:
        return self.t1 - self.t0

    @property
    def sqrt_alpha(self) -> float:
        return math.sqrt(self.alpha)

    @property
    def u_dwell(self) -> float:
        """Intermediate control that holds (sqrt(alpha), sqrt(alpha)) still."""
        return 2.0 * self.a / self.sqrt_alpha + 1.0 / self.alpha

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScalarProblem":
        try:
            return cls(*(float(data[k]) for k in ("a", "alpha", "x0", "t0", "t1")))
        except KeyError as exc:
            raise DomainError(f"missing problem field {exc.args[0]!r}") from None


def validate_problem(a, alpha, x0, t0, t1) -> ScalarProblem:
    return ScalarProblem(float(a), float(alpha), float(x0), float(t0), float(t1))


class Case(str, Enum):
    A = "A"
    B = "B"
    C = "C"


def case_thresholds(a: float) -> tuple[float, float]:
    """Return ``((a + sqrt(a^2+1))^2, 1/(4 a^2))``.

    ``a + sqrt(a^2+1)`` is evaluated as ``1/(sqrt(a^2+1) - a)`` to avoid
    cancellation for large ``|a|``.
    """
    low = (1.0 / (math.sqrt(a * a + 1.0) - a)) ** 2
    high = 1.0 / (4.0 * a * a)
    return low, high


@dataclass(frozen=True)
class CaseLabel:
    label: Case
    threshold_low: float
    threshold_high: float
    near_boundary: bool = False


def classify_case(problem: ScalarProblem, rel_tol: float = DEFAULT.threshold_rel) -> CaseLabel:
    low, high = case_thresholds(problem.a)
    alpha = problem.alpha
    near = abs(alpha - low) <= rel_tol * low or abs(alpha - high) <= rel_tol * high
    if near:
        label = Case.B
    elif alpha > high:
        label = Case.A
    elif alpha < low:
        label = Case.C
    else:
        label = Case.B
    return CaseLabel(label, low, high, near)


class Region(str, Enum):
    REGION1 = "Region1"
    REGION2 = "Region2"
    REGION3 = "Region3"


@dataclass(frozen=True)
class StationaryPoint:
    x_e: float
    p_e: float
    region: Region
    u_required: float | None = None


def stationary_point(problem: ScalarProblem) -> StationaryPoint:
    a, alpha = problem.a, problem.alpha
    case = classify_case(problem).label
    if case is Case.A:
        e = -1.0 / (2.0 * a)
        return StationaryPoint(e, e, Region.REGION1)
    if case is Case.B:
        s = problem.sqrt_alpha
        # clip roundoff at the closed interval ends
        u = min(1.0, max(0.0, problem.u_dwell))
        return StationaryPoint(s, s, Region.REGION2, u)
    c = problem.c
    return StationaryPoint(1.0 / (c - a), (1.0 + alpha) / (2.0 * c), Region.REGION3)


def gain_from_control(u: float) -> float:
    """Nonnegative sensor gain ``C`` with ``C**2 == u``.

    The factorisation is not unique; ``-sqrt(u)`` is equally optimal.
    """
    if not (0.0 <= u <= 1.0):
        raise DomainError(f"control must lie in [0, 1], got {u!r}")
    return math.sqrt(u)
