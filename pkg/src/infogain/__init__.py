"""Sensor gain scheduling for a scalar Kalman-Bucy filter.

The gain ``u_t`` in ``[0, 1]`` trades the integrated error variance against
the information sent over the sensor channel.  :func:`solve` returns the
optimal schedule, which is bang-bang apart from a possible dwell on the
switching curve.
"""

from .config import DEFAULT, Tolerances
from .errors import (DegenerateCase, DomainError, InfoGainError, NoBracket,
                     NumericalFailure, ShapeError, SingularInput)
from .numerics import CostBreakdown, evaluate_cost, integrate_canonical
from .problem import Case, CaseLabel, ScalarProblem, classify_case, validate_problem
from .schedule import GainSchedule, Segment
from .scheduler import Solution, solve

__all__ = [
    "DEFAULT", "Tolerances", "DegenerateCase", "DomainError", "InfoGainError", "NoBracket",
    "NumericalFailure", "ShapeError", "SingularInput", "CostBreakdown", "evaluate_cost",
    "integrate_canonical", "Case", "CaseLabel", "ScalarProblem", "classify_case",
    "validate_problem", "GainSchedule", "Segment", "Solution", "solve",
]
__version__ = "0.1.0"
