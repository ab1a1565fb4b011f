"""Reference instances, two per subcase, used by tests and scripts.

Each entry is ``(a, alpha, x0, t0, t1)``.
"""

import math

from .problem import ScalarProblem, validate_problem

SUBCASE_INSTANCES = {
    "A1": [(-1.0, 0.3, 0.1, 0.0, 1.0), (-1.0, 0.3, 0.05, 0.0, 5.0)],
    "A2": [(-0.5, 1.5, 3.0, 0.0, 4.0), (-1.0, 0.3, 0.8, 0.0, 2.0)],
    "B1": [(-1.0, 0.2, 0.05, 0.0, 0.5), (-1.0, 0.2, 0.0, 0.0, 2.0)],
    "B2": [(-1.0, 0.2, 0.5, 0.0, 0.4), (-1.0, 0.2, 0.8, 0.0, 0.2)],
    "B3": [(-1.0, 0.2, 0.05, 0.0, 5.0), (-1.0, 0.2, math.sqrt(0.2), 0.0, 6.0)],
    "B4": [(-1.0, 0.2, 1.0, 0.0, 1.0), (-1.0, 0.2, 1.0, 0.0, 2.0)],
    "B5": [(-1.0, 0.2, 0.5, 0.0, 2.0), (-1.0, 0.2, 0.45, 0.0, 5.0)],
    "C1": [(-1.0, 0.1, 0.05, 0.0, 0.4), (-1.0, 0.1, 0.0, 0.0, 1.0)],
    "C2": [(-1.0, 0.1, 0.5, 0.0, 0.2), (-1.0, 0.15, 0.5, 0.0, 0.4)],
    "C3": [(-1.0, 0.1, 2.0, 0.0, 4.0), (-1.0, 0.1, 0.3, 0.0, 2.0)],
    "C4": [(-1.0, 0.1, 0.05, 0.0, 6.0), (-1.0, 0.1, 0.0, 0.0, 3.0)],
}


def all_instances() -> list[tuple[str, ScalarProblem]]:
    return [(sub, validate_problem(*args))
            for sub, rows in SUBCASE_INSTANCES.items() for args in rows]
