"""JSON and CSV artifacts.

JSON numbers are written with ``repr`` (Python's shortest round-trip form),
so a schedule read back is bitwise equal to the one written.  CSV files use
17 significant digits, ``\\n`` line endings and UTF-8.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .problem import ScalarProblem
from .schedule import CanonicalTrajectory, GainSchedule


def _plain(obj):
    """Convert numpy scalars and arrays into JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError("non-finite number in JSON output")
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8", newline="\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def schedule_document(problem: ScalarProblem, schedule: GainSchedule, cost=None) -> dict:
    doc = {"problem": problem.to_dict(), "schedule": schedule.to_dict()}
    if cost is not None:
        doc["cost"] = cost.to_dict()
    return doc


def write_schedule(path, problem: ScalarProblem, schedule: GainSchedule, cost=None) -> None:
    write_json(schedule_document(problem, schedule, cost), path)


def read_schedule(path) -> tuple[ScalarProblem, GainSchedule]:
    doc = read_json(path)
    return ScalarProblem.from_dict(doc["problem"]), GainSchedule.from_dict(doc["schedule"])


def _fmt(v) -> str:
    return format(float(v), ".17g")


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    header = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    return header, data.reshape(-1, len(header))


def write_trajectory(path, traj: CanonicalTrajectory) -> None:
    write_csv(path, ["t", "x", "p", "u"], zip(traj.times, traj.x, traj.p, traj.u))


def write_phase(path, field: dict) -> None:
    cols = ["x", "p", "u", "xdot", "pdot", "region"]
    write_csv(path, cols, zip(*(field[c] for c in cols)))


def write_curve(path, curve: dict) -> None:
    write_csv(path, ["x", "p"], zip(curve["x"], curve["p"]))


def sibling(path, suffix: str) -> Path:
    """``run.json`` -> ``run<suffix>``, e.g. ``run.trajectory.csv``."""
    p = Path(path)
    return p.with_name(p.stem + suffix)
