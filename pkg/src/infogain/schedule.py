"""Piecewise-constant gain schedules and sampled trajectories."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Segment:
    t_start: float
    t_end: float
    u: float


@dataclass(frozen=True)
class GainSchedule:
    """Control ``u_t`` as an ordered tiling of ``[t0, t1]``.

    Solver output has at most three segments; oracles may build longer
    ones.  ``u_at`` is right-continuous, except at ``t1`` where the last
    level is returned.
    """

    segments: tuple[Segment, ...]
    case: str | None = None
    subcase: str | None = None
    switch_times: tuple[float, ...] = field(default=())

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise DomainError("schedule needs at least one segment")
        for prev, nxt in zip(segs, segs[1:]):
            if nxt.t_start != prev.t_end:
                raise DomainError("segments must tile the horizon without gaps")
        for s in segs:
            if not s.t_end > s.t_start:
                raise DomainError("segments must have positive length")
            if not (0.0 <= s.u <= 1.0):
                raise DomainError(f"segment level {s.u!r} outside [0, 1]")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "switch_times", tuple(self.switch_times))

    @property
    def t0(self) -> float:
        return self.segments[0].t_start

    @property
    def t1(self) -> float:
        return self.segments[-1].t_end

    @property
    def breakpoints(self) -> list[float]:
        return [s.t_start for s in self.segments] + [self.t1]

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(s.u for s in self.segments)

    def u_at(self, t):
        starts = [s.t_start for s in self.segments]
        levels = np.array(self.levels)
        idx = np.searchsorted(starts, t, side="right") - 1
        idx = np.clip(idx, 0, len(starts) - 1)
        out = levels[idx]
        return float(out) if np.ndim(out) == 0 else out

    def segment_index(self, t: float) -> int:
        starts = [s.t_start for s in self.segments]
        return min(max(bisect.bisect_right(starts, t) - 1, 0), len(starts) - 1)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "subcase": self.subcase,
            "switch_times": list(self.switch_times),
            "segments": [
                {"t_start": s.t_start, "t_end": s.t_end, "u": s.u} for s in self.segments
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GainSchedule":
        segs = tuple(Segment(float(s["t_start"]), float(s["t_end"]), float(s["u"]))
                     for s in data["segments"])
        return cls(segs, data.get("case"), data.get("subcase"),
                   tuple(float(t) for t in data.get("switch_times", ())))


def piecewise(t0: float, t1: float, switches, levels, case=None, subcase=None) -> GainSchedule:
    """Build a schedule from switch times and levels, dropping empty pieces
    and merging equal neighbours."""
    edges = [t0, *switches, t1]
    segs: list[Segment] = []
    for lo, hi, u in zip(edges, edges[1:], levels):
        if hi <= lo:
            continue
        if segs and segs[-1].u == u:
            segs[-1] = Segment(segs[-1].t_start, hi, u)
        else:
            segs.append(Segment(lo, hi, u))
    switch_times = tuple(s.t_start for s in segs[1:])
    return GainSchedule(tuple(segs), case, subcase, switch_times)


def constant(t0: float, t1: float, u: float = 0.0, case=None, subcase=None) -> GainSchedule:
    return GainSchedule((Segment(t0, t1, u),), case, subcase, ())


@dataclass(frozen=True)
class CanonicalTrajectory:
    """Sampled ``(x_t, p_t)`` with the control in force at each sample.

    Switch times appear twice, once with the left and once with the
    right control level.
    """

    times: np.ndarray
    x: np.ndarray
    p: np.ndarray
    u: np.ndarray
