"""Per-station reservation calendars.

Windows are half-open, so ``[0, 180)`` and ``[180, 360)`` can both be booked.
Two windows conflict only when their intersection has positive length, which
also makes zero-length windows compatible with everything.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field

from .errors import ScheduleConflict, ValidationError

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Window:
    start: float
    end: float

    def __post_init__(self):
        if self.end < self.start:
            raise ValidationError([("window", f"end {self.end} precedes start {self.start}")])

    @property
    def duration(self) -> float:
        return self.end - self.start

    def overlaps(self, other: "Window") -> bool:
        return min(self.end, other.end) - max(self.start, other.start) > 0


@dataclass(frozen=True)
class StationSchedule:
    """Immutable calendar; :func:`reserve` returns a new instance."""

    station_id: object
    windows: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.windows)

    def __iter__(self):
        return iter(self.windows)


def is_free(schedule: StationSchedule, candidate: Window) -> bool:
    # calendars hold a handful of windows, a linear scan is cheaper than bisecting
    return not any(w.overlaps(candidate) for w in schedule.windows)


def reserve(schedule: StationSchedule, candidate: Window) -> StationSchedule:
    if not is_free(schedule, candidate):
        raise ScheduleConflict(
            f"station {schedule.station_id}: window [{candidate.start:.3f}, {candidate.end:.3f}] is taken"
        )
    windows = list(schedule.windows)
    bisect.insort(windows, candidate)
    return StationSchedule(schedule.station_id, tuple(windows))


def blocking_window(arrival: float, config, replacement_duration: float | None = None,
                    warn: bool = True) -> Window:
    """Station reservation around a UAV arriving at ``arrival`` seconds.

    The window covers the pre-arrival safety margin, the swap itself and the
    post-swap margin. A start that would fall before t=0 is clamped, with a
    warning unless ``warn`` is false (the planner probes many such windows).
    """
    if arrival < 0:
        raise ValidationError([("arrival", f"negative arrival time {arrival}")])
    duration = config.replacement_duration if replacement_duration is None else replacement_duration
    start = arrival - config.safety_margin_before
    if start < 0:
        if warn:
            log.warning("blocking window for arrival %.3f s clamped to start at 0", arrival)
        start = 0.0
    return Window(start, arrival + duration + config.safety_margin_after)


def has_overlaps(windows) -> bool:
    """Pairwise check, independent of sorting; used for validation."""
    ws = list(windows)
    for a in range(len(ws)):
        for b in range(a + 1, len(ws)):
            if ws[a].overlaps(ws[b]):
                return True
    return False
