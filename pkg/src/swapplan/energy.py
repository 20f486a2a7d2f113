"""Constant-speed energy model.

A leg of length ``d`` flown at speed ``v`` takes ``d / v`` seconds and drains
``dt / t_max`` of the battery, where ``t_max`` is the UAV's full-battery flight
time. Everything else (mission profiles, detour prices, the search heuristic)
is built from these three functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence

from .errors import DimensionMismatch, NonPositiveFlightTime, NonPositiveSpeed


def distance(p1: Sequence[float], p2: Sequence[float]) -> float:
    if len(p1) != len(p2):
        raise DimensionMismatch(f"cannot measure between {len(p1)}-D and {len(p2)}-D points")
    return math.sqrt(sum((b - a) ** 2 for a, b in zip(p1, p2)))


def travel_time(d: float, speed: float) -> float:
    if not speed > 0:
        raise NonPositiveSpeed(f"speed must be positive, got {speed}")
    if d < 0:
        raise ValueError(f"negative distance {d}")
    return d / speed


def soc_cost(delta_t: float, max_flight_time: float) -> float:
    if not max_flight_time > 0:
        raise NonPositiveFlightTime(f"max flight time must be positive, got {max_flight_time}")
    if delta_t < 0:
        raise ValueError(f"negative duration {delta_t}")
    return delta_t / max_flight_time


@dataclass(frozen=True)
class MissionProfile:
    """Detour-free prediction of one UAV's remaining mission.

    Index ``i`` of ``waypoint_times``/``waypoint_soc`` refers to mission
    waypoint ``start_index + i``. ``elapsed`` holds cumulative flight time
    measured in "waypoints flown": ``elapsed[k]`` is the time needed to go from
    the start position to waypoint ``start_index + k - 1``.
    """

    start_index: int
    n_waypoints: int
    start_time: float
    start_soc: float
    max_flight_time: float
    leg_times: tuple
    elapsed: tuple
    waypoint_times: tuple
    waypoint_soc: tuple
    feasible_until: int

    def __len__(self):
        return len(self.waypoint_times)

    @property
    def feasible(self) -> bool:
        return self.feasible_until == self.n_waypoints - 1

    def time_between(self, progress_from: int, progress_to: int) -> float:
        """Flight time to go from ``progress_from`` waypoints flown to ``progress_to``."""
        s = self.start_index
        return self.elapsed[progress_to - s] - self.elapsed[progress_from - s]

    def soc_between(self, progress_from: int, progress_to: int) -> float:
        return soc_cost(self.time_between(progress_from, progress_to), self.max_flight_time)


def mission_profile(uav, mission, start_index: int | None = None, start_soc: float | None = None,
                    start_time: float | None = None, start_position=None,
                    min_soc: float = 0.0) -> MissionProfile:
    """Chain the leg model over ``start_position -> WP[start_index] -> ... -> WP[-1]``.

    Arguments left as ``None`` default to the UAV's initial state: its start
    position and time, its initial SoC and the mission's completed count.
    """
    n = len(mission.waypoints)
    start_index = mission.completed_count if start_index is None else start_index
    if not 0 <= start_index <= n:
        raise ValueError(f"start_index {start_index} outside [0, {n}]")
    start_soc = uav.initial_soc if start_soc is None else start_soc
    start_time = uav.start_time if start_time is None else start_time
    position = uav.start_position if start_position is None else start_position

    legs = []
    for wp in mission.waypoints[start_index:]:
        legs.append(travel_time(distance(position, wp), uav.speed))
        position = wp
    elapsed = tuple(accumulate(legs, initial=0.0))
    times = tuple(start_time + e for e in elapsed[1:])
    socs = tuple(start_soc - soc_cost(e, uav.max_flight_time) for e in elapsed[1:])

    feasible_until = start_index - 1
    for i, s in enumerate(socs):
        if s < min_soc:
            break
        feasible_until = start_index + i
    if not socs:
        feasible_until = n - 1

    return MissionProfile(
        start_index=start_index,
        n_waypoints=n,
        start_time=start_time,
        start_soc=start_soc,
        max_flight_time=uav.max_flight_time,
        leg_times=tuple(legs),
        elapsed=elapsed,
        waypoint_times=times,
        waypoint_soc=socs,
        feasible_until=feasible_until,
    )


def remaining_soc_to_finish(profile: MissionProfile, from_index: int) -> float:
    """SoC the mission legs still need once ``from_index`` waypoints are flown (no detours)."""
    return profile.soc_between(from_index, profile.n_waypoints)
