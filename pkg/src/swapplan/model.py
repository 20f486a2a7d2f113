"""Domain types: batteries, UAVs, stations, missions and plans.

All types are frozen dataclasses. Positions are plain tuples of floats in a
shared local metric frame (2-D or 3-D, never mixed within one scenario).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple, Union

from .errors import IllegalTransition, SoCError, ValidationError
from .schedule import Window

Identifier = Union[int, str]
LocalPoint = Tuple[float, ...]

DEFAULT_FULL_THRESHOLD = 1.0 - 1e-9


def check_soc(value: float, name: str = "soc") -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise SoCError(f"{name}={value} outside [0, 1]")
    return value


def id_key(identifier: Identifier):
    """Sort key that orders integer ids numerically and puts string ids after them."""
    if isinstance(identifier, int):
        return (0, identifier, "")
    return (1, 0, str(identifier))


def as_point(coords) -> LocalPoint:
    point = tuple(float(c) for c in coords)
    if len(point) not in (2, 3):
        raise ValidationError([("point", f"expected 2 or 3 coordinates, got {len(point)}")])
    return point


class UavState(Enum):
    TAKING_OFF = "TakingOff"
    FLYING_MISSION = "FlyingMission"
    WAITING_AT_STATION = "WaitingAtStation"
    DONE = "Done"


class UavEvent(Enum):
    REACHED_FIRST_WAYPOINT = "reached-first-waypoint"
    ARRIVED_AT_STATION = "arrived-at-station"
    BATTERY_REPLACED = "battery-replaced"
    MISSION_COMPLETE = "mission-complete"


class StationState(Enum):
    IDLE = "Idle"
    REPLACING = "Replacing"


_TRANSITIONS = {
    (UavState.TAKING_OFF, UavEvent.REACHED_FIRST_WAYPOINT): UavState.FLYING_MISSION,
    (UavState.FLYING_MISSION, UavEvent.ARRIVED_AT_STATION): UavState.WAITING_AT_STATION,
    (UavState.WAITING_AT_STATION, UavEvent.BATTERY_REPLACED): UavState.FLYING_MISSION,
    (UavState.FLYING_MISSION, UavEvent.MISSION_COMPLETE): UavState.DONE,
}


@dataclass(frozen=True)
class Battery:
    id: Identifier
    soc: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "soc", check_soc(self.soc, f"battery {self.id} soc"))


@dataclass(frozen=True)
class Uav:
    id: Identifier
    speed: float
    max_flight_time: float
    initial_soc: float
    start_position: LocalPoint
    state: UavState = UavState.TAKING_OFF
    start_time: float = 0.0

    def __post_init__(self):
        problems = []
        if not self.speed > 0:
            problems.append((f"uav {self.id}.speed", f"must be > 0, got {self.speed}"))
        if not self.max_flight_time > 0:
            problems.append(
                (f"uav {self.id}.max_flight_time", f"must be > 0, got {self.max_flight_time}")
            )
        if not 0.0 <= self.initial_soc <= 1.0:
            problems.append((f"uav {self.id}.initial_soc", f"{self.initial_soc} outside [0, 1]"))
        if self.start_time < 0:
            problems.append((f"uav {self.id}.start_time", "must be >= 0"))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "start_position", as_point(self.start_position))


@dataclass(frozen=True)
class Mission:
    uav_id: Identifier
    waypoints: Tuple[LocalPoint, ...]
    completed_count: int = 0

    def __post_init__(self):
        wps = tuple(as_point(p) for p in self.waypoints)
        if not wps:
            raise ValidationError([(f"mission {self.uav_id}", "no waypoints")])
        if not 0 <= self.completed_count <= len(wps):
            raise ValidationError(
                [(f"mission {self.uav_id}.completed_count",
                  f"{self.completed_count} outside [0, {len(wps)}]")]
            )
        object.__setattr__(self, "waypoints", wps)

    def __len__(self):
        return len(self.waypoints)


@dataclass(frozen=True)
class Station:
    id: Identifier
    position: LocalPoint
    slots: int = 1
    batteries: Tuple[Battery, ...] = ()
    replacement_duration: float = 120.0
    state: StationState = StationState.IDLE

    def __post_init__(self):
        problems = []
        if self.slots < 1:
            problems.append((f"station {self.id}.slots", "must be >= 1"))
        if self.replacement_duration < 0:
            problems.append((f"station {self.id}.replacement_duration", "must be >= 0"))
        ids = [b.id for b in self.batteries]
        if len(set(ids)) != len(ids):
            problems.append((f"station {self.id}.batteries", "duplicate battery id"))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "position", as_point(self.position))
        object.__setattr__(self, "batteries", tuple(self.batteries))


@dataclass(frozen=True)
class ReplacementAction:
    """One battery swap: ``uav_id`` leaves its mission at ``waypoint_index`` for ``station_id``.

    ``depart_time`` is when the UAV leaves the waypoint, ``arrival_time`` when
    it lands at the station and ``release_time`` when it takes off again with a
    full battery.
    """

    uav_id: Identifier
    station_id: Identifier
    waypoint_index: int
    depart_time: float = 0.0
    arrival_time: float = 0.0
    release_time: float = 0.0


@dataclass(frozen=True)
class Plan:
    actions: Tuple[ReplacementAction, ...]
    schedules: dict  # station id -> tuple of Window
    soc_timelines: dict  # uav id -> tuple of (time_s, soc)
    total_soc_cost: float
    makespans: dict  # uav id -> seconds

    def actions_for(self, uav_id) -> list:
        return [a for a in self.actions if a.uav_id == uav_id]

    def replacements_per_station(self) -> dict:
        counts = {sid: 0 for sid in self.schedules}
        for a in self.actions:
            counts[a.station_id] = counts.get(a.station_id, 0) + 1
        return counts


def charged_battery_count(station: Station, full_threshold: float = DEFAULT_FULL_THRESHOLD) -> int:
    return sum(1 for b in station.batteries if b.soc >= full_threshold)


def advance_uav_state(uav: Uav, event: UavEvent) -> Uav:
    try:
        new_state = _TRANSITIONS[(uav.state, UavEvent(event))]
    except KeyError:
        raise IllegalTransition(f"UAV {uav.id}: {event} not allowed in state {uav.state.value}") from None
    return replace(uav, state=new_state)


def plan_window_list(plan: Plan):
    """Flatten ``plan.schedules`` into (station_id, Window) pairs."""
    return [(sid, w) for sid, ws in plan.schedules.items() for w in ws]


__all__ = [
    "Battery",
    "DEFAULT_FULL_THRESHOLD",
    "Identifier",
    "LocalPoint",
    "Mission",
    "Plan",
    "ReplacementAction",
    "Station",
    "StationState",
    "Uav",
    "UavEvent",
    "UavState",
    "Window",
    "advance_uav_state",
    "as_point",
    "charged_battery_count",
    "check_soc",
    "id_key",
]
