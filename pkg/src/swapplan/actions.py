"""Precomputed prices of every (UAV, station, waypoint) replacement detour."""

from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass

import numpy as np

from .energy import distance, soc_cost, travel_time


@dataclass(frozen=True)
class Candidate:
    station_index: int
    station_id: object
    waypoint_index: int
    soc_detour: float  # round trip
    time_detour: float  # round trip
    soc_one_way: float
    time_one_way: float


@dataclass(frozen=True, eq=False)
class ActionCostTensor:
    """Dense ``[uav, station, waypoint]`` tables of one-way waypoint-to-station legs.

    Missions of different length share the waypoint axis; cells past a
    mission's end hold NaN and are marked pruned.
    """

    uav_ids: tuple
    station_ids: tuple
    n_waypoints: tuple
    time: np.ndarray
    soc: np.ndarray
    pruned: np.ndarray
    detour_time_cap: float | None

    def __post_init__(self):
        for arr in (self.time, self.soc, self.pruned):
            arr.setflags(write=False)
        # candidate lists per UAV, sorted by (waypoint, station order)
        per_uav = []
        for u in range(len(self.uav_ids)):
            cands = []
            for w in range(self.n_waypoints[u]):
                for s, sid in enumerate(self.station_ids):
                    if self.pruned[u, s, w]:
                        continue
                    t = float(self.time[u, s, w])
                    c = float(self.soc[u, s, w])
                    cands.append(Candidate(s, sid, w, 2 * c, 2 * t, c, t))
            per_uav.append(tuple(cands))
        object.__setattr__(self, "_candidates", tuple(per_uav))
        object.__setattr__(self, "_candidate_w", tuple(tuple(c.waypoint_index for c in cs) for cs in per_uav))

    @property
    def shape(self):
        return self.time.shape

    def uav_index(self, uav_id) -> int:
        return self.uav_ids.index(uav_id)

    def candidates_from(self, u: int, from_waypoint: int) -> tuple:
        start = bisect.bisect_left(self._candidate_w[u], from_waypoint)
        return self._candidates[u][start:]


def precompute(scenario) -> ActionCostTensor:
    cap = scenario.config.detour_time_cap
    n_wp = tuple(len(m.waypoints) for m in scenario.missions)
    shape = (len(scenario.uavs), len(scenario.stations), max(n_wp, default=0))
    time = np.full(shape, np.nan)
    soc = np.full(shape, np.nan)
    pruned = np.ones(shape, dtype=bool)
    for u, (uav, mission) in enumerate(zip(scenario.uavs, scenario.missions)):
        for s, station in enumerate(scenario.stations):
            for w, wp in enumerate(mission.waypoints):
                t = travel_time(distance(wp, station.position), uav.speed)
                time[u, s, w] = t
                soc[u, s, w] = soc_cost(t, uav.max_flight_time)
                flown = w < mission.completed_count
                pruned[u, s, w] = flown or (cap is not None and t > cap)
    return ActionCostTensor(
        uav_ids=tuple(u.id for u in scenario.uavs),
        station_ids=tuple(s.id for s in scenario.stations),
        n_waypoints=n_wp,
        time=time,
        soc=soc,
        pruned=pruned,
        detour_time_cap=cap,
    )


def candidate_actions(tensor: ActionCostTensor, uav_id, from_waypoint: int) -> list:
    """Non-pruned ``(station_id, waypoint_index, soc_detour, time_detour)`` with waypoint >= ``from_waypoint``.

    Detour figures cover the round trip waypoint -> station -> waypoint.
    """
    u = tensor.uav_index(uav_id)
    return [(c.station_id, c.waypoint_index, c.soc_detour, c.time_detour)
            for c in tensor.candidates_from(u, from_waypoint)]


def tensor_csv(tensor: ActionCostTensor) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["uav", "station", "waypoint", "time_s", "soc", "pruned"])
    for u, uid in enumerate(tensor.uav_ids):
        for s, sid in enumerate(tensor.station_ids):
            for w in range(tensor.n_waypoints[u]):
                writer.writerow([uid, sid, w, repr(float(tensor.time[u, s, w])),
                                 repr(float(tensor.soc[u, s, w])), int(tensor.pruned[u, s, w])])
    return buf.getvalue()
