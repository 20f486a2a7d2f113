"""Corrupted variants of a valid plan for the micro fixture ``two_uav_three_wp``.

Each function takes ``(scenario, plan)`` and returns a plan that replay must reject.
"""

from __future__ import annotations

from dataclasses import replace

from swapplan.model import ReplacementAction
from swapplan.schedule import Window


def shifted_window(sc, p):
    sid, windows = next((sid, ws) for sid, ws in p.schedules.items() if ws)
    moved = (Window(windows[0].start + 5.0, windows[0].end + 5.0),) + windows[1:]
    return replace(p, schedules={**p.schedules, sid: moved})


def shifted_arrival(sc, p):
    a = p.actions[0]
    return replace(p, actions=(replace(a, arrival_time=a.arrival_time + 1.0),) + p.actions[1:])


def extra_action_at_empty_station(sc, p):
    # the fixture station holds two batteries and both swaps already use them
    return replace(p, actions=p.actions + (ReplacementAction(1, 201, 2, 0.0, 0.0, 0.0),))


def dropped_action(sc, p):
    return replace(p, actions=p.actions[1:])


def wrong_total(sc, p):
    return replace(p, total_soc_cost=p.total_soc_cost - 0.01)


def wrong_makespan(sc, p):
    uid = next(iter(p.makespans))
    return replace(p, makespans={**p.makespans, uid: p.makespans[uid] - 1.0})


def unknown_station(sc, p):
    return replace(p, actions=(replace(p.actions[0], station_id=999),) + p.actions[1:])


def overlapping_schedule(sc, p):
    # both swaps booked on top of each other: move UAV 1's swap to UAV 2's waypoint timing
    a, b = sorted(p.actions, key=lambda x: x.arrival_time)
    late = replace(b, waypoint_index=a.waypoint_index, depart_time=a.depart_time,
                   arrival_time=a.arrival_time, release_time=a.release_time)
    return replace(p, actions=(a, late))


MUTATIONS = [shifted_window, shifted_arrival, extra_action_at_empty_station, dropped_action, wrong_total,
             wrong_makespan, unknown_station, overlapping_schedule]
