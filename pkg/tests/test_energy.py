from __future__ import annotations

import math

import pytest

from swapplan.energy import distance, mission_profile, remaining_soc_to_finish, soc_cost, travel_time
from swapplan.errors import DimensionMismatch, NonPositiveFlightTime, NonPositiveSpeed
from swapplan.model import Mission, Uav
from swapplan.scenario import generate_random_scenario


def test_distance_examples():
    assert distance((0, 0), (3, 4)) == 5.0
    assert distance((7.5, -2.0), (7.5, -2.0)) == 0.0
    assert distance((1, 2, 3), (4, 6, 3)) == 5.0


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        distance((0, 0), (0, 0, 0))


def test_travel_time_examples():
    assert travel_time(10, 5) == 2.0
    assert travel_time(0, 3) == 0.0
    assert travel_time(600, 2) == 300.0


@pytest.mark.parametrize("speed", [0.0, -1.0])
def test_travel_time_rejects_non_positive_speed(speed):
    with pytest.raises(NonPositiveSpeed):
        travel_time(10, speed)


def test_soc_cost_examples():
    assert soc_cost(60, 600) == 0.1
    assert soc_cost(0, 600) == 0.0
    assert soc_cost(600, 600) == 1.0


def test_soc_cost_rejects_non_positive_flight_time():
    with pytest.raises(NonPositiveFlightTime):
        soc_cost(10, 0)


def _two_wp():
    uav = Uav(1, 5.0, 600.0, 1.0, (0.0, 0.0))
    return uav, Mission(1, ((300.0, 0.0), (600.0, 0.0)))


def test_profile_two_waypoints():
    uav, mission = _two_wp()
    prof = mission_profile(uav, mission)
    assert prof.waypoint_times == (60.0, 120.0)
    assert prof.waypoint_soc == pytest.approx((0.9, 0.8), abs=1e-15)
    assert prof.feasible


def test_profile_from_end_is_empty_and_feasible():
    uav, mission = _two_wp()
    prof = mission_profile(uav, mission, start_index=2)
    assert len(prof) == 0
    assert prof.feasible


def test_profile_feasible_until():
    uav, mission = _two_wp()
    prof = mission_profile(uav, mission, start_soc=0.95, min_soc=0.1)
    # 0.85 at WP 0, 0.75 at WP 1: both above 0.1
    assert prof.feasible_until == 1
    prof = mission_profile(uav, mission, start_soc=0.95, min_soc=0.8)
    assert prof.feasible_until == 0
    assert not prof.feasible


def test_remaining_soc_examples():
    uav, mission = _two_wp()
    prof = mission_profile(uav, mission)
    assert remaining_soc_to_finish(prof, 0) == pytest.approx(0.2, abs=1e-15)
    assert remaining_soc_to_finish(prof, 2) == 0.0


def _oracle_profile(uav, mission):
    """Single-pass accumulator written from the leg formulas, independent of the package."""
    t, soc, pos = uav.start_time, uav.initial_soc, uav.start_position
    times, socs = [], []
    for wp in mission.waypoints:
        dt = math.dist(pos, wp) / uav.speed
        t += dt
        soc -= dt / uav.max_flight_time
        times.append(t)
        socs.append(soc)
        pos = wp
    return times, socs


def test_profile_matches_independent_accumulator():
    sc = generate_random_scenario(0)
    for uav, mission in zip(sc.uavs, sc.missions):
        prof = mission_profile(uav, mission)
        times, socs = _oracle_profile(uav, mission)
        for a, b in zip(prof.waypoint_times, times):
            assert a == pytest.approx(b, rel=1e-12)
        for a, b in zip(prof.waypoint_soc, socs):
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_remaining_soc_matches_leg_sum():
    sc = generate_random_scenario(1)
    for uav, mission in zip(sc.uavs, sc.missions):
        prof = mission_profile(uav, mission)
        pts = (uav.start_position,) + mission.waypoints
        for k in (0, 1, 17, len(mission.waypoints) - 1, len(mission.waypoints)):
            legs = sum(math.dist(a, b) for a, b in zip(pts[k:], pts[k + 1:]))
            expected = legs / uav.speed / uav.max_flight_time
            assert remaining_soc_to_finish(prof, k) == pytest.approx(expected, rel=1e-12, abs=1e-15)
