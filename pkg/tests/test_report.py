from __future__ import annotations

import pytest

from micro import line_scenario, micro_scenario, two_uav_three_wp
from mutations import MUTATIONS
from swapplan.errors import Infeasible, PlanViolation
from swapplan.model import Plan, ReplacementAction
from swapplan.planner import plan
from swapplan.report import (
    Phase,
    Sample,
    Timeline,
    action_table,
    fmt_time,
    histogram,
    read_soc_csv,
    schedule_table,
    simulate,
    soc_csv,
    summary,
    summary_text,
)
from swapplan.scenario import PlannerConfig, RandomScenarioParams, generate_random_scenario


@pytest.fixture(scope="module")
def two_uav():
    sc = two_uav_three_wp()
    return sc, plan(sc)[0]


@pytest.fixture(scope="module")
def random_scale():
    sc = generate_random_scenario(0, RandomScenarioParams(config=PlannerConfig(detour_time_cap=120.0)))
    return sc, plan(sc, timeout=120)[0]


# -- simulate -----------------------------------------------------------------


def test_zero_action_plan_is_monotone():
    sc = line_scenario(n_wp=5)
    result = plan(sc)[0]
    (tl,) = simulate(sc, result)
    socs = [s.soc for s in tl.samples]
    assert socs == sorted(socs, reverse=True)
    assert socs[-1] >= sc.config.min_soc
    assert tl.samples[-1].phase is Phase.DONE
    assert len(tl.samples) == 6


def test_swap_jump_at_release(two_uav):
    sc, result = two_uav
    timelines = {tl.uav_id: tl for tl in simulate(sc, result)}
    for a in result.actions:
        samples = timelines[a.uav_id].samples
        k = next(i for i, s in enumerate(samples) if s.phase is Phase.SWAP)
        assert samples[k].time == a.arrival_time
        assert samples[k + 1].time == a.release_time
        assert samples[k + 1].soc == 1.0
        assert a.release_time == a.arrival_time + sc.stations[0].replacement_duration


@pytest.mark.parametrize("seed", range(25))
def test_simulate_accepts_planner_output(seed):
    sc = micro_scenario(seed)
    try:
        result = plan(sc)[0]
    except Infeasible:
        return
    timelines = simulate(sc, result)
    for tl in timelines:
        assert tl.min_soc() >= sc.config.min_soc
        assert tl.end_time == pytest.approx(result.makespans[tl.uav_id], abs=1e-9)
        planned = result.soc_timelines[tl.uav_id]
        assert len(tl.knots()) == len(planned)
        for (t, soc), (pt, psoc) in zip(tl.knots(), planned):
            assert abs(t - pt) <= 1e-9 and abs(soc - psoc) <= 1e-9


def test_extension_identity(random_scale):
    sc, result = random_scale
    info = summary(sc, result)
    for entry, uav in zip(info["uavs"], sc.uavs):
        mission = sc.mission_for(uav.id)
        extra = 0.0
        for a in result.actions_for(uav.id):
            st = sc.stations[sc.station_index(a.station_id)]
            leg = ((mission.waypoints[a.waypoint_index][0] - st.position[0]) ** 2
                   + (mission.waypoints[a.waypoint_index][1] - st.position[1]) ** 2) ** 0.5
            extra += 2 * leg / uav.speed + st.replacement_duration
        assert entry["extension_s"] == pytest.approx(extra, abs=1e-6)
        assert entry["makespan_s"] == pytest.approx(entry["baseline_s"] + extra, abs=1e-6)


# -- violation corpus ---------------------------------------------------------


@pytest.mark.parametrize("mutate", MUTATIONS, ids=lambda f: f.__name__)
def test_corrupted_plans_are_caught(two_uav, mutate):
    sc, result = two_uav
    simulate(sc, result)
    with pytest.raises(PlanViolation):
        simulate(sc, mutate(sc, result))


def test_floor_violating_detour():
    # swapping at waypoint 6 reaches the station with 0.3 - 0.2 = 0.1 left
    sc = line_scenario()
    bad = Plan((ReplacementAction(1, 201, 6, 70.0, 90.0, 95.0),), {}, {}, 0.0, {})
    with pytest.raises(PlanViolation, match="below floor"):
        simulate(sc, bad)


def test_battery_exhaustion_message():
    sc = line_scenario(n_wp=10, batteries=1)
    two = Plan((ReplacementAction(1, 201, 2, 30.0, 50.0, 55.0),
                ReplacementAction(1, 201, 4, 0.0, 0.0, 0.0)), {}, {}, 0.0, {})
    with pytest.raises(PlanViolation, match="only 1 charged"):
        simulate(sc, two)


# -- tables -------------------------------------------------------------------


@pytest.mark.parametrize("seconds,text", [(731.23, "12:11.23"), (0.0, "0:00.00"), (3661.5, "61:01.50"),
                                          (59.999, "1:00.00")])
def test_fmt_time(seconds, text):
    assert fmt_time(seconds) == text


def test_empty_tables_have_headers_only():
    empty = Plan((), {}, {}, 0.0, {})
    assert action_table(empty).rows == ()
    assert action_table(empty).render().splitlines()[0].split() == ["UAV", "ID", "Station", "ID", "WP", "Index"]
    assert schedule_table(empty).to_csv() == "Station ID,Start,End\n"


def test_action_rows_project_actions(two_uav):
    sc, result = two_uav
    rows = action_table(result).rows
    assert rows == tuple((str(a.uav_id), str(a.station_id), str(a.waypoint_index))
                         for a in sorted(result.actions, key=lambda a: (a.uav_id, a.waypoint_index)))


def test_random_scale_tables(random_scale):
    sc, result = random_scale
    assert len(action_table(result).rows) == len(result.actions)
    sched = schedule_table(result)
    assert len(sched.rows) == len(result.actions)
    keys = [(int(r[0]), r[1]) for r in sched.rows]
    assert [k[0] for k in keys] == sorted(k[0] for k in keys)
    assert action_table(result) == action_table(result)
    assert sched.render() == schedule_table(result).render()


# -- CSV and summary ----------------------------------------------------------


def test_soc_csv_shapes():
    assert soc_csv([]) == "time_s,uav_id,soc,phase\n"
    tl = Timeline(7, (Sample(0.0, 1.0, (0.0, 0.0), Phase.LEG), Sample(12.5, 0.9, (1.0, 0.0), Phase.DONE)))
    assert len(soc_csv([tl]).splitlines()) == 3


def test_soc_csv_round_trip(random_scale):
    sc, result = random_scale
    timelines = simulate(sc, result)
    rows = read_soc_csv(soc_csv(timelines))
    expected = [(s.time, str(tl.uav_id), s.soc, s.phase) for tl in timelines for s in tl.samples]
    assert rows == expected


def test_summary_and_histogram(random_scale):
    sc, result = random_scale
    info = summary(sc, result)
    assert info["replacements"] == len(result.actions)
    assert sum(c["replacements"] for c in info["replacements_per_station"]) == len(result.actions)
    text = summary_text(info)
    assert "swaps per station" in text
    bars = histogram([{"station_id": 201, "replacements": 5}, {"station_id": 202, "replacements": 0}], width=10)
    assert bars.splitlines() == ["201 | ########## 5", "202 |  0"]
