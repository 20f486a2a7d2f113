from __future__ import annotations

import itertools
import logging

import pytest

from swapplan.errors import ScheduleConflict, ValidationError
from swapplan.scenario import PlannerConfig
from swapplan.schedule import StationSchedule, Window, blocking_window, has_overlaps, is_free, reserve


def mmss(text: str) -> float:
    minutes, seconds = text.split(":")
    return int(minutes) * 60 + float(seconds)


def test_empty_schedule_is_free():
    assert is_free(StationSchedule(201), Window(5.0, 10.0))


def test_station_201_windows_coexist():
    sch = reserve(StationSchedule(201), Window(mmss("12:11.23"), mmss("15:11.23")))
    assert is_free(sch, Window(mmss("22:01.74"), mmss("25:01.74")))


def test_one_second_overlap_conflicts():
    sch = reserve(StationSchedule(1), Window(100, 280))
    assert not is_free(sch, Window(279, 459))
    with pytest.raises(ScheduleConflict):
        reserve(sch, Window(279, 459))


def test_reserved_window_conflicts_with_itself():
    w = Window(10, 20)
    assert not is_free(reserve(StationSchedule(1), w), w)


def test_abutting_windows_are_both_reservable():
    sch = reserve(reserve(StationSchedule(1), Window(0, 180)), Window(180, 360))
    assert len(sch) == 2


def test_reserve_order_independent():
    rows = [Window(100.0, 280.0), Window(900.5, 1080.5), Window(400.0, 580.0)]
    results = set()
    for order in itertools.permutations(rows):
        sch = StationSchedule(203)
        for w in order:
            sch = reserve(sch, w)
        results.add(sch.windows)
    assert results == {tuple(sorted(rows))}


def test_reserve_does_not_mutate():
    base = reserve(StationSchedule(1), Window(0, 10))
    reserve(base, Window(20, 30))
    assert base.windows == (Window(0, 10),)


def test_window_rejects_negative_span():
    with pytest.raises(ValidationError):
        Window(5, 4)


def test_blocking_window_example():
    cfg = PlannerConfig(replacement_duration=120, safety_margin_before=30, safety_margin_after=30)
    w = blocking_window(731.23, cfg)
    assert w.start == pytest.approx(701.23, abs=1e-9)
    assert w.end == pytest.approx(881.23, abs=1e-9)
    assert w.duration == pytest.approx(180.0, abs=1e-9)


def test_blocking_window_degenerate_is_always_free():
    cfg = PlannerConfig(replacement_duration=0, safety_margin_before=0, safety_margin_after=0)
    w = blocking_window(50.0, cfg)
    assert w == Window(50.0, 50.0)
    assert is_free(reserve(StationSchedule(1), Window(0, 100)), w)


def test_blocking_window_clamps_with_warning(caplog):
    cfg = PlannerConfig()
    with caplog.at_level(logging.WARNING, logger="swapplan.schedule"):
        w = blocking_window(10.0, cfg)
    assert w.start == 0.0
    assert "clamped" in caplog.text
    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="swapplan.schedule"):
        blocking_window(10.0, cfg, warn=False)
    assert caplog.text == ""


def test_blocking_window_rejects_negative_arrival():
    with pytest.raises(ValidationError):
        blocking_window(-1.0, PlannerConfig())


def test_has_overlaps():
    assert not has_overlaps([Window(0, 1), Window(1, 2)])
    assert has_overlaps([Window(5, 8), Window(0, 1), Window(7, 9)])
