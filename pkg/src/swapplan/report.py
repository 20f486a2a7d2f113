"""Replay plans, re-check their constraints and render tables and CSV.

:func:`simulate` is deliberately independent of the search code: it walks
each UAV leg by leg with the energy functions and then compares what it saw
with what the plan claims. Any disagreement beyond ``tol`` is a
:class:`PlanViolation`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

from .energy import distance, mission_profile, soc_cost, travel_time
from .errors import PlanViolation
from .model import LocalPoint, Plan, charged_battery_count, id_key
from .schedule import blocking_window

TOLERANCE = 1e-9


class Phase(Enum):
    """What the UAV is doing from a sample until the next one."""

    LEG = "Leg"
    DETOUR_OUT = "DetourOut"
    SWAP = "Swap"
    DETOUR_BACK = "DetourBack"
    DONE = "Done"


@dataclass(frozen=True)
class Sample:
    time: float
    soc: float
    position: LocalPoint
    phase: Phase


@dataclass(frozen=True)
class Timeline:
    """Event samples of one UAV.

    SoC is linear between consecutive samples except across a ``Swap``
    sample, where it is held on the ground and jumps to the new battery's
    level at the next sample.
    """

    uav_id: object
    samples: Tuple[Sample, ...]

    @property
    def end_time(self) -> float:
        return self.samples[-1].time

    def min_soc(self) -> float:
        return min(s.soc for s in self.samples)

    def knots(self) -> list:
        """``(time, soc)`` at start, detour events and end, as stored in ``Plan.soc_timelines``.

        Plain waypoint passes are dropped (SoC is linear across them) and a
        swap becomes two knots at the release time: before and after the jump.
        """
        out = [(self.samples[0].time, self.samples[0].soc)]
        for prev, cur in zip(self.samples, self.samples[1:]):
            if prev.phase is Phase.SWAP:
                out.append((cur.time, prev.soc))
            keep = (cur.phase in (Phase.DETOUR_OUT, Phase.SWAP, Phase.DONE)
                    or prev.phase in (Phase.SWAP, Phase.DETOUR_BACK))
            if keep:
                out.append((cur.time, cur.soc))
        return out


# -- simulation ---------------------------------------------------------------


def _fly(uav, position, target, clock, soc):
    dt = travel_time(distance(position, target), uav.speed)
    return clock + dt, soc - soc_cost(dt, uav.max_flight_time)


def simulate(scenario, plan: Plan, tol: float = TOLERANCE) -> List[Timeline]:
    """Replay ``plan`` leg by leg and return one :class:`Timeline` per UAV.

    Raises :class:`PlanViolation` listing every broken rule: SoC below the
    floor, more swaps than charged batteries, overlapping station windows,
    swaps at unknown stations or waypoints, and any planned clock, window,
    makespan, SoC knot or total cost that differs from the replay by more
    than ``tol``.
    """
    cfg = scenario.config
    floor = cfg.min_soc - tol
    problems = []
    stations = {s.id: s for s in scenario.stations}
    uav_ids = {u.id for u in scenario.uavs}
    for a in plan.actions:
        if a.uav_id not in uav_ids:
            problems.append(f"action for unknown UAV {a.uav_id}")
        if a.station_id not in stations:
            problems.append(f"action at unknown station {a.station_id}")
    if problems:
        raise PlanViolation("; ".join(problems))

    timelines = []
    windows = {sid: [] for sid in stations}
    total = 0.0
    for uav, mission in zip(scenario.uavs, scenario.missions):
        mine = sorted(plan.actions_for(uav.id), key=lambda a: a.waypoint_index)
        by_wp = {}
        for a in mine:
            if a.waypoint_index in by_wp:
                problems.append(f"UAV {uav.id}: two swaps at waypoint {a.waypoint_index}")
            elif not mission.completed_count <= a.waypoint_index < len(mission.waypoints):
                problems.append(f"UAV {uav.id}: swap at waypoint {a.waypoint_index} outside the mission")
            by_wp[a.waypoint_index] = a

        pos, clock, soc = uav.start_position, uav.start_time, uav.initial_soc
        samples = [Sample(clock, soc, pos, Phase.LEG)]
        used = 0.0

        def check_floor(where):
            if soc < floor:
                problems.append(f"UAV {uav.id}: SoC {soc:.6f} below floor {cfg.min_soc} {where}")

        for k in range(mission.completed_count, len(mission.waypoints)):
            wp = mission.waypoints[k]
            before = soc
            clock, soc = _fly(uav, pos, wp, clock, soc)
            used += before - soc
            pos = wp
            check_floor(f"at waypoint {k}")
            action = by_wp.get(k)
            if action is None:
                samples.append(Sample(clock, soc, pos, Phase.LEG))
                continue

            station = stations[action.station_id]
            samples.append(Sample(clock, soc, pos, Phase.DETOUR_OUT))
            _expect(problems, uav.id, f"depart_time at waypoint {k}", action.depart_time, clock, tol)
            before = soc
            clock, soc = _fly(uav, pos, station.position, clock, soc)
            used += before - soc
            check_floor(f"on reaching station {station.id}")
            samples.append(Sample(clock, soc, station.position, Phase.SWAP))
            _expect(problems, uav.id, f"arrival_time at waypoint {k}", action.arrival_time, clock, tol)
            windows[station.id].append((uav.id, k, blocking_window(clock, cfg, station.replacement_duration,
                                                                  warn=False)))
            clock += station.replacement_duration
            _expect(problems, uav.id, f"release_time at waypoint {k}", action.release_time, clock, tol)
            soc = 1.0
            samples.append(Sample(clock, soc, station.position, Phase.DETOUR_BACK))
            before = soc
            clock, soc = _fly(uav, station.position, pos, clock, soc)
            used += before - soc
            check_floor(f"returning to waypoint {k}")
            samples.append(Sample(clock, soc, pos, Phase.LEG))

        last = samples[-1]
        samples[-1] = Sample(last.time, last.soc, last.position, Phase.DONE)
        timeline = Timeline(uav.id, tuple(samples))
        timelines.append(timeline)
        total += used

        if uav.id in plan.makespans:
            _expect(problems, uav.id, "makespan", plan.makespans[uav.id], clock, tol)
        planned = plan.soc_timelines.get(uav.id)
        if planned is not None:
            replayed = timeline.knots()
            if len(planned) != len(replayed):
                problems.append(f"UAV {uav.id}: plan timeline has {len(planned)} knots, replay has {len(replayed)}")
            else:
                for (pt, ps), (rt, rs) in zip(planned, replayed):
                    if abs(pt - rt) > tol or abs(ps - rs) > tol:
                        problems.append(f"UAV {uav.id}: timeline knot ({pt}, {ps}) differs from replay ({rt}, {rs})")
                        break

    for sid, booked in windows.items():
        station = stations[sid]
        available = charged_battery_count(station, cfg.full_threshold)
        if len(booked) > available:
            problems.append(f"station {sid}: {len(booked)} swaps but only {available} charged batteries")
        booked.sort(key=lambda item: item[2])
        for (ua, wa, a), (ub, wb, b) in zip(booked, booked[1:]):
            if a.end - b.start > tol:
                problems.append(f"station {sid}: windows of UAV {ua} (waypoint {wa}) and UAV {ub} "
                                f"(waypoint {wb}) overlap")
        claimed = plan.schedules.get(sid)
        if claimed is not None:
            replayed = [w for _, _, w in booked]
            if len(claimed) != len(replayed) or any(
                abs(c.start - r.start) > tol or abs(c.end - r.end) > tol
                for c, r in zip(sorted(claimed), replayed)
            ):
                problems.append(f"station {sid}: planned schedule does not match the replayed windows")
    for sid in plan.schedules:
        if sid not in stations:
            problems.append(f"schedule for unknown station {sid}")
    if abs(plan.total_soc_cost - total) > tol * max(1.0, len(scenario.uavs)):
        problems.append(f"total_soc_cost {plan.total_soc_cost} differs from replay {total}")

    if problems:
        raise PlanViolation("; ".join(problems))
    return timelines


def _expect(problems, uav_id, what, planned, replayed, tol):
    if abs(planned - replayed) > tol:
        problems.append(f"UAV {uav_id}: planned {what} {planned} but replay gives {replayed}")


# -- tables ---------------------------------------------------------------------


@dataclass(frozen=True)
class Table:
    headers: Tuple[str, ...]
    rows: Tuple[Tuple[str, ...], ...]

    def render(self) -> str:
        """Fixed-width text, one line per row."""
        widths = [len(h) for h in self.headers]
        for row in self.rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(self.headers, widths)).rstrip(),
                 "  ".join("-" * w for w in widths)]
        lines += ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.headers)
        writer.writerows(self.rows)
        return buf.getvalue()


def fmt_time(seconds: float) -> str:
    """``M:SS.cc``; minutes keep counting past 59 instead of rolling into hours."""
    if seconds < 0:
        raise ValueError(f"negative time {seconds}")
    centis = round(seconds * 100)
    minutes, rest = divmod(centis, 6000)
    return f"{minutes}:{rest // 100:02d}.{rest % 100:02d}"


def action_table(plan: Plan) -> Table:
    rows = sorted(plan.actions, key=lambda a: (id_key(a.uav_id), a.waypoint_index))
    return Table(("UAV ID", "Station ID", "WP Index"),
                 tuple((str(a.uav_id), str(a.station_id), str(a.waypoint_index)) for a in rows))


def schedule_table(plan: Plan) -> Table:
    rows = []
    for sid in sorted(plan.schedules, key=id_key):
        for w in sorted(plan.schedules[sid]):
            rows.append((str(sid), fmt_time(w.start), fmt_time(w.end)))
    return Table(("Station ID", "Start", "End"), tuple(rows))


# -- CSV ------------------------------------------------------------------------

SOC_CSV_COLUMNS = ("time_s", "uav_id", "soc", "phase")


def soc_csv(timelines: Sequence[Timeline]) -> str:
    """Samples of every timeline in input order; floats use ``repr`` so they round-trip."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SOC_CSV_COLUMNS)
    for tl in timelines:
        for s in tl.samples:
            writer.writerow([repr(float(s.time)), tl.uav_id, repr(float(s.soc)), s.phase.value])
    return buf.getvalue()


def read_soc_csv(text: str) -> list:
    """Parse :func:`soc_csv` output into ``(time, uav_id, soc, phase)`` tuples.

    UAV ids are returned as strings since CSV carries no type information.
    """
    reader = csv.DictReader(io.StringIO(text))
    return [(float(r["time_s"]), r["uav_id"], float(r["soc"]), Phase(r["phase"])) for r in reader]


# -- summary --------------------------------------------------------------------


def summary(scenario, plan: Plan, timelines: Sequence[Timeline] | None = None) -> dict:
    """Totals, makespans and per-station swap counts for one plan.

    ``baseline_s`` is each UAV's mission duration with no swaps and
    ``extension_s`` what the plan adds to it.
    """
    if timelines is None:
        timelines = simulate(scenario, plan)
    ends = {tl.uav_id: tl.end_time for tl in timelines}
    uavs = []
    for uav, mission in zip(scenario.uavs, scenario.missions):
        baseline = mission_profile(uav, mission).time_between(mission.completed_count, len(mission.waypoints))
        mine = plan.actions_for(uav.id)
        uavs.append({
            "uav_id": uav.id,
            "replacements": len(mine),
            "stations": [a.station_id for a in sorted(mine, key=lambda a: a.waypoint_index)],
            "baseline_s": baseline,
            "makespan_s": ends[uav.id] - uav.start_time,
            "extension_s": ends[uav.id] - uav.start_time - baseline,
        })
    per_station = plan.replacements_per_station()
    return {
        "total_soc_cost": plan.total_soc_cost,
        "replacements": len(plan.actions),
        "uavs": uavs,
        "replacements_per_station": [
            {"station_id": s.id, "replacements": per_station.get(s.id, 0)} for s in scenario.stations
        ],
    }


def histogram(counts: Sequence[dict], width: int = 40) -> str:
    """Text bar chart of ``replacements_per_station`` entries."""
    peak = max((c["replacements"] for c in counts), default=0) or 1
    label = max((len(str(c["station_id"])) for c in counts), default=0)
    lines = []
    for c in counts:
        bar = "#" * round(width * c["replacements"] / peak)
        lines.append(f"{str(c['station_id']).rjust(label)} | {bar} {c['replacements']}")
    return "\n".join(lines) + ("\n" if lines else "")


def summary_text(info: dict) -> str:
    lines = [f"total SoC cost: {info['total_soc_cost']:.6f}",
             f"replacements:   {info['replacements']}", "",
             "UAV  swaps  baseline   makespan   extension"]
    for u in info["uavs"]:
        lines.append(f"{str(u['uav_id']):>3}  {u['replacements']:>5}  {fmt_time(u['baseline_s']):>8}  "
                     f"{fmt_time(u['makespan_s']):>9}  {fmt_time(max(u['extension_s'], 0.0)):>10}")
    lines += ["", "swaps per station:", histogram(info["replacements_per_station"]).rstrip()]
    return "\n".join(lines) + "\n"


def summary_json(info: dict) -> str:
    return json.dumps(info, indent=2) + "\n"
