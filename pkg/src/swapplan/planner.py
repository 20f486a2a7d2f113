"""A* search over battery-replacement decisions.

A search edge commits one replacement action for one UAV, or flies a UAV
that can already finish straight to its last waypoint. The waypoint-by-waypoint
flight in between is folded into the edge cost. UAVs are coupled only through
station battery counts and station calendars.

The cost of a vertex is the SoC consumed since scenario start summed over
UAVs. Since every UAV flies its whole mission regardless of the plan, the
objective is equivalent to minimising the SoC spent on detours.
"""

from __future__ import annotations

import heapq
import itertools
import json
import logging
import math
import time as _time
from dataclasses import dataclass
from functools import cached_property

from .actions import ActionCostTensor, precompute
from .energy import mission_profile, remaining_soc_to_finish
from .errors import Infeasible, SearchTimeout, ValidationError
from .model import Plan, ReplacementAction, charged_battery_count, id_key
from .schedule import StationSchedule, Window, blocking_window, is_free, reserve

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 600.0
HEURISTICS = ("relaxed", "mission")
EXPANSIONS = ("earliest", "all")


@dataclass(frozen=True)
class Vertex:
    """Search state.

    ``progress[u]`` counts the waypoints UAV ``u`` has flown. After a swap
    decided at waypoint ``w`` the UAV is back at ``w`` with ``progress == w + 1``.
    ``anchor[u]`` is ``None`` before the UAV's first swap and
    ``(waypoint, station_index)`` of its latest swap afterwards.
    """

    progress: tuple
    soc_now: tuple
    clock: tuple
    consumed: tuple
    charged_counts: tuple
    schedules: tuple
    committed: tuple = ()
    anchor: tuple = ()
    h_terms: tuple = ()

    @property
    def g(self) -> float:
        return sum(self.consumed)

    @cached_property
    def key(self) -> tuple:
        windows = tuple(tuple(round(w.start * 1000) for w in sch.windows) for sch in self.schedules)
        return (
            self.progress,
            self.charged_counts,
            tuple(round(s * 1e6) for s in self.soc_now),
            tuple(round(c * 1000) for c in self.clock),
            windows,
        )


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    duplicates_skipped: int = 0
    wall_time: float = 0.0
    peak_open_size: int = 0

    def as_dict(self) -> dict:
        return {
            "expanded": self.expanded,
            "generated": self.generated,
            "duplicates_skipped": self.duplicates_skipped,
            "wall_time_s": self.wall_time,
            "peak_open_size": self.peak_open_size,
        }


def heuristic(vertex: Vertex, profiles) -> float:
    """SoC the remaining mission legs need, summed over UAVs, ignoring any detour."""
    return sum(remaining_soc_to_finish(p, k) for p, k in zip(profiles, vertex.progress))


class Planner:
    """Search context for one scenario: profiles, detour prices and the expansion rules.

    ``heuristic_mode='mission'`` uses the plain remaining-mission estimate.
    ``'relaxed'`` (default) adds, per UAV, the cheapest detour cost that UAV
    still needs when station inventories and calendars are ignored, which
    keeps the estimate admissible while pruning far more of the search.
    """

    def __init__(self, scenario, tensor: ActionCostTensor | None = None, heuristic_mode: str = "relaxed",
                 expansion: str = "earliest"):
        if heuristic_mode not in HEURISTICS:
            raise ValueError(f"unknown heuristic {heuristic_mode!r}; choose from {HEURISTICS}")
        if expansion not in EXPANSIONS:
            raise ValueError(f"unknown expansion {expansion!r}; choose from {EXPANSIONS}")
        self.expansion = expansion
        self.scenario = scenario
        self.config = scenario.config
        self.tensor = tensor if tensor is not None else precompute(scenario)
        self.heuristic_mode = heuristic_mode
        self.n_uav = len(scenario.uavs)
        self.n_wp = tuple(len(m.waypoints) for m in scenario.missions)
        self.tmax = tuple(u.max_flight_time for u in scenario.uavs)
        self.durations = tuple(s.replacement_duration for s in scenario.stations)
        self.profiles = tuple(
            mission_profile(u, m, min_soc=self.config.min_soc)
            for u, m in zip(scenario.uavs, scenario.missions)
        )
        self._detour_bound = None
        if heuristic_mode == "relaxed":
            self._detour_bound = [self._relaxed_detour_table(u) for u in range(self.n_uav)]

    # -- per-UAV moves -------------------------------------------------------

    def root(self) -> Vertex:
        sc = self.scenario
        return Vertex(
            progress=tuple(m.completed_count for m in sc.missions),
            soc_now=tuple(u.initial_soc for u in sc.uavs),
            clock=tuple(u.start_time for u in sc.uavs),
            consumed=tuple(0.0 for _ in sc.uavs),
            charged_counts=tuple(charged_battery_count(s, self.config.full_threshold) for s in sc.stations),
            schedules=tuple(StationSchedule(s.id) for s in sc.stations),
            anchor=tuple(None for _ in sc.uavs),
            h_terms=tuple(self.h_term(u, m.completed_count, None) for u, m in enumerate(sc.missions)),
        )

    def finish_move(self, u: int, progress: int, soc: float, clock: float, consumed: float):
        """State after flying the rest of the mission, or ``None`` if the SoC floor would break."""
        n = self.n_wp[u]
        prof = self.profiles[u]
        cost = prof.soc_between(progress, n)
        if soc - cost < self.config.min_soc:
            return None
        return n, soc - cost, clock + prof.time_between(progress, n), consumed + cost

    def swap_move(self, u: int, progress: int, soc: float, clock: float, consumed: float, cand):
        """Per-UAV outcome of one replacement detour, ignoring station resources.

        Returns ``None`` when the SoC floor rules it out, otherwise
        ``(new_state, depart, arrival, release, soc_at_waypoint, soc_at_station)``.
        """
        prof = self.profiles[u]
        w = cand.waypoint_index
        legs_t = prof.time_between(progress, w + 1)
        legs_soc = legs_t / self.tmax[u]
        at_wp = soc - legs_soc
        at_station = at_wp - cand.soc_one_way
        floor = self.config.min_soc
        if at_station < floor or 1.0 - cand.soc_one_way < floor:
            return None
        depart = clock + legs_t
        arrival = depart + cand.time_one_way
        release = arrival + self.durations[cand.station_index]
        new_state = (w + 1, 1.0 - cand.soc_one_way, release + cand.time_one_way,
                     consumed + legs_soc + cand.soc_detour)
        return new_state, depart, arrival, release, at_wp, at_station

    def finishable(self, vertex: Vertex, u: int) -> bool:
        return self.finish_move(u, vertex.progress[u], vertex.soc_now[u], vertex.clock[u], 0.0) is not None

    # -- heuristic -----------------------------------------------------------

    def _relaxed_detour_table(self, u: int) -> dict:
        """Cheapest detour SoC UAV ``u`` still needs, keyed by anchor, with stations unconstrained."""
        floor = self.config.min_soc
        prof = self.profiles[u]
        n = self.n_wp[u]

        def best_from(progress, soc, table):
            if soc - prof.soc_between(progress, n) >= floor:
                return 0.0
            best = math.inf
            for cand in self.tensor.candidates_from(u, progress):
                legs = prof.soc_between(progress, cand.waypoint_index + 1)
                if soc - legs < floor:
                    break
                if soc - legs - cand.soc_one_way < floor or 1.0 - cand.soc_one_way < floor:
                    continue
                rest = table.get((cand.waypoint_index, cand.station_index), math.inf)
                if cand.soc_detour + rest < best:
                    best = cand.soc_detour + rest
            return best

        table = {}
        for cand in reversed(self.tensor.candidates_from(u, 0)):
            key = (cand.waypoint_index, cand.station_index)
            table[key] = best_from(cand.waypoint_index + 1, 1.0 - cand.soc_one_way, table)
        start = self.scenario.missions[u].completed_count
        table[None] = best_from(start, self.scenario.uavs[u].initial_soc, table)
        return table

    def relaxed_bound(self, u: int) -> float:
        """Least detour SoC UAV ``u`` needs from its initial state; ``inf`` if it can never finish."""
        table = self._detour_bound[u] if self._detour_bound else self._relaxed_detour_table(u)
        return table[None] if table is not None else 0.0

    def h_term(self, u: int, progress: int, anchor) -> float:
        """UAV ``u``'s share of the estimate."""
        value = remaining_soc_to_finish(self.profiles[u], progress)
        if self._detour_bound is not None and progress < self.n_wp[u]:
            value += self._detour_bound[u][anchor]
        return value

    def h(self, vertex: Vertex) -> float:
        return sum(vertex.h_terms)

    # -- expansion -----------------------------------------------------------

    def movers(self, vertex: Vertex) -> list:
        """UAVs that get children at ``vertex``.

        In ``earliest`` mode only the unfinished UAV with the smallest clock
        moves. Every plan is still reachable because resource checks do not
        depend on the order in which actions are committed, and states that
        differ only by commit order are never generated.
        """
        active = [u for u in range(self.n_uav) if vertex.progress[u] < self.n_wp[u]]
        if self.expansion == "all" or not active:
            return active
        return [min(active, key=lambda u: (vertex.clock[u], u))]

    def expand(self, vertex: Vertex) -> list:
        return [self.materialize(vertex, move) for move in self.moves(vertex)]

    def moves(self, vertex: Vertex):
        """Lightweight descriptions of the children of ``vertex``; see :meth:`materialize`.

        A move is ``(u, state, anchor, booking)`` where ``state`` is UAV
        ``u``'s new ``(progress, soc, clock, consumed)`` and ``booking`` is
        ``None`` for a finish or ``(station_index, window, cand, depart,
        arrival, release)`` for a swap.
        """
        for u in self.movers(vertex):
            p = vertex.progress[u]
            soc, clock, used = vertex.soc_now[u], vertex.clock[u], vertex.consumed[u]
            done = self.finish_move(u, p, soc, clock, used)
            if done is not None:
                yield u, done, vertex.anchor[u], None
                continue
            yield from self._swap_moves(vertex, u)

    def _swap_moves(self, vertex: Vertex, u: int):
        p = vertex.progress[u]
        soc, clock, used = vertex.soc_now[u], vertex.clock[u], vertex.consumed[u]
        prof = self.profiles[u]
        floor = self.config.min_soc
        for cand in self.tensor.candidates_from(u, p):
            if soc - prof.soc_between(p, cand.waypoint_index + 1) < floor:
                break  # mission legs alone already cross the floor for every later waypoint
            s = cand.station_index
            if vertex.charged_counts[s] <= 0:
                continue
            moved = self.swap_move(u, p, soc, clock, used, cand)
            if moved is None:
                continue
            state, depart, arrival, release, _, _ = moved
            window = blocking_window(arrival, self.config, self.durations[s], warn=False)
            if not is_free(vertex.schedules[s], window):
                continue
            yield u, state, (cand.waypoint_index, s), (s, window, cand, depart, arrival, release)

    def materialize(self, vertex: Vertex, move) -> Vertex:
        u, state, anchor, booking = move
        if booking is None:
            return self._child(vertex, u, state, anchor)
        s, window, cand, depart, arrival, release = booking
        action = ReplacementAction(self.scenario.uavs[u].id, cand.station_id, cand.waypoint_index,
                                   depart, arrival, release)
        counts = list(vertex.charged_counts)
        counts[s] -= 1
        schedules = list(vertex.schedules)
        schedules[s] = reserve(schedules[s], window)
        return self._child(vertex, u, state, anchor, counts=tuple(counts), schedules=tuple(schedules),
                           action=action)

    def move_scores(self, vertex: Vertex, move) -> tuple:
        """``(g, h)`` of the child ``move`` leads to, without building it."""
        u, state, anchor, _ = move
        g = sum(vertex.consumed[:u]) + state[3] + sum(vertex.consumed[u + 1:])
        h = sum(vertex.h_terms[:u]) + self.h_term(u, state[0], anchor) + sum(vertex.h_terms[u + 1:])
        return g, h

    def _child(self, vertex, u, state, anchor, counts=None, schedules=None, action=None) -> Vertex:
        def put(seq, value):
            return seq[:u] + (value,) + seq[u + 1:]

        progress, soc, clock, used = state
        return Vertex(
            progress=put(vertex.progress, progress),
            soc_now=put(vertex.soc_now, soc),
            clock=put(vertex.clock, clock),
            consumed=put(vertex.consumed, used),
            charged_counts=vertex.charged_counts if counts is None else counts,
            schedules=vertex.schedules if schedules is None else schedules,
            committed=vertex.committed if action is None else vertex.committed + (action,),
            anchor=put(vertex.anchor, anchor),
            h_terms=put(vertex.h_terms, self.h_term(u, progress, anchor)),
        )

    def is_goal(self, vertex: Vertex) -> bool:
        return vertex.progress == self.n_wp

    # -- search --------------------------------------------------------------

    def search(self, timeout: float | None = DEFAULT_TIMEOUT_S, on_expand=None) -> tuple:
        started = _time.perf_counter()
        stats = SearchStats()
        root = self.root()
        if self._detour_bound is not None:
            stuck = [self.scenario.uavs[u].id for u in range(self.n_uav)
                     if self.n_wp[u] > root.progress[u] and math.isinf(self._detour_bound[u][None])]
            if stuck:
                stats.wall_time = _time.perf_counter() - started
                raise Infeasible(f"UAV(s) {stuck} cannot finish even with unlimited station resources")

        # Children wait in the open list as (parent, move) pairs and become
        # vertices only when popped; most are never popped.
        counter = itertools.count()
        open_list = [(root.g + self.h(root), -root.g, next(counter), None, root)]
        closed = set()
        while open_list:
            if timeout is not None and stats.expanded % 64 == 0:
                if _time.perf_counter() - started > timeout:
                    stats.wall_time = _time.perf_counter() - started
                    raise SearchTimeout(f"no plan within {timeout:g} s", stats)
            _, _, _, parent, move = heapq.heappop(open_list)
            vertex = move if parent is None else self.materialize(parent, move)
            key = vertex.key
            if key in closed:
                stats.duplicates_skipped += 1
                continue
            closed.add(key)
            stats.expanded += 1
            if on_expand is not None:
                on_expand(vertex)
            if self.is_goal(vertex):
                stats.wall_time = _time.perf_counter() - started
                return self.build_plan(vertex.committed), stats
            for child_move in self.moves(vertex):
                stats.generated += 1
                g, h = self.move_scores(vertex, child_move)
                heapq.heappush(open_list, (g + h, -g, next(counter), vertex, child_move))
            if len(open_list) > stats.peak_open_size:
                stats.peak_open_size = len(open_list)
        stats.wall_time = _time.perf_counter() - started
        raise Infeasible("search space exhausted without a feasible plan")

    # -- plan assembly -------------------------------------------------------

    def replay_uav(self, u: int, picks) -> dict | None:
        """Fly UAV ``u`` through ``picks`` (``(waypoint, station_index)`` pairs, ascending) and finish.

        Station resources are not checked here. Returns ``None`` when the SoC
        floor rules the sequence out.
        """
        uav = self.scenario.uavs[u]
        p = self.scenario.missions[u].completed_count
        state = (p, uav.initial_soc, uav.start_time, 0.0)
        timeline = [(uav.start_time, uav.initial_soc)]
        actions, windows = [], []
        by_key = {(c.waypoint_index, c.station_index): c for c in self.tensor.candidates_from(u, p)}
        for w, s in picks:
            cand = by_key.get((w, s))
            if cand is None or w < state[0]:
                return None
            moved = self.swap_move(u, *state, cand)
            if moved is None:
                return None
            new_state, depart, arrival, release, at_wp, at_station = moved
            actions.append(ReplacementAction(uav.id, cand.station_id, w, depart, arrival, release))
            windows.append((s, blocking_window(arrival, self.config, self.durations[s], warn=False)))
            timeline += [(depart, at_wp), (arrival, at_station), (release, at_station),
                         (release, 1.0), (new_state[2], new_state[1])]
            state = new_state
        if state[0] < self.n_wp[u]:
            state = self.finish_move(u, *state)
            if state is None:
                return None
            timeline.append((state[2], state[1]))
        return {"actions": actions, "windows": windows, "timeline": timeline, "final": state}

    def build_plan(self, committed) -> Plan:
        per_uav = {u.id: [] for u in self.scenario.uavs}
        for a in committed:
            per_uav[a.uav_id].append(a)
        actions, timelines, makespans = [], {}, {}
        schedules = {s.id: [] for s in self.scenario.stations}
        total = 0.0
        for u, uav in enumerate(self.scenario.uavs):
            mine = sorted(per_uav[uav.id], key=lambda a: a.waypoint_index)
            picks = [(a.waypoint_index, self.scenario.station_index(a.station_id)) for a in mine]
            run = self.replay_uav(u, picks)
            if run is None:
                raise Infeasible(f"committed actions for UAV {uav.id} violate the SoC floor")
            actions += run["actions"]
            for s, win in run["windows"]:
                schedules[self.scenario.stations[s].id].append(win)
            timelines[uav.id] = tuple(run["timeline"])
            makespans[uav.id] = run["final"][2]
            total += run["final"][3]
        actions.sort(key=lambda a: (a.arrival_time, id_key(a.uav_id), a.waypoint_index))
        return Plan(
            actions=tuple(actions),
            schedules={sid: tuple(sorted(ws)) for sid, ws in schedules.items()},
            soc_timelines=timelines,
            total_soc_cost=total,
            makespans=makespans,
        )


def plan(scenario, timeout: float | None = DEFAULT_TIMEOUT_S, heuristic_mode: str = "relaxed",
         expansion: str = "earliest", on_expand=None) -> tuple:
    """Minimum-total-SoC replacement plan. Raises :class:`Infeasible` or :class:`SearchTimeout`."""
    planner = Planner(scenario, heuristic_mode=heuristic_mode, expansion=expansion)
    return planner.search(timeout=timeout, on_expand=on_expand)


# -- plan files -------------------------------------------------------------

PLAN_FORMAT_VERSION = 1


def plan_to_dict(plan: Plan) -> dict:
    """JSON-ready form of ``plan``. Ids keep their JSON type, so the output is lossless."""
    return {
        "version": PLAN_FORMAT_VERSION,
        "total_soc_cost": plan.total_soc_cost,
        "actions": [
            {"uav_id": a.uav_id, "station_id": a.station_id, "waypoint_index": a.waypoint_index,
             "depart_s": a.depart_time, "arrival_s": a.arrival_time, "release_s": a.release_time}
            for a in plan.actions
        ],
        "schedules": [
            {"station_id": sid, "windows": [[w.start, w.end] for w in windows]}
            for sid, windows in plan.schedules.items()
        ],
        "makespans": [{"uav_id": uid, "makespan_s": t} for uid, t in plan.makespans.items()],
        "soc_timelines": [
            {"uav_id": uid, "knots": [list(k) for k in knots]} for uid, knots in plan.soc_timelines.items()
        ],
    }


def plan_from_dict(doc: dict) -> Plan:
    if doc.get("version") != PLAN_FORMAT_VERSION:
        raise ValidationError([("version", f"unsupported plan format {doc.get('version')!r}")])
    try:
        actions = tuple(
            ReplacementAction(a["uav_id"], a["station_id"], int(a["waypoint_index"]),
                              float(a["depart_s"]), float(a["arrival_s"]), float(a["release_s"]))
            for a in doc["actions"]
        )
        schedules = {s["station_id"]: tuple(Window(float(a), float(b)) for a, b in s["windows"])
                     for s in doc.get("schedules", [])}
        makespans = {m["uav_id"]: float(m["makespan_s"]) for m in doc.get("makespans", [])}
        timelines = {t["uav_id"]: tuple((float(a), float(b)) for a, b in t["knots"])
                     for t in doc.get("soc_timelines", [])}
        total = float(doc["total_soc_cost"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError([("plan", f"malformed plan document: {exc!r}")]) from exc
    return Plan(actions, schedules, timelines, total, makespans)


def dump_plan(plan: Plan, stats: SearchStats | None = None) -> str:
    doc = plan_to_dict(plan)
    if stats is not None:
        doc["stats"] = {k: v for k, v in stats.as_dict().items() if k != "wall_time_s"}
    return json.dumps(doc, indent=2) + "\n"


def load_plan(text: str) -> Plan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([("plan", f"not valid JSON: {exc}")]) from exc
    if not isinstance(doc, dict):
        raise ValidationError([("plan", "top level must be an object")])
    return plan_from_dict(doc)


# -- exhaustive oracle ------------------------------------------------------


def _uav_sequences(planner: Planner, u: int, start, max_actions: int):
    """Every SoC-feasible swap sequence of UAV ``u`` from ``start`` that ends with a finish."""
    out = []

    def walk(state, picks, records):
        if state[0] >= planner.n_wp[u]:
            out.append((tuple(picks), tuple(records), state))
            return
        done = planner.finish_move(u, *state)
        if done is not None:
            out.append((tuple(picks), tuple(records), done))
        if len(picks) >= max_actions:
            return
        for cand in planner.tensor.candidates_from(u, state[0]):
            moved = planner.swap_move(u, *state, cand)
            if moved is None:
                continue
            new_state, depart, arrival, release, _, _ = moved
            record = (cand, depart, arrival, release)
            walk(new_state, picks + [(cand.waypoint_index, cand.station_index)], records + [record])

    walk(start, [], [])
    return out


def brute_force_search(planner: Planner, vertex: Vertex, max_actions_per_uav: int):
    """Cheapest completion of ``vertex`` by enumerating every combination of per-UAV sequences.

    Returns ``(total_cost, actions)`` where ``total_cost`` is the goal's
    total consumption, or ``None`` when nothing is feasible.
    """
    config = planner.config
    per_uav = []
    for u in range(planner.n_uav):
        start = (vertex.progress[u], vertex.soc_now[u], vertex.clock[u], vertex.consumed[u])
        per_uav.append(_uav_sequences(planner, u, start, max_actions_per_uav))

    best = None
    for combo in itertools.product(*per_uav):
        counts = list(vertex.charged_counts)
        windows = [list(sch.windows) for sch in vertex.schedules]
        ok = True
        for _picks, records, _final in combo:
            for cand, _d, arrival, _r in records:
                s = cand.station_index
                counts[s] -= 1
                win = blocking_window(arrival, config, planner.durations[s], warn=False)
                if counts[s] < 0 or any(win.overlaps(other) for other in windows[s]):
                    ok = False
                    break
                windows[s].append(win)
            if not ok:
                break
        if not ok:
            continue
        total = sum(final[3] for _p, _r, final in combo)
        tie = tuple(picks for picks, _r, _f in combo)
        if best is None or (total, tie) < (best[0], best[1]):
            best = (total, tie, combo)
    if best is None:
        return None
    actions = []
    for u, (_picks, records, _final) in enumerate(best[2]):
        for cand, depart, arrival, release in records:
            actions.append(ReplacementAction(planner.scenario.uavs[u].id, cand.station_id,
                                             cand.waypoint_index, depart, arrival, release))
    return best[0], actions


def brute_force_plan(scenario, max_actions_per_uav: int = 2) -> Plan:
    """Exhaustive optimum for small instances; shares feasibility rules with :func:`plan`."""
    planner = Planner(scenario, heuristic_mode="mission")
    root = planner.root()
    found = brute_force_search(planner, root, max_actions_per_uav)
    if found is None:
        raise Infeasible("no combination of replacement actions is feasible")
    return planner.build_plan(found[1])
