"""Problem instances: configuration, geodetic projection, generators and file I/O."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .energy import distance
from .errors import (
    InvalidAxes,
    InvalidGeoPoint,
    InvalidParams,
    NoWaypoints,
    ParseError,
    SwapPlanError,
    UnsupportedVersion,
    ValidationError,
)
from .model import (
    DEFAULT_FULL_THRESHOLD,
    Battery,
    LocalPoint,
    Mission,
    Station,
    Uav,
)

EARTH_RADIUS_M = 6_371_000.0
SOLO_TIMEOUT_S = 5.0

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlannerConfig:
    """Constraints shared by every UAV and station in a scenario.

    ``detour_time_cap`` bounds the one-way waypoint-to-station flight time of
    candidate actions (``None`` keeps every action). ``replacement_duration``
    is used for stations that do not declare their own.
    """

    min_soc: float = 0.2
    detour_time_cap: Optional[float] = None
    replacement_duration: float = 120.0
    safety_margin_before: float = 30.0
    safety_margin_after: float = 30.0
    full_threshold: float = DEFAULT_FULL_THRESHOLD

    def __post_init__(self):
        problems = []
        if not 0.0 <= self.min_soc < 1.0:
            problems.append(("config.min_soc", f"{self.min_soc} outside [0, 1)"))
        if not 0.0 < self.full_threshold <= 1.0:
            problems.append(("config.full_threshold", f"{self.full_threshold} outside (0, 1]"))
        for name in ("replacement_duration", "safety_margin_before", "safety_margin_after"):
            if getattr(self, name) < 0:
                problems.append((f"config.{name}", "must be >= 0"))
        if self.detour_time_cap is not None and self.detour_time_cap < 0:
            problems.append(("config.detour_time_cap", "must be >= 0 or null"))
        if problems:
            raise ValidationError(problems)

    @property
    def block_duration(self) -> float:
        return self.safety_margin_before + self.replacement_duration + self.safety_margin_after


@dataclass(frozen=True)
class Scenario:
    uavs: Tuple[Uav, ...]
    missions: Tuple[Mission, ...]
    stations: Tuple[Station, ...]
    config: PlannerConfig = field(default_factory=PlannerConfig)

    def __post_init__(self):
        object.__setattr__(self, "uavs", tuple(self.uavs))
        object.__setattr__(self, "missions", tuple(self.missions))
        object.__setattr__(self, "stations", tuple(self.stations))
        validate_scenario(self)

    def uav_index(self, uav_id) -> int:
        for i, u in enumerate(self.uavs):
            if u.id == uav_id:
                return i
        raise KeyError(uav_id)

    def station_index(self, station_id) -> int:
        for i, s in enumerate(self.stations):
            if s.id == station_id:
                return i
        raise KeyError(station_id)

    def mission_for(self, uav_id) -> Mission:
        return self.missions[self.uav_index(uav_id)]


def validate_scenario(scenario: Scenario) -> None:
    problems = []
    uav_ids = [u.id for u in scenario.uavs]
    if len(set(uav_ids)) != len(uav_ids):
        problems.append(("uavs", "duplicate UAV id"))
    station_ids = [s.id for s in scenario.stations]
    if len(set(station_ids)) != len(station_ids):
        problems.append(("stations", "duplicate station id"))
    battery_ids = [b.id for s in scenario.stations for b in s.batteries]
    if len(set(battery_ids)) != len(battery_ids):
        problems.append(("stations.batteries", "duplicate battery id across stations"))
    if len(scenario.missions) != len(scenario.uavs):
        problems.append(("missions", "need exactly one mission per UAV"))
    else:
        for u, m in zip(scenario.uavs, scenario.missions):
            if m.uav_id != u.id:
                problems.append(("missions", f"mission for {m.uav_id} is paired with UAV {u.id}"))

    dims = set()
    for u in scenario.uavs:
        dims.add(len(u.start_position))
    for m in scenario.missions:
        dims.update(len(p) for p in m.waypoints)
    for s in scenario.stations:
        dims.add(len(s.position))
    if len(dims) > 1:
        problems.append(("points", f"mixed dimensionality {sorted(dims)}; all points must be 2-D or all 3-D"))
    if problems:
        raise ValidationError(problems)


# --- geodetic projection -------------------------------------------------


@dataclass(frozen=True)
class GeoPoint:
    latitude: float
    longitude: float
    altitude: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.latitude) and abs(self.latitude) <= 90):
            raise InvalidGeoPoint([("latitude", f"{self.latitude} outside [-90, 90]")])
        if not (math.isfinite(self.longitude) and abs(self.longitude) <= 180):
            raise InvalidGeoPoint([("longitude", f"{self.longitude} outside [-180, 180]")])


def to_local_frame(points: Sequence[GeoPoint], origin: GeoPoint) -> list:
    """Equirectangular tangent-plane projection about ``origin`` (x east, y north, z up).

    Points carrying an altitude map to 3-D, others to 2-D.
    """
    if not points:
        raise InvalidGeoPoint([("points", "empty point list")])
    k = EARTH_RADIUS_M * math.pi / 180.0
    coslat = math.cos(math.radians(origin.latitude))
    alt0 = origin.altitude or 0.0
    out = []
    for p in points:
        x = (p.longitude - origin.longitude) * coslat * k
        y = (p.latitude - origin.latitude) * k
        if p.altitude is None:
            out.append((x, y))
        else:
            out.append((x, y, p.altitude - alt0))
    return out


def to_geo(points: Sequence[LocalPoint], origin: GeoPoint) -> list:
    """Inverse of :func:`to_local_frame`."""
    k = EARTH_RADIUS_M * math.pi / 180.0
    coslat = math.cos(math.radians(origin.latitude))
    alt0 = origin.altitude or 0.0
    out = []
    for p in points:
        lat = origin.latitude + p[1] / k
        lon = origin.longitude + p[0] / (coslat * k)
        alt = p[2] + alt0 if len(p) == 3 else None
        out.append(GeoPoint(lat, lon, alt))
    return out


# --- random ellipse scenario ----------------------------------------------


def ellipse_waypoints(center, semi_axes, count: int, rng=None, angles=None) -> list:
    """Points on an axis-aligned ellipse at ascending angles.

    Angles are drawn uniformly from [0, 2pi) with ``rng`` unless given
    explicitly. A 3-D center keeps its altitude for every point.
    """
    a, b = semi_axes
    if not (a > 0 and b > 0):
        raise InvalidAxes([("semi_axes", f"must be positive, got {semi_axes}")])
    if count < 1:
        raise InvalidParams([("count", f"must be >= 1, got {count}")])
    if angles is None:
        if rng is None:
            raise InvalidParams([("rng", "either rng or angles is required")])
        angles = rng.uniform(0.0, 2.0 * math.pi, size=count)
    elif len(angles) != count:
        raise InvalidParams([("angles", f"expected {count} angles, got {len(angles)}")])
    cx, cy = center[0], center[1]
    rest = tuple(center[2:])
    return [(cx + a * math.cos(t), cy + b * math.sin(t)) + rest for t in sorted(float(t) for t in angles)]


@dataclass(frozen=True)
class RandomScenarioParams:
    """Knobs for :func:`generate_random_scenario`.

    Each mission is one lap of an axis-aligned ellipse starting from its
    center. Centers are uniform over a ``field_size`` square, semi-axes are
    uniform over ``semi_axis_range`` and the lap begins at a uniform random
    phase. There is one station per angular sector around the field center.
    It sits where the sector's random ray meets a randomly chosen mission
    ellipse, shifted uniformly within ``station_spread`` meters.

    UAV speed, flight time and initial SoC are uniform over their ranges. A
    draw is rejected unless the optimal plan for that UAV flying alone exists
    and uses a number of swaps inside ``replacements_range`` (``None``
    accepts any feasible draw).
    """

    n_uav: int = 6
    n_station: int = 5
    batteries_per_station: int = 10
    n_waypoints: int = 50
    speed_range: Tuple[float, float] = (2.0, 6.0)
    flight_time_range: Tuple[float, float] = (600.0, 1200.0)
    initial_soc_range: Tuple[float, float] = (0.6, 1.0)
    semi_axis_range: Tuple[float, float] = (500.0, 700.0)
    field_size: float = 200.0
    station_spread: float = 100.0
    replacements_range: Optional[Tuple[int, int]] = (1, 3)
    first_uav_id: int = 1
    first_station_id: int = 201
    config: PlannerConfig = field(default_factory=PlannerConfig)
    max_draws: int = 10_000

    def validate(self) -> None:
        problems = []
        for name in ("n_uav", "n_station", "n_waypoints"):
            if getattr(self, name) < 1:
                problems.append((name, f"must be >= 1, got {getattr(self, name)}"))
        if self.batteries_per_station < 0:
            problems.append(("batteries_per_station", "must be >= 0"))
        for name in ("speed_range", "flight_time_range", "initial_soc_range", "semi_axis_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                problems.append((name, f"lo {lo} > hi {hi}"))
            elif lo <= 0 and name != "initial_soc_range":
                problems.append((name, "must be positive"))
        lo, hi = self.initial_soc_range
        if lo < 0 or hi > 1:
            problems.append(("initial_soc_range", "must lie in [0, 1]"))
        if self.field_size < 0 or self.station_spread < 0:
            problems.append(("field_size", "field_size and station_spread must be >= 0"))
        if self.replacements_range is not None:
            lo, hi = self.replacements_range
            if not 0 <= lo <= hi:
                problems.append(("replacements_range", f"invalid range {self.replacements_range}"))
        if problems:
            raise InvalidParams(problems)


def _lap_length(start, points) -> float:
    total, prev = 0.0, start
    for p in points:
        total += distance(prev, p)
        prev = p
    return total


def _min_swaps(duration: float, tmax: float, soc0: float, floor: float) -> int:
    """Swaps needed to fly ``duration`` seconds if detours were free."""
    first = (soc0 - floor) * tmax
    if duration <= first:
        return 0
    return math.ceil((duration - first) / ((1.0 - floor) * tmax))


def _solo_swaps(uav, mission, stations, config) -> Optional[int]:
    """Swaps in the optimal plan for ``uav`` flying alone, or None if it cannot finish."""
    from .planner import Planner  # imported lazily: the planner builds on this module's types

    solo = Scenario((uav,), (mission,), tuple(stations), config)
    planner = Planner(solo)
    if not math.isfinite(planner.relaxed_bound(0)):
        return None
    try:
        solo_plan, _ = planner.search(timeout=SOLO_TIMEOUT_S)
    except SwapPlanError:
        return None
    return len(solo_plan.actions)


def _draw_uav(rng, params, uid, center, lap, mission, stations, swap_range) -> Optional[Uav]:
    """First UAV draw whose solo optimal plan uses a swap count within ``swap_range``."""
    lo, hi = swap_range
    cfg = params.config
    for _ in range(params.max_draws):
        speed = float(rng.uniform(*params.speed_range))
        tmax = float(rng.uniform(*params.flight_time_range))
        soc0 = float(rng.uniform(*params.initial_soc_range))
        if not lo <= _min_swaps(lap / speed, tmax, soc0, cfg.min_soc) <= hi:
            continue
        uav = Uav(uid, speed, tmax, soc0, center)
        swaps = _solo_swaps(uav, mission, stations, cfg)
        if swaps is not None and lo <= swaps <= hi:
            return uav
    return None


def generate_random_scenario(seed: int, params: RandomScenarioParams | None = None) -> Scenario:
    """Draw a reproducible ellipse scenario; see :class:`RandomScenarioParams`.

    The per-UAV filter ignores the other UAVs, so the scenario as a whole can
    still be infeasible when several UAVs need the same station at once.
    """
    params = params or RandomScenarioParams()
    params.validate()
    rng = np.random.default_rng(seed)
    cfg = params.config

    geometry = []
    for _ in range(params.n_uav):
        center = (float(rng.uniform(0, params.field_size)), float(rng.uniform(0, params.field_size)))
        axes = (float(rng.uniform(*params.semi_axis_range)), float(rng.uniform(*params.semi_axis_range)))
        phase = float(rng.uniform(0.0, 2.0 * math.pi))
        angles = phase + rng.uniform(0.0, 2.0 * math.pi, size=params.n_waypoints)
        wps = ellipse_waypoints(center, axes, params.n_waypoints, angles=angles)
        geometry.append((center, wps, (center, *axes)))

    # one station per angular sector around the field center, placed on a
    # randomly chosen mission's ellipse and jittered within station_spread
    mid = params.field_size / 2.0
    sector = 2.0 * math.pi / params.n_station
    stations = []
    for j in range(params.n_station):
        theta = sector * (j + float(rng.uniform()))
        (cx, cy), a, b = geometry[int(rng.integers(len(geometry)))][2]
        ox, oy = mid - cx, mid - cy  # ray from the field center, expressed in ellipse coordinates
        dx, dy = math.cos(theta), math.sin(theta)
        # solve ((ox + t dx) / a)^2 + ((oy + t dy) / b)^2 = 1 for t > 0
        qa = (dx / a) ** 2 + (dy / b) ** 2
        qb = 2 * (ox * dx / a ** 2 + oy * dy / b ** 2)
        qc = (ox / a) ** 2 + (oy / b) ** 2 - 1
        t = (-qb + math.sqrt(qb * qb - 4 * qa * qc)) / (2 * qa)
        radius = params.station_spread * math.sqrt(float(rng.uniform()))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        pos = (mid + t * dx + radius * math.cos(phi), mid + t * dy + radius * math.sin(phi))
        sid = params.first_station_id + j
        batteries = tuple(Battery(f"{sid}-{k + 1}", 1.0) for k in range(params.batteries_per_station))
        stations.append(Station(sid, pos, slots=1, batteries=batteries,
                                replacement_duration=cfg.replacement_duration))

    lo, hi = params.replacements_range or (0, math.inf)
    uavs, missions = [], []
    for i, (center, wps, _) in enumerate(geometry):
        uid = params.first_uav_id + i
        mission = Mission(uid, tuple(wps))
        lap = _lap_length(center, wps)
        uav = _draw_uav(rng, params, uid, center, lap, mission, stations, (lo, hi))
        if uav is None and params.replacements_range is not None:
            # tiny missions may never need a swap; accept any draw that can finish
            log.warning("uav %s: no draw needs %s-%s swaps, relaxing the range", uid, lo, hi)
            uav = _draw_uav(rng, params, uid, center, lap, mission, stations, (0, math.inf))
        if uav is None:
            raise InvalidParams([(f"uav {uid}", f"no acceptable draw in {params.max_draws} attempts")])
        uavs.append(uav)
        missions.append(mission)
    return Scenario(tuple(uavs), tuple(missions), tuple(stations), cfg)


# --- QGroundControl .plan ingestion ----------------------------------------

# MAV_CMD ids of navigation commands whose params[4:7] are lat/lon/alt
NAV_COMMANDS = {16, 17, 18, 19, 21, 22, 31, 82, 84, 85}
_RELATIVE_FRAMES = {3, 6, 10, 11}
_ABSOLUTE_FRAMES = {0, 5}


def _item_point(item: dict, home: GeoPoint) -> Optional[GeoPoint]:
    if item.get("command") not in NAV_COMMANDS:
        return None
    params = item.get("params")
    if not isinstance(params, list) or len(params) < 7:
        raise ParseError(f"mission item {item.get('doJumpId', '?')} has malformed params")
    lat, lon, alt = params[4], params[5], params[6]
    if lat is None or lon is None or (lat == 0 and lon == 0):
        return None
    frame = item.get("frame", 3)
    if alt is None:
        alt = 0.0 if frame in _RELATIVE_FRAMES else home.altitude
    if frame not in _ABSOLUTE_FRAMES:
        alt = alt + (home.altitude or 0.0)
    return GeoPoint(float(lat), float(lon), float(alt))


def _complex_points(item: dict, home: GeoPoint) -> list:
    transect = item.get("TransectStyleComplexItem")
    if not isinstance(transect, dict):
        return []
    if isinstance(transect.get("Items"), list):
        return [p for sub in transect["Items"] if (p := _item_point(sub, home)) is not None]
    rel_alt = float(transect.get("CameraCalc", {}).get("DistanceToSurface", 0.0))
    return [GeoPoint(float(lat), float(lon), rel_alt + (home.altitude or 0.0))
            for lat, lon in transect.get("VisualTransectPoints", [])]


def parse_mission_plan(file_contents: str) -> tuple:
    """Extract waypoint coordinates and the planned home position from a ``.plan`` document.

    Relative-altitude frames are converted to absolute altitude using the
    home position, so that projecting with the home as origin yields heights
    above take-off.
    """
    try:
        doc = json.loads(file_contents)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("mission"), dict):
        raise ParseError("missing top-level 'mission' object")
    if doc.get("fileType", "Plan") != "Plan":
        raise ParseError(f"fileType {doc.get('fileType')!r} is not 'Plan'")
    if doc.get("version", 1) != 1:
        raise UnsupportedVersion(f"plan version {doc.get('version')} not supported")
    mission = doc["mission"]
    if mission.get("version", 2) != 2:
        raise UnsupportedVersion(f"mission version {mission.get('version')} not supported")

    home_raw = mission.get("plannedHomePosition")
    if not isinstance(home_raw, list) or len(home_raw) < 2:
        raise ParseError("missing or malformed 'plannedHomePosition'")
    try:
        home = GeoPoint(float(home_raw[0]), float(home_raw[1]),
                        float(home_raw[2]) if len(home_raw) > 2 and home_raw[2] is not None else 0.0)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad plannedHomePosition: {exc}") from exc

    items = mission.get("items")
    if not isinstance(items, list):
        raise ParseError("'mission.items' must be a list")
    points = []
    for item in items:
        if not isinstance(item, dict):
            raise ParseError("mission item is not an object")
        if item.get("type") == "ComplexItem":
            points.extend(_complex_points(item, home))
        else:
            p = _item_point(item, home)
            if p is not None:
                points.append(p)
    if not points:
        raise NoWaypoints("plan contains no navigation waypoints")
    return points, home


# --- scenario documents ----------------------------------------------------


def _is_geo(raw) -> bool:
    return isinstance(raw, dict) and "lat" in raw


def _parse_geo(raw, where: str) -> GeoPoint:
    try:
        return GeoPoint(float(raw["lat"]), float(raw["lon"]),
                        None if raw.get("alt") is None else float(raw["alt"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError([(where, f"bad geo point {raw!r}")]) from exc


def _parse_point(raw, where: str, origin: Optional[GeoPoint]) -> LocalPoint:
    if _is_geo(raw):
        if origin is None:
            raise ValidationError([(where, "geodetic point given but document has no origin")])
        return to_local_frame([_parse_geo(raw, where)], origin)[0]
    if isinstance(raw, dict):
        raw = [raw.get("x"), raw.get("y")] + ([raw["z"]] if "z" in raw else [])
    try:
        point = tuple(float(c) for c in raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError([(where, f"bad point {raw!r}")]) from exc
    if len(point) not in (2, 3):
        raise ValidationError([(where, f"expected 2 or 3 coordinates, got {len(point)}")])
    return point


def _parse_config(raw: dict) -> PlannerConfig:
    names = {
        "min_soc": "min_soc",
        "detour_time_cap_s": "detour_time_cap",
        "replacement_duration_s": "replacement_duration",
        "safety_margin_before_s": "safety_margin_before",
        "safety_margin_after_s": "safety_margin_after",
        "full_threshold": "full_threshold",
    }
    unknown = set(raw) - set(names)
    if unknown:
        raise ValidationError([("config", f"unknown keys {sorted(unknown)}")])
    kwargs = {names[k]: (None if v is None else float(v)) for k, v in raw.items()}
    return PlannerConfig(**kwargs)


def config_to_dict(config: PlannerConfig) -> dict:
    return {
        "min_soc": config.min_soc,
        "detour_time_cap_s": config.detour_time_cap,
        "replacement_duration_s": config.replacement_duration,
        "safety_margin_before_s": config.safety_margin_before,
        "safety_margin_after_s": config.safety_margin_after,
        "full_threshold": config.full_threshold,
    }


def _read_text(path_or_contents) -> tuple:
    if isinstance(path_or_contents, Path):
        path = path_or_contents
    else:
        text = str(path_or_contents)
        if text.lstrip().startswith("{"):
            return text, Path.cwd()
        path = Path(text)
    try:
        return path.read_text(), path.parent
    except OSError as exc:
        raise ValidationError([("path", f"cannot read {path}: {exc}")]) from exc


def scenario_from_dict(doc: dict, base_dir: Path | None = None) -> Scenario:
    base_dir = Path.cwd() if base_dir is None else Path(base_dir)
    problems = []
    origin = _parse_geo(doc["origin"], "origin") if doc.get("origin") else None

    def guarded(where, fn):
        try:
            return fn()
        except ValidationError as exc:
            problems.extend((f"{where}.{f}" if f else where, m) for f, m in exc.problems)
        except (SwapPlanError, KeyError, TypeError, ValueError) as exc:
            problems.append((where, f"{type(exc).__name__}: {exc}"))
        return None

    uavs, missions = [], []
    for i, raw in enumerate(doc.get("uavs", [])):
        where = f"uavs[{i}]"

        def build(raw=raw, where=where):
            mission_raw = raw["mission"]
            if isinstance(mission_raw, str):
                plan_path = Path(mission_raw)
                if not plan_path.is_absolute():
                    plan_path = base_dir / plan_path
                if origin is None:
                    raise ValidationError([("origin", "required when missions reference .plan files")])
                try:
                    geo, _home = parse_mission_plan(plan_path.read_text())
                except OSError as exc:
                    raise ValidationError([("mission", f"cannot read {plan_path}: {exc}")]) from exc
                wps = to_local_frame(geo, origin)
            else:
                wps = [_parse_point(p, f"{where}.mission[{k}]", origin) for k, p in enumerate(mission_raw)]
            uav = Uav(
                raw["id"],
                float(raw["speed_mps"]),
                float(raw["max_flight_time_s"]),
                float(raw["initial_soc"]),
                _parse_point(raw["start"], f"{where}.start", origin),
                start_time=float(raw.get("start_time_s", 0.0)),
            )
            return uav, Mission(raw["id"], tuple(wps), int(raw.get("completed_count", 0)))

        built = guarded(where, build)
        if built:
            uavs.append(built[0])
            missions.append(built[1])

    config = guarded("config", lambda: _parse_config(doc.get("config", {}))) or PlannerConfig()

    stations = []
    for i, raw in enumerate(doc.get("stations", [])):
        where = f"stations[{i}]"

        def build_station(raw=raw, where=where):
            bats = raw.get("batteries", [])
            if isinstance(bats, int):
                bats = [{"id": f"{raw['id']}-{k + 1}", "soc": 1.0} for k in range(bats)]
            return Station(
                raw["id"],
                _parse_point(raw["position"], f"{where}.position", origin),
                slots=int(raw.get("slots", 1)),
                batteries=tuple(Battery(b["id"], float(b.get("soc", 1.0))) for b in bats),
                replacement_duration=float(raw.get("replacement_duration_s", config.replacement_duration)),
            )

        st = guarded(where, build_station)
        if st:
            stations.append(st)

    if problems:
        raise ValidationError(problems)
    return Scenario(tuple(uavs), tuple(missions), tuple(stations), config)


def load_scenario(path_or_contents) -> Scenario:
    text, base_dir = _read_text(path_or_contents)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([("document", f"invalid JSON: {exc}")]) from exc
    if not isinstance(doc, dict):
        raise ValidationError([("document", "top level must be an object")])
    return scenario_from_dict(doc, base_dir)


def scenario_to_dict(scenario: Scenario) -> dict:
    """Local-frame document; reloading it yields an equal :class:`Scenario`."""
    uavs = []
    for u, m in zip(scenario.uavs, scenario.missions):
        entry = {
            "id": u.id,
            "speed_mps": u.speed,
            "max_flight_time_s": u.max_flight_time,
            "initial_soc": u.initial_soc,
            "start": list(u.start_position),
            "mission": [list(p) for p in m.waypoints],
            "completed_count": m.completed_count,
        }
        if u.start_time:
            entry["start_time_s"] = u.start_time
        uavs.append(entry)
    stations = [
        {
            "id": s.id,
            "position": list(s.position),
            "slots": s.slots,
            "batteries": [{"id": b.id, "soc": b.soc} for b in s.batteries],
            "replacement_duration_s": s.replacement_duration,
        }
        for s in scenario.stations
    ]
    return {"uavs": uavs, "stations": stations, "config": config_to_dict(scenario.config)}


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=1) + "\n"


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(dump_scenario(scenario))


def with_config(scenario: Scenario, **overrides) -> Scenario:
    """Copy of ``scenario`` with some :class:`PlannerConfig` fields replaced."""
    return replace(scenario, config=replace(scenario.config, **overrides))
