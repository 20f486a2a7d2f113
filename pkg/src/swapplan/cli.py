"""Command-line entry point: ``swapplan generate | import | plan | report``.

Exit codes: 0 success, 2 invalid input, 3 infeasible, 4 timeout,
5 plan violation. Outputs go to ``--out`` or, when it is omitted, to the
directory named by ``SWAPPLAN_OUT_DIR`` (default: the working directory).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import Infeasible, ParseError, PlanViolation, SearchTimeout, SwapPlanError, ValidationError
from .planner import DEFAULT_TIMEOUT_S, EXPANSIONS, HEURISTICS, Planner, dump_plan, load_plan
from .report import action_table, schedule_table, simulate, soc_csv, summary, summary_json, summary_text
from .scenario import (
    PlannerConfig,
    RandomScenarioParams,
    dump_scenario,
    generate_random_scenario,
    load_scenario,
    parse_mission_plan,
    scenario_from_dict,
    scenario_to_dict,
    to_local_frame,
    with_config,
)

log = logging.getLogger("swapplan")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_TIMEOUT = 4
EXIT_VIOLATION = 5

OUT_DIR_ENV = "SWAPPLAN_OUT_DIR"
REPORT_FILES = ("actions.txt", "schedule.txt", "soc.csv", "summary.json")


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(path: Path, command: str, source, overrides: dict, outputs, started: datetime) -> None:
    """Record what produced ``outputs`` so the run can be repeated and checked."""
    manifest = {
        "command": command,
        "version": __version__,
        "scenario_source": source,
        "config_overrides": overrides,
        "outputs": {str(p): _sha256(p) for p in outputs},
        "started_utc": started.isoformat(),
        "finished_utc": datetime.now(timezone.utc).isoformat(),
    }
    path.write_text(json.dumps(manifest, indent=2) + "\n")


def _config_overrides(args) -> dict:
    """Config fields set on the command line; they win over the scenario document."""
    overrides = {}
    if getattr(args, "min_soc", None) is not None:
        overrides["min_soc"] = args.min_soc
    if getattr(args, "detour_cap", None) is not None:
        overrides["detour_time_cap"] = None if args.detour_cap <= 0 else args.detour_cap
    return overrides


def _stem(path: Path) -> str:
    return path.name[:-len(".json")] if path.name.endswith(".json") else path.stem


# -- subcommands ------------------------------------------------------------------


def cmd_generate(args) -> int:
    started = datetime.now(timezone.utc)
    overrides = _config_overrides(args)
    params = RandomScenarioParams(
        n_uav=args.uavs,
        n_station=args.stations,
        batteries_per_station=args.batteries,
        n_waypoints=args.waypoints,
        config=PlannerConfig(**overrides),
    )
    scenario = generate_random_scenario(args.seed, params)
    out = Path(args.out) if args.out else default_out_dir() / f"scenario-{args.seed}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_scenario(scenario))
    write_manifest(out.with_name(_stem(out) + ".manifest.json"), "generate", {"seed": args.seed},
                   overrides, [out], started)
    print(f"wrote {out}: {len(scenario.uavs)} UAVs, {len(scenario.stations)} stations")
    return EXIT_OK


def _import_document(plan_files, params: dict, speed=None, flight_time=None, initial_soc=None) -> dict:
    homes, missions = [], []
    for path in plan_files:
        try:
            points, home = parse_mission_plan(Path(path).read_text())
        except ParseError as exc:
            raise type(exc)(f"{path}: {exc}") from exc
        except OSError as exc:
            raise ValidationError([("plan_files", f"cannot read {path}: {exc}")]) from exc
        homes.append(home)
        missions.append(points)
    origin = homes[0]
    origin_doc = {"lat": origin.latitude, "lon": origin.longitude, "alt": origin.altitude}

    defaults = dict(params.get("uav_defaults", {}))
    for key, value in (("speed_mps", speed), ("max_flight_time_s", flight_time), ("initial_soc", initial_soc)):
        if value is not None:
            defaults[key] = value
    per_uav = params.get("uavs", [])
    if per_uav and len(per_uav) != len(plan_files):
        raise ValidationError([("uavs", f"{len(per_uav)} UAV entries for {len(plan_files)} plan files")])

    uavs = []
    for i, (points, home) in enumerate(zip(missions, homes)):
        entry = {"id": i + 1, **defaults, **(per_uav[i] if per_uav else {})}
        local = to_local_frame(points + [home], origin)
        entry["mission"] = [list(p) for p in local[:-1]]
        entry.setdefault("start", list(local[-1]))
        missing = [k for k in ("speed_mps", "max_flight_time_s", "initial_soc") if k not in entry]
        if missing:
            raise ValidationError([(f"uavs[{i}]", f"missing {', '.join(missing)} (use flags or the params file)")])
        uavs.append(entry)

    three_d = any(len(p) == 3 for u in uavs for p in u["mission"])
    stations = []
    for raw in params.get("stations", []):
        station = dict(raw)
        pos = station.get("position")
        if three_d and isinstance(pos, dict) and "lat" in pos and pos.get("alt") is None:
            station["position"] = {**pos, "alt": origin.altitude or 0.0}  # stations stand on the ground
        stations.append(station)
    return {"origin": origin_doc, "uavs": uavs, "stations": stations, "config": params.get("config", {})}


def cmd_import(args) -> int:
    started = datetime.now(timezone.utc)
    if not args.plan_files:
        raise ValidationError([("plan_files", "at least one .plan file is required")])
    params = {}
    if args.params:
        try:
            params = json.loads(Path(args.params).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError([("params", f"cannot read {args.params}: {exc}")]) from exc
    doc = _import_document(args.plan_files, params, args.speed, args.flight_time, args.initial_soc)
    scenario = scenario_from_dict(doc)
    overrides = _config_overrides(args)
    if overrides:
        scenario = with_config(scenario, **overrides)
    out_doc = scenario_to_dict(scenario)
    out_doc = {"origin": doc["origin"], **out_doc}
    out = Path(args.out) if args.out else default_out_dir() / "scenario.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(out_doc, indent=1) + "\n")
    write_manifest(out.with_name(_stem(out) + ".manifest.json"), "import",
                   {"plan_files": [str(p) for p in args.plan_files], "params": args.params},
                   overrides, [out], started)
    print(f"wrote {out}: {len(scenario.uavs)} UAVs, {len(scenario.stations)} stations")
    return EXIT_OK


def cmd_plan(args) -> int:
    started = datetime.now(timezone.utc)
    scenario = load_scenario(Path(args.scenario))
    overrides = _config_overrides(args)
    if overrides:
        scenario = with_config(scenario, **overrides)
    out = Path(args.out) if args.out else default_out_dir() / f"{_stem(Path(args.scenario))}-plan.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    stats_path = out.with_name(_stem(out) + ".stats.json")

    planner = Planner(scenario, heuristic_mode=args.heuristic, expansion=args.expansion)
    try:
        result, stats = planner.search(timeout=args.timeout)
    except SearchTimeout as exc:
        if exc.stats is not None:
            stats_path.write_text(json.dumps({"status": "timeout", **exc.stats.as_dict()}, indent=2) + "\n")
        raise
    out.write_text(dump_plan(result, stats))
    stats_path.write_text(json.dumps({"status": "ok", **stats.as_dict()}, indent=2) + "\n")
    write_manifest(out.with_name(_stem(out) + ".manifest.json"), "plan", str(args.scenario),
                   {**overrides, "timeout_s": args.timeout, "heuristic": args.heuristic,
                    "expansion": args.expansion}, [out], started)
    print(f"wrote {out}: {len(result.actions)} replacements, total SoC cost {result.total_soc_cost:.6f}, "
          f"{stats.expanded} vertices expanded in {stats.wall_time:.2f} s")
    return EXIT_OK


def cmd_report(args) -> int:
    started = datetime.now(timezone.utc)
    scenario = load_scenario(Path(args.scenario))
    overrides = _config_overrides(args)
    if overrides:
        scenario = with_config(scenario, **overrides)
    try:
        plan = load_plan(Path(args.plan).read_text())
    except OSError as exc:
        raise ValidationError([("plan", f"cannot read {args.plan}: {exc}")]) from exc
    timelines = simulate(scenario, plan)
    info = summary(scenario, plan, timelines)

    out_dir = Path(args.out) if args.out else default_out_dir() / f"{_stem(Path(args.plan))}-report"
    out_dir.mkdir(parents=True, exist_ok=True)
    contents = {
        "actions.txt": action_table(plan).render(),
        "schedule.txt": schedule_table(plan).render(),
        "soc.csv": soc_csv(timelines),
    }
    for name, text in contents.items():
        (out_dir / name).write_text(text)
    outputs = [out_dir / name for name in contents]
    if args.figures:
        from .figures import mission_map, soc_figure

        outputs.append(soc_figure(timelines, out_dir / "soc.png", scenario.config.min_soc))
        outputs.append(mission_map(scenario, plan, out_dir / "map.png"))
    info["run"] = {
        "scenario": str(args.scenario),
        "plan": str(args.plan),
        "config_overrides": overrides,
        "outputs": {p.name: _sha256(p) for p in outputs},
        "started_utc": started.isoformat(),
    }
    (out_dir / "summary.json").write_text(summary_json(info))
    sys.stdout.write(summary_text(info))
    print(f"report written to {out_dir}")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


def _add_config_flags(parser):
    parser.add_argument("--min-soc", type=float, help="SoC floor (default: from scenario, else 0.2)")
    parser.add_argument("--detour-cap", type=float, metavar="SECONDS",
                        help="drop swaps whose one-way station leg takes longer; 0 removes a cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swapplan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a random ellipse scenario")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--uavs", type=int, default=6)
    gen.add_argument("--stations", type=int, default=5)
    gen.add_argument("--batteries", type=int, default=10, help="charged batteries per station")
    gen.add_argument("--waypoints", type=int, default=50, help="waypoints per mission")
    _add_config_flags(gen)
    gen.add_argument("--out", help="scenario file to write")
    gen.set_defaults(func=cmd_generate)

    imp = sub.add_parser("import", help="build a scenario from QGroundControl .plan files")
    imp.add_argument("plan_files", nargs="*", help=".plan files, one per UAV")
    imp.add_argument("--params", help="JSON with uav_defaults, uavs, stations and config")
    imp.add_argument("--speed", type=float, help="speed of every UAV in m/s")
    imp.add_argument("--flight-time", type=float, help="full-battery flight time of every UAV in s")
    imp.add_argument("--initial-soc", type=float, help="initial SoC of every UAV")
    _add_config_flags(imp)
    imp.add_argument("--out", help="scenario file to write")
    imp.set_defaults(func=cmd_import)

    pl = sub.add_parser("plan", help="search for the minimum-SoC replacement plan")
    pl.add_argument("scenario")
    _add_config_flags(pl)
    pl.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT_S, help="wall-clock budget in seconds")
    pl.add_argument("--heuristic", choices=HEURISTICS, default="relaxed")
    pl.add_argument("--expansion", choices=EXPANSIONS, default="earliest")
    pl.add_argument("--out", help="plan file to write (stats go next to it)")
    pl.set_defaults(func=cmd_plan)

    rep = sub.add_parser("report", help="replay a plan and write tables, SoC CSV and a summary")
    rep.add_argument("scenario")
    rep.add_argument("plan")
    _add_config_flags(rep)
    rep.add_argument("--figures", action="store_true", help="also render PNG figures (needs matplotlib)")
    rep.add_argument("--out", help="output directory")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SearchTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except PlanViolation as exc:
        print(f"plan violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except SwapPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
