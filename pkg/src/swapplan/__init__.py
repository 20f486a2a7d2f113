"""Battery-swap mission planning for UAV fleets.

Given UAV missions and battery-swap stations, :func:`plan` finds the set of
swap detours with the least total battery use that lets every UAV finish
above its SoC floor, without two swaps sharing a station at the same time.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    Infeasible,
    ParseError,
    PlanViolation,
    SearchTimeout,
    SwapPlanError,
    ValidationError,
)
from .model import Battery, Mission, Plan, ReplacementAction, Station, Uav
from .planner import brute_force_plan, dump_plan, load_plan, plan
from .report import simulate
from .scenario import (
    PlannerConfig,
    RandomScenarioParams,
    Scenario,
    generate_random_scenario,
    load_scenario,
    save_scenario,
)

__all__ = [
    "Battery",
    "Infeasible",
    "Mission",
    "ParseError",
    "Plan",
    "PlanViolation",
    "PlannerConfig",
    "RandomScenarioParams",
    "ReplacementAction",
    "Scenario",
    "SearchTimeout",
    "Station",
    "SwapPlanError",
    "Uav",
    "ValidationError",
    "brute_force_plan",
    "dump_plan",
    "generate_random_scenario",
    "load_plan",
    "load_scenario",
    "plan",
    "save_scenario",
    "simulate",
]
