"""Optional PNG figures for reports; needs matplotlib (``pip install .[plot]``)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import Phase  # noqa: E402


def _step_series(timeline):
    """Time/SoC arrays with the swap jump drawn as a vertical step."""
    times, socs = [], []
    for prev, cur in zip((None,) + timeline.samples, timeline.samples):
        if prev is not None and prev.phase is Phase.SWAP:
            times.append(cur.time)
            socs.append(prev.soc)
        times.append(cur.time)
        socs.append(cur.soc)
    return [t / 60.0 for t in times], socs


def soc_figure(timelines, path, min_soc: float | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for tl in timelines:
        t, s = _step_series(tl)
        ax.plot(t, s, label=f"UAV {tl.uav_id}", linewidth=1.2)
    if min_soc is not None:
        ax.axhline(min_soc, color="0.3", linestyle="--", linewidth=0.8, label="SoC floor")
    ax.set_xlabel("time [min]")
    ax.set_ylabel("SoC")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower left", fontsize=8, ncol=2)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def mission_map(scenario, plan, path) -> Path:
    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    for uav, mission in zip(scenario.uavs, scenario.missions):
        xs = [uav.start_position[0]] + [p[0] for p in mission.waypoints]
        ys = [uav.start_position[1]] + [p[1] for p in mission.waypoints]
        (line,) = ax.plot(xs, ys, linewidth=0.9, marker=".", markersize=3, label=f"UAV {uav.id}")
        stations = {s.id: s.position for s in scenario.stations}
        for a in plan.actions_for(uav.id):
            wp = mission.waypoints[a.waypoint_index]
            st = stations[a.station_id]
            ax.plot([wp[0], st[0]], [wp[1], st[1]], color=line.get_color(), linestyle=":", linewidth=1.0)
    for s in scenario.stations:
        ax.plot(s.position[0], s.position[1], marker="s", color="k", markersize=7)
        ax.annotate(str(s.id), s.position[:2], textcoords="offset points", xytext=(5, 5), fontsize=8)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
