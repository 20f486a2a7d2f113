"""Regenerate the park fixture: seven lawnmower survey missions and a params file.

The park is a 1000 m x 600 m rectangle split into seven strips. Each UAV
sweeps its strip in east-west passes; every pass is broken into short
segments so missions carry 80-130 waypoints like hand-planned surveys do.
Run from this directory: ``python build_park.py``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

ORIGIN = (47.3700, 8.5400, 410.0)  # lat, lon, ground altitude (m AMSL)
R = 6_371_000.0
ALTITUDE = 30.0  # survey height above home
HERE = Path(__file__).resolve().parent

# strip = (x0, x1, y0, y1) in meters east/north of ORIGIN, pass spacing, segment length
STRIPS = [
    (0, 280, 0, 300, 30, 33),
    (280, 560, 0, 300, 25, 30),
    (560, 1000, 0, 300, 40, 39),
    (0, 330, 300, 600, 35, 29),
    (330, 640, 300, 600, 30, 28),
    (640, 1000, 300, 600, 30, 38),
    (200, 800, 250, 350, 20, 37),
]
STATIONS = [(201, 150, 150), (202, 500, 120), (203, 850, 160), (204, 160, 470), (205, 520, 480), (206, 860, 450)]


def to_geo(x: float, y: float) -> tuple:
    lat0, lon0, _ = ORIGIN
    k = R * math.pi / 180.0
    return lat0 + y / k, lon0 + x / (k * math.cos(math.radians(lat0)))


def lawnmower(x0, x1, y0, y1, spacing, seg):
    points = []
    y, eastward = y0 + spacing / 2, True
    while y < y1:
        xs = [x0 + i * (x1 - x0) / max(1, round((x1 - x0) / seg)) for i in range(round((x1 - x0) / seg) + 1)]
        if not eastward:
            xs.reverse()
        points += [(x, y) for x in xs]
        y += spacing
        eastward = not eastward
    return points


def plan_document(points, home_xy) -> dict:
    home_lat, home_lon = to_geo(*home_xy)
    items = [{
        "type": "SimpleItem", "command": 22, "frame": 3, "autoContinue": True, "doJumpId": 1,
        "params": [0, 0, 0, None, home_lat, home_lon, ALTITUDE],
    }, {
        "type": "SimpleItem", "command": 178, "frame": 2, "autoContinue": True, "doJumpId": 2,
        "params": [1, 5, -1, 0, 0, 0, 0],
    }]
    for x, y in points:
        lat, lon = to_geo(x, y)
        items.append({
            "type": "SimpleItem", "command": 16, "frame": 3, "autoContinue": True,
            "doJumpId": len(items) + 1, "params": [0, 0, 0, None, lat, lon, ALTITUDE],
        })
    items.append({"type": "SimpleItem", "command": 20, "frame": 2, "autoContinue": True,
                  "doJumpId": len(items) + 1, "params": [0, 0, 0, 0, 0, 0, 0]})
    return {
        "fileType": "Plan", "groundStation": "QGroundControl", "version": 1,
        "geoFence": {"circles": [], "polygons": [], "version": 2},
        "rallyPoints": {"points": [], "version": 2},
        "mission": {
            "cruiseSpeed": 5, "firmwareType": 12, "hoverSpeed": 5, "vehicleType": 2, "version": 2,
            "plannedHomePosition": [home_lat, home_lon, ORIGIN[2]],
            "items": items,
        },
    }


def main():
    for i, (x0, x1, y0, y1, spacing, seg) in enumerate(STRIPS, start=1):
        points = lawnmower(x0, x1, y0, y1, spacing, seg)
        home = ((x0 + x1) / 2, y0 if i <= 3 else y1)
        doc = plan_document(points, home)
        (HERE / f"uav{i}.plan").write_text(json.dumps(doc, indent=2) + "\n")
        print(f"uav{i}.plan: {len(points) + 1} waypoints")
    stations = []
    for sid, x, y in STATIONS:
        lat, lon = to_geo(x, y)
        stations.append({"id": sid, "position": {"lat": lat, "lon": lon}, "batteries": 3})
    params = {
        "uav_defaults": {"speed_mps": 5.0, "max_flight_time_s": 660.0, "initial_soc": 1.0},
        "stations": stations,
        "config": {"min_soc": 0.2},
    }
    (HERE / "park-params.json").write_text(json.dumps(params, indent=2) + "\n")


if __name__ == "__main__":
    main()
