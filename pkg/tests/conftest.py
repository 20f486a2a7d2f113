from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))

PARK_DIR = TESTS / "fixtures" / "park"
GOLDEN_DIR = TESTS / "golden"

# criterion number -> {"title": str, "outcomes": [str], "details": [str]}
_CRITERIA: dict = {}


@pytest.fixture
def park_dir() -> Path:
    return PARK_DIR


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "outcomes": [], "details": []})
    if hasattr(report, "wasxfail"):
        entry["outcomes"].append("xfail")
    else:
        entry["outcomes"].append(report.outcome)
    entry["details"] += [str(v) for k, v in item.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        ok = all(o == "passed" for o in entry["outcomes"])
        status = "PASS" if ok else "FAIL"
        line = f"A-{number} {status}: {entry['title']}"
        if entry["details"]:
            line += " | " + "; ".join(entry["details"])
        terminalreporter.write_line(line)
