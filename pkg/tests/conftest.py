"""Shared fixtures and the acceptance-criteria summary hook."""

from __future__ import annotations

import pytest

from hri.fixtures import baseline_corridor, maintenance_overlay, roadworks_overlay
from hri.scoring import score_corridor
from hri.taxonomy import builtin_weight_table


@pytest.fixture(scope="session")
def weights():
    return builtin_weight_table()


@pytest.fixture(scope="session")
def corridor():
    return baseline_corridor()


@pytest.fixture(scope="session")
def baseline_assessment(corridor, weights):
    return score_corridor(corridor, weights)


@pytest.fixture(scope="session")
def roadworks():
    return roadworks_overlay()


@pytest.fixture(scope="session")
def maintenance():
    return maintenance_overlay()


# ---------------------------------------------------------------------------
# Acceptance reporting: one pass/fail line per criterion at the end of a run.
# ---------------------------------------------------------------------------

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid or report.when != "call":
        return
    name = report.nodeid.split("::")[-1]
    if hasattr(report, "wasxfail"):
        outcome = "EXPECTED FAIL (documented infeasibility)" if report.skipped else "UNEXPECTED PASS"
    elif report.passed:
        outcome = "PASS"
    else:
        outcome = "FAIL"
    _acceptance_results[name] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results.items():
        terminalreporter.write_line(f"{name}: {outcome}")
