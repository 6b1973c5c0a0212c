import json
from fractions import Fraction
from pathlib import Path

import pytest

from rendezvous.blocks import NotMeetMatrix, not_meet_matrix

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference():
    with open(DATA / "reference_matrices.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def ref_matrix(reference):
    def get(k):
        return NotMeetMatrix.from_rows([[Fraction(v) for v in row] for row in reference[f"P{k}"]])

    return get


@pytest.fixture(scope="session")
def matrices():
    return {k: not_meet_matrix(k) for k in range(1, 5)}


# reference degree-8 expected meeting time of the 12-step strategy, ascending
FULL_ET_NUM = [-217648, 389834, -998569, 1420688, -1941235, 1737938, -1329319, 582884, -227773]
FULL_ET_DEN = [3 * c for c in [-15199, -8008, 36128, -104656, 215870, -315256, 327728, -218608, 82001]]


# acceptance report -------------------------------------------------------------

_criteria: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _criteria[number] = (title, "PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, duration = _criteria[number]
        terminalreporter.write_line(f"{status} criterion {number:>2}: {title} ({duration:.1f} s)")
