from pathlib import Path

import pytest

from mostperfect.codec import ConstructionParams
from mostperfect.square import Square
from mostperfect.zp import parse_matrix_text

DATA = Path(__file__).parent / "data"


def load_grid(name):
    return [[int(x) for x in line.split()] for line in (DATA / name).read_text().splitlines() if line.strip()]


GOLDEN8 = load_grid("golden_order8.txt")
GOLDEN9 = load_grid("golden_order9.txt")
M_P2_R3 = parse_matrix_text((DATA / "m_p2_r3.txt").read_text())
M_P3_R2 = parse_matrix_text((DATA / "m_p3_r2.txt").read_text())


@pytest.fixture
def golden8():
    return Square(GOLDEN8, 2, 3)


@pytest.fixture
def golden9():
    return Square(GOLDEN9, 3, 2)


@pytest.fixture
def p2r3():
    return ConstructionParams(2, 3)


@pytest.fixture
def p3r2():
    return ConstructionParams(3, 2)


# -- acceptance summary ---------------------------------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, text = marker
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        previous = _criteria.get(number, (text, "PASS"))[1]
        outcome = "PASS" if report.outcome == "passed" and previous == "PASS" else "FAIL"
        _criteria[number] = (text, outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        text, outcome = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {outcome}  {text}")
