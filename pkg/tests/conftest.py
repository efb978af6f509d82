import random

import pytest

from smallcancel import parse_presentation

CRITERIA = {
    1: "star graph circuit counts for the square-root example",
    2: "vertex and cell condition verdicts",
    3: "angle table boundary cases",
    4: "exact curvature identity on random diagrams",
    5: "checker verdicts hold on generated diagrams",
    6: "reduction moves",
    7: "word solver",
    8: "conjugacy solver",
    9: "bound arithmetic",
    10: "surface group weight hypotheses",
}

_results: dict[int, list[str]] = {}


def p_n(n: int):
    return parse_presentation(f"<x,y,z | z^{n} = y, y*x = x*y>")


@pytest.fixture
def P2():
    return p_n(2)


@pytest.fixture
def E2():
    return parse_presentation("<x,y | y^2*x = x*y^2>")


@pytest.fixture
def surface():
    return parse_presentation("<a,b,c,d | a*b*a^-1*b^-1*c*d*c^-1*d^-1>")


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(n, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        outcomes = _results.get(n)
        if outcomes is None:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            failed = sum(o != "passed" for o in outcomes)
            status = f"FAIL ({failed}/{len(outcomes)} checks)"
        terminalreporter.write_line(f"criterion {n:2d} [{status}] {CRITERIA[n]}")
