import pytest

from wedgekit.construction import build_santos_weibel
from wedgekit.enumeration import enumerate_vertices
from wedgekit.hrep import load_p5
from wedgekit.paths import spindle_check


@pytest.fixture(scope="session")
def p5():
    return load_p5()


@pytest.fixture(scope="session")
def p5_vertices(p5):
    return enumerate_vertices(p5)


@pytest.fixture(scope="session")
def p5_xy(p5, p5_vertices):
    i, j = spindle_check(p5, p5_vertices)
    x, y = p5_vertices[i], p5_vertices[j]
    if "h1" not in x.incident:
        x, y = y, x
    return x, y


@pytest.fixture(scope="session")
def sw_trace(p5):
    return build_santos_weibel(p5)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
