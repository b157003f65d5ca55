import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qgkit import make_quasigroup  # noqa: E402

Z2 = [[0, 1], [1, 0]]
Z3 = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
Z4 = [[(x + y) % 4 for y in range(4)] for x in range(4)]
KLEIN = [[x ^ y for y in range(4)] for x in range(4)]
IQ3 = [[0, 2, 1], [2, 1, 0], [1, 0, 2]]
Q4EX3 = [[0, 1, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1], [1, 0, 3, 2]]


@pytest.fixture
def z2():
    return make_quasigroup(Z2)


@pytest.fixture
def z3():
    return make_quasigroup(Z3)


@pytest.fixture
def iq3():
    return make_quasigroup(IQ3)


@pytest.fixture
def q4ex3():
    return make_quasigroup(Q4EX3)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
