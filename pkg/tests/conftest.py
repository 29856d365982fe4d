import numpy as np
import pytest

from hankelcast import StateSpace

# lines collected by test_acceptance and printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def integrator():
    return StateSpace(1.0, 1.0, 1.0, 0.0)


@pytest.fixture
def ex2_system():
    return StateSpace([[0.0, 1.0], [1.0, 0.0]], [[1.0], [1.0]], [[0.0, 1.0]], [[0.0]])


@pytest.fixture
def sec5_system():
    return StateSpace([[1.0, 1.0], [-1.0, -0.5]], [[1.0, 1.0], [0.0, 1.0]],
                      [[1.0, 0.0]], [[0.0, 0.0]])
