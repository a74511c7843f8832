import numpy as np
import pytest

from simplexforge.bodies import cone_over, make_lp_ball, prism_over, segment

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def disk():
    return make_lp_ball(2, 2)


@pytest.fixture(scope="session")
def ball3():
    return make_lp_ball(2, 3)


@pytest.fixture(scope="session")
def doubled_cone():
    return cone_over(make_lp_ball(2, 2))


@pytest.fixture(scope="session")
def square():
    return prism_over(segment())


@pytest.fixture(scope="session")
def diamond():
    return cone_over(segment())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
