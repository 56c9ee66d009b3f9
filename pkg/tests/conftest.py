import numpy as np
import pytest

from dunkl.measure import RadialProfile, WeightParams, default_grid

LAMBDAS = (0.2, 0.7, 1.5, 3.0)


def gaussian(lam, a=0.5, grid=None):
    params = WeightParams(lam)
    return RadialProfile.from_function(lambda r: np.exp(-a * r * r), params, grid or default_grid(),
                                       label=f"gaussian(a={a})@lam={lam}")


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def gauss07():
    return gaussian(0.7)


# filled by test_acceptance.py, one line per criterion
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
