import numpy as np
import pytest

from futuretube.geometry import ComplexInterval
from futuretube.massshell import build_grid
from futuretube.phasespace import PhaseSpaceSlice, calibrate
from futuretube.states import WaveFunction


@pytest.fixture(scope="session")
def grid1():
    return build_grid(1)


@pytest.fixture(scope="session")
def grid3():
    return build_grid(3, n=256, n_cos=48)


@pytest.fixture(scope="session")
def calibrations(grid1):
    """Calibrated slices keyed by ``(t0, lam)``."""
    out = {}
    for t0 in (0.0, 0.5, 0.7):
        for lam in (1.0, 2.0):
            out[(t0, lam)] = calibrate(PhaseSpaceSlice(t0=t0, lam=lam), grid1)
    return out


@pytest.fixture(scope="session")
def slice11(calibrations):
    return calibrations[(0.0, 1.0)].slice


@pytest.fixture(scope="session")
def test_states(grid1):
    """Three linearly independent finite superpositions of fundamental states."""
    ci = ComplexInterval
    return [
        WaveFunction.fundamental(grid1, ci([0.0, 0.0], [1.0, 0.0])),
        WaveFunction.from_states(grid1, [1.0, 0.5j],
                                 [ci([0.0, 1.0], [1.0, 0.3]), ci([0.2, -1.0], [1.5, -0.5])]),
        WaveFunction.from_states(grid1, [0.7, -0.3, 0.2 + 0.1j],
                                 [ci([0.1, 2.0], [0.8, 0.1]), ci([0.0, -2.5], [1.2, 0.4]),
                                  ci([-0.3, 0.0], [2.0, 0.0])]),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
