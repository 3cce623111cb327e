import numpy as np
import pytest

from gausscorr import BathParams, SqueezedThermalSpec, SystemParams, squeezed_thermal_covariance

ACCEPTANCE_LINES = []


@pytest.fixture
def fig_sys():
    return SystemParams(omega1=1.0, omega2=2.0, mass=1.0)


@pytest.fixture
def fig_sigma0():
    return squeezed_thermal_covariance(SqueezedThermalSpec(r=3.0, n1=3.0, n2=1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_params(rng):
    """One draw from the parameter box used by the oracle comparisons."""
    sys = SystemParams(omega1=rng.uniform(0.5, 4), omega2=rng.uniform(0.5, 4),
                       mass=rng.uniform(0.5, 2))
    bath = BathParams(lam=rng.uniform(0.01, 0.5), temperature=rng.uniform(0, 5))
    return sys, bath


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
