import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import conelab.cones as C

settings.register_profile(
    "conelab",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("conelab")

ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail):
    line = f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def lorentz3():
    return C.Lorentz(3)


@pytest.fixture(scope="session")
def pnorm34():
    return C.PNorm(3, 4.0)


@pytest.fixture(scope="session")
def lens():
    return C.CrossSection2D(C.Lens(0.5))


@pytest.fixture(scope="session")
def disk():
    return C.CrossSection2D(C.Disk(1.0))
