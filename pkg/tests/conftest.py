import pytest

from evodyn.core import PhysicalParams, Scenario

ACCEPTANCE_LINES = []


@pytest.fixture
def natural():
    return PhysicalParams()


@pytest.fixture
def heating():
    return Scenario(t0_temp=1.0, te_temp=50.0, g0=0.0)


@pytest.fixture
def cooling():
    return Scenario(t0_temp=50.0, te_temp=1.0, g0=0.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
