import pytest

from dwelldelay.kinematics import ChannelConfig

ACCEPTANCE_RESULTS = []


@pytest.fixture
def natural():
    return ChannelConfig(reduced_mass=1.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
