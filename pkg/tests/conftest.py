import pytest

from oamcoherence.channel import EprParams, initial_state

ACCEPTANCE_LINES = []


@pytest.fixture
def nominal_epr():
    return EprParams(0.47, 4.11)


@pytest.fixture
def nominal_state(nominal_epr):
    return initial_state(nominal_epr)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
