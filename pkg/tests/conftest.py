import pytest

from ffgroup import config
from ffgroup.ntheory import prime_power

PRIME_POWERS_64 = [q for q in range(2, 65) if prime_power(q)]


@pytest.fixture(autouse=True)
def _fresh_budgets():
    config.reset_budgets()
    yield
    config.reset_budgets()


# PASS/FAIL lines from test_acceptance.py, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
