"""Shared fixtures plus the end-of-run acceptance checklist section."""

import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Append one line per acceptance check; echoed in the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance checklist")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
