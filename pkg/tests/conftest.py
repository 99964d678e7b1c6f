"""Shared test plumbing.

The acceptance tests in test_acceptance.py register one human-readable
PASS/FAIL line per criterion; the terminal-summary hook below echoes them at
the end of the run so the verdicts are visible without digging through
captured output.
"""

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    print(line)
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
