"""Shared pytest wiring: surface the acceptance summary lines.

The acceptance tests record one PASS/FAIL line each; capture would normally
hide them for passing tests, so they are replayed in the terminal summary.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
