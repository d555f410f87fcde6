"""Shared pytest plumbing.

The acceptance tests record one verdict line per shipped guarantee; this
hook echoes them into the terminal summary so they are visible even when
output capture is on (plain ``pytest -v``).
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
