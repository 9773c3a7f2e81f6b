"""Shared pytest plumbing: the acceptance-criteria summary block.

test_acceptance records one line per criterion here; they are echoed at the
end of the run so the verdicts are visible regardless of output capture.
"""

RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
