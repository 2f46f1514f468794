"""Shared pytest wiring for the test suite."""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance report lines outside of output capture."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None) if module else None
    if lines:
        terminalreporter.section("acceptance report")
        for line in lines:
            terminalreporter.write_line(line)
