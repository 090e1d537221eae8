from __future__ import annotations

from hypothesis import settings

# exact arithmetic on large primitives can exceed the default per-example deadline
settings.register_profile("exact", deadline=None, derandomize=True)
settings.load_profile("exact")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
