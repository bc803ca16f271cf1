import pytest

from indsetlab.graph import Graph

_ACCEPTANCE_LINES = []


@pytest.fixture
def record_acceptance():
    """Collect one pass/fail line per acceptance criterion for the run summary."""

    def record(criterion: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def single_edge():
    return Graph(2, ((0, 1),))
