import pytest

_LINES = []


class _Report:
    def __call__(self, criterion, passed, detail):
        _LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
        print(_LINES[-1])
        return passed


@pytest.fixture(scope="session")
def report():
    """Record one acceptance outcome line; returns the pass flag for asserting."""
    return _Report()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
