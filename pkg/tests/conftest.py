import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record a one-line verdict for an acceptance criterion, then assert it."""

    def record(number, ok, detail):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
