import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""

    def report(criterion: str, passed: bool, detail: str) -> bool:
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
