import pytest

_acceptance_results = []


@pytest.fixture
def acceptance_report():
    """Collects one pass/fail line per acceptance criterion; the lines are
    echoed in the terminal summary."""

    def record(number: str, description: str, passed: bool) -> None:
        _acceptance_results.append((number, description, passed))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed in _acceptance_results:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>4}  {status}  {description}")
