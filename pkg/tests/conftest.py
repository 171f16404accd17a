import pytest

_acceptance_lines: list[str] = []


@pytest.fixture()
def acceptance():
    """Recorder for one-line acceptance verdicts, echoed in the run summary."""

    def record(line: str) -> None:
        _acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
