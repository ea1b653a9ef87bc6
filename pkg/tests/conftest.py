import pytest

RESULTS: list[str] = []


@pytest.fixture
def criterion_log():
    return RESULTS


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
