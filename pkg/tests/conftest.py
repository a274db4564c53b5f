import pytest

from helpers import ACCEPTANCE_LINES, build_corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
