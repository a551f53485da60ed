import pytest

from stablemod import library

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_line():
    return _ACCEPTANCE.append


@pytest.fixture
def lib():
    return library.module


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
