import pytest

from pel.syntax import parse


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running property runs")


@pytest.fixture
def p():
    return parse


def po(text):
    """Parse allowing free labels."""
    return parse(text, open_labels=True)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
