import pytest

from cpeb.harness.generators import diamond


@pytest.fixture
def diamond_instance():
    return diamond()


@pytest.fixture
def diamond_class(diamond_instance):
    return diamond_instance.decision_class()


# arm indices of the two diamond paths
P1 = frozenset({0, 1})
P2 = frozenset({2, 3})
DIAMOND_MEANS = (1.0, 0.9, 0.8, 0.5)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
