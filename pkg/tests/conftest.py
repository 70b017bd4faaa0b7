import pytest

from inducibility.trees import parse_tree

# Named trees used across the suite.
CHERRY_E4 = parse_tree("((*,*),((*,*),(*,*)))")
MIXED_TERNARY = parse_tree("(*,(*,*),(*,*,*))")
TRIPLE_CAT3 = parse_tree("((*,(*,*)),(*,(*,*)),(*,(*,*)))")
CHERRY_CAT4 = parse_tree("((*,*),(*,(*,(*,*))))")


@pytest.fixture
def triple_cat3():
    return TRIPLE_CAT3


# One line per acceptance criterion, collected by tests/test_acceptance.py.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
