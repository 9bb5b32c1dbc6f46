import pytest

from simpres.exactlin import GF, QQ
from simpres.fixtures import dual_numbers, ground, matrix_algebra, morphism, split_pair


@pytest.fixture
def dual():
    return dual_numbers()


@pytest.fixture
def split():
    return split_pair()


@pytest.fixture
def m2():
    return matrix_algebra()


@pytest.fixture
def dual_triple():
    a, b = dual_numbers(), dual_numbers()
    return a, b, morphism(b, a, [{0: 1}, {1: 1}])


@pytest.fixture(params=[QQ, GF(2), GF(5)], ids=["Q", "F2", "F5"])
def field(request):
    return request.param


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
