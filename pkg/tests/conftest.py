import pytest

from schottky_zeta import delta, gamma_m


@pytest.fixture(scope="session")
def g2():
    return gamma_m(2)


@pytest.fixture(scope="session")
def g3():
    return gamma_m(3)


@pytest.fixture(scope="session")
def g4():
    return gamma_m(4)


@pytest.fixture(scope="session")
def delta2(g2):
    return delta(g2, tol=1e-8)


@pytest.fixture(scope="session")
def part2_64(g2):
    # resolution 2^-6, the workhorse partition in most tests
    return g2.partition(2.0**-6)
