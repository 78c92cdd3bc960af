import pytest

from qpskit import foldy_generators


@pytest.fixture(scope="session")
def foldy():
    return foldy_generators()


@pytest.fixture(scope="session")
def foldy_spinless():
    return foldy_generators(spin_zero=True)
