import pytest

from klpoly.coxeter import CartanDatum, WeylGroup


@pytest.fixture(scope="session")
def group_a1():
    return WeylGroup(CartanDatum.from_label("A1"))


@pytest.fixture(scope="session")
def group_a2():
    return WeylGroup(CartanDatum.from_label("A2"))


@pytest.fixture(scope="session")
def group_a3():
    return WeylGroup(CartanDatum.from_label("A3"))


@pytest.fixture(scope="session")
def group_b2():
    return WeylGroup(CartanDatum.from_label("B2"))


@pytest.fixture(scope="session")
def group_b3():
    return WeylGroup(CartanDatum.from_label("B3"))


@pytest.fixture(scope="session")
def group_g2():
    return WeylGroup(CartanDatum.from_label("G2"))
