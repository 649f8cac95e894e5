import pytest

from qheights.ideals import PolyIdeal, image_ideal
from qheights.polyring import parse_poly


def ideal(nvars, *gens):
    return PolyIdeal(nvars, tuple(parse_poly(g, nvars) for g in gens))


@pytest.fixture(scope="session")
def conic():
    return ideal(3, "x0*x2 - x1^2")


@pytest.fixture(scope="session")
def p1():
    return ideal(2)


@pytest.fixture(scope="session")
def p2():
    return ideal(3)


@pytest.fixture(scope="session")
def point_ideal():
    return ideal(2, "x1")


@pytest.fixture(scope="session")
def twisted_cubic():
    maps = [parse_poly(s, 2) for s in ("x0^3", "x0^2*x1", "x0*x1^2", "x1^3")]
    return image_ideal(PolyIdeal(2, ()), maps)
