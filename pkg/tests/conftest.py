from fractions import Fraction as F

import pytest

from cybethe.cartan import CartanData, DiagramAut, Weight, orbit_data
from cybethe.frame import BetheTuple, ProblemInstance
from cybethe.qpoly import QPoly
from cybethe.scalars import Cyc


def poly(*coeffs):
    """Ordinary polynomial from low-to-high coefficients."""
    return QPoly.from_coeffs(list(coeffs))


@pytest.fixture(scope="session")
def a2():
    """A_2, sigma = (1 2), M = 2, N = 0, lambda0 = (1/2, 1/2)."""
    cartan = CartanData.series("A", 2)
    aut = DiagramAut((1, 0))
    inst = ProblemInstance(cartan=cartan, aut=aut,
                           omega=Cyc.root_of_unity(2),
                           points=(), site_weights=(),
                           lambda0=Weight([F(1, 2), F(1, 2)]))
    return inst, orbit_data(cartan, aut)


@pytest.fixture(scope="session")
def a3():
    """A_3, sigma = (1 3), M = 2, N = 0, lambda0 = (0, 1, 0)."""
    cartan = CartanData.series("A", 3)
    aut = DiagramAut((2, 1, 0))
    inst = ProblemInstance(cartan=cartan, aut=aut,
                           omega=Cyc.root_of_unity(2),
                           points=(), site_weights=(),
                           lambda0=Weight([0, 1, 0]))
    return inst, orbit_data(cartan, aut)


@pytest.fixture(scope="session")
def a2_tuple():
    """Seed critical tuple (x^3 - 1, x^3 + 1) of the A_2 instance."""
    return BetheTuple([poly(-1, 0, 0, 1), poly(1, 0, 0, 1)])
