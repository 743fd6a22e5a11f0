from fractions import Fraction as F

import pytest

from cybethe.scalars import Cyc, cyclotomic_polynomial, primitive_root
from cybethe.errors import InputError


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_root_relations():
    i = Cyc.root_of_unity(4)
    assert i * i == -1
    w = Cyc.root_of_unity(3)
    assert w ** 3 == 1
    assert w ** 2 + w + 1 == 0
    z8 = Cyc.root_of_unity(8)
    assert z8 ** 4 == -1


def test_rational_collapse():
    # M = 1 and M = 2 are one-dimensional: plain rationals
    assert Cyc.of(F(2, 3), 1).vec == (F(2, 3),)
    assert Cyc.root_of_unity(2).vec == (F(-1),)
    assert Cyc.root_of_unity(2).is_rational()


def test_inverse_and_division():
    w = Cyc.root_of_unity(5)
    x = 2 + 3 * w - w ** 3
    assert x * x.inverse() == 1
    assert (x / x) == 1
    y = w ** 2 - 1
    assert (x / y) * y == x
    with pytest.raises(ZeroDivisionError):
        Cyc.of(0).inverse()


def test_promotion_compatibility():
    # zeta_2 inside Q(zeta_4), zeta_3 inside Q(zeta_12)
    assert Cyc.root_of_unity(2).promote(4) == Cyc.of(-1)
    w3 = Cyc.root_of_unity(3)
    w12 = Cyc.root_of_unity(12)
    assert w3.promote(12) == w12 ** 4
    # mixed arithmetic promotes automatically
    assert w3 * w12 ** 4 == (w3 * w3).promote(12)


def test_primitivity_guard():
    with pytest.raises(InputError):
        primitive_root(4, 2)
    assert primitive_root(4, 3) ** 2 == -1


def test_power_negative():
    w = Cyc.root_of_unity(7)
    assert w ** -1 == w ** 6
    assert (2 * w) ** -2 * (2 * w) ** 2 == 1


def test_str_forms():
    w = Cyc.root_of_unity(8)
    s = str(w ** 2 * F(3, 2) - 1)
    assert "w^2" in s and "3/2" in s
    assert str(Cyc.of(F(-7, 2))) == "-7/2"
