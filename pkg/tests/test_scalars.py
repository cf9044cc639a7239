from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trcycles.scalars import Cyclo, ScalarField, cyclotomic_polynomial


def test_cyclotomic_polynomials():
    x = lambda *cs: tuple(Fraction(c) for c in cs)
    assert cyclotomic_polynomial(1) == x(-1, 1)
    assert cyclotomic_polynomial(2) == x(1, 1)
    assert cyclotomic_polynomial(3) == x(1, 1, 1)
    assert cyclotomic_polynomial(4) == x(1, 0, 1)
    assert cyclotomic_polynomial(6) == x(1, -1, 1)


@pytest.mark.parametrize("r", range(1, 7))
def test_root_of_unity_identities(r):
    fld = ScalarField(r)
    rho = fld.root(r, 1)
    power = fld.one()
    for _ in range(r):
        power = power * rho
    assert power == fld.one()
    for k in range(2 * r):
        total = fld.zero()
        for j in range(r):
            total = total + fld.root(r, j * k)
        assert total == (r if k % r == 0 else 0)


def test_field_arithmetic():
    fld = ScalarField(5)
    a = Cyclo(5, [Fraction(1, 2), Fraction(-1, 3), 0, Fraction(2)])
    assert a * a.inverse() == 1
    assert (a + 1) - 1 == a
    assert (3 * a) / 3 == a
    assert a - a == 0
    assert not (a - a)


def test_rational_fast_paths():
    half = Cyclo.rational(3, Fraction(1, 2))
    rho = Cyclo.root_power(3, 1)
    assert (half * rho) == (rho * half)
    assert half.is_rational() and half.as_fraction() == Fraction(1, 2)
    assert not rho.is_rational()
    with pytest.raises(ValueError):
        rho.as_fraction()


def test_field_extension_guard():
    from trcycles.errors import FieldExtensionError
    fld = ScalarField(1)
    assert fld.root(2, 1) == -1
    with pytest.raises(FieldExtensionError):
        fld.root(3, 1)
    fld4 = ScalarField(4)
    with pytest.raises(FieldExtensionError):
        fld4.root(3, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 20),
       st.integers(-30, 30), st.integers(1, 20))
def test_cyclo_ring_axioms(a, b, bd, c, cd):
    x = Cyclo(3, [Fraction(a), Fraction(b, bd)])
    y = Cyclo(3, [Fraction(c, cd), Fraction(a)])
    z = Cyclo.root_power(3, 2)
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
