from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trcycles.errors import PrecisionError, ResidueObstructionError
from trcycles.scalars import ScalarField
from trcycles.series import (
    FORM,
    LaurentSeries,
    series_mul,
    series_primitive,
    series_residue,
    series_rotate,
)

F = ScalarField(1)
F3 = ScalarField(3)


def mono(e, c=1, weight=0, hi=None):
    return LaurentSeries(F, {e: c}, weight=weight, hi=hi)


def test_monomial_product_and_window():
    assert (mono(-1) * mono(1)).coeff(0) == 1
    p = LaurentSeries(F, {0: 1, 1: 1}, hi=1)
    q = LaurentSeries(F, {0: 1, 1: -1}, hi=1)
    pq = series_mul(p, q)
    assert pq.coeff(0) == 1 and pq.coeff(1) == 0 and pq.hi == 1
    with pytest.raises(PrecisionError):
        pq.coeff(2)


def test_tag_propagation():
    w = mono(-2, weight=FORM)
    f = mono(4)
    out = series_mul(w, f)
    assert out.weight == FORM and out.coeff(2) == 1
    with pytest.raises(ValueError):
        series_mul(w, w)


def test_residues():
    assert series_residue(mono(-1, weight=FORM)) == 1
    assert series_residue(mono(2, weight=FORM)) == 0
    tri = LaurentSeries(F, {-1: 3, -2: 5}, weight=FORM)
    assert series_residue(tri) == 3


def test_primitive():
    assert series_primitive(mono(2, weight=FORM)).coeff(3) == Fraction(1, 3)
    assert series_primitive(mono(0, weight=FORM)).coeff(1) == 1
    with pytest.raises(ResidueObstructionError):
        series_primitive(mono(-1, weight=FORM))


def test_rotate():
    assert series_rotate(mono(2, weight=FORM), 2, 1).coeff(2) == -1
    w3 = LaurentSeries(F3, {3: 1}, weight=FORM)
    assert series_rotate(w3, 3, 1).coeff(3) == F3.root(3, 1)
    assert series_rotate(w3, 3, 0) == w3


def test_rotate_residue_invariance():
    w = LaurentSeries(F3, {-1: Fraction(5, 7), -4: 2, 2: 3}, weight=FORM)
    for j in range(3):
        assert series_rotate(w, 3, j).residue() == w.residue()


def test_inverse_and_roots():
    g = LaurentSeries(F, {2: 2, 3: 2, 5: Fraction(1, 7)})
    gi = g.inverse(6)
    prod = g * gi
    assert prod.coeff(0) == 1
    assert all(prod.coeff(k) == 0 for k in range(1, 8))
    s = LaurentSeries(F, {0: 1, 1: Fraction(1, 3), 2: 4}, hi=9)
    r = s.nth_root(3, 9)
    assert ((r * r * r) - s.truncate(9)).is_zero()


def test_reversion_roundtrip():
    zeta = LaurentSeries(F, {1: 1, 2: Fraction(1, 6), 3: Fraction(-1, 72)},
                         hi=8)
    u = zeta.reversion(8)
    assert zeta.compose(u).coeffs == {1: Fraction(1)}
    assert u.compose(zeta).coeffs == {1: Fraction(1)}


def test_primitive_derivative_roundtrip():
    w = LaurentSeries(F, {-3: 2, 0: 5, 4: Fraction(7, 3)}, weight=FORM)
    assert w.primitive().derivative() == w


small_series = st.builds(
    lambda d: LaurentSeries(F, {e: Fraction(c, 3) for e, c in d.items()}),
    st.dictionaries(st.integers(-4, 4), st.integers(-9, 9), max_size=4))


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_product_associative_commutative(a, b, c):
    assert (a * b).coeffs == (b * a).coeffs
    assert ((a * b) * c).coeffs == (a * (b * c)).coeffs


@settings(max_examples=40, deadline=None)
@given(small_series)
def test_rotation_is_residue_preserving(s):
    w = LaurentSeries(F, s.coeffs, weight=FORM)
    assert w.rotate(2, 1).residue() == w.residue()
