from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trcycles import (
    LocalForm,
    bcycle,
    bhat,
    chat_polar,
    eta_pairing,
    gamma,
    intersection,
    pair_cycle_form,
)
from trcycles.errors import NotInRangeError, PairingError
from trcycles.series import FORM, LaurentSeries


def form(curve, coeffs, label="1"):
    return LocalForm(curve, {label: LaurentSeries(curve.field, coeffs,
                                                  weight=FORM)})


def test_pairings(airy_curve):
    w = form(airy_curve, {2: 1})
    assert pair_cycle_form(gamma(airy_curve, "1", 3), w) == 1
    assert pair_cycle_form(gamma(airy_curve, "1", 1),
                           form(airy_curve, {1: 1})) == 0
    assert pair_cycle_form(bcycle(airy_curve, "1", 3),
                           form(airy_curve, {-4: 1})) == Fraction(1, 3)


def test_bhat_basis(airy_curve):
    b2 = bhat(gamma(airy_curve, "1", 2), airy_curve)
    assert b2.at("1").coeffs == {-3: Fraction(2)}
    assert bhat(gamma(airy_curve, "1", -3), airy_curve).is_zero()


def test_bhat_analytic_part_from_global_cubic():
    from trcycles import GlobalCurve, RationalFunction, localize_global_curve
    g = GlobalCurve(x=RationalFunction((0, -1, 0, Fraction(1, 3))),
                    y=RationalFunction((0, 1)),
                    declared_ramification=((1, 2), (-1, 2)))
    curve = localize_global_curve(g, 8)
    b = bhat(gamma(curve, "1", 1), curve)
    assert not b.at("-1").is_zero()   # nonzero analytic part across points
    assert b.at("1").coeff(-2) == 1


def test_chat_right_inverse_and_projection(airy_curve):
    w = form(airy_curve, {-3: 2, -5: Fraction(1, 3)})
    c = chat_polar(w, airy_curve)
    assert (bhat(c, airy_curve) - w).is_zero()
    mixed = gamma(airy_curve, "1", 2) + gamma(airy_curve, "1", -5)
    assert chat_polar(bhat(mixed, airy_curve), airy_curve) == \
        gamma(airy_curve, "1", 2)
    with pytest.raises(NotInRangeError):
        chat_polar(form(airy_curve, {2: 1}), airy_curve)


def test_intersections(airy_curve):
    g1 = gamma(airy_curve, "1", 1)
    g2 = gamma(airy_curve, "1", 2)
    assert intersection(g1, g2, airy_curve) == 0
    assert intersection(g2, gamma(airy_curve, "1", -2), airy_curve) == -2
    assert intersection(gamma(airy_curve, "1", -2), g2, airy_curve) == 2


def test_intersection_cross_point_vanishes(two_point_curve):
    a = gamma(two_point_curve, "1", 2)
    b = gamma(two_point_curve, "-1", -2)
    assert intersection(a, b, two_point_curve) == 0


cycle_entries = st.dictionaries(
    st.tuples(st.just("1"), st.integers(-4, 4).filter(lambda k: k != 0)),
    st.fractions(min_value=-3, max_value=3, max_denominator=7),
    max_size=3)


def test_intersection_antisymmetry_random(airy_curve):
    from trcycles import LocalCycle

    @settings(max_examples=40, deadline=None)
    @given(cycle_entries, cycle_entries)
    def inner(d1, d2):
        c1 = LocalCycle(airy_curve.field, d1)
        c2 = LocalCycle(airy_curve.field, d2)
        assert intersection(c1, c2, airy_curve) == \
            -1 * intersection(c2, c1, airy_curve)

    inner()


def test_eta_pairing(airy_curve):
    w11 = form(airy_curve, {-4: Fraction(1, 8)})
    assert eta_pairing(w11, airy_curve) == Fraction(1, 24)
    assert eta_pairing(form(airy_curve, {0: 5}), airy_curve) == 0
    a = form(airy_curve, {-4: 1})
    b = form(airy_curve, {-4: 2, -6: 3})
    lhs = eta_pairing(LocalForm(airy_curve, {
        "1": a.at("1") + b.at("1")}), airy_curve)
    assert lhs == eta_pairing(a, airy_curve) + eta_pairing(b, airy_curve)
    with pytest.raises(PairingError):
        eta_pairing(form(airy_curve, {-1: 1}), airy_curve)


def test_basis_duality(airy_curve, two_point_curve):
    # <B[a,k], bhat(Gamma[b,j])> = delta delta on purely local curves
    for curve in (airy_curve, two_point_curve):
        labels = curve.labels
        for a in labels:
            for b in labels:
                for k in (1, 2, 3):
                    for j in (1, 2, 3):
                        got = pair_cycle_form(
                            bcycle(curve, a, k),
                            bhat(gamma(curve, b, j), curve))
                        assert got == (1 if (a, k) == (b, j) else 0)
