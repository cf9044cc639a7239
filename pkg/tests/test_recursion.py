from fractions import Fraction

import pytest

from oracles import engine_entry
from trcycles import (
    DiagonalB,
    PairProduct,
    compute_Fg,
    compute_omega_table,
    k2_apply,
    kk_apply,
    scale_curve,
)
from trcycles.errors import UnsupportedError
from trcycles.series import FORM, LaurentSeries


def L(*ks):
    return tuple(("1", k) for k in ks)


def test_airy_against_oracle(airy_table):
    for (g, n), tab in airy_table.tables.items():
        for key, value in tab.items():
            ks = tuple(k for _, k in key)
            assert value == engine_entry(g, ks), (g, n, key)
    # and the oracle agrees on absent entries within the support bound
    for g, n, ks in [(0, 4, (1, 1, 1, 1)), (1, 2, (3, 5)), (2, 1, (3,)),
                     (1, 1, (1,)), (2, 1, (5,))]:
        assert airy_table.get(g, n, L(*ks)) == engine_entry(g, ks)


def test_airy_golden(airy_table):
    assert airy_table.get(0, 3, L(1, 1, 1)) == 1
    assert airy_table.get(1, 1, L(3,)) == Fraction(1, 24)
    assert airy_table.get(1, 2, L(3, 3)) == Fraction(1, 24)
    assert airy_table.get(1, 2, L(1, 5)) == Fraction(1, 8)
    assert airy_table.get(0, 4, L(1, 1, 1, 3)) == 1
    assert airy_table.get(2, 1, L(9,)) == Fraction(35, 384)


def test_parity_and_pole_bound(airy_table):
    for (g, n), tab in airy_table.tables.items():
        for key in tab:
            for _, k in key:
                assert k % 2 == 1
                assert k <= 6 * g - 4 + 2 * n


def test_scaled_airy_homogeneity(airy_curve, airy_table):
    for lam in (Fraction(2), Fraction(-1), Fraction(1, 3)):
        scaled = compute_omega_table(scale_curve(airy_curve, lam), 3)
        for (g, n), tab in scaled.tables.items():
            for key, value in tab.items():
                assert value == lam ** (2 - 2 * g - n) * \
                    airy_table.get(g, n, key)


def test_two_point_block_structure(two_point_table):
    # purely local multi-point curves have single-point support only
    for (g, n), tab in two_point_table.tables.items():
        for key in tab:
            assert len({lb for lb, _ in key}) == 1


def test_fg(airy_table, airy_curve, two_point_table, two_point_curve):
    assert compute_Fg(airy_table, airy_curve, 2) == 0
    f2 = compute_Fg(two_point_table, two_point_curve, 2)
    assert f2 != 0
    with pytest.raises(UnsupportedError):
        compute_Fg(airy_table, airy_curve, 1)


def test_r3_seeds(r3_table):
    fld = r3_table.field
    assert r3_table.get(0, 3, (("0", 1), ("0", 1), ("0", 2))) == fld.coerce(1)
    # genus-one one-point value (r-1)/24 for the order-3 canonical curve
    assert r3_table.get(1, 1, (("0", 4),)) == fld.coerce(Fraction(1, 12))
    # no index divisible by the ramification order appears
    for (g, n), tab in r3_table.tables.items():
        for key in tab:
            assert all(k % 3 != 0 for _, k in key)


def test_r3_rationality(r3_table):
    for tab in r3_table.tables.values():
        for value in tab.values():
            assert value.is_rational()


def test_r3_symmetry_check(r3_curve):
    compute_omega_table(r3_curve, 2, check_symmetry=True)


def test_k2_apply_omega03(airy_curve):
    fld = airy_curve.field
    # both spectators contracted with the k=1 extraction cycles:
    # omega02 legs become z^0 dz, and the output must be the (0,3) slice
    leg = LaurentSeries(fld, {0: 1}, weight=FORM)
    out = k2_apply(airy_curve, "1",
                   [PairProduct(leg, leg), PairProduct(leg, leg)])
    got = out.at("1")
    # the (0,3) slice: F[1,1,1]=1 against the mapped basis form z^-2 dz
    assert got.coeffs == {-2: Fraction(1)}


def test_k2_apply_omega11(airy_curve):
    out = k2_apply(airy_curve, "1", [DiagonalB()])
    assert out.at("1").coeffs == {-4: Fraction(1, 8)}


def test_kk_apply_empty_above_order(airy_curve, r3_curve):
    fld = airy_curve.field
    leg = LaurentSeries(fld, {0: 1}, weight=FORM)
    assert kk_apply(airy_curve, 3, "1",
                    [PairProduct(leg, leg, leg)]).is_zero()
    leg3 = LaurentSeries(r3_curve.field, {0: 1}, weight=FORM)
    out = kk_apply(r3_curve, 3, "0",
                   [PairProduct(leg3, leg3, leg3)])
    assert isinstance(out.at("0"), LaurentSeries)


def test_zero_residue_of_one_point_tables(airy_table, r3_table):
    for table in (airy_table, r3_table):
        label = table.curve.labels[0]
        for (g, n) in table.tables:
            if n == 1:
                assert table.local_form(g, 1, ()).at(label).residue() == 0
