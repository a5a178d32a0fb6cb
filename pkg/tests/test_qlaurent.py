from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdurfee.coeffring import I, ParamPoly
from qdurfee.errors import BeyondTruncation, FractionalNegation
from qdurfee.qlaurent import (
    QSeries,
    format_series,
    qs_divide,
    qs_equal_upto,
    qs_invert,
    qs_mul,
    series_sum,
)
from strategies import exact_series, polys, series, unit_lead_series

W = ParamPoly.var("w")


def agree(f: QSeries, g: QSeries) -> bool:
    """Equal on every exponent where both sides are known."""
    o = min(f.order, g.order)
    return qs_equal_upto(f, g, o).status == "pass"


def test_construction_and_lookup():
    f = QSeries.from_terms({0: 1, Fraction(1, 3): 2, 5: W}, order=6)
    assert f.den == 24
    assert f[Fraction(1, 3)] == ParamPoly.const(2)
    assert f[5] == W
    assert f[Fraction(1, 5)].is_zero()
    with pytest.raises(BeyondTruncation):
        f.coeff(6)
    assert f.exponents() == [0, Fraction(1, 3), 5]


def test_format_series():
    f = QSeries.from_terms({Fraction(1, 12): 1, Fraction(25, 12): -1}, order=3)
    assert format_series(f) == "q^{1/12} - q^{25/12} + O(q^{3})"
    g = QSeries.from_terms({0: I, 2: W + 1})
    assert format_series(g) == "i + (w + 1)*q^{2}"


def test_geometric_series_inverse():
    g = QSeries.geometric(10)
    one_minus_q = QSeries.from_terms({0: 1, 1: -1})
    assert qs_mul(g, one_minus_q) == QSeries.one().truncate(10)
    assert qs_invert(one_minus_q, 10) == g


def test_symbolic_division():
    one_minus_wq = QSeries.from_terms({0: 1, 1: -W})
    want = QSeries.from_terms({n: W ** n for n in range(8)}, order=8)
    assert qs_divide(QSeries.one(), one_minus_wq, 8) == want


def test_negate_q_and_subst():
    f = QSeries.from_terms({1: 1, 2: 3}, order=4)
    assert f.negate_q() == QSeries.from_terms({1: -1, 2: 3}, order=4)
    assert f.subst_q_power(2) == QSeries.from_terms({2: 1, 4: 3}, order=8)
    with pytest.raises(FractionalNegation):
        QSeries.from_terms({Fraction(1, 2): 1}).negate_q()


# -- ring laws on truncated series -----------------------------------------


@given(series(), series(), series())
def test_series_add_associative(f, g, h):
    assert (f + g) + h == f + (g + h)


@given(series(), series())
def test_series_commutative(f, g):
    assert f + g == g + f
    assert f * g == g * f


@given(series(), series(), series())
def test_series_mul_associative(f, g, h):
    assert agree((f * g) * h, f * (g * h))


@given(series(), series(), series())
def test_series_distributive(f, g, h):
    assert agree(f * (g + h), f * g + f * h)


@given(series())
def test_series_identities(f):
    assert f * QSeries.one() == f
    assert f + QSeries.zero() == f
    assert not (f - f)._c


# -- truncation soundness ---------------------------------------------------


@given(exact_series(), exact_series(), st.integers(1, 8), st.integers(1, 8))
def test_truncated_product_is_sound(f, g, tf, tg):
    """Every coefficient a truncated product claims to know is correct."""
    F, G = f.truncate(tf), g.truncate(tg)
    P = F * G
    assert P == (f * g).truncate(P.order)
    # and it knows at least min(tf + val G, tg + val F)
    assert P.order >= min(tf + G.floor, tg + F.floor)


@given(exact_series(), exact_series(), st.integers(1, 8), st.integers(1, 8))
def test_truncated_sum_is_sound(f, g, tf, tg):
    S = f.truncate(tf) + g.truncate(tg)
    assert S.order == min(tf, tg)
    assert S == (f + g).truncate(S.order)


@given(exact_series(), unit_lead_series(), st.integers(1, 8))
def test_division_is_sound(f, g, order):
    Q = qs_divide(f, g, order)
    assert Q.order == order
    assert (Q * g).truncate(order) == f.truncate(order)
    # a longer expansion agrees with the shorter one
    assert qs_divide(f, g, order + 3).truncate(order) == Q


@given(exact_series(), unit_lead_series(), st.integers(1, 6), st.integers(1, 6))
def test_division_of_truncated_inputs_is_sound(f, g, tf, tg):
    Q = qs_divide(f.truncate(tf), g.truncate(tg), 12)
    exact = qs_divide(f, g, 12)
    assert Q.order <= 12
    assert Q == exact.truncate(Q.order)


# -- derivations on series --------------------------------------------------


@given(series(), series())
def test_delta_q_leibniz(f, g):
    assert agree((f * g).delta_q(), f.delta_q() * g + f * g.delta_q())


@given(series(), series())
def test_delta_z_leibniz(f, g):
    assert agree((f * g).delta_z(), f.delta_z() * g + f * g.delta_z())


@given(series(), series(), polys)
def test_delta_q_linear(f, g, c):
    assert (f.scale(c) + g).delta_q() == f.delta_q().scale(c) + g.delta_q()


# -- serialization ----------------------------------------------------------


@given(series())
def test_dict_roundtrip(f):
    assert QSeries.from_dict(f.to_dict()) == f


def test_dict_schema():
    f = QSeries.from_terms({Fraction(1, 2): W * I + 3}, order=2)
    d = f.to_dict()
    assert d["lattice_den"] == 24
    assert d["trunc"] == "2"
    (term,) = d["terms"]
    assert term["exp"] == "1/2"
    assert {"ea": 0, "eb": 0, "ew": 0, "re": "3", "im": "0"} in term["coeff"]
    assert {"ea": 0, "eb": 0, "ew": 1, "re": "0", "im": "1"} in term["coeff"]


def test_series_sum_respects_order():
    s = series_sum([QSeries.from_terms({n: 1}) for n in range(10)], 5)
    assert s == QSeries.geometric(5)


def test_compare_reports_first_mismatch():
    f = QSeries.from_terms({0: 1, 3: 2}, order=10)
    g = QSeries.from_terms({0: 1, 3: 5}, order=10)
    r = qs_equal_upto(f, g, 10)
    assert r.status == "fail"
    e, lhs, rhs = r.first_mismatch
    assert e == 3 and lhs == ParamPoly.const(2) and rhs == ParamPoly.const(5)
