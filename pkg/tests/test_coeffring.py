from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdurfee.coeffring import (
    I,
    ONE,
    VARS,
    ParamPoly,
    Scalar,
    binom,
    decode,
    encode,
    parse_scalar,
)
from qdurfee.errors import InexactDivision, NegativePowerAtZero, RootNotInField
from strategies import fractions, nonzero_fractions, nonzero_scalars, polys, scalars

A = ParamPoly.var("a")
B = ParamPoly.var("b")
W = ParamPoly.var("w")


# -- Q(i) -------------------------------------------------------------------


def test_scalar_basics():
    assert I * I == -ONE
    assert Scalar(1, 1) * Scalar(1, -1) == Scalar(2)
    assert Scalar(3, 4).norm() == 25
    assert Scalar(1, 1).inverse() == Scalar(Fraction(1, 2), Fraction(-1, 2))
    assert I ** -1 == -I
    assert str(Scalar(Fraction(1, 2), -3)) == "1/2-3i"
    assert parse_scalar(str(Scalar(Fraction(1, 2), -3))) == Scalar(Fraction(1, 2), -3)


@pytest.mark.parametrize(
    "text,value",
    [
        ("3/4", Scalar(Fraction(3, 4))),
        ("-i", -I),
        ("2i", Scalar(0, 2)),
        ("1+i", Scalar(1, 1)),
        ("1/2-3/2i", Scalar(Fraction(1, 2), Fraction(-3, 2))),
    ],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@given(nonzero_scalars)
def test_scalar_inverse_law(x):
    assert x * x.inverse() == ONE


# -- packed keys ------------------------------------------------------------


@given(st.lists(st.integers(-200, 200), min_size=len(VARS), max_size=len(VARS)), st.integers(0, 1))
def test_encode_decode_roundtrip(exps, ei):
    assert decode(encode(exps, ei)) == (tuple(exps), ei)


# -- ring axioms ------------------------------------------------------------


@given(polys, polys, polys)
def test_add_associative(p, q, r):
    assert (p + q) + r == p + (q + r)


@given(polys, polys)
def test_add_commutative(p, q):
    assert p + q == q + p


@given(polys)
def test_additive_identity_and_inverse(p):
    assert p + ParamPoly() == p
    assert (p - p).is_zero()


@given(polys, polys, polys)
def test_mul_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(polys, polys)
def test_mul_commutative(p, q):
    assert p * q == q * p


@given(polys)
def test_multiplicative_identity(p):
    assert p * ParamPoly.const(1) == p
    assert (p * ParamPoly()).is_zero()


@given(polys, polys, polys)
def test_distributive(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(polys, st.integers(0, 4))
def test_power_is_repeated_product(p, n):
    want = ParamPoly.const(1)
    for _ in range(n):
        want = want * p
    assert p ** n == want


# -- derivation laws --------------------------------------------------------


@given(polys, polys, st.sampled_from(["a", "b", "w"]))
def test_delta_leibniz(p, q, var):
    assert (p * q).delta(var) == p.delta(var) * q + p * q.delta(var)


@given(polys, polys, scalars, st.sampled_from(["a", "b", "w"]))
def test_delta_linear(p, q, c, var):
    assert (p * ParamPoly.const(c) + q).delta(var) == p.delta(var) * ParamPoly.const(c) + q.delta(var)


@given(polys, st.sampled_from(["a", "b", "w"]))
def test_delta_kills_constants_in_var(p, var):
    # terms free of var vanish; var^k is scaled by k
    assert ParamPoly.var(var, 3).delta(var) == ParamPoly.var(var, 3) * 3
    stripped = p.substitute(var, 2)
    assert stripped.delta(var).is_zero()


# -- substitution -----------------------------------------------------------


@given(polys, polys, nonzero_fractions)
def test_substitute_is_ring_map(p, q, t):
    assert (p * q).substitute("a", t) == p.substitute("a", t) * q.substitute("a", t)
    assert (p + q).substitute("a", t) == p.substitute("a", t) + q.substitute("a", t)


def test_substitute_examples():
    p = A * A + B * W.inverse() * 2
    assert p.substitute("a", 3) == ParamPoly.const(9) + B * W.inverse() * 2
    with pytest.raises(NegativePowerAtZero):
        p.substitute("w", 0)


def test_specialize_w():
    z = ParamPoly.var("w", 2)
    assert (z + z.inverse()).specialize_w(-1) == ParamPoly.const(-2)
    assert (z * I).specialize_w(I) == ParamPoly.const(-1)
    assert (W + W.inverse()).specialize_w(1) == ParamPoly.const(2)
    with pytest.raises(RootNotInField):
        W.specialize_w(I)


@given(polys)
def test_map_exponents_involution(p):
    assert p.map_exponents("w", -1).map_exponents("w", -1) == p


@given(polys)
def test_divide_one_minus_inverts_multiplication(p):
    z = ParamPoly.var("w", 2)
    assert ((ParamPoly.const(1) - z) * p).divide_one_minus(z, "w") == p


def test_divide_one_minus_inexact():
    z = ParamPoly.var("w", 2)
    with pytest.raises(InexactDivision):
        ParamPoly.const(1).divide_one_minus(z, "w")


# -- binomials --------------------------------------------------------------


@pytest.mark.parametrize("x,k,v", [(5, 2, 10), (-3, 3, -10), (Fraction(1, 2), 2, Fraction(-1, 8)), (4, 0, 1), (2, 5, 0)])
def test_binom_values(x, k, v):
    assert binom(x, k) == v


@given(fractions, st.integers(1, 6))
def test_binom_pascal(x, k):
    assert binom(x + 1, k) == binom(x, k) + binom(x, k - 1)
