"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from qdurfee.coeffring import ParamPoly, Scalar
from qdurfee.qlaurent import QSeries

fractions = st.builds(Fraction, st.integers(-6, 6), st.sampled_from([1, 1, 2, 3, 6]))
nonzero_fractions = fractions.filter(bool)
scalars = st.builds(Scalar, fractions, fractions)
nonzero_scalars = scalars.filter(bool)

exponent_tuples = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-3, 3))
polys = st.dictionaries(exponent_tuples, scalars, max_size=4).map(ParamPoly.from_terms)

# exponents on the half-integer lattice, truncation orders integral or infinite
half_exps = st.integers(-2, 12).map(lambda n: Fraction(n, 2))
orders = st.one_of(st.none(), st.integers(2, 7))


@st.composite
def series(draw, order=orders, exps=half_exps, coeffs=polys):
    terms = draw(st.dictionaries(exps, coeffs, max_size=5))
    o = draw(order)
    return QSeries.from_terms(terms, order=o if o is not None else float("inf"))


@st.composite
def exact_series(draw, max_size=6):
    terms = draw(st.dictionaries(st.integers(0, 10), polys, max_size=max_size))
    return QSeries.from_terms(terms)


@st.composite
def unit_lead_series(draw):
    """Exact series with a nonzero scalar constant term (invertible).

    Higher coefficients are scalars too, which keeps long quotients small.
    """
    c = draw(nonzero_scalars)
    rest = draw(st.dictionaries(st.integers(1, 6), scalars, max_size=4))
    rest[0] = c
    return QSeries.from_terms(rest)
