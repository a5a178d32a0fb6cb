from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdurfee.coeffring import I, ParamPoly
from qdurfee.errors import DivergentProduct, PoleInSummand, ZeroArgument
from qdurfee.qlaurent import Monomial, QSeries
from qdurfee.special import (
    ArgSpec,
    Term,
    binomial,
    dyson_rank,
    eta_product,
    eta_series,
    euler_product,
    hyper_sum,
    index_range,
    mu_series,
    pochhammer,
    theta_deriv_zero,
    theta_progression,
    theta_series,
)

Z = ParamPoly.var("w", 2)


def partitions(n, max_part=None):
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in partitions(n - p, p):
            yield (p,) + rest


def naive_product(factors, order):
    """Multiply explicit polynomials in q given as {exp: coeff} dicts."""
    acc = {0: ParamPoly.const(1)}
    for f in factors:
        nxt = {}
        for e1, c1 in acc.items():
            for e2, c2 in f.items():
                if e1 + e2 < order:
                    nxt[e1 + e2] = nxt.get(e1 + e2, ParamPoly()) + c1 * c2
        acc = nxt
    return QSeries.from_terms(acc, order=order)


def test_pochhammer_matches_expanded_product():
    # (a q; q^2)_4 with symbolic a
    a = ParamPoly.var("a")
    got = pochhammer([Monomial(a, 1)], 2, 4)
    want = naive_product([{0: ParamPoly.const(1), 2 * j + 1: -a} for j in range(4)], 30)
    assert got.truncate(30) == want


def test_pochhammer_negative_length():
    # (x; q)_{-n} = 1 / (x q^{-n}; q)_n
    got = pochhammer([Monomial(1, 3)], 1, -2, 10)
    want = QSeries.one() / pochhammer([Monomial(1, 1)], 1, 2, 10)
    assert got.truncate(10) == want.truncate(10)


def test_euler_pentagonal_theorem():
    order = 80
    want = {}
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < order:
                want[e] = (-1) ** kk
                hit = True
        if not hit:
            break
        k += 1
    assert euler_product(1, order) == QSeries.from_terms(want, order=order)


def test_partition_numbers():
    inv = QSeries.one() / euler_product(1, 30)
    assert [inv.truncate(30)[n] for n in range(6)] == [ParamPoly.const(c) for c in (1, 1, 2, 3, 5, 7)]
    for n in range(30):
        assert inv.truncate(30)[n] == ParamPoly.const(sum(1 for _ in partitions(n)))


def test_eta_series_shift():
    assert eta_series(2, 2).exponents() == [Fraction(1, 12)]
    assert eta_series(2, 3).exponents() == [Fraction(1, 12), Fraction(25, 12)]


def test_eta_product_negative_powers():
    # eta(2 tau)^2 / eta(tau) = q^{1/8} sum q^{n(n+1)}... compare by multiplication
    f = eta_product({2: 2, 1: -1}, 20)
    g = eta_series(1, 20)
    assert (f * g).truncate(20) == (eta_series(2, 20) ** 2).truncate(20)


@pytest.mark.parametrize("u", [ArgSpec.symbolic(), ArgSpec.torsion(Fraction(1, 3)), ArgSpec.symbolic(1, Fraction(1, 2), Fraction(1, 2))])
def test_jacobi_triple_product(u):
    assert theta_series(u, 1, 20) == theta_series(u, 1, 20, "product")


def test_theta_is_odd_and_quasi_periodic():
    u = ArgSpec.symbolic()
    th = theta_series(u, 1, 15)
    assert theta_series(-u, 1, 15) == -th
    assert theta_series(u + ArgSpec.torsion(0, 1), 1, 15) == -th


def test_theta_deriv_zero_is_eta_cubed():
    got = theta_deriv_zero(1, 30)
    want = (eta_series(1, 31) ** 3).scale(I).truncate(30)
    assert got == want


def test_theta_progression_definition():
    # sum_n q^{(4n-1)^2 / 8}, directly
    want = {}
    for n in range(-10, 11):
        e = Fraction((4 * n - 1) ** 2, 8)
        if e < 30:
            want[e] = want.get(e, 0) + 1
    assert theta_progression(-1, 4, 30) == QSeries.from_terms(want, order=30)
    assert theta_progression(-1, 4, 30) == eta_product({2: 2, 1: -1}, 30)


def test_mu_symmetry_and_zero_theta():
    u, v = ArgSpec.symbolic(1, Fraction(1, 3)), ArgSpec.torsion(Fraction(1, 4), Fraction(1, 2))
    assert mu_series(u, v, 1, 12) == mu_series(v, u, 1, 12)
    with pytest.raises((ZeroArgument, PoleInSummand)):
        mu_series(u, ArgSpec.torsion(0), 1, 5)


def test_dyson_rank_counts_partitions_by_rank():
    order = 16
    R = dyson_rank(order)
    for n in range(order):
        ranks = Counter(p[0] - len(p) for p in partitions(n)) if n else Counter({0: 1})
        want = ParamPoly.from_terms({(0, 0, 2 * m): c for m, c in ranks.items()})
        assert R[n] == want


def test_rank_star_relation():
    # (1 - z q) R*(z q; q^2) = R(z q; q^2)
    Rs = dyson_rank(12, starred=True, z_shift=1, q_power=2)
    R = dyson_rank(12, z_shift=1, q_power=2)
    assert (Rs * QSeries.from_terms({0: 1, 1: -Z})).truncate(12) == R


def test_binomial_and_hyper_sum():
    assert binomial(1, 0, -1, 2) == QSeries.from_terms({0: 1, 2: -1})
    # sum_{n>=0} q^n / (q; q)_n = 1 / (q; q)_inf, via term ratios
    first = Term(1, 0)

    def up(n):
        return Term(1, 1, [], [binomial(1, 0, -1, n)])

    got = hyper_sum(first, up, 25)
    assert got == (QSeries.one() / euler_product(1, 25)).truncate(25)


@given(st.integers(1, 6), st.integers(-8, 3), st.integers(2, 40))
def test_index_range_covers_convex_valuations(a, b, order):
    val = lambda n: Fraction(a * n * n + b * n)  # noqa: E731
    idx = index_range(val, order, 0, 1, limit=100)
    want = [n for n in range(0, 100) if val(n) < order]
    assert idx == want


def test_index_range_flat_valuation_diverges():
    with pytest.raises(DivergentProduct):
        index_range(lambda n: Fraction(0), 5, 0, 1, limit=50)


def test_theta_progression_residue_classes():
    # the classes 1 and -1 mod 4 give the same squares, so together they double
    both = theta_progression(1, 4, 20) + theta_progression(-1, 4, 20)
    assert both == eta_product({2: 2, 1: -1}, 20).scale(2)
    assert theta_progression(1, 2, 5)[Fraction(1, 8)] == ParamPoly.const(2)
