from fractions import Fraction
from math import isqrt

import pytest

from qdurfee.classnum import (
    QuadForm,
    check_relations,
    even_middle_forms,
    hurwitz,
    hurwitz_table,
    kronecker_f,
    kronecker_table,
    reduced_forms,
)

KNOWN_H = {
    3: Fraction(1, 3),
    4: Fraction(1, 2),
    7: 1,
    8: 1,
    11: 1,
    12: Fraction(4, 3),
    15: 2,
    16: Fraction(3, 2),
    19: 1,
    20: 2,
    23: 3,
    24: 2,
    27: Fraction(4, 3),
    31: 3,
    47: 5,
}


@pytest.mark.parametrize("n,h", sorted(KNOWN_H.items()))
def test_known_hurwitz_values(n, h):
    assert hurwitz(n) == h


def test_hurwitz_zero_and_vanishing_classes():
    assert hurwitz(0) == Fraction(-1, 12)
    assert all(hurwitz(n) == 0 for n in range(1, 60) if n % 4 in (1, 2))


def sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def lam(n):
    return sum(min(d, n // d) for d in range(1, n + 1) if n % d == 0)


@pytest.mark.parametrize("n", range(1, 80))
def test_kronecker_hurwitz_relation(n):
    # sum_{t^2 <= 4n} H(4n - t^2) = 2 sigma(n) - lambda(n)
    t_max = isqrt(4 * n)
    total = sum(hurwitz(4 * n - t * t) for t in range(-t_max, t_max + 1))
    assert total == 2 * sigma(n) - lam(n)


def test_reduced_forms_discriminant_minus_23():
    forms = reduced_forms(-23)
    assert {(f.A, f.B, f.C) for f in forms} == {(1, 1, 6), (2, 1, 3), (2, -1, 3)}
    assert all(f.discriminant == -23 and f.is_reduced() for f in forms)
    with pytest.raises(ValueError):
        reduced_forms(5)


def test_quadform_evaluation():
    f = QuadForm(2, 1, 3)
    assert f(1, 1) == 6 and f(1, -1) == 4


def test_even_middle_forms_determinant():
    for n in range(1, 40):
        for A, B, C in even_middle_forms(n):
            assert A * C - B * B == n


def test_kronecker_spot_values():
    assert [2 * kronecker_f(n) for n in range(1, 5)] == [1, 2, 2, 2]


def test_tables():
    assert hurwitz_table(23)[-1] == (23, 3)
    assert [n for n, _ in kronecker_table(5)] == [1, 2, 3, 4, 5]


def test_odd_class_relations():
    assert check_relations(500) == []
