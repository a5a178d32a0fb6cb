"""Hurwitz class numbers H(n) and Kronecker's odd-class counts F(n).

Both are computed by listing reduced binary quadratic forms directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Tuple


@dataclass(frozen=True)
class QuadForm:
    """A x^2 + B xy + C y^2 with integer coefficients."""

    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y


def reduced_forms(D: int) -> List[QuadForm]:
    """All reduced positive definite forms of discriminant D < 0 (not only primitive)."""
    if D >= 0:
        raise ValueError("discriminant must be negative")
    out = []
    n = -D
    for A in range(1, isqrt(n // 3) + 2):
        for B in range(-A, A + 1):
            num = B * B - D
            if num % (4 * A):
                continue
            C = num // (4 * A)
            f = QuadForm(A, B, C)
            if C >= A and f.is_reduced():
                out.append(f)
    return out


def hurwitz(n: int) -> Fraction:
    """Hurwitz class number H(n): classes of discriminant -n, with weight 1/2
    for multiples of x^2 + y^2 and 1/3 for multiples of x^2 + xy + y^2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    for f in reduced_forms(-n):
        if f.B == 0 and f.A == f.C:
            total += Fraction(1, 2)
        elif f.A == f.B == f.C:
            total += Fraction(1, 3)
        else:
            total += 1
    return total


def even_middle_forms(n: int) -> List[Tuple[int, int, int]]:
    """Reduced forms A x^2 + 2B xy + C y^2 with AC - B^2 = n, as (A, B, C)."""
    if n <= 0:
        raise ValueError("n must be positive")
    out = []
    for A in range(1, isqrt(4 * n // 3) + 2):
        for B in range(-(A // 2), A // 2 + 1):
            num = n + B * B
            if num % A:
                continue
            C = num // A
            if C < A:
                continue
            if (2 * abs(B) == A or A == C) and B < 0:
                continue
            out.append((A, B, C))
    return out


def kronecker_f(n: int) -> Fraction:
    """F(n): classes of forms A x^2 + 2B xy + C y^2 of determinant n with A or C
    odd; multiples of x^2 + y^2 count 1/2."""
    total = Fraction(0)
    for A, B, C in even_middle_forms(n):
        if A % 2 == 0 and C % 2 == 0:
            continue
        total += Fraction(1, 2) if (B == 0 and A == C) else 1
    return total


def hurwitz_table(n_max: int) -> List[Tuple[int, Fraction]]:
    return [(n, hurwitz(n)) for n in range(1, n_max + 1)]


def kronecker_table(n_max: int) -> List[Tuple[int, Fraction]]:
    return [(n, kronecker_f(n)) for n in range(1, n_max + 1)]


def check_relations(n_max: int = 500) -> List[str]:
    """Failures of F(8n+3) = 3H(8n+3), F(8n+7) = H(8n+7), H(8n-1) = F(8n-1)
    for 1 <= n <= n_max (and 0 <= n for the first two)."""
    bad = []
    for n in range(0, n_max + 1):
        if kronecker_f(8 * n + 3) != 3 * hurwitz(8 * n + 3):
            bad.append(f"F({8*n+3}) != 3H({8*n+3})")
        if kronecker_f(8 * n + 7) != hurwitz(8 * n + 7):
            bad.append(f"F({8*n+7}) != H({8*n+7})")
        if n >= 1 and hurwitz(8 * n - 1) != kronecker_f(8 * n - 1):
            bad.append(f"H({8*n-1}) != F({8*n-1})")
    return bad
