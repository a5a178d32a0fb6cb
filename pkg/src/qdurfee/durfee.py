"""Generating functions of generalized odd Durfee symbols.

N(a, b; z; q) = sum_{n>=0} (-q/a, -q/b; q^2)_n (ab)^n q^{2n+1} / (zq, q/z; q^2)_{n+1}

together with its two bilateral forms, the symmetrized and ordinary rank
moments, and the k-marked multisum with its closed form.

Parameters a and b are given as ``ZERO``, ``SYMBOLIC`` or a
:class:`~qdurfee.qlaurent.Monomial` c*q^e (c may itself be a monomial in the
symbols, e.g. b = 1/a).  z and the marking variables x_i are ``SYMBOLIC`` or a
Monomial; a bare scalar means that root of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from .coeffring import ParamPoly, Scalar
from .qlaurent import Monomial, QSeries, qexp, qs_divide, qs_mul, series_sum
from .special import Term, binomial, hyper_sum, one_minus, pochhammer


class _Sentinel:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name


ZERO = _Sentinel("ZERO")
SYMBOLIC = _Sentinel("SYMBOLIC")

ParamValue = Union[_Sentinel, Monomial]


def as_value(x, var: str) -> Optional[Monomial]:
    """Normalize a parameter; None stands for zero."""
    if x is ZERO or x is None:
        return None
    if x is SYMBOLIC:
        return Monomial(ParamPoly.var(var), 0)
    if isinstance(x, Monomial):
        return x
    if isinstance(x, ParamPoly):
        return Monomial(x, 0)
    c = Scalar.coerce(x)
    if not c:
        return None
    return Monomial(c, 0)


def _z_value(x, var: str, power: int) -> Monomial:
    if x is SYMBOLIC:
        return Monomial(ParamPoly.var(var, power), 0)
    v = as_value(x, var)
    if v is None:
        raise ValueError(f"{var} must be nonzero")
    return v


@dataclass(frozen=True)
class ParamChoice:
    a: object = SYMBOLIC
    b: object = SYMBOLIC
    z: object = SYMBOLIC

    @property
    def av(self) -> Optional[Monomial]:
        return as_value(self.a, "a")

    @property
    def bv(self) -> Optional[Monomial]:
        return as_value(self.b, "b")

    @property
    def zv(self) -> Monomial:
        return _z_value(self.z, "w", 2)


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------


def _a_step(p: Optional[Monomial], k: int) -> QSeries:
    """The factor p + q^{2k+1} of (-q/p; q^2)_n p^n."""
    if p is None:
        return QSeries.from_terms({2 * k + 1: 1})
    return binomial(p.coeff, p.exp, 1, 2 * k + 1)


def _b_step(p: Optional[Monomial], k: int) -> QSeries:
    """The factor 1 + p q^{2k+1} of (-pq; q^2)_m."""
    if p is None:
        return QSeries.one()
    return binomial(1, 0, p.coeff, p.exp + 2 * k + 1)


def a_poch(p: Optional[Monomial], n: int) -> Term:
    """(-q/p; q^2)_n p^n for any integer n (a = 0 gives q^{n^2})."""
    if n >= 0:
        return Term(nums=[_a_step(p, k) for k in range(n)])
    return Term(dens=[_a_step(p, k) for k in range(n, 0)])


def b_poch(p: Optional[Monomial], m: int) -> Term:
    """(-pq; q^2)_m for any integer m."""
    if p is None:
        return Term()
    if m >= 0:
        return Term(nums=[_b_step(p, k) for k in range(m)])
    return Term(dens=[_b_step(p, k) for k in range(m, 0)])


def _pole_pair(z: Monomial, e) -> List[QSeries]:
    """(1 - z q^e)(1 - q^e / z)."""
    return [one_minus(Monomial(z.coeff, z.exp + e)), one_minus(Monomial(z.coeff.inverse(), e - z.exp))]


def _prod_value(p: Optional[Monomial], r: Optional[Monomial]) -> Optional[Monomial]:
    if p is None or r is None:
        return None
    return Monomial(p.coeff * r.coeff, p.exp + r.exp)


def _prefactor_args(p: ParamChoice) -> Tuple[List[Monomial], List[Monomial]]:
    a, b = p.av, p.bv
    num = [Monomial(-x.coeff, x.exp + 1) for x in (a, b) if x is not None]
    den = [Monomial(1, 2)]
    ab = _prod_value(a, b)
    if ab is not None:
        den.append(Monomial(ab.coeff, ab.exp + 2))
    return num, den


def prefactor_valuation(p: ParamChoice) -> Fraction:
    num, den = _prefactor_args(p)
    return sum((_low_val(m) for m in num), Fraction(0)) - sum((_low_val(m) for m in den), Fraction(0))


def watson_prefactor(p: ParamChoice, order) -> QSeries:
    """(-aq, -bq; q^2)_inf / (q^2, abq^2; q^2)_inf."""
    order = qexp(order)
    num_args, den_args = _prefactor_args(p)
    vn = sum((_low_val(m) for m in num_args), Fraction(0))
    vd = sum((_low_val(m) for m in den_args), Fraction(0))
    num = pochhammer(num_args, 2, None, order + vd) if num_args else QSeries.one()
    den = pochhammer(den_args, 2, None, order - vn + 2 * vd)
    return qs_divide(num, den, order)


def _low_val(m: Monomial, step: int = 2) -> Fraction:
    v = Fraction(0)
    k = 0
    while m.exp + step * k < 0:
        v += m.exp + step * k
        k += 1
    return v


# ---------------------------------------------------------------------------
# N and its bilateral forms
# ---------------------------------------------------------------------------


def no_series(p: ParamChoice, order) -> QSeries:
    """The defining unilateral sum, truncated at ``order``."""
    a, b, z = p.av, p.bv, p.zv
    first = Term(1, 1, [], _pole_pair(z, 1))

    def up(n: int) -> Term:
        return Term(1, 2, [_a_step(a, n - 1), _a_step(b, n - 1)], _pole_pair(z, 2 * n + 1))

    return hyper_sum(first, up, order)


def _bilateral_term(p: ParamChoice, n: int, extra_exp, extra_dens: List[QSeries], extra_nums=()) -> Term:
    a, b = p.av, p.bv
    t = a_poch(a, n) * a_poch(b, n) * b_poch(a, n + 1).inverse() * b_poch(b, n + 1).inverse()
    sign = -1 if n % 2 else 1
    return t * Term(sign, n * n + 3 * n + 1 + extra_exp, list(extra_nums), extra_dens)


def _bilateral_sum(p: ParamChoice, order, term_extra) -> QSeries:
    """sum_{n in Z} (-q/a,-q/b;q^2)_n (-ab)^n q^{n^2+3n+1} E_n / (-aq,-bq;q^2)_{n+1}.

    ``term_extra(n)`` returns (exp, nums, dens) of the extra factor E_n.  The
    sum is evaluated through explicit ratios of consecutive terms.
    """
    a, b = p.av, p.bv

    def full(n: int) -> Term:
        e, nums, dens = term_extra(n)
        return _bilateral_term(p, n, e, dens, nums)

    def up(n: int) -> Term:
        # t_n / t_{n-1}
        e1, n1, d1 = term_extra(n)
        e0, n0, d0 = term_extra(n - 1)
        nums, dens = _trim(
            [_a_step(a, n - 1), _a_step(b, n - 1)] + list(n1) + list(d0),
            [_b_step(a, n), _b_step(b, n)] + list(d1) + list(n0),
        )
        return Term(-1, 2 * n + 2 + e1 - e0, nums, dens)

    def down(n: int) -> Term:
        # t_n / t_{n+1}
        return up(n + 1).inverse()

    return hyper_sum(full(0), up, order, down)


def _trim(nums: List[QSeries], dens: List[QSeries]) -> Tuple[List[QSeries], List[QSeries]]:
    """Cancel factors that appear in both lists (exact equality)."""
    dens = list(dens)
    out = []
    for f in nums:
        for i, d in enumerate(dens):
            if f == d:
                del dens[i]
                break
        else:
            out.append(f)
    return out, dens


def no_bilateral(p: ParamChoice, order, variant: str = "two_pole") -> QSeries:
    """N through the bilateral (Watson-Whipple) forms.

    two_pole: prefactor/2 * sum (1-q^{4n+2}) ... / ((1-zq^{2n+1})(1-q^{2n+1}/z) ...)
    one_pole: prefactor * sum ... / ((1-zq^{2n+1}) ...)
    """
    z = p.zv
    order = qexp(order)
    if variant == "two_pole":

        def extra(n: int):
            return 0, [binomial(1, 0, -1, 4 * n + 2)], _pole_pair(z, 2 * n + 1)

        half = Fraction(1, 2)
    elif variant == "one_pole":

        def extra(n: int):
            return 0, [], [one_minus(Monomial(z.coeff, z.exp + 2 * n + 1))]

        half = Fraction(1)
    else:
        raise ValueError("variant must be 'two_pole' or 'one_pole'")
    return _with_prefactor(p, order, lambda o: _bilateral_sum(p, o, extra).scale(half))


def _with_prefactor(p: ParamChoice, order, body) -> QSeries:
    """prefactor * body(order'), with orders chosen so the product is exact below ``order``."""
    pv = prefactor_valuation(p)
    s = body(order - pv)
    if not s._c:
        return QSeries.zero(order)
    pre = watson_prefactor(p, order - s.floor)
    return qs_mul(pre, s).truncate(order)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def _one_minus_odd(n: int) -> QSeries:
    return binomial(1, 0, -1, 2 * n + 1)


def sym_moment_series(k: int, a=SYMBOLIC, b=SYMBOLIC, order=10) -> QSeries:
    """Closed bilateral form of the 2k-th symmetrized rank moment generating function."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = ParamChoice(a, b, 1)
    order = qexp(order)

    def extra(n: int):
        return k * (2 * n + 1), [], [_one_minus_odd(n)] * (2 * k + 1)

    return _with_prefactor(p, order, lambda o: _bilateral_sum(p, o, extra))


def _d_dz(poly: ParamPoly) -> ParamPoly:
    """d/dz on a Laurent polynomial in w = z^{1/2}: w^{-2} * (1/2) w d/dw."""
    return (poly.delta("w") * ParamPoly.var("w", -2)) * Fraction(1, 2)


def sym_moment_by_derivative(k: int, a=SYMBOLIC, b=SYMBOLIC, order=10) -> QSeries:
    """(1/(2k)!) (d/dz)^{2k} (z^k N) at z = 1."""
    N = no_series(ParamChoice(a, b, SYMBOLIC), order)
    zk = ParamPoly.var("w", 2 * k)
    fact = Fraction(1, math.factorial(2 * k))

    def f(poly: ParamPoly) -> ParamPoly:
        g = poly * zk
        for _ in range(2 * k):
            g = _d_dz(g)
        return g.specialize_w(1) * fact

    return N.map_coeffs(f)


def rank_moment_by_derivative(j: int, a=SYMBOLIC, b=SYMBOLIC, order=10) -> QSeries:
    """sum_m binom(m + floor(j/2), j) N(r, s, m, n) a^r b^s q^n, any j >= 0."""
    N = no_series(ParamChoice(a, b, SYMBOLIC), order)
    zk = ParamPoly.var("w", 2 * (j // 2))
    fact = Fraction(1, math.factorial(j))

    def f(poly: ParamPoly) -> ParamPoly:
        g = poly * zk
        for _ in range(j):
            g = _d_dz(g)
        return g.specialize_w(1) * fact

    return N.map_coeffs(f)


def ord_moment_series(k: int, a=SYMBOLIC, b=SYMBOLIC, order=10, power: Optional[int] = None) -> QSeries:
    """delta_z^{2k} N at z = 1 (``power`` overrides the exponent 2k)."""
    e = 2 * k if power is None else power
    N = no_series(ParamChoice(a, b, SYMBOLIC), order)
    half = Fraction(1, 2)

    def f(poly: ParamPoly) -> ParamPoly:
        g = poly
        for _ in range(e):
            g = g.delta("w") * half
        return g.specialize_w(1)

    return N.map_coeffs(f)


# ---------------------------------------------------------------------------
# k-marked symbols
# ---------------------------------------------------------------------------


def _x_values(xs: Sequence) -> List[Monomial]:
    return [_z_value(x, f"x{i + 1}", 1) for i, x in enumerate(xs)]


def marked_multisum(k: int, xs: Sequence, a=SYMBOLIC, b=SYMBOLIC, order=10) -> QSeries:
    """The k-fold sum over m_1..m_k >= 0 generating k-marked symbols.

    Term: (-q/a,-q/b;q^2)_M (ab)^M q^{2M+1}
          * prod_{i<k} q^{2S_i+1} / (x_i q^{2S_{i-1}+1}, q^{2S_{i-1}+1}/x_i; q^2)_{m_i+1}
          * 1 / (x_k q^{2S_{k-1}+1}, q^{2S_{k-1}+1}/x_k; q^2)_{m_k+1}
    with S_i = m_1 + ... + m_i and M = S_k.
    """
    if k < 2 or len(xs) != k:
        raise ValueError("need k >= 2 marking values")
    order = qexp(order)
    x = _x_values(xs)
    av, bv = as_value(a, "a"), as_value(b, "b")

    def a_val(M: int) -> Fraction:
        v = Fraction(0)
        for p in (av, bv):
            for j in range(M):
                v += min(p.exp, 2 * j + 1) if p is not None else 2 * j + 1
        return v

    def bound(ms: List[int]) -> Fraction:
        S = 0
        v = Fraction(0)
        for i, m in enumerate(ms):
            S += m
            if i < k - 1:
                v += 2 * S + 1
        return v + 2 * S + 1 + a_val(S)

    @lru_cache(maxsize=None)
    def den_block(i: int, S0: int, m: int) -> Term:
        facs = []
        for j in range(S0, S0 + m + 1):
            facs.extend(_pole_pair(x[i], 2 * j + 1))
        return Term(dens=facs)

    terms = []

    def walk(ms: List[int]):
        i = len(ms)
        if i == k:
            S = 0
            t = Term(1, 0)
            for idx, m in enumerate(ms):
                t = t * den_block(idx, S, m)
                S += m
                if idx < k - 1:
                    t = t * Term(1, 2 * S + 1)
            t = t * a_poch(av, S) * a_poch(bv, S) * Term(1, 2 * S + 1)
            terms.append(t.series(order))
            return
        m = 0
        while bound(ms + [m] + [0] * (k - i - 1)) < order:
            walk(ms + [m])
            m += 1

    walk([])
    return series_sum(terms, order)


def marked_rhs(k: int, xs: Sequence, a=SYMBOLIC, b=SYMBOLIC, order=10) -> QSeries:
    """Closed form of the k-marked generating function (unilateral, n >= 0)."""
    if k < 2 or len(xs) != k:
        raise ValueError("need k >= 2 marking values")
    order = qexp(order)
    x = _x_values(xs)
    p = ParamChoice(a, b, 1)
    av, bv = p.av, p.bv

    def extra(n: int):
        dens = []
        for xi in x:
            dens.extend(_pole_pair(xi, 2 * n + 1))
        return (2 * k + 1) * n + k - (3 * n + 1), [binomial(1, 0, -1, 4 * n + 2)], dens

    def body(o):
        def full0() -> Term:
            e, nums, dens = extra(0)
            return _bilateral_term(p, 0, e, dens, nums)

        def up(n: int) -> Term:
            e1, n1, d1 = extra(n)
            e0, n0, d0 = extra(n - 1)
            return Term(
                -1,
                2 * n + 2 + e1 - e0,
                [_a_step(av, n - 1), _a_step(bv, n - 1)] + list(n1) + list(d0),
                [_b_step(av, n), _b_step(bv, n)] + list(d1) + list(n0),
            )

        return hyper_sum(full0(), up, o)

    return _with_prefactor(p, order, body)
