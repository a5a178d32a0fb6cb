"""Pochhammer products, eta, Jacobi theta, Appell-Lerch sums and Dyson's rank.

Conventions: q = e^{2 pi i tau}, z = e^{2 pi i u} = w^2.  A theta or mu
argument is an :class:`ArgSpec`, the formal point
``u = shift + zmul * u_sym + tau * tau`` where ``u_sym`` is the symbolic
elliptic variable (z = w^2).  ``tau_scale`` m replaces the modular variable
by m*tau, i.e. q -> q^m inside the series but not inside the argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Union

from .coeffring import I, ONE, ParamPoly, Scalar, _scalar_terms, encode
from .errors import (
    DivergentProduct,
    NonUnitLeadingCoefficient,
    PoleInSummand,
    ZeroArgument,
    ZeroProduct,
)
from .qlaurent import DEFAULT_DEN, INF, Monomial, QSeries, qexp, qs_divide, qs_invert, qs_mul, series_sum

Order = Union[int, Fraction]


# ---------------------------------------------------------------------------
# arguments
# ---------------------------------------------------------------------------


def _root_of_unity(x: Fraction) -> Scalar:
    """e^{2 pi i x} for x in (1/4)Z."""
    k = x * 4
    if k.denominator != 1:
        raise ValueError(f"e^(2 pi i {x}) is not in Q(i)")
    return I ** (int(k) % 4)


@dataclass(frozen=True)
class ArgSpec:
    """Formal elliptic argument shift + zmul*u + tau*tau."""

    shift: Fraction = Fraction(0)
    zmul: int = 0
    tau: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "shift", Fraction(self.shift))
        object.__setattr__(self, "tau", Fraction(self.tau))
        object.__setattr__(self, "zmul", int(self.zmul))

    @classmethod
    def symbolic(cls, zmul: int = 1, tau=0, shift=0) -> "ArgSpec":
        return cls(shift, zmul, tau)

    @classmethod
    def torsion(cls, tau=0, shift=0) -> "ArgSpec":
        return cls(shift, 0, tau)

    @classmethod
    def from_unit(cls, unit, e_w: int, e_q) -> "ArgSpec":
        """The point with e^{2 pi i u} = unit * w^{e_w} * q^{e_q} (e_w even)."""
        unit = Scalar.coerce(unit)
        shifts = {ONE: 0, I: Fraction(1, 4), -ONE: Fraction(1, 2), -I: Fraction(3, 4)}
        if unit not in shifts:
            raise ValueError("unit must be 1, -1, i or -i")
        if e_w % 2:
            raise ValueError("e_w must be even")
        return cls(shifts[unit], e_w // 2, e_q)

    def __add__(self, other: "ArgSpec") -> "ArgSpec":
        return ArgSpec(self.shift + other.shift, self.zmul + other.zmul, self.tau + other.tau)

    def __neg__(self) -> "ArgSpec":
        return ArgSpec(-self.shift, -self.zmul, -self.tau)

    def __sub__(self, other: "ArgSpec") -> "ArgSpec":
        return self + (-other)

    def scale(self, k: int) -> "ArgSpec":
        return ArgSpec(self.shift * k, self.zmul * k, self.tau * k)

    def exp_monomial(self) -> Monomial:
        """e^{2 pi i u} as c * w^{2 zmul} * q^tau."""
        c = _root_of_unity(self.shift)
        return Monomial(ParamPoly(_scalar_terms(c, encode((0, 0, 2 * self.zmul)))), self.tau)

    def half_exp_monomial(self) -> Monomial:
        """e^{pi i u} as c * w^{zmul} * q^{tau/2}; needs shift in (1/2)Z."""
        c = _root_of_unity(self.shift / 2)
        return Monomial(ParamPoly(_scalar_terms(c, encode((0, 0, self.zmul)))), self.tau / 2)

    def __str__(self):
        parts = []
        if self.zmul:
            parts.append("u" if self.zmul == 1 else f"{self.zmul}u")
        if self.tau:
            parts.append("tau" if self.tau == 1 else f"{self.tau}tau")
        if self.shift or not parts:
            parts.append(str(self.shift))
        return "+".join(parts).replace("+-", "-")


def monomial_series(m: Monomial, den: int = DEFAULT_DEN) -> QSeries:
    return QSeries.from_terms({m.exp: m.coeff}, den=den)


# ---------------------------------------------------------------------------
# summation ranges
# ---------------------------------------------------------------------------


def index_range(val: Callable[[int], Fraction], order, start: int = 0, step: int = 1, limit: int = 100000) -> List[int]:
    """Indices n = start, start+step, ... whose term can reach below ``order``.

    ``val`` must be a convex lower bound for the q-valuation of the n-th
    term.  The scan stops at the first n with val(n) >= order that is past the
    minimum (val(n+step) >= val(n)); convexity guarantees that every later
    term also starts at or above ``order``.
    """
    out = []
    n = start
    for _ in range(limit):
        v = val(n)
        if v >= order and val(n + step) >= v:
            return out
        if v < order:
            out.append(n)
        n += step
    raise DivergentProduct(f"summation range did not close within {limit} terms")


def bilateral_range(val: Callable[[int], Fraction], order) -> List[int]:
    """All integers n (both directions from 0) with a term below ``order``."""
    neg = index_range(val, order, -1, -1)
    return sorted(neg) + index_range(val, order, 0, 1)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def binomial(c0, e0, c1, e1, den: int = DEFAULT_DEN) -> QSeries:
    """Exact two-term series c0 q^e0 + c1 q^e1."""
    terms = {}
    for c, e in ((c0, e0), (c1, e1)):
        e = qexp(e)
        p = c if isinstance(c, ParamPoly) else ParamPoly.const(c)
        terms[e] = terms[e] + p if e in terms else p
    return QSeries.from_terms(terms, den=den)


def one_minus(m: Monomial, den: int = DEFAULT_DEN) -> QSeries:
    """1 - c q^e."""
    return binomial(1, 0, -m.coeff, m.exp, den)


def product_series(factors: Iterable[QSeries], order=INF) -> QSeries:
    """Product of exact factors, truncated at ``order`` once the floor is known."""
    factors = list(factors)
    if not factors:
        return QSeries.one().truncate(order)
    floors = [f.floor for f in factors]
    if any(fl == INF for fl in floors):
        return QSeries.zero(order)
    total = sum(floors)
    result = QSeries.one(factors[0].den)
    for f, fl in zip(factors, floors):
        total -= fl
        result = qs_mul(result, f)
        if order != INF:
            result = result.truncate(order - total)
    return result


def _as_monomial(x) -> Monomial:
    if isinstance(x, Monomial):
        return x
    if isinstance(x, tuple):
        return Monomial(*x)
    return Monomial(x, 0)


def pochhammer(args: Sequence, step, n: Optional[int], order=INF) -> QSeries:
    """(x_1, ..., x_j; q^step)_n with each x = c * q^e given as a Monomial.

    ``n = None`` means n = infinity (then ``order`` must be finite).  A
    negative n uses (x; p)_{-n} = 1 / prod_{k=1}^{n} (1 - x p^{-k}).
    """
    step = qexp(step)
    if step <= 0:
        raise ValueError("step must be positive")
    xs = [_as_monomial(x) for x in args]
    if n is not None and n < 0:
        dens = [one_minus(Monomial(x.coeff, x.exp - step * k)) for x in xs for k in range(1, -n + 1)]
        for d in dens:
            if not d._c:
                raise ZeroProduct("factor vanishes identically")
        num = product_series(dens)
        return qs_invert(num, order)
    if n is not None:
        facs = [one_minus(Monomial(x.coeff, x.exp + step * k)) for x in xs for k in range(n)]
        return product_series(facs, order)
    if order == INF:
        raise DivergentProduct("infinite product needs a finite order")
    order = qexp(order)
    fixed = []
    tails = []
    for x in xs:
        if x.exp < 0 or (x.exp == 0):
            # finitely many factors with non-positive exponent
            k = 0
            while x.exp + step * k <= 0:
                fixed.append(one_minus(Monomial(x.coeff, x.exp + step * k)))
                k += 1
            tails.append((x, k))
        else:
            tails.append((x, 0))
    for f in fixed:
        if not f._c:
            raise ZeroProduct("(x; q)_inf with x = 1")
    base = product_series(fixed)
    v0 = base.floor
    # remaining factors all have the shape 1 + O(q^{>0})
    facs = []
    for x, k in tails:
        while x.exp + step * k < order - v0:
            facs.append((x.exp + step * k, one_minus(Monomial(x.coeff, x.exp + step * k))))
            k += 1
    facs.sort(key=lambda t: t[0])
    result = base.truncate(order)
    for _, f in facs:
        result = qs_mul(result, f).truncate(order)
    if result.trunc == INF:
        result = result.truncate(order)
    return result


def poch_regularized_a0(n: int, order=INF) -> QSeries:
    """(-q/a; q^2)_n a^n = prod_{k=0}^{n-1} (a + q^{2k+1}); equals q^{n^2} at a = 0."""
    a = ParamPoly.var("a")
    facs = [binomial(a, 0, 1, 2 * k + 1) for k in range(n)]
    return product_series(facs, order)


# ---------------------------------------------------------------------------
# eta
# ---------------------------------------------------------------------------


def euler_product(m: int, order) -> QSeries:
    """(q^m; q^m)_inf to ``order``."""
    return pochhammer([Monomial(1, m)], m, None, order)


def eta_series(m: int, order) -> QSeries:
    """eta(m tau) = q^{m/24} (q^m; q^m)_inf."""
    shift = Fraction(m, 24)
    return euler_product(m, qexp(order) - shift).shift(shift)


def eta_product(powers: dict, order) -> QSeries:
    """prod_m eta(m tau)^{powers[m]} (negative powers allowed)."""
    shift = sum(Fraction(m * p, 24) for m, p in powers.items())
    inner = qexp(order) - shift
    result = QSeries.one().truncate(inner) if inner != INF else QSeries.one()
    for m, p in sorted(powers.items()):
        if p == 0:
            continue
        e = euler_product(m, inner)
        if p < 0:
            e = qs_invert(e, inner)
        for _ in range(abs(p)):
            result = qs_mul(result, e)
    return result.truncate(inner).shift(shift)


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------


def _theta_exponent(h: int, u: ArgSpec, m: int) -> Fraction:
    # nu = h/2: q^{m nu^2/2 + nu tau}
    return Fraction(m * h * h, 8) + Fraction(h, 2) * u.tau


def theta_series(u: ArgSpec, tau_scale: int = 1, order=10, form: str = "sum") -> QSeries:
    """Jacobi theta(u; m tau) = sum_{nu in Z+1/2} e^{pi i nu} e^{2 pi i nu u} q^{m nu^2/2}."""
    m = int(tau_scale)
    order = qexp(order)
    if form == "product":
        return _theta_product(u, m, order)
    if form != "sum":
        raise ValueError("form must be 'sum' or 'product'")
    twice = 2 * u.shift
    if twice.denominator != 1:
        raise ValueError("theta needs the real shift of u in (1/2)Z")
    hs = index_range(lambda j: _theta_exponent(2 * j + 1, u, m), order, 0, 1)
    hs += index_range(lambda j: _theta_exponent(2 * j + 1, u, m), order, -1, -1)
    terms = {}
    for j in hs:
        h = 2 * j + 1
        e = _theta_exponent(h, u, m)
        ipow = (h * (1 + int(twice))) % 4
        c = ParamPoly(_scalar_terms(I ** ipow, encode((0, 0, h * u.zmul))))
        terms[e] = terms[e] + c if e in terms else c
    return QSeries.from_terms(terms, order=order)


def _theta_product(u: ArgSpec, m: int, order) -> QSeries:
    """-i q^{m/8} Z^{-1/2} (q^m, Z, q^m/Z; q^m)_inf with Z = e^{2 pi i u}."""
    Z = u.exp_monomial()
    if u.zmul == 0 and (u.tau % m) == 0 and Z.coeff == ParamPoly.const(1):
        raise ZeroArgument(f"theta vanishes at the lattice point {u}")
    half = (-u).half_exp_monomial()
    pre_exp = Fraction(m, 8) + half.exp
    inner = order - pre_exp
    Zinv = Monomial(Z.coeff.inverse(), -Z.exp + m)
    nz, nzi = _neg_floor(Z, m), _neg_floor(Zinv, m)
    p1 = euler_product(m, inner + nz + nzi)
    p2 = pochhammer([Z], m, None, inner + nzi)
    p3 = pochhammer([Zinv], m, None, inner + nz)
    prod = qs_mul(qs_mul(p1, p2), p3).truncate(inner)
    return prod.scale(half.coeff * ParamPoly.const(-I)).shift(pre_exp).truncate(order)


def _neg_floor(x: Monomial, step: int) -> Fraction:
    """Minus the (non-positive) valuation contributed by factors of (x; q^step)_inf."""
    total = Fraction(0)
    k = 0
    while x.exp + step * k < 0:
        total -= x.exp + step * k
        k += 1
    return total


def theta_deriv_zero(tau_scale: int, order) -> QSeries:
    """theta'(0; m tau) / (2 pi i), as (1/2) w d/dw theta(u) at w = 1."""
    th = theta_series(ArgSpec.symbolic(), tau_scale, order)
    return th.delta("w").scale(Fraction(1, 2)).specialize_w(1)


def theta_progression(r: int, m: int, order) -> QSeries:
    """sum_{n = r mod m} q^{n^2/8}."""
    order = qexp(order)
    terms = {}
    lo = index_range(lambda j: Fraction((r + m * j) ** 2, 8), order, 0, 1)
    hi = index_range(lambda j: Fraction((r + m * j) ** 2, 8), order, -1, -1)
    for j in lo + hi:
        n = r + m * j
        e = Fraction(n * n, 8)
        terms[e] = terms.get(e, 0) + 1
    return QSeries.from_terms(terms, order=order)


# ---------------------------------------------------------------------------
# Appell-Lerch sum
# ---------------------------------------------------------------------------


def _lerch_denominator_val(A: Monomial, m: int, n: int) -> Fraction:
    e = A.exp + m * n
    return min(Fraction(0), e)


def lerch_sum(u: ArgSpec, v: ArgSpec, tau_scale: int, order) -> QSeries:
    """sum_{n in Z} (-W)^n q^{m n(n+1)/2} / (1 - Z q^{m n}), Z = e(u), W = e(v)."""
    m = int(tau_scale)
    Z = u.exp_monomial()
    W = v.exp_monomial()
    order = qexp(order)

    def val(n: int) -> Fraction:
        return Fraction(m * n * (n + 1), 2) + n * W.exp - _lerch_denominator_val(Z, m, n)

    terms = []
    for n in bilateral_range(val, order):
        e = Z.exp + m * n
        if e == 0:
            if Z.coeff == ParamPoly.const(1):
                raise PoleInSummand(f"1 - e(u) q^{m * n} vanishes at n = {n}")
            if not Z.coeff.is_scalar():
                raise NonUnitLeadingCoefficient(f"1 - {Z.coeff} at q^0 is not a unit")
        num = QSeries.from_terms({Fraction(m * n * (n + 1), 2) + n * W.exp: (-W.coeff) ** n})
        den = one_minus(Monomial(Z.coeff, e))
        terms.append(qs_divide(num, den, order))
    return series_sum(terms, order)


def mu_series(u: ArgSpec, v: ArgSpec, tau_scale: int = 1, order=10) -> QSeries:
    """Zwegers' mu(u, v; m tau) = e^{pi i u} / theta(v; m tau) * lerch_sum(u, v)."""
    m = int(tau_scale)
    order = qexp(order)
    half = u.half_exp_monomial()
    # theta(v) is needed only for its valuation first
    th_probe = theta_series(v, m, _theta_probe_order(v, m))
    if not th_probe._c:
        raise ZeroArgument(f"theta({v}) vanishes")
    vt = th_probe.floor
    s_order = order - half.exp + vt
    S = lerch_sum(u, v, m, s_order)
    if not S._c:
        return QSeries.zero(order)
    th = theta_series(v, m, s_order - S.floor + vt)
    q = qs_divide(S, th, s_order - vt)
    return q.scale(half.coeff).shift(half.exp).truncate(order)


def _theta_probe_order(v: ArgSpec, m: int) -> Fraction:
    # smallest exponent of the defining sum plus a margin of m
    best = min(_theta_exponent(2 * j + 1, v, m) for j in range(-64, 64))
    return best + m


# ---------------------------------------------------------------------------
# Dyson's rank generating function
# ---------------------------------------------------------------------------


def dyson_rank(order, starred: bool = False, z_shift=0, q_power: int = 1) -> QSeries:
    """R(z q^c; q^p) = sum_n q^{p n^2} / prod_{k=1}^{n} (1 - z q^{c+pk})(1 - q^{pk-c}/z).

    With ``starred`` the result is divided by (1 - z q^c).  For c = 0 that
    division is carried out coefficientwise in the ring and raises
    InexactDivision when (1 - z) does not divide.
    """
    c = qexp(z_shift)
    p = int(q_power)
    order = qexp(order)
    z = ParamPoly.var("w", 2)
    zi = ParamPoly.var("w", -2)

    def val(n: int) -> Fraction:
        v = Fraction(p * n * n)
        for k in range(1, n + 1):
            v -= min(0, c + p * k) + min(0, p * k - c)
        return v

    work = order
    if starred and c != 0:
        work = order + min(0, c)
    terms = []
    for n in index_range(val, work, 0, 1):
        num = QSeries.from_terms({p * n * n: 1})
        dens = []
        for k in range(1, n + 1):
            dens.append(one_minus(Monomial(z, c + p * k)))
            dens.append(one_minus(Monomial(zi, p * k - c)))
        den = product_series(dens)
        terms.append(qs_divide(num, den, work) if dens else num.truncate(work))
    R = series_sum(terms, work)
    if not starred:
        return R
    if c != 0:
        return qs_divide(R, one_minus(Monomial(z, c)), order)
    w2 = ParamPoly.var("w", 2)
    return R.map_coeffs(lambda poly: poly.divide_one_minus(w2, "w"))


# ---------------------------------------------------------------------------
# hypergeometric-type sums
# ---------------------------------------------------------------------------


class Term:
    """coeff * q^exp * prod(nums) / prod(dens), all factors exact polynomials."""

    __slots__ = ("coeff", "exp", "nums", "dens")

    def __init__(self, coeff=1, exp=0, nums=(), dens=()):
        self.coeff = coeff if isinstance(coeff, ParamPoly) else ParamPoly.const(coeff)
        self.exp = qexp(exp)
        self.nums = list(nums)
        self.dens = list(dens)

    def __mul__(self, other: "Term") -> "Term":
        return Term(self.coeff * other.coeff, self.exp + other.exp, self.nums + other.nums, self.dens + other.dens)

    def inverse(self) -> "Term":
        return Term(self.coeff.inverse(), -self.exp, self.dens, self.nums)

    def val(self):
        if not self.coeff or any(not f._c for f in self.nums):
            return INF
        for d in self.dens:
            if not d._c:
                raise ZeroProduct("a denominator factor vanishes identically")
        return self.exp + sum((f.floor for f in self.nums), Fraction(0)) - sum((d.floor for d in self.dens), Fraction(0))

    def apply(self, f: QSeries, order=INF) -> QSeries:
        """self * f; ``order`` is required when f is exact and there are denominators."""
        if self.val() == INF:
            t = f.trunc
            return QSeries.zero().truncate(order) if t == INF else QSeries(f.den, INF, {}).truncate(order)
        g = f.scale(self.coeff).shift(self.exp)
        for p in self.nums:
            g = qs_mul(g, p)
        lows = [d.floor for d in self.dens]
        rest = sum(lows, Fraction(0))
        for d, lo in zip(self.dens, lows):
            rest -= lo
            target = INF if order == INF else qexp(order) + rest
            if g.trunc == INF and target == INF:
                raise ValueError("exact division needs an order")
            g = qs_divide(g, d, target)
        if order != INF:
            g = g.truncate(order)
        return g

    def series(self, order=INF) -> QSeries:
        return self.apply(QSeries.one(), order)


def hyper_sum(
    first: Term,
    up: Callable[[int], Term],
    order,
    down: Optional[Callable[[int], Term]] = None,
) -> QSeries:
    """sum_n t_n with t_0 = first, t_n = t_{n-1} * up(n) (n >= 1) and, when
    ``down`` is given, t_n = t_{n+1} * down(n) for n <= -1.

    Evaluated in nested (Horner) form from the last contributing index
    inward, so every step multiplies and divides by short polynomials only.
    The valuations of t_n must be convex in n.
    """
    order = qexp(order)
    parts = []
    vals = {0: first.val()}
    ratios = {}

    def V(n: int):
        if n in vals:
            return vals[n]
        prev = V(n - 1) if n > 0 else V(n + 1)
        if prev == INF:
            vals[n] = INF
            return INF
        r = up(n) if n > 0 else down(n)
        ratios[n] = r
        vals[n] = prev + r.val()
        return vals[n]

    def contributing(start: int, step: int) -> List[int]:
        out = []
        n = start
        while True:
            v = V(n)
            if v == INF:
                return out
            nxt = V(n + step)
            if v >= order and nxt >= v:
                return out
            if v < order:
                out.append(n)
            n += step

    pos = contributing(0, 1)
    if pos:
        last = pos[-1]
        H = QSeries.one().truncate(order - V(last))
        for n in range(last, 0, -1):
            H = QSeries.one() + ratios[n].apply(H)
        parts.append(first.apply(H))
    if down is not None:
        neg = contributing(-1, -1)
        if neg:
            last = neg[-1]
            H = QSeries.one().truncate(order - V(last))
            for n in range(last, -1):
                H = QSeries.one() + ratios[n].apply(H)
            parts.append((first * ratios[-1]).apply(H))
    if not parts:
        return QSeries.zero(order)
    return series_sum(parts, order)
