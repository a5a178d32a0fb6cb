"""Truncated Laurent series in q with ParamPoly coefficients.

Exponents live on a lattice (1/D)Z; a series stores integer numerators
``n`` for the exponent ``n/D``.  ``trunc`` is the first exponent about which
nothing is asserted: every coefficient below it is exact and complete.
Exact (finite) series use ``trunc = inf``.

Truncation bookkeeping is pessimistic: every operation lowers ``trunc`` to
the largest value it can prove.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from .coeffring import (
    ParamPoly,
    Rational,
    Scalar,
    _norm,
    _scalar_terms,
    poly_add_into,
    poly_mul_raw,
    poly_scale_raw,
    unit_inverse_raw,
    var_exponent,
    _VAR_UNIT,
)
from .errors import BeyondTruncation, FractionalNegation, NegativePowerAtZero, NonUnitLeadingCoefficient
from .report import IdentityReport

DEFAULT_DEN = 24
INF = math.inf

Exp = Union[int, Fraction, str]
Raw = Dict[int, Dict[int, Rational]]


def qexp(x: Exp) -> Fraction:
    if isinstance(x, float):
        raise TypeError("exponents must be exact")
    return Fraction(x)


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def _as_raw_poly(c) -> Dict[int, Rational]:
    if isinstance(c, ParamPoly):
        return dict(c.raw)
    return _scalar_terms(Scalar.coerce(c))


class QSeries:
    """Truncated Laurent series sum c_e q^e, e in (1/den)Z, known below ``trunc``."""

    __slots__ = ("den", "trunc", "_c")

    def __init__(self, den: int, trunc, coeffs: Raw, _clean: bool = False):
        self.den = den
        self.trunc = trunc
        if _clean:
            self._c = coeffs
        else:
            self._c = {e: p for e, p in coeffs.items() if p and e < trunc}

    # -- construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[Exp, object], order=INF, den: Optional[int] = None) -> "QSeries":
        """Build from {exponent: coefficient}; coefficients may be ParamPoly or scalars."""
        fr = {qexp(e): c for e, c in terms.items()}
        order = INF if order == INF else qexp(order)
        dens = [e.denominator for e in fr] + ([order.denominator] if order != INF else [])
        d = _lcm(den or DEFAULT_DEN, *dens)
        raw: Raw = {}
        for e, c in fr.items():
            n = int(e * d)
            p = _as_raw_poly(c)
            if n in raw:
                poly_add_into(raw[n], p)
            else:
                raw[n] = p
        t = INF if order == INF else int(order * d)
        return cls(d, t, raw)

    @classmethod
    def one(cls, den: int = DEFAULT_DEN) -> "QSeries":
        return cls(den, INF, {0: {0: 1}})

    @classmethod
    def zero(cls, order=INF, den: int = DEFAULT_DEN) -> "QSeries":
        order = INF if order == INF else qexp(order)
        d = _lcm(den, 1 if order == INF else order.denominator)
        return cls(d, INF if order == INF else int(order * d), {})

    @classmethod
    def monomial(cls, coeff=1, exp: Exp = 0, den: int = DEFAULT_DEN) -> "QSeries":
        return cls.from_terms({exp: coeff}, den=den)

    @classmethod
    def geometric(cls, order: Exp, den: int = DEFAULT_DEN) -> "QSeries":
        """sum_{n>=0} q^n truncated at ``order``."""
        order = qexp(order)
        return cls.from_terms({n: 1 for n in range(max(0, math.ceil(order)))}, order=order, den=den)

    # -- basic properties ---------------------------------------------------
    @property
    def order(self):
        """Truncation order as an exact rational (or inf)."""
        return INF if self.trunc == INF else Fraction(self.trunc, self.den)

    @property
    def floor_num(self):
        return min(self._c) if self._c else self.trunc

    @property
    def floor(self):
        f = self.floor_num
        return INF if f == INF else Fraction(f, self.den)

    def valuation(self):
        return self.floor

    def is_exact(self) -> bool:
        return self.trunc == INF

    def exponents(self):
        return [Fraction(n, self.den) for n in sorted(self._c)]

    def items(self):
        """(exponent, ParamPoly) pairs in increasing exponent order."""
        for n in sorted(self._c):
            yield Fraction(n, self.den), ParamPoly(self._c[n])

    def __len__(self):
        return len(self._c)

    def term_count(self) -> int:
        return sum(len(p) for p in self._c.values())

    # -- lattice handling ---------------------------------------------------
    def rescale(self, den: int) -> "QSeries":
        if den == self.den:
            return self
        if den % self.den:
            raise ValueError(f"lattice {den} is not a multiple of {self.den}")
        f = den // self.den
        t = INF if self.trunc == INF else self.trunc * f
        return QSeries(den, t, {n * f: p for n, p in self._c.items()}, _clean=True)

    def reduce_lattice(self, minimum: int = 1) -> "QSeries":
        """Smallest lattice (multiple of ``minimum``) holding every exponent."""
        g = self.den
        for n in self._c:
            g = math.gcd(g, n)
        if self.trunc != INF:
            g = math.gcd(g, self.trunc)
        d = self.den // g
        d = _lcm(d, minimum)
        if self.den % d:
            return self
        f = self.den // d
        t = INF if self.trunc == INF else self.trunc // f
        return QSeries(d, t, {n // f: p for n, p in self._c.items()}, _clean=True)

    def _pair(self, other: "QSeries") -> Tuple["QSeries", "QSeries"]:
        if self.den == other.den:
            return self, other
        d = _lcm(self.den, other.den)
        return self.rescale(d), other.rescale(d)

    # -- arithmetic ---------------------------------------------------------
    def truncate(self, order) -> "QSeries":
        """Forget everything at or above ``order``."""
        if order == INF:
            return self
        order = qexp(order)
        s = self.rescale(_lcm(self.den, order.denominator))
        t = min(s.trunc, int(order * s.den))
        return QSeries(s.den, t, {n: p for n, p in s._c.items() if n < t}, _clean=True)

    def __add__(self, other) -> "QSeries":
        other = _as_series(other, self.den)
        f, g = self._pair(other)
        t = min(f.trunc, g.trunc)
        out = {n: dict(p) for n, p in f._c.items() if n < t}
        for n, p in g._c.items():
            if n >= t:
                continue
            if n in out:
                poly_add_into(out[n], p)
                if not out[n]:
                    del out[n]
            else:
                out[n] = dict(p)
        return QSeries(f.den, t, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries(self.den, self.trunc, {n: {k: -v for k, v in p.items()} for n, p in self._c.items()}, _clean=True)

    def __sub__(self, other) -> "QSeries":
        return self + (-_as_series(other, self.den))

    def __rsub__(self, other) -> "QSeries":
        return _as_series(other, self.den) - self

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (ParamPoly, int, Fraction, Scalar)):
            return self.scale(other)
        return qs_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(Scalar.coerce(other).inverse())
        if isinstance(other, ParamPoly):
            return self.scale(other.inverse())
        return qs_divide(self, other)

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return qs_invert(self, INF) ** (-n)
        result, base = QSeries.one(self.den), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "QSeries":
        m = _as_raw_poly(c)
        if not m:
            return QSeries(self.den, self.trunc, {}, _clean=True)
        if len({k >> 2 for k in m}) == 1:
            out = {n: poly_scale_raw(p, m) for n, p in self._c.items()}
        else:
            out = {n: poly_mul_raw(p, m) for n, p in self._c.items()}
        return QSeries(self.den, self.trunc, {n: p for n, p in out.items() if p}, _clean=True)

    def shift(self, e: Exp) -> "QSeries":
        """Multiply by q**e."""
        e = qexp(e)
        s = self.rescale(_lcm(self.den, e.denominator))
        k = int(e * s.den)
        t = INF if s.trunc == INF else s.trunc + k
        return QSeries(s.den, t, {n + k: p for n, p in s._c.items()}, _clean=True)

    def map_coeffs(self, fn: Callable[[ParamPoly], ParamPoly]) -> "QSeries":
        out = {}
        for n, p in self._c.items():
            r = fn(ParamPoly(p))
            if r:
                out[n] = dict(r.raw)
        return QSeries(self.den, self.trunc, out, _clean=True)

    # -- operators ----------------------------------------------------------
    def delta_q(self) -> "QSeries":
        """q d/dq."""
        out = {}
        for n, p in self._c.items():
            if n:
                f = Fraction(n, self.den)
                out[n] = {k: _norm(v * f) for k, v in p.items()}
        return QSeries(self.den, self.trunc, out, _clean=True)

    def delta(self, var: str) -> "QSeries":
        """var d/dvar applied to every coefficient."""
        return self.map_coeffs(lambda p: p.delta(var))

    def delta_z(self) -> "QSeries":
        """z d/dz with z = w**2, i.e. (1/2) w d/dw."""
        half = Fraction(1, 2)
        return self.map_coeffs(lambda p: p.delta("w") * half)

    def specialize_w(self, zeta) -> "QSeries":
        return self.map_coeffs(lambda p: p.specialize_w(zeta))

    def substitute(self, var: str, value) -> "QSeries":
        """Set a parameter to a Q(i) scalar (no q involved)."""
        return self.map_coeffs(lambda p: p.substitute(var, value))

    def subst_q_power(self, m: int) -> "QSeries":
        """q -> q**m."""
        if m <= 0 or int(m) != m:
            raise ValueError("power must be a positive integer")
        t = INF if self.trunc == INF else self.trunc * m
        return QSeries(self.den, t, {n * m: p for n, p in self._c.items()}, _clean=True)

    def negate_q(self) -> "QSeries":
        """q -> -q on an integer-exponent series."""
        out = {}
        for n, p in self._c.items():
            if n % self.den:
                raise FractionalNegation(f"exponent {Fraction(n, self.den)} is not an integer")
            out[n] = {k: -v for k, v in p.items()} if (n // self.den) % 2 else p
        return QSeries(self.den, self.trunc, out, _clean=True)

    def coeff(self, e: Exp) -> ParamPoly:
        e = qexp(e)
        if self.trunc != INF and e >= self.order:
            raise BeyondTruncation(f"q^{e} is at or beyond truncation {self.order}")
        n = e * self.den
        if n.denominator != 1:
            return ParamPoly()
        return ParamPoly(self._c.get(int(n), {}))

    def __getitem__(self, e) -> ParamPoly:
        return self.coeff(e)

    def equal_upto(self, other: "QSeries", order=INF) -> IdentityReport:
        return qs_equal_upto(self, other, order)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        f, g = self._pair(other)
        return f.trunc == g.trunc and f._c == g._c

    __hash__ = None

    # -- display / serialization --------------------------------------------
    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"QSeries({format_series(self, max_terms=8)})"

    def to_dict(self) -> dict:
        terms = []
        for n in sorted(self._c):
            coeff = []
            for exps, c in sorted(ParamPoly(self._c[n]).terms().items()):
                entry = {"ea": exps[0], "eb": exps[1], "ew": exps[2], "re": str(c.re), "im": str(c.im)}
                if any(exps[3:]):
                    entry["ex"] = list(exps[3:])
                coeff.append(entry)
            terms.append({"exp": str(Fraction(n, self.den)), "coeff": coeff})
        return {"lattice_den": self.den, "trunc": "inf" if self.trunc == INF else str(self.order), "terms": terms}

    @classmethod
    def from_dict(cls, d: dict) -> "QSeries":
        den = int(d["lattice_den"])
        t = d.get("trunc", "inf")
        order = INF if t == "inf" else Fraction(t)
        terms = {}
        for term in d["terms"]:
            poly = {}
            for c in term["coeff"]:
                exps = (c["ea"], c["eb"], c["ew"], *c.get("ex", ()))
                poly[exps] = Scalar(Fraction(c["re"]), Fraction(c["im"]))
            terms[Fraction(term["exp"])] = ParamPoly.from_terms(poly)
        return cls.from_terms(terms, order=order, den=den)


def _as_series(x, den: int) -> QSeries:
    if isinstance(x, QSeries):
        return x
    if isinstance(x, (ParamPoly, int, Fraction, Scalar)):
        return QSeries(den, INF, {0: _as_raw_poly(x)})
    raise TypeError(f"cannot combine QSeries with {type(x).__name__}")


def format_series(f: QSeries, max_terms: Optional[int] = None) -> str:
    parts = []
    for i, (e, p) in enumerate(f.items()):
        if max_terms is not None and i >= max_terms:
            parts.append("...")
            break
        qpart = "" if e == 0 else ("q" if e == 1 else f"q^{{{e}}}")
        if p.is_scalar():
            c = p.scalar_value()
            if qpart and c == 1:
                parts.append(qpart)
            elif qpart and c == -1:
                parts.append("-" + qpart)
            else:
                cs = str(c)
                if c.re and c.im:
                    cs = f"({cs})"
                parts.append(cs + ("*" + qpart if qpart else ""))
        else:
            parts.append(f"({p})" + ("*" + qpart if qpart else ""))
    body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
    if f.trunc != INF:
        body += f" + O(q^{{{f.order}}})"
    return body


# ---------------------------------------------------------------------------
# kernel operations
# ---------------------------------------------------------------------------


def qs_mul(f: QSeries, g: QSeries) -> QSeries:
    """Exact truncated Cauchy product."""
    f, g = f._pair(g)
    if not f._c or not g._c:
        t = min(f.trunc + g.floor_num, g.trunc + f.floor_num)
        return QSeries(f.den, t, {}, _clean=True)
    t = min(f.trunc + g.floor_num, g.trunc + f.floor_num)
    fs = sorted(f._c.items())
    gs = sorted(g._c.items())
    out: Raw = {}
    for e1, p1 in fs:
        lim = t - e1
        for e2, p2 in gs:
            if e2 >= lim:
                break
            acc = out.get(e1 + e2)
            if acc is None:
                acc = out[e1 + e2] = {}
            get = acc.get
            for k1, v1 in p1.items():
                for k2, v2 in p2.items():
                    k = k1 + k2
                    if k & 2:
                        k -= 2
                        acc[k] = get(k, 0) - v1 * v2
                    else:
                        acc[k] = get(k, 0) + v1 * v2
    clean = {}
    for e, acc in out.items():
        p = {k: _norm(v) for k, v in acc.items() if v}
        if p:
            clean[e] = p
    return QSeries(f.den, t, clean, _clean=True)


def _leading(g: QSeries) -> Tuple[int, Dict[int, Rational]]:
    if not g._c:
        raise NonUnitLeadingCoefficient("cannot divide by a series with no known terms")
    e0 = min(g._c)
    return e0, g._c[e0]


def qs_divide(f: QSeries, g: QSeries, order=INF) -> QSeries:
    """f / g where the lowest coefficient of g is a unit monomial.

    The result is exact below min(order, f.trunc - e0, f.floor + g.trunc - 2*e0)
    where e0 is the valuation of g.
    """
    f, g = f._pair(g)
    e0, lead = _leading(g)
    inv = unit_inverse_raw(lead)
    # g = lead q^e0 (1 + R)
    rest = []
    for e, p in g._c.items():
        if e != e0:
            rest.append((e - e0, poly_scale_raw(p, inv) if len(inv) == 1 else poly_mul_raw(p, inv)))
    rest.sort()
    if order != INF:
        order = qexp(order)
        if (order * f.den).denominator != 1:
            d = _lcm(f.den, order.denominator)
            return qs_divide(f.rescale(d), g.rescale(d), order)
        cap = int(order * f.den)
    else:
        cap = INF
    ffloor = f.floor_num
    # u = f / (1 + R) is exact below u_t
    u_t = min(f.trunc, ffloor + g.trunc - e0) if ffloor != INF else f.trunc
    u_t = min(u_t, cap + e0) if cap != INF else u_t
    if u_t == INF:
        if not rest:
            u_t = INF
        else:
            raise ValueError("exact division by a non-monomial needs a finite order")
    u: Raw = {}
    if f._c and u_t != INF:
        step = 0
        for d, _ in rest:
            step = math.gcd(step, d)
        for n in f._c:
            step = math.gcd(step, n - ffloor)
        step = step or 1
        for n in range(ffloor, u_t, step):
            acc = dict(f._c.get(n, ()))
            for d, r in rest:
                prev = u.get(n - d)
                if prev is not None:
                    get = acc.get
                    for k1, v1 in prev.items():
                        for k2, v2 in r.items():
                            k = k1 + k2
                            if k & 2:
                                k -= 2
                                acc[k] = get(k, 0) + v1 * v2
                            else:
                                acc[k] = get(k, 0) - v1 * v2
                    acc = {k: _norm(v) for k, v in acc.items() if v}
            if acc:
                u[n] = acc
    elif f._c:
        u = {n: dict(p) for n, p in f._c.items()}
    # multiply by lead^{-1} q^{-e0}
    out = {n - e0: (poly_scale_raw(p, inv) if len(inv) == 1 else poly_mul_raw(p, inv)) for n, p in u.items()}
    t = u_t - e0 if u_t != INF else INF
    return QSeries(f.den, t, {n: p for n, p in out.items() if p and n < t}, _clean=True)


def qs_invert(f: QSeries, order=INF) -> QSeries:
    """1/f to the requested order (or as far as the precision of f allows)."""
    return qs_divide(QSeries.one(f.den), f, order)


def qs_delta_q(f: QSeries) -> QSeries:
    return f.delta_q()


def qs_subst_q(f: QSeries, kind: Union[str, int]) -> QSeries:
    """kind = 'negate' or a positive integer power m (q -> q**m)."""
    if kind == "negate":
        return f.negate_q()
    return f.subst_q_power(int(kind))


class Monomial:
    """A parameter value c * q**e with c a ParamPoly monomial (or scalar)."""

    __slots__ = ("coeff", "exp")

    def __init__(self, coeff=1, exp: Exp = 0):
        self.coeff = coeff if isinstance(coeff, ParamPoly) else ParamPoly.const(coeff)
        if not self.coeff.is_monomial():
            raise ValueError(f"{self.coeff} is not a monomial")
        self.exp = qexp(exp)

    def __repr__(self):
        return f"Monomial({self.coeff}, q^{self.exp})"

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.coeff == other.coeff and self.exp == other.exp

    def __hash__(self):
        return hash((self.coeff, self.exp))


ZERO_VALUE = "zero"


def qs_specialize_param(
    f: QSeries, var: str, value, degree_range: Optional[Tuple[int, int]] = None
) -> QSeries:
    """Eliminate ``var`` by setting it to zero or to a monomial c*q**e.

    For e != 0 on a truncated series the new truncation depends on the powers
    of ``var`` in coefficients that are not known; ``degree_range`` must bound
    them (over all coefficients, known or not).  For exact series it defaults
    to the observed range.
    """
    unit = _VAR_UNIT[var]
    if value == ZERO_VALUE or value is None or (isinstance(value, int) and value == 0):
        out = {}
        for n, p in f._c.items():
            np_ = {}
            for k, v in p.items():
                e = var_exponent(k, var)
                if e < 0:
                    raise NegativePowerAtZero(f"{var}^{e} at {var}=0")
                if e == 0:
                    np_[k] = v
            if np_:
                out[n] = np_
        return QSeries(f.den, f.trunc, out, _clean=True)
    if not isinstance(value, Monomial):
        value = Monomial(value, 0)
    d = _lcm(f.den, value.exp.denominator)
    s = f.rescale(d)
    step = int(value.exp * d)
    if step and s.trunc != INF:
        if degree_range is None:
            raise ValueError("degree_range is required to specialize a truncated series with a q-shift")
        lo, hi = degree_range
        t = s.trunc + min(step * lo, step * hi, 0)
    else:
        t = s.trunc
    cache: Dict[int, Dict[int, Rational]] = {}
    out: Raw = {}
    for n, p in s._c.items():
        for k, v in p.items():
            e = var_exponent(k, var)
            if e not in cache:
                cache[e] = dict((value.coeff ** e).raw)
            base = k - e * unit
            m = n + e * step
            if m >= t:
                continue
            acc = out.setdefault(m, {})
            for pk, pv in cache[e].items():
                nk = base + pk
                if nk & 2:
                    nk -= 2
                    acc[nk] = acc.get(nk, 0) - v * pv
                else:
                    acc[nk] = acc.get(nk, 0) + v * pv
    return QSeries(d, t, {n: {k: v for k, v in p.items() if v} for n, p in out.items()})


def qs_coeff(f: QSeries, e: Exp) -> ParamPoly:
    return f.coeff(e)


def qs_equal_upto(f: QSeries, g: QSeries, order=INF, id: str = "compare") -> IdentityReport:
    """Compare coefficients below min(f.trunc, g.trunc, order)."""
    f, g = f._pair(g)
    t = min(f.trunc, g.trunc)
    if order != INF:
        order = qexp(order)
        d = _lcm(f.den, order.denominator)
        f, g = f.rescale(d), g.rescale(d)
        t = min(f.trunc, g.trunc, int(order * d))
    eff = INF if t == INF else Fraction(t, f.den)
    for n in sorted(set(f._c) | set(g._c)):
        if n >= t:
            break
        a, b = f._c.get(n, {}), g._c.get(n, {})
        if a != b:
            return IdentityReport(id, eff, "fail", (Fraction(n, f.den), ParamPoly(a), ParamPoly(b)))
    return IdentityReport(id, eff, "pass")


def series_sum(terms: Iterable[QSeries], order=INF, den: int = DEFAULT_DEN) -> QSeries:
    """Sum of series, accumulated in place; truncated at ``order``."""
    acc: Raw = {}
    d = den
    if order != INF:
        d = _lcm(d, qexp(order).denominator)
    t = INF if order == INF else int(qexp(order) * d)
    for s in terms:
        if s.den != d:
            if d % s.den == 0:
                s = s.rescale(d)
            else:
                nd = _lcm(d, s.den)
                f = nd // d
                acc = {n * f: p for n, p in acc.items()}
                t = t if t == INF else t * f
                d = nd
                s = s.rescale(d)
        t = min(t, s.trunc)
        for n, p in s._c.items():
            if n >= t:
                continue
            cur = acc.get(n)
            if cur is None:
                acc[n] = dict(p)
            else:
                poly_add_into(cur, p)
    return QSeries(d, t, {n: p for n, p in acc.items() if p and n < t}, _clean=True)
