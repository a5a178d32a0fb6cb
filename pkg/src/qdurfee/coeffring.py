"""Exact coefficient arithmetic: Gaussian rationals and sparse Laurent
polynomials in the parameters a, b, w (with z = w**2) and the marking
variables x1..x4.

A monomial is packed into a single Python int so that multiplying two
monomials is one integer addition.  The packing is

    key = 4 * sum_j e_j * S**j + ei

where ``e_j`` is the (signed) exponent of variable ``j`` and ``ei`` in {0, 1}
is the power of the imaginary unit.  Adding two keys adds exponent vectors;
if the ``ei`` parts sum to 2 the result is reduced with i**2 = -1.  Values are
Python ints or Fractions, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import InexactDivision, NegativePowerAtZero, NonUnitLeadingCoefficient, RootNotInField

Rational = Union[int, Fraction]

VARS: Tuple[str, ...] = ("a", "b", "w", "x1", "x2", "x3", "x4")
NVARS = len(VARS)
_BITS = 12
_S = 1 << _BITS
_HALF = _S >> 1
_MASK = _S - 1
_OFF = sum(_HALF << (_BITS * j) for j in range(NVARS))
_VAR_INDEX = {name: j for j, name in enumerate(VARS)}
_VAR_UNIT = {name: 4 << (_BITS * j) for j, name in enumerate(VARS)}


def _norm(v: Rational) -> Rational:
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def encode(exps: Iterable[int], ei: int = 0) -> int:
    """Pack an exponent vector (ordered as ``VARS``) and a power of i."""
    x = 0
    for j, e in enumerate(exps):
        if not -_HALF < e < _HALF:
            raise OverflowError(f"exponent {e} out of range")
        x += e << (_BITS * j)
    return 4 * x + ei


def decode(key: int) -> Tuple[Tuple[int, ...], int]:
    """Inverse of :func:`encode`."""
    y = (key >> 2) + _OFF
    exps = tuple(((y >> (_BITS * j)) & _MASK) - _HALF for j in range(NVARS))
    return exps, key & 3


def var_exponent(key: int, var: str) -> int:
    j = _VAR_INDEX[var]
    return ((((key >> 2) + _OFF) >> (_BITS * j)) & _MASK) - _HALF


def key_mul(k1: int, k2: int) -> Tuple[int, int]:
    """Product of two packed monomials as (key, sign)."""
    k = k1 + k2
    if k & 2:
        return k - 2, -1
    return k, 1


def key_inv(k: int) -> Tuple[int, int]:
    """Inverse of a packed monomial as (key, sign); 1/i = -i."""
    ei = k & 3
    k2 = -(k - ei) + ei
    return k2, (-1 if ei else 1)


def key_exponent_part(k: int) -> int:
    return k >> 2


@dataclass(frozen=True)
class Scalar:
    """An element re + im*i of Q(i)."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        if isinstance(x, str):
            return parse_scalar(x)
        return cls(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Scalar(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{_imag_str(abs(self.im))}"

    def __repr__(self):
        return f"Scalar({self})"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}i"


I = Scalar(0, 1)
ONE = Scalar(1)
ZERO = Scalar(0)


def parse_scalar(text: str) -> Scalar:
    """Parse '3/4', '-i', '2i', '1+i', '1/2-3/2i'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        return Scalar(Fraction(s))
    body = s[:-1]
    # split at the last sign that is not the leading one
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        re_part, im_part = body[:cut], body[cut:]
    else:
        re_part, im_part = "0", body
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    return Scalar(Fraction(re_part), im)


def _i_power(n: int) -> Tuple[int, int]:
    """i**n as (ei, sign)."""
    n %= 4
    return (n & 1, -1 if n >= 2 else 1)


def _scalar_terms(c: Scalar, exp_key: int = 0) -> Dict[int, Rational]:
    out = {}
    if c.re:
        out[exp_key] = _norm(c.re)
    if c.im:
        out[exp_key + 1] = _norm(c.im)
    return out


class ParamPoly:
    """Sparse Laurent polynomial over Q(i) in the variables of ``VARS``.

    Instances are immutable by convention; the term dict is canonical (no
    zero values), so equality is dict equality.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        self._t: Dict[int, Rational] = dict(terms) if terms else {}

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls(_scalar_terms(Scalar.coerce(c)))

    @classmethod
    def monomial(cls, coeff=1, **exps: int) -> "ParamPoly":
        c = Scalar.coerce(coeff)
        vec = [0] * NVARS
        for name, e in exps.items():
            vec[_VAR_INDEX[name]] = e
        return cls(_scalar_terms(c, encode(vec)))

    @classmethod
    def var(cls, name: str, power: int = 1) -> "ParamPoly":
        return cls.monomial(1, **{name: power})

    @classmethod
    def from_terms(cls, terms: Mapping[Tuple[int, ...], object]) -> "ParamPoly":
        """Build from {exponent tuple: scalar}; short tuples are zero-padded."""
        out: Dict[int, Rational] = {}
        for exps, c in terms.items():
            vec = list(exps) + [0] * (NVARS - len(exps))
            for k, v in _scalar_terms(Scalar.coerce(c), encode(vec)).items():
                nv = out.get(k, 0) + v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return cls(out)

    # -- inspection ---------------------------------------------------------
    @property
    def raw(self) -> Dict[int, Rational]:
        return self._t

    def terms(self) -> Dict[Tuple[int, ...], Scalar]:
        """{exponent tuple over VARS: Scalar}."""
        out: Dict[Tuple[int, ...], Scalar] = {}
        for k, v in self._t.items():
            exps, ei = decode(k)
            prev = out.get(exps, ZERO)
            out[exps] = prev + (Scalar(0, v) if ei else Scalar(v))
        return out

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def exponent_groups(self) -> int:
        return len({k >> 2 for k in self._t})

    def is_monomial(self) -> bool:
        """True for a single exponent vector with a nonzero Q(i) scalar."""
        return bool(self._t) and self.exponent_groups() == 1

    def is_scalar(self) -> bool:
        return all((k >> 2) == 0 for k in self._t)

    def scalar_value(self) -> Scalar:
        if not self.is_scalar():
            raise ValueError(f"{self} is not a scalar")
        return Scalar(self._t.get(0, 0), self._t.get(1, 0))

    def degree_range(self, var: str) -> Tuple[int, int]:
        es = [var_exponent(k, var) for k in self._t]
        return (min(es), max(es)) if es else (0, 0)

    def variables(self) -> set:
        used = set()
        for k in self._t:
            exps, _ = decode(k)
            used.update(VARS[j] for j, e in enumerate(exps) if e)
        return used

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "ParamPoly":
        other = _as_poly(other)
        out = dict(self._t)
        for k, v in other._t.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                del out[k]
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly({k: -v for k, v in self._t.items()})

    def __sub__(self, other) -> "ParamPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "ParamPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "ParamPoly":
        other = _as_poly(other)
        return ParamPoly(poly_mul_raw(self._t, other._t))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ParamPoly":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ParamPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "ParamPoly":
        """Inverse of a unit (single monomial times nonzero Q(i) scalar)."""
        return ParamPoly(unit_inverse_raw(self._t))

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self._t == other._t
        try:
            return self._t == _as_poly(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    # -- operators ----------------------------------------------------------
    def delta(self, var: str) -> "ParamPoly":
        """Euler operator var * d/dvar: each term c*var**k maps to k*c*var**k."""
        out = {}
        for k, v in self._t.items():
            e = var_exponent(k, var)
            if e:
                out[k] = e * v
        return ParamPoly(out)

    def substitute(self, var: str, value) -> "ParamPoly":
        """Replace ``var`` by a Q(i) scalar."""
        c = Scalar.coerce(value)
        unit = _VAR_UNIT[var]
        out: Dict[int, Rational] = {}
        powers: Dict[int, Dict[int, Rational]] = {}
        for k, v in self._t.items():
            e = var_exponent(k, var)
            base = k - e * unit
            if e not in powers:
                if e == 0:
                    powers[e] = {0: 1}
                elif c:
                    powers[e] = _scalar_terms(c ** e)
                elif e < 0:
                    raise NegativePowerAtZero(f"{var}**{e} at {var}=0")
                else:
                    powers[e] = {}
            for pk, pv in powers[e].items():
                nk, sgn = key_mul(base, pk)
                nv = out.get(nk, 0) + sgn * v * pv
                if nv:
                    out[nk] = nv
                else:
                    out.pop(nk, None)
        return ParamPoly(out)

    def specialize_w(self, zeta) -> "ParamPoly":
        """Set z = w**2 to a fourth root of unity ``zeta``.

        Even powers of w become powers of ``zeta``.  Odd powers need w itself;
        the square roots used are w = 1 for z = 1 and w = i for z = -1.
        """
        zeta = Scalar.coerce(zeta)
        if zeta not in (ONE, -ONE, I, -I):
            raise ValueError(f"z must be a fourth root of unity, got {zeta}")
        has_odd = any(var_exponent(k, "w") % 2 for k in self._t)
        if has_odd:
            if zeta == ONE:
                return self.substitute("w", ONE)
            if zeta == -ONE:
                return self.substitute("w", I)
            raise RootNotInField(f"sqrt({zeta}) is not in Q(i)")
        unit = _VAR_UNIT["w"]
        out: Dict[int, Rational] = {}
        for k, v in self._t.items():
            e = var_exponent(k, "w")
            base = k - e * unit
            for pk, pv in _scalar_terms(zeta ** (e // 2)).items():
                nk, sgn = key_mul(base, pk)
                nv = out.get(nk, 0) + sgn * v * pv
                if nv:
                    out[nk] = nv
                else:
                    out.pop(nk, None)
        return ParamPoly(out)

    def map_exponents(self, var: str, factor: int) -> "ParamPoly":
        """Substitute var -> var**factor (factor may be negative)."""
        unit = _VAR_UNIT[var]
        out = {}
        for k, v in self._t.items():
            e = var_exponent(k, var)
            out[k + e * (factor - 1) * unit] = v
        return ParamPoly(out)

    def divide_one_minus(self, mono: "ParamPoly", var: str) -> "ParamPoly":
        """Exact quotient self / (1 - mono), where mono has positive degree in var."""
        d = var_exponent(next(iter(mono._t)), var) if mono.is_monomial() else 0
        if d <= 0:
            raise ValueError("divisor must be 1 - monomial of positive degree in var")
        if not self._t:
            return ParamPoly()
        low = min(var_exponent(k, var) for k in self._t)
        inv = mono.inverse()
        rem, quo = self, ParamPoly()
        while rem:
            hd = max(var_exponent(k, var) for k in rem._t)
            if hd < low + d:
                raise InexactDivision(f"remainder {rem} after dividing by 1 - {mono}")
            top = ParamPoly({k: v for k, v in rem._t.items() if var_exponent(k, var) == hd})
            qt = -(top * inv)
            quo = quo + qt
            rem = rem - top - qt
        return quo

    # -- display ------------------------------------------------------------
    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for exps, c in sorted(self.terms().items(), key=lambda t: tuple(-e for e in t[0])):
            mono = "*".join(
                (VARS[j] if e == 1 else f"{VARS[j]}^{e}") for j, e in enumerate(exps) if e
            )
            if c.im and c.re:
                cs = f"({c})"
            else:
                cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"ParamPoly({self})"


def _as_poly(x) -> ParamPoly:
    if isinstance(x, ParamPoly):
        return x
    if isinstance(x, (int, Fraction, Scalar)):
        return ParamPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ParamPoly")


def poly_mul_raw(p: Dict[int, Rational], q: Dict[int, Rational]) -> Dict[int, Rational]:
    if len(p) > len(q):
        p, q = q, p
    out: Dict[int, Rational] = {}
    get = out.get
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = k1 + k2
            if k & 2:
                k -= 2
                out[k] = get(k, 0) - v1 * v2
            else:
                out[k] = get(k, 0) + v1 * v2
    return {k: _norm(v) for k, v in out.items() if v}


def poly_scale_raw(p: Dict[int, Rational], mono: Dict[int, Rational]) -> Dict[int, Rational]:
    """Multiply by a (usually one-key) monomial dict."""
    if len(mono) == 1:
        (mk, mv), = mono.items()
        out = {}
        for k, v in p.items():
            nk = k + mk
            if nk & 2:
                out[nk - 2] = -v * mv
            else:
                out[nk] = v * mv
        return out
    return poly_mul_raw(p, mono)


def poly_add_into(acc: Dict[int, Rational], p: Dict[int, Rational], sign: int = 1) -> None:
    """acc += sign * p, in place, keeping acc canonical."""
    get = acc.get
    for k, v in p.items():
        nv = get(k, 0) + sign * v
        if nv:
            acc[k] = nv
        else:
            del acc[k]


def unit_inverse_raw(p: Dict[int, Rational]) -> Dict[int, Rational]:
    """Inverse of c * monomial with c in Q(i) nonzero."""
    if not p:
        raise NonUnitLeadingCoefficient("zero coefficient is not invertible")
    groups = {k >> 2 for k in p}
    if len(groups) != 1:
        raise NonUnitLeadingCoefficient(f"{ParamPoly(p)} is not a monomial")
    (g,) = groups
    base = 4 * g
    c = Scalar(p.get(base, 0), p.get(base + 1, 0)).inverse()
    inv_base = -base
    return _scalar_terms(c, inv_base)


def binom(x: Rational, k: int) -> Rational:
    """Generalized binomial coefficient via the falling factorial."""
    if k < 0:
        return 0
    num = Fraction(1)
    for j in range(k):
        num *= Fraction(x) - j
    return _norm(num / factorial(k))


# module-level names used in docs and tests
A = ParamPoly.var("a")
B = ParamPoly.var("b")
W = ParamPoly.var("w")


def poly_arith(p: ParamPoly, q: ParamPoly, op: str) -> ParamPoly:
    """Ring operation by name: 'add', 'sub' or 'mul'."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_delta(p: ParamPoly, var: str) -> ParamPoly:
    return p.delta(var)


def poly_specialize_w(p: ParamPoly, zeta) -> ParamPoly:
    return p.specialize_w(zeta)
