"""Exact scalars: rationals (``fractions.Fraction``) and elements of Q(sqrt d).

Rationals are plain ``Fraction`` objects.  Elements a + b*sqrt(d) with b != 0
are ``Quad`` instances; every operation collapses a zero irrational part back
to a ``Fraction``, so a quad value with b = 0 never survives.  High precision
floats (mpmath) are a separate, explicitly requested world: ``to_approx``
promotes, nothing demotes.
"""
from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from typing import Union

import mpmath
from sympy.ntheory.factor_ import core as _squarefree_core

from .errors import ApproxNotSupported, MixedField, NotRepresentable

DEFAULT_PRECISION_BITS = 128
APPROX_EPS = mpmath.mpf("1e-30")


def _is_approx(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc, float, complex))


class Quad:
    """a + b*sqrt(d) with rational a, b != 0 and square-free d != 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d in (0, 1) or int(_squarefree_core(abs(d))) != abs(d):
            raise ValueError(f"d must be square-free and not 0 or 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @staticmethod
    def sqrt(d: int) -> Quad:
        return Quad(0, 1, d)

    def _coerce(self, other) -> Quad | None:
        if isinstance(other, Quad):
            if other.d != self.d:
                raise MixedField(f"cannot combine sqrt({self.d}) with sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return _raw(Fraction(other), Fraction(0), self.d)
        if _is_approx(other):
            raise MixedField("exact and approximate values do not mix; use to_approx")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return make_quad(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return _raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return make_quad(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return make_quad(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a = self.a * o.a + self.b * o.b * self.d
        b = self.a * o.b + o.a * self.b
        return make_quad(a, b, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self):
        n = self.norm()
        # n == 0 is impossible for square-free d != 1 and b != 0
        return make_quad(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.b == 0:
            if o.a == 0:
                raise ZeroDivisionError("division by zero")
            return make_quad(self.a / o.a, self.b / o.a, self.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Quad):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(("quad", self.a, self.b, self.d))

    def __bool__(self):
        return True  # b != 0 by construction

    def _sign(self) -> int:
        if self.d < 0:
            raise TypeError("elements of an imaginary quadratic field are unordered")
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        # opposite signs: compare a^2 against b^2 d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare Quad with {type(other).__name__}")
        return sign(self - o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __repr__(self):
        return f"Quad({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, Quad]


def _raw(a: Fraction, b: Fraction, d: int) -> Quad:
    q = object.__new__(Quad)
    q.a, q.b, q.d = a, b, d
    return q


def make_quad(a, b, d: int) -> Scalar:
    """a + b*sqrt(d), collapsed to a Fraction when b == 0."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return a
    return _raw(a, b, d)


def as_scalar(x) -> Scalar:
    if isinstance(x, Quad):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if _is_approx(x):
        raise MixedField("approximate value where an exact scalar is required")
    raise TypeError(f"not a scalar: {x!r}")


def field_of(*values) -> int | None:
    """The common d of the given scalars (None if all rational)."""
    d = None
    for v in values:
        if isinstance(v, Quad):
            if d is None:
                d = v.d
            elif d != v.d:
                raise MixedField(f"sqrt({d}) and sqrt({v.d}) in one computation")
    return d


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def scalar_arith(a, b, op: str) -> Scalar:
    a, b = as_scalar(a), as_scalar(b)
    field_of(a, b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("division by zero")
    return _OPS[op](a, b)


def conjugate(x) -> Scalar:
    if _is_approx(x):
        raise ApproxNotSupported("conjugation is defined for exact scalars only")
    x = as_scalar(x)
    if isinstance(x, Quad):
        return _raw(x.a, -x.b, x.d)
    return x


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def sign(x) -> int:
    """Sign of a real exact scalar."""
    if isinstance(x, Quad):
        return x._sign()
    x = Fraction(x)
    return (x > 0) - (x < 0)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, m = x.numerator, x.denominator
    rn, rm = math.isqrt(n), math.isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def sqrt_exact(x, d: int | None = None) -> Scalar:
    """An exact square root of x.

    Rationals always have a root in Q or in Q(sqrt k) for the square-free
    part k of x; when ``d`` is given the root must live in Q(sqrt d).  Quad
    values only have roots inside their own field.  Anything else raises
    NotRepresentable.
    """
    x = as_scalar(x)
    if isinstance(x, Quad):
        if d is not None and d != x.d:
            raise MixedField(f"value lives in sqrt({x.d}), requested sqrt({d})")
        return _quad_sqrt(x)
    if x == 0:
        return Fraction(0)
    r = _rational_sqrt(x)
    if r is not None:
        return r
    n, m = x.numerator, x.denominator
    prod = n * m
    # sympy may hand back gmpy2 integers, which do not mix with Fraction
    k = int(_squarefree_core(abs(prod))) * (1 if prod > 0 else -1)
    if d is not None and k != d:
        raise NotRepresentable(f"sqrt({x}) is not in Q(sqrt({d}))")
    s = math.isqrt(prod // k)
    return _raw(Fraction(0), Fraction(s, m), k)


def _quad_sqrt(x: Quad) -> Scalar:
    a, b, d = x.a, x.b, x.d
    disc = _rational_sqrt(a * a - d * b * b)
    if disc is not None:
        for big in ((a + disc) / 2, (a - disc) / 2):
            u = _rational_sqrt(big)
            if u:
                return make_quad(u, b / (2 * u), d)
    raise NotRepresentable(f"{format_scalar(x)} has no square root in Q(sqrt({d}))")


def format_scalar(x) -> str:
    """Canonical string: '3/2', '-1/2+1/2*sqrt(-3)', 'sqrt(-1)'."""
    if _is_approx(x):
        return mpmath.nstr(x, 30)
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    out = "" if x.a == 0 else str(x.a)
    b = x.b
    if b == 1:
        irr = f"sqrt({x.d})"
    elif b == -1:
        irr = f"-sqrt({x.d})"
    else:
        irr = f"{b}*sqrt({x.d})"
    if out and not irr.startswith("-"):
        out += "+"
    return out + irr


_SCALAR_RE = re.compile(
    r"^\s*(?:(?P<a>[+-]?\d+(?:/\d+)?)\s*(?=[+-]|$))?"
    r"(?:(?P<b>[+-]?(?:\d+(?:/\d+)?)?)\*?sqrt\((?P<d>-?\d+)\))?\s*$"
)


def parse_scalar(text: str) -> Scalar:
    """Inverse of ``format_scalar``; also accepts decimals like '0.25'."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    m = _SCALAR_RE.match(text)
    if not m or m.group("d") is None:
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group("a") or 0)
    bs = m.group("b")
    b = Fraction(1) if bs in ("", "+", None) else Fraction(-1) if bs == "-" else Fraction(bs)
    return make_quad(a, b, int(m.group("d")))


def scalar_to_json(x) -> dict:
    x = as_scalar(x)
    if isinstance(x, Quad):
        return {"a": scalar_to_json(x.a), "b": scalar_to_json(x.b), "d": str(x.d)}
    return {"num": str(x.numerator), "den": str(x.denominator)}


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, (int, str)):
        return as_scalar(obj)
    if "num" in obj:
        return Fraction(int(obj["num"]), int(obj["den"]))
    return make_quad(scalar_from_json(obj["a"]), scalar_from_json(obj["b"]), int(obj["d"]))


def precision_bits() -> int:
    raw = os.environ.get("BILLIARD_PRECISION_BITS")
    if not raw:
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < 53:
        raise ValueError("BILLIARD_PRECISION_BITS must be at least 53")
    return bits


def to_approx(x):
    """Explicit one-way promotion of an exact scalar to mpmath at current precision."""
    if _is_approx(x):
        return x
    x = as_scalar(x)
    if isinstance(x, Quad):
        root = mpmath.sqrt(mpmath.mpf(x.d))
        return mpmath.mpf(x.a.numerator) / x.a.denominator + (
            mpmath.mpf(x.b.numerator) / x.b.denominator) * root
    return mpmath.mpf(x.numerator) / x.denominator


def approx_equal(x, y, eps=APPROX_EPS) -> bool:
    x, y = to_approx(x), to_approx(y)
    scale = max(mpmath.mpf(1), abs(x), abs(y))
    return abs(x - y) <= eps * scale
