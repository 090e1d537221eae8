"""Sparse multivariate polynomials and dense univariate polynomials over exact scalars.

``Poly`` keys are exponent tuples (three variables by default: z, w, t).
``UniPoly`` stores coefficients low degree first.  Root finding factors over
Q with sympy and then solves linear and quadratic factors exactly; anything
of higher degree is reported as not representable.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .errors import NotRepresentable
from .exactnum import Quad, Scalar, as_scalar, field_of, format_scalar, sqrt_exact
from .exactnum import scalar_from_json, scalar_to_json

VARS = ("z", "w", "t")


class Poly:
    """Sparse polynomial: {exponent tuple: nonzero coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict | None = None, nvars: int = 3):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError("exponent length does not match number of variables")
            c = as_scalar(c)
            if c != 0:
                clean[e] = c
        self.terms = clean

    @classmethod
    def _trusted(cls, terms: dict, nvars: int) -> Poly:
        p = object.__new__(cls)
        p.terms, p.nvars = terms, nvars
        return p

    @classmethod
    def const(cls, c, nvars: int = 3) -> Poly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 3) -> Poly:
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars)

    @classmethod
    def gens(cls, nvars: int = 3) -> tuple[Poly, ...]:
        return tuple(cls.var(i, nvars) for i in range(nvars))

    def _lift(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        if isinstance(other, (int, Fraction, Quad)):
            return Poly.const(other, self.nvars)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Poly._trusted(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._trusted({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly._trusted(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly.const(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def scale(self, c) -> Poly:
        return self * Poly.const(c, self.nvars)

    def degree(self) -> int:
        """Total degree (-1 for the zero polynomial)."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def evaluate(self, point: Sequence):
        """Value at a point; works for exact scalars and for mpmath numbers."""
        powers = [dict() for _ in range(self.nvars)]
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = point[i] ** k
                    term = term * cache[k]
            total = total + term
        return total

    __call__ = evaluate

    def substitute(self, images: Sequence[Poly]) -> Poly:
        """Compose: replace variable i by images[i] (all in a common ring)."""
        nv = images[0].nvars
        out = Poly({}, nv)
        cache = [dict() for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = Poly.const(c, nv)
            for i, k in enumerate(e):
                if k:
                    if k not in cache[i]:
                        cache[i][k] = images[i] ** k
                    term = term * cache[i][k]
            out = out + term
        return out

    def linear_substitute(self, matrix) -> Poly:
        """self(M x): variable i becomes sum_j M[i][j] x_j."""
        gens = Poly.gens(self.nvars)
        images = []
        for row in matrix:
            img = Poly({}, self.nvars)
            for j, m in enumerate(row):
                img = img + gens[j].scale(m)
            images.append(img)
        return self.substitute(images)

    def diff(self, i: int) -> Poly:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly._trusted(out, self.nvars)

    def homogenize(self, degree: int | None = None, var: int = 2) -> Poly:
        """Pad with powers of variable ``var`` to the given total degree."""
        deg = self.degree() if degree is None else degree
        out = {}
        for e, c in self.terms.items():
            pad = deg - sum(e)
            if pad < 0:
                raise ValueError("target degree below polynomial degree")
            f = list(e)
            f[var] += pad
            out[tuple(f)] = c
        return Poly._trusted(out, self.nvars)

    def dehomogenize(self, var: int = 2) -> Poly:
        out: dict = {}
        for e, c in self.terms.items():
            f = list(e)
            f[var] = 0
            f = tuple(f)
            s = out.get(f, 0) + c
            if s == 0:
                out.pop(f, None)
            else:
                out[f] = s
        return Poly._trusted(out, self.nvars)

    def permute(self, perm: Sequence[int]) -> Poly:
        """New variable perm[i] receives old variable i."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * self.nvars
            for i, k in enumerate(e):
                f[perm[i]] = k
            out[tuple(f)] = c
        return Poly._trusted(out, self.nvars)

    def coefficients(self) -> list:
        return list(self.terms.values())

    def field(self) -> int | None:
        return field_of(*self.terms.values())

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), [-k for k in kv[0]]))

    def to_json(self) -> list:
        return [{"e": list(e), "coef": scalar_to_json(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable[dict], nvars: int = 3) -> Poly:
        return cls({tuple(item["e"]): scalar_from_json(item["coef"]) for item in data}, nvars)

    def to_str(self, names: Sequence[str] = VARS) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            cs = format_scalar(c)
            if isinstance(c, Quad):
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __str__(self):
        return self.to_str(VARS[: self.nvars] if self.nvars <= 3 else [f"x{i}" for i in range(self.nvars)])

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------- univariate


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class UniPoly:
    """Dense univariate polynomial, coefficients low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _trim([as_scalar(x) for x in coeffs])

    @classmethod
    def x(cls) -> UniPoly:
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> UniPoly:
        p = cls([1])
        for r in roots:
            p = p * cls([-as_scalar(r), 1])
        return p

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction, Quad)):
            return UniPoly([other])
        return None

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def lead(self):
        return self.c[-1] if self.c else Fraction(0)

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.c), len(o.c))
        a = self.c + [Fraction(0)] * (n - len(self.c))
        b = o.c + [Fraction(0)] * (n - len(o.c))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-x for x in self.c])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.c or not o.c:
            return UniPoly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            for j, y in enumerate(o.c):
                out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UniPoly([1])
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __call__(self, x):
        acc = 0
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly([k * self.c[k] for k in range(1, len(self.c))])

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q = [Fraction(0)] * max(len(rem) - len(other.c) + 1, 0)
        lead = other.lead()
        while len(rem) >= len(other.c) and rem:
            k = len(rem) - len(other.c)
            f = rem[-1] / lead
            q[k] = f
            for i, y in enumerate(other.c):
                rem[i + k] = rem[i + k] - f * y
            rem.pop()
            _trim(rem)
        return UniPoly(q), UniPoly(rem)

    def monic(self) -> UniPoly:
        return UniPoly([x / self.lead() for x in self.c])

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def compose_mobius(self, m) -> tuple[UniPoly, UniPoly]:
        """Numerator N and the factor (c x + d) such that p((a x+b)/(c x+d)) = N / (c x+d)^deg."""
        (a, b), (c, d) = m
        num_lin = UniPoly([b, a])
        den_lin = UniPoly([d, c])
        n = self.degree
        out = UniPoly()
        for k, coef in enumerate(self.c):
            out = out + coef * (num_lin ** k) * (den_lin ** (n - k))
        return out, den_lin

    def field(self) -> int | None:
        return field_of(*self.c)

    def to_str(self, var: str = "z") -> str:
        if not self.c:
            return "0"
        return Poly({(k, 0, 0): c for k, c in enumerate(self.c)}).to_str((var, "", ""))

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UniPoly({self})"


def _as_unipoly(x) -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    if isinstance(x, (list, tuple)):
        return UniPoly(x)
    return UniPoly([x])


class UniRational:
    """num/den; equality is cross-multiplication, never reduction."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        self.num = _as_unipoly(num)
        self.den = _as_unipoly(den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    def __eq__(self, other):
        if not isinstance(other, UniRational):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash(("unirational", self.num.degree, self.den.degree))

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def __add__(self, other):
        if not isinstance(other, UniRational):
            other = UniRational(other)
        return UniRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, UniRational):
            other = UniRational(other)
        return UniRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reduced(self) -> UniRational:
        g = self.num.gcd(self.den)
        if g.is_zero() or g.degree == 0:
            return self
        n, _ = self.num.divmod(g)
        d, _ = self.den.divmod(g)
        return UniRational(n, d)

    def compose_mobius(self, m) -> UniRational:
        """self((a x + b)/(c x + d)) with denominators cleared."""
        n, lin = self.num.compose_mobius(m)
        d, _ = self.den.compose_mobius(m)
        dn, dd = self.num.degree, self.den.degree
        if dn >= dd:
            return UniRational(n, d * lin ** (dn - dd))
        return UniRational(n * lin ** (dd - dn), d)

    def derivative(self) -> UniRational:
        return UniRational(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def to_str(self, var: str = "z") -> str:
        if self.den == UniPoly([1]):
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UniRational({self})"


# ---------------------------------------------------------------- exact roots


def _sympy_factor(p: UniPoly) -> list[tuple[UniPoly, int]]:
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p.c))
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for f, mult in factors:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(f, x).all_coeffs())]
        out.append((UniPoly(coeffs), mult))
    return out


def _quadratic_roots(p: UniPoly, d: int | None) -> list[Scalar]:
    c0, c1, c2 = p.c
    disc = c1 * c1 - 4 * c2 * c0
    if disc == 0:
        return [-c1 / (2 * c2)] * 2
    root = sqrt_exact(disc, d)
    return [(-c1 + root) / (2 * c2), (-c1 - root) / (2 * c2)]


def roots_with_multiplicity(p: UniPoly, d: int | None = None) -> list[tuple[Scalar, int]]:
    """Exact roots of p with multiplicities, in Q or one Q(sqrt k).

    ``d`` pins the extension when the caller already works inside Q(sqrt d).
    Raises NotRepresentable when an irreducible factor has degree > 2 or two
    quadratic factors need different extensions.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no root list")
    if p.degree == 0:
        return []
    fd = p.field()
    if fd is not None:
        if p.degree == 1:
            return [(-p.c[0] / p.c[1], 1)]
        if p.degree == 2:
            r = _quadratic_roots(p, fd)
            return [(r[0], 2)] if r[0] == r[1] else [(r[0], 1), (r[1], 1)]
        raise NotRepresentable("roots of polynomials of degree > 2 over Q(sqrt d)")
    field = d
    found: Counter = Counter()
    order: list = []
    for f, mult in _sympy_factor(p):
        if f.degree == 1:
            rs = [-f.c[0] / f.c[1]]
        elif f.degree == 2:
            rs = _quadratic_roots(f, field)
            field = field_of(*rs) if field is None else field
        else:
            raise NotRepresentable(f"irreducible factor of degree {f.degree}: {f}")
        for r in rs:
            if r not in found:
                order.append(r)
            found[r] += mult
    return [(r, found[r]) for r in order]


def root_sort_key(x):
    """Deterministic order for exact scalars: rationals first, then by parts."""
    x = as_scalar(x)
    if isinstance(x, Quad):
        return (1, x.d, x.a, x.b)
    return (0, 0, x, Fraction(0))


__all__ = [
    "Poly",
    "UniPoly",
    "UniRational",
    "roots_with_multiplicity",
    "root_sort_key",
]
