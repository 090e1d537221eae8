"""Quasihomogeneous polynomials in (z, w) and the (p,q;rho) toolkit.

Polynomials here have two variables.  L denotes the line tangent to
w^q = z^p at (1, 1), parametrized by zeta: (zeta, 1 - r + r zeta), r = p/q.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    AmbiguousCase,
    IrreduciblePrimeOverField,
    NotPrimitive,
    NotRepresentable,
    RelationViolated,
    RhoInteger,
    ZeroPoly,
)
from .exactnum import Scalar, as_scalar, format_scalar
from .polynomial import Poly, UniPoly, root_sort_key, roots_with_multiplicity
from .projcore import INFINITY, Chart, MobiusMap, chart_transport, eta, theta

Z2, W2 = Poly.gens(2)


@dataclass(frozen=True, eq=False)
class QHPoly:
    poly: Poly
    p: int
    q: int

    def __post_init__(self):
        if self.poly.nvars != 2:
            raise ValueError("quasihomogeneous polynomials live in (z, w)")
        if self.p < 1 or self.q < 1 or gcd(self.p, self.q) != 1:
            raise ValueError("p, q must be coprime positive integers")
        if self.poly.is_zero():
            raise ZeroPoly("the zero polynomial has no quasihomogeneous degree")
        degs = {k * self.q + m * self.p for k, m in self.poly.terms}
        if len(degs) != 1:
            raise ValueError(f"{self.poly} is not ({self.p},{self.q})-quasihomogeneous")

    @property
    def qh_degree(self) -> int:
        k, m = next(iter(self.poly.terms))
        return k * self.q + m * self.p

    @property
    def r(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __mul__(self, other: QHPoly) -> QHPoly:
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("different weights")
        return QHPoly(self.poly * other.poly, self.p, self.q)

    def __eq__(self, other):
        if not isinstance(other, QHPoly):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q) and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.p, self.q))

    def __str__(self):
        return self.poly.to_str(("z", "w"))


def lower_part(f: Poly, p: int, q: int) -> QHPoly:
    """Sum of the monomials z^k w^m of minimal weight k q + m p."""
    if f.is_zero():
        raise ZeroPoly("lower part of the zero polynomial")
    low = min(k * q + m * p for k, m in f.terms)
    return QHPoly(Poly({e: c for e, c in f.terms.items() if e[0] * q + e[1] * p == low}, 2), p, q)


def restriction_R(p: int, q: int, c) -> UniPoly:
    """q^q ((1 - r + r zeta)^q - c zeta^p), i.e. (q - p + p zeta)^q - c q^q zeta^p."""
    c = as_scalar(c)
    lin = UniPoly([q - p, p])
    return lin ** q - UniPoly([0] * p + [c * q ** q])


def restrict_to_L(P: QHPoly) -> UniPoly:
    """P(zeta, 1 - r + r zeta) by direct substitution."""
    r = P.r
    return P.poly.evaluate((UniPoly.x(), UniPoly([1 - r, r])))


# ---------------------------------------------------------------- factoring


@dataclass(frozen=True)
class QHFactors:
    """P = lead * z^alpha * w^beta * prod (w^q - c z^p)^mult."""

    lead: Scalar
    alpha: int
    beta: int
    primes: tuple  # ((c, multiplicity), ...)

    @property
    def N(self) -> int:
        return sum(k for _, k in self.primes)


def factor_qh(P: QHPoly) -> QHFactors:
    p, q = P.p, P.q
    alpha = min(k for k, _ in P.poly.terms)
    beta = min(m for _, m in P.poly.terms)
    # the remainder is a binary form in Z = z^p and W = w^q
    coeffs = {}
    for (k, m), c in P.poly.terms.items():
        k, m = k - alpha, m - beta
        if k % p or m % q:
            raise NotPrimitive(f"{P} is not a product of z, w and w^q - c z^p")
        coeffs[k // p] = c
    n = max(coeffs)
    lead = coeffs[0]
    # prod (W - c_j Z) = Z^n prod (x - c_j) with x = W/Z; x^(n-i) has coefficient of Z^i
    h = UniPoly([coeffs.get(n - i, 0) / lead for i in range(n + 1)])
    try:
        roots = roots_with_multiplicity(h) if n else []
    except NotRepresentable as exc:
        raise IrreduciblePrimeOverField(str(exc)) from exc
    roots = sorted(roots, key=lambda cm: root_sort_key(cm[0]))
    return QHFactors(lead, alpha, beta, tuple(roots))


def qh_from_factors(p: int, q: int, alpha: int, beta: int, cs, lead=1) -> QHPoly:
    poly = Poly.const(lead, 2) * Z2 ** alpha * W2 ** beta
    for c in cs:
        poly = poly * (W2 ** q - Z2 ** p * as_scalar(c))
    return QHPoly(poly, p, q)


# ---------------------------------------------------------------- root divisors


@dataclass(frozen=True)
class RootDivisor:
    items: tuple  # ((root or INFINITY, multiplicity), ...)

    @classmethod
    def from_counter(cls, counts: Counter) -> RootDivisor:
        def key(x):
            return (2, 0, 0, 0) if x == INFINITY else root_sort_key(x)

        return cls(tuple(sorted(((x, k) for x, k in counts.items() if k > 0), key=lambda xk: key(xk[0]))))

    def counter(self) -> Counter:
        return Counter(dict(self.items))

    def __contains__(self, x) -> bool:
        return any(y == x for y, _ in self.items)

    @property
    def size(self) -> int:
        return sum(k for _, k in self.items)

    def to_json(self) -> list:
        return [
            {"root": "inf" if x == INFINITY else format_scalar(x), "multiplicity": k}
            for x, k in self.items
        ]


def root_divisor(P: QHPoly) -> RootDivisor:
    """Roots on L of each prime factor; infinity where a restriction drops degree."""
    fac = factor_qh(P)
    p, q = P.p, P.q
    counts: Counter = Counter()
    if fac.alpha:
        counts[Fraction(0)] += fac.alpha
    if fac.beta:
        counts[(P.r - 1) / P.r] += fac.beta
    for c, mult in fac.primes:
        poly = restriction_R(p, q, c)
        try:
            roots = roots_with_multiplicity(poly)
        except NotRepresentable as exc:
            raise IrreduciblePrimeOverField(str(exc)) from exc
        for x, k in roots:
            counts[x] += k * mult
        drop = max(p, q) - poly.degree
        if drop:
            counts[INFINITY] += drop * mult
    return RootDivisor.from_counter(counts)


def is_eta_quasi_invariant(P: QHPoly, rho) -> bool:
    """The root divisor, with one copy of theta_rho removed, is eta_rho-invariant."""
    rho = as_scalar(rho)
    counts = root_divisor(P).counter()
    th = theta(rho)
    if counts.get(th, 0):
        counts[th] -= 1
    counts = +counts
    e = eta(rho)
    image = Counter()
    for x, k in counts.items():
        image[e.apply(x)] += k
    return image == counts


# ---------------------------------------------------------------- the set M


@dataclass(frozen=True)
class RhoClass:
    in_M: bool
    m: int | None

    def to_json(self) -> dict:
        return {"in_M": self.in_M, "m": self.m}


def _m_of(rho: Fraction) -> int | None:
    if rho == 2:
        return None
    m = 2 / (rho - 2)
    return int(m) if m.denominator == 1 else None


def classify_rho(rho) -> RhoClass:
    rho = Fraction(rho)
    m = _m_of(rho)
    if rho in (0, 1, 2, 3, 4):
        return RhoClass(True, m)
    return RhoClass(m is not None and abs(m) >= 3, m)


def classify_rho_by_orbit(rho) -> RhoClass:
    """Same answer via the translation T = eta_2 eta_rho in the y chart.

    y(1/2) = -2 and y(infinity) = 0; rho is admissible iff some power of T
    carries the first to the second.
    """
    rho = Fraction(rho)
    y_chart = Chart("y")
    step_map = chart_transport(eta(2) @ eta(rho), Chart("zeta"), y_chart)
    (a, b), (c, d) = step_map.matrix
    if c != 0 or a != d:
        raise ValueError("T is not a translation in the y chart")
    step = b / a
    if step == 0:
        return RhoClass(rho in (0, 1, 2, 3, 4), None)
    to_y = MobiusMap(y_chart.from_z())
    y = to_y.apply(Fraction(1, 2))
    target = to_y.apply(INFINITY)
    # walk upward from -2 towards 0 with T or its inverse
    walker = step_map if step > 0 else step_map.inverse()
    k = 0
    while y < target:
        y = walker.apply(y)
        k += 1
    if y != target:
        return RhoClass(rho in (0, 1, 2, 3, 4), None)
    return RhoClass(True, k if step > 0 else -k)


# ---------------------------------------------------------------- primitives


def c_of(j: int, m: int) -> Fraction:
    return Fraction(-4 * j * (m - j), (2 * j - m) ** 2)


def orbit_points(m: int) -> list:
    js = range(0, m) if m > 0 else range(m + 1, 0)
    return [Fraction(2 * j - m, 2 * (j - m)) for j in js]


@dataclass(frozen=True)
class Primitive:
    poly: QHPoly
    c: tuple
    orbit: tuple
    m: int

    def to_json(self) -> dict:
        return {
            "polynomial": str(self.poly),
            "m": self.m,
            "c": [format_scalar(c) for c in self.c],
            "orbit": [format_scalar(x) for x in self.orbit],
        }


def build_primitive(rho) -> Primitive:
    rho = Fraction(rho)
    if rho.denominator == 1:
        raise RhoInteger(f"rho = {rho} is an integer; no primitive of this shape")
    info = classify_rho(rho)
    if not info.in_M:
        raise NotPrimitive(f"rho = {rho} is not admissible")
    m = info.m
    half = (abs(m) - 1) // 2
    js = range(1, half + 1) if m > 0 else range(-1, -half - 1, -1)
    cs = tuple(c_of(j, m) for j in js)
    poly = qh_from_factors(2, 1, 1 if m % 2 == 0 else 0, 1 if rho > 2 else 0, cs)
    return Primitive(poly, cs, tuple(orbit_points(m)), m)


def as_projective(P: QHPoly) -> Poly:
    """Homogenize a (z, w) polynomial by t in the plane (z : w : t)."""
    lifted = Poly({(k, m, 0): c for (k, m), c in P.poly.terms.items()}, 3)
    return lifted.homogenize()


# ---------------------------------------------------------------- the two formulas


@dataclass(frozen=True)
class CrosscheckReport:
    case: int
    nu: Fraction
    first: Fraction
    second_lhs: Fraction
    second_rhs: Fraction
    rho: Fraction

    @property
    def first_ok(self) -> bool:
        return self.first == self.rho

    @property
    def second_ok(self) -> bool:
        return self.second_lhs == self.second_rhs

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "nu": format_scalar(self.nu),
            "first_formula": format_scalar(self.first),
            "first_ok": self.first_ok,
            "second_lhs": format_scalar(self.second_lhs),
            "second_rhs": format_scalar(self.second_rhs),
            "second_ok": self.second_ok,
        }


def _primitive_data(P: QHPoly, rho: Fraction) -> QHFactors:
    fac = factor_qh(P)
    if fac.alpha > 1 or fac.beta > 1 or any(k != 1 for _, k in fac.primes):
        raise NotPrimitive(f"{P} has a repeated prime factor")
    if not is_eta_quasi_invariant(P, rho):
        raise NotPrimitive(f"{P} is not eta-quasi-invariant for rho = {rho}")
    return fac


def formula_crosscheck(P1: QHPoly, P2: QHPoly, m1: int, m2: int, rho) -> CrosscheckReport:
    rho = Fraction(rho)
    if (P1.p, P1.q) != (P2.p, P2.q):
        raise NotPrimitive("the two polynomials have different weights")
    p, q, r = P1.p, P1.q, P1.r
    f1 = _primitive_data(P1, rho)
    f2 = _primitive_data(P2, rho)
    if not any(c == 1 for c, _ in f1.primes):
        raise NotPrimitive("the first polynomial must vanish on w^q = z^p")
    if f1.alpha * f2.alpha or f1.beta * f2.beta:
        raise NotPrimitive("z or w divides both polynomials")
    d1 = f1.N * p + f1.alpha + f1.beta
    d2 = f2.N * p + f2.alpha + f2.beta
    th = theta(rho)
    chi1, chi2 = root_divisor(P1), root_divisor(P2)
    in1, in2 = th in chi1, th in chi2
    if in1 and th == (r - 1) / r:
        raise AmbiguousCase("theta_rho = theta_r lies in the root divisor of the first polynomial")
    if in1:
        case, ok = 2, (d1 + 1) * m1 == d2 * m2
    elif in2:
        case, ok = 3, d1 * m1 == (d2 + 1) * m2
    else:
        case, ok = 1, d1 * m1 == d2 * m2
    if not ok:
        raise RelationViolated(f"degree relation of case {case} fails for m1={m1}, m2={m2}")
    nu = Fraction(m2, m1)
    rho0 = Fraction(2, 3) * (r + 1)
    first = rho0 - (d1 - nu * d2) - (r - 1) * (f1.beta - nu * f2.beta)
    d_hat = d1 + 1 if in1 else d1
    lhs = rho * (d_hat - 2)
    rhs = 2 * (f1.N * p + f1.alpha + f1.beta * r - rho0)
    return CrosscheckReport(case, nu, first, lhs, rhs, rho)
