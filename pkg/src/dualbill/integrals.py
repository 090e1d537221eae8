"""Homogeneous rational integrals: catalog formulas, invariance checks, restrictions.

Integrals are kept as products of powers of factors so that evaluation at
points of large height stays cheap; equality of two integrals is always
decided by cross-multiplying expanded numerators and denominators.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .conicpencil import det3, inverse3
from .dualbilliard import (
    BilliardSpec,
    CatalogSpec,
    CustomSpec,
    ExoticA,
    PencilBilliard,
    sigma_at,
    structure_f,
)
from .errors import BasePoint, FieldContext, LineInLocus, RhoNotInM, SingularPoint, UnknownSpec
from .exactnum import Scalar, as_scalar, conjugate, format_scalar, make_quad, scalar_to_json
from .polynomial import Poly, UniPoly, UniRational
from .projcore import INFINITY, HomPoint, ProjLine
from .quasihomog import classify_rho

Z, W, T = Poly.gens()
Q1 = W * T - Z * Z


def _expand(factors) -> Poly:
    out = Poly.const(1, factors[0][0].nvars) if factors else Poly.const(1)
    for p, k in factors:
        out = out * p ** k
    return out


@dataclass(frozen=True, eq=False)
class HomRational:
    """const * prod(num factors) / prod(den factors), homogeneous of degree 0."""

    num_factors: tuple
    den_factors: tuple
    const: Scalar = Fraction(1)
    names: tuple = ("z", "w", "t")

    def __post_init__(self):
        object.__setattr__(self, "num_factors", tuple((p, int(k)) for p, k in self.num_factors))
        object.__setattr__(self, "den_factors", tuple((p, int(k)) for p, k in self.den_factors))
        object.__setattr__(self, "const", as_scalar(self.const))
        if self.const == 0:
            raise ValueError("zero constant")
        for p, _ in self.num_factors + self.den_factors:
            if p.is_zero() or not p.is_homogeneous():
                raise ValueError(f"factor {p} is not a nonzero homogeneous polynomial")
        dn = sum(p.degree() * k for p, k in self.num_factors)
        dd = sum(p.degree() * k for p, k in self.den_factors)
        if dn != dd:
            raise ValueError(f"numerator degree {dn} differs from denominator degree {dd}")

    @classmethod
    def ratio(cls, num: Poly, den: Poly, names=("z", "w", "t")) -> HomRational:
        return cls(((num, 1),), ((den, 1),), Fraction(1), names)

    @cached_property
    def numerator(self) -> Poly:
        return _expand(self.num_factors) * self.const

    @cached_property
    def denominator(self) -> Poly:
        return _expand(self.den_factors)

    @property
    def degree(self) -> int:
        return self.numerator.degree()

    def evaluate_pair(self, point: Sequence) -> tuple:
        n = self.const
        for p, k in self.num_factors:
            n = n * p(point) ** k
        d = Fraction(1)
        for p, k in self.den_factors:
            d = d * p(point) ** k
        return n, d

    def __call__(self, point: Sequence):
        n, d = self.evaluate_pair(point)
        if d == 0:
            if n == 0:
                raise ZeroDivisionError("indeterminate value 0/0")
            return INFINITY
        return n / d

    def map_factors(self, fn) -> HomRational:
        return HomRational(
            tuple((fn(p), k) for p, k in self.num_factors),
            tuple((fn(p), k) for p, k in self.den_factors),
            self.const,
            self.names,
        )

    def linear_substitute(self, matrix) -> HomRational:
        return self.map_factors(lambda p: p.linear_substitute(matrix))

    def permute(self, perm) -> HomRational:
        return self.map_factors(lambda p: p.permute(perm))

    def scaled(self, c) -> HomRational:
        return HomRational(self.num_factors, self.den_factors, self.const * as_scalar(c), self.names)

    def __eq__(self, other):
        if not isinstance(other, HomRational):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        return hash(("homrational", self.degree))

    def ratio_to(self, other: HomRational) -> Scalar | None:
        """c with self = c * other, or None when the two are not proportional."""
        lhs = self.numerator * other.denominator
        rhs = other.numerator * self.denominator
        if lhs.is_zero() or rhs.is_zero():
            return None
        e, v = next(iter(lhs.terms.items()))
        c = v / rhs.terms.get(e, 0) if rhs.terms.get(e, 0) != 0 else None
        if c is None or lhs != rhs * c:
            return None
        return c

    def to_str(self) -> str:
        def prod(factors):
            parts = []
            for p, k in factors:
                s = p.to_str(self.names)
                if len(p.terms) > 1:
                    s = f"({s})"
                parts.append(s if k == 1 else f"{s}^{k}")
            return "*".join(parts) if parts else "1"

        head = "" if self.const == 1 else f"{format_scalar(self.const)}*"
        return f"{head}{prod(self.num_factors)}/({prod(self.den_factors)})"

    def __str__(self):
        return self.to_str()

    def to_json(self) -> dict:
        return {
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "text": self.to_str(),
        }


# ---------------------------------------------------------------- catalog


def c_coefficient(j: int, m: int) -> Fraction:
    """c_j = -4 j (m - j) / (2j - m)^2."""
    return Fraction(-4 * j * (m - j), (2 * j - m) ** 2)


def _wz(c) -> Poly:
    return W * T - Z * Z * c


def classpqr_integral(rho) -> HomRational:
    """The integral R_rho of the (2,1;rho)-billiard, for rho in the admissible set."""
    rho = Fraction(rho)
    info = classify_rho(rho)
    if not info.in_M:
        raise RhoNotInM(f"rho = {rho} is not an admissible residue")
    if rho == 2:
        return HomRational(((Q1, 1),), ((W * T, 1),))
    m = abs(info.m)
    outer = T if rho < 2 else W
    cs = [c_coefficient(j, m) for j in range(1, (m - 1) // 2 + 1)]
    if m % 2:
        den = [(outer, 2)] + [(_wz(c), 2) for c in cs]
        return HomRational(((Q1, m),), tuple(den))
    den = [(Z, 1), (outer, 1)] + [(_wz(c), 1) for c in cs]
    return HomRational(((Q1, m // 2),), tuple(den))


def _exotic_a_integral(spec: ExoticA) -> HomRational:
    n = spec.N
    if spec.parity == "odd":
        cs = [Fraction(-4 * j * (2 * n + 1 - j), (2 * n + 1 - 2 * j) ** 2) for j in range(1, n + 1)]
        return HomRational(((Q1, 2 * n + 1),), tuple([(T, 2)] + [(_wz(c), 2) for c in cs]))
    cs = [Fraction(-j * (2 * n + 2 - j), (n + 1 - j) ** 2) for j in range(1, n + 1)]
    return HomRational(((Q1, n + 1),), tuple([(Z, 1), (T, 1)] + [(_wz(c), 1) for c in cs]))


def _catalog_table() -> dict:
    return {
        "b1": HomRational(
            ((Q1, 2),), ((W * T + Z * Z * 3, 1), (Z - T, 1), (Z - W, 1))
        ),
        "b2": HomRational(
            ((Q1, 2),), ((Z * Z + W * W + W * T + T * T, 1), (Z * Z + T * T, 1))
        ),
        "c1": HomRational(((Q1, 3),), ((T ** 3 + W ** 3 - Z * W * T * 2, 2),)),
        "c2": HomRational(((Q1, 3),), ((C2_CUBIC, 2),)),
        "d": HomRational(
            ((Q1, 3),), ((W * T + Z * Z * 8, 1), (Z - T, 1), (D_CUBIC, 1))
        ),
    }


C2_CUBIC = (Z ** 3 * 8 - Z * Z * W * 8 - Z * Z * T * 8 - W * W * T - W * T * T + Z * W * T * 10)
D_CUBIC = (W * T * T + Z * Z * T * 8 + W * W * T * 4 + W * Z * Z * 5 - Z * W * T * 14 - Z ** 3 * 4)
_CATALOG = _catalog_table()


def catalog_integral(spec: BilliardSpec) -> HomRational:
    if isinstance(spec, CatalogSpec):
        return _CATALOG[spec.kind]
    if isinstance(spec, ExoticA):
        if spec.N is not None:
            return _exotic_a_integral(spec)
        return classpqr_integral(spec.rho)
    if isinstance(spec, PencilBilliard):
        return HomRational.ratio(spec.pencil.B.as_poly(), spec.pencil.A.as_poly())
    raise UnknownSpec(f"no catalog integral for {spec!r}")


# ---------------------------------------------------------------- invariance


@dataclass(frozen=True)
class SamplePlan:
    points: int = 32
    values: int = 8
    height: int = 10 ** 6
    seed: int = 0


@dataclass
class InvarianceReport:
    checked: int = 0
    skipped: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples and self.checked > 0

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": len(self.counterexamples),
            "counterexamples": [
                {"z0": format_scalar(z0), "u": format_scalar(u)} for z0, u in self.counterexamples
            ],
            "passed": self.passed,
        }


def random_rational(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def _pair_on_tangent(z0, pair) -> tuple:
    """Homogeneous point w*P + s*D of the tangent line at (z0, z0^2) for u = s/w."""
    s, w = pair
    return (w * z0 + s, w * z0 * z0 + s * 2 * z0, w)


def verify_invariance(r: HomRational, spec: BilliardSpec, plan: SamplePlan = SamplePlan()) -> InvarianceReport:
    """Check R(sigma_P(x)) = R(x) on tangent lines at sampled points P."""
    rng = random.Random(plan.seed)
    report = InvarianceReport()
    points = 0
    attempts = 0
    while points < plan.points and attempts < 20 * plan.points:
        attempts += 1
        z0 = random_rational(rng, plan.height)
        try:
            sigma = sigma_at(spec, HomPoint(z0, z0 * z0, 1))
        except (SingularPoint, BasePoint):
            continue
        points += 1
        for _ in range(plan.values):
            u = random_rational(rng, plan.height)
            if u == 0:
                u = Fraction(1)
            x = _pair_on_tangent(z0, (u, Fraction(1)))
            y = _pair_on_tangent(z0, sigma.apply_pair((u, Fraction(1))))
            nx, dx = r.evaluate_pair(x)
            ny, dy = r.evaluate_pair(y)
            if (nx == 0 and dx == 0) or (ny == 0 and dy == 0):
                report.skipped += 1
                continue
            report.checked += 1
            if nx * dy != ny * dx:
                report.counterexamples.append((z0, u))
    return report


# ---------------------------------------------------------------- restrictions


def restrict_to_line(r: HomRational, line: ProjLine, chart: str = "z") -> UniRational:
    """R on the line, as a rational function of the chart coordinate (z, or w for vertical lines)."""
    a, b, c = line.coords
    x = UniPoly.x()
    if b != 0 and chart == "z":
        point = (x, UniPoly([-c / b, -a / b]), UniPoly([1]))
    elif a != 0:
        point = (UniPoly([-c / a, -b / a]), x, UniPoly([1]))
    else:
        raise LineInLocus("the line at infinity has no affine chart")
    num, den = r.evaluate_pair(point)
    num = num if isinstance(num, UniPoly) else UniPoly([num])
    den = den if isinstance(den, UniPoly) else UniPoly([den])
    if num.is_zero() or den.is_zero():
        raise LineInLocus("the line lies in the zero or polar locus")
    return UniRational(num, den)


L11 = ProjLine(-2, 1, 1)  # w = 2z - 1, tangent at (1, 1)


def swap_check(rho) -> bool:
    """R_rho(z/w, 1/w) = R_{4-rho}(z, w); homogeneously the swap w <-> t."""
    rho = Fraction(rho)
    r = classpqr_integral(rho)
    s = classpqr_integral(4 - rho)
    return r.permute((0, 2, 1)) == s


# ---------------------------------------------------------------- equivalences


EPS = make_quad(Fraction(-1, 2), Fraction(-1, 2), -3)  # exp(-2 pi i / 3)
I = make_quad(0, 1, -1)


def case_c_matrix() -> tuple:
    e, eb = EPS, conjugate(EPS)
    h = Fraction(1, 2)
    return ((-h, h, h), (1, eb * h, e * h), (1, e * h, eb * h))


def case_b_matrix() -> tuple:
    h = Fraction(1, 2)
    return ((0, I * h, -I * h), (1, h, h), (1, -h, -h))


def equivalence_pullback_check(case: str, samples: int = 20, seed: int = 0) -> dict:
    if case == "c":
        m = case_c_matrix()
        q2 = T ** 3 + W ** 3 - Z * W * T * 2
        q1_ok = Q1.linear_substitute(m) == Q1 * Fraction(-3, 4)
        q2_ok = q2.linear_substitute(m) * 8 == C2_CUBIC * 3
        const = _CATALOG["c1"].linear_substitute(m).ratio_to(_CATALOG["c2"])
        return {
            "case": "c",
            "field": "sqrt(-3)",
            "q1_identity": q1_ok,
            "q2_identity": q2_ok,
            "constant": None if const is None else format_scalar(const),
            "passed": q1_ok and q2_ok and const is not None,
        }
    if case == "b":
        m = case_b_matrix()
        minv = inverse3(m)
        pulled = _CATALOG["b1"].linear_substitute(minv)
        target = _CATALOG["b2"]
        rng = random.Random(seed)
        ratios = []
        while len(ratios) < samples:
            pt = tuple(random_rational(rng, 1000) for _ in range(3))
            n1, d1 = pulled.evaluate_pair(pt)
            n2, d2 = target.evaluate_pair(pt)
            if d1 == 0 or d2 == 0 or n2 == 0:
                continue
            ratios.append((n1 * d2) / (d1 * n2))
        constant = ratios[0]
        same = all(x == constant for x in ratios)
        identity = pulled.ratio_to(target)
        return {
            "case": "b",
            "field": "sqrt(-1)",
            "determinant": format_scalar(det3(m)),
            "constant": format_scalar(constant),
            "pointwise_constant": same,
            "polynomial_identity": identity is not None and identity == constant,
            "passed": same and identity == constant,
        }
    raise FieldContext(f"no field context for equivalence case {case!r}")
