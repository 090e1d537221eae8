"""Hessians of functions in (z, w) and their behaviour along w^q = z^p.

Functions are handled either as polynomials or as products of powers of
polynomials.  Derivatives of a product are assembled from 2-jets
(value, first and second partials) so a factor may vanish at the point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .dualbilliard import BilliardSpec, PencilBilliard, structure_f
from .errors import BranchAmbiguity, FitFailure, SampleOffCurve, SingularSample
from .exactnum import as_scalar, format_scalar, precision_bits, to_approx
from .integrals import Q1, catalog_integral
from .polynomial import Poly
from .quasihomog import factor_qh, lower_part

Z2, W2 = Poly.gens(2)


def hessian_poly(g: Poly) -> Poly:
    """G_zz G_w^2 - 2 G_zw G_z G_w + G_ww G_z^2 (variables 0 and 1)."""
    gz, gw = g.diff(0), g.diff(1)
    return g.diff(0).diff(0) * gw * gw - gz.diff(1) * gz * gw * 2 + gw.diff(1) * gz * gz


def hess3_check(f: Poly, g: Poly, samples: Sequence) -> bool:
    """H(fg) = g^3 H(f) at every sample of {f = 0}."""
    hfg = hessian_poly(f * g)
    hf = hessian_poly(f)
    for s in samples:
        if f(s) != 0:
            raise SampleOffCurve(f"{s} is not on f = 0")
        if hfg(s) != g(s) ** 3 * hf(s):
            return False
    return True


# ---------------------------------------------------------------- jets


def _poly_jet(h: Poly, pt) -> tuple:
    hz, hw = h.diff(0), h.diff(1)
    return (h(pt), hz(pt), hw(pt), hz.diff(0)(pt), hz.diff(1)(pt), hw.diff(1)(pt))


def _power(x, e, numeric: bool):
    if not numeric:
        return x ** int(e)
    if x <= 0:
        raise BranchAmbiguity("factor is not positive on the sample path")
    return mpmath.power(x, to_approx(e))


def _jet_power(j: tuple, e, numeric: bool) -> tuple:
    if e == 1:
        return j
    v, vz, vw, vzz, vzw, vww = j
    if v == 0:
        raise SingularSample("a factor with exponent other than 1 vanishes at the sample")
    e_ = to_approx(e) if numeric else e
    p0 = _power(v, e, numeric)
    p1 = e_ * _power(v, e - 1, numeric)
    p2 = e_ * (e_ - 1) * _power(v, e - 2, numeric)
    return (
        p0,
        p1 * vz,
        p1 * vw,
        p2 * vz * vz + p1 * vzz,
        p2 * vz * vw + p1 * vzw,
        p2 * vw * vw + p1 * vww,
    )


def _jet_mul(a: tuple, b: tuple) -> tuple:
    v, z, w, zz, zw, ww = a
    u, uz, uw, uzz, uzw, uww = b
    return (
        v * u,
        z * u + v * uz,
        w * u + v * uw,
        zz * u + 2 * z * uz + v * uzz,
        zw * u + z * uw + w * uz + v * uzw,
        ww * u + 2 * w * uw + v * uww,
    )


def hessian_of_product(factors: Sequence, point, numeric: bool = False):
    """H of prod h_i^{e_i} at ``point``; exact unless ``numeric``."""
    if numeric:
        point = tuple(to_approx(x) for x in point)
    jet = None
    for h, e in factors:
        j = _poly_jet(h, point)
        if numeric:
            j = tuple(to_approx(x) if not isinstance(x, mpmath.mpf) else x for x in j)
        j = _jet_power(j, e, numeric)
        jet = j if jet is None else _jet_mul(jet, j)
    _, gz, gw, gzz, gzw, gww = jet
    return gzz * gw * gw - 2 * gzw * gz * gw + gww * gz * gz


# ---------------------------------------------------------------- factored G


@dataclass(frozen=True)
class FactoredG:
    """(w^q - z^p) z^alpha w^beta prod (w^q - c_j z^p)^mu_j."""

    p: int
    q: int
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    primes: tuple = ()  # ((c_j, mu_j), ...), c_j not in {0, 1}

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        clean = []
        for c, mu in self.primes:
            c, mu = as_scalar(c), Fraction(mu)
            if c in (0, 1):
                raise ValueError("prime factors need c not in {0, 1}")
            if mu != 0:
                clean.append((c, mu))
        object.__setattr__(self, "primes", tuple(clean))

    @property
    def r(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def N(self) -> Fraction:
        return 1 + sum((mu for _, mu in self.primes), Fraction(0))

    def factors(self) -> list:
        out = [(W2 ** self.q - Z2 ** self.p, Fraction(1))]
        if self.alpha:
            out.append((Z2, self.alpha))
        if self.beta:
            out.append((W2, self.beta))
        for c, mu in self.primes:
            out.append((W2 ** self.q - Z2 ** self.p * c, mu))
        return out

    def exponents_integral(self) -> bool:
        return all(e.denominator == 1 for _, e in self.factors())

    def as_poly(self) -> Poly | None:
        """The expanded polynomial when every exponent is a nonnegative integer."""
        if not self.exponents_integral() or any(e < 0 for _, e in self.factors()):
            return None
        out = Poly.const(1, 2)
        for h, e in self.factors():
            out = out * h ** int(e)
        return out

    def __str__(self):
        parts = []
        for h, e in self.factors():
            s = f"({h.to_str(('z', 'w'))})"
            parts.append(s if e == 1 else f"{s}^({e})")
        return "*".join(parts)


@dataclass
class HessianOnCurve:
    c: object
    d: Fraction
    c_literal: object
    mismatch: bool
    path: str
    samples: list = field(default_factory=list)
    d_fit: object = None

    def to_json(self) -> dict:
        def fmt(x):
            return format_scalar(x) if not isinstance(x, mpmath.mpf) else mpmath.nstr(x, 30)

        return {
            "c": fmt(self.c),
            "d": format_scalar(self.d),
            "c_literal": fmt(self.c_literal),
            "weighted_literal_mismatch": self.mismatch,
            "path": self.path,
            "residue": format_scalar(residue_from_hessian(self)),
        }


SAMPLE_T = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7))


def _closed_form(g: FactoredG) -> tuple:
    p, q, r = g.p, g.q, g.r
    rho0 = Fraction(2, 3) * (r + 1)
    d = 3 * (p * g.N + g.alpha + g.beta * r - rho0)
    weighted = Fraction(q * p * (q - p))
    literal = Fraction(1)
    exact = True
    for c, mu in g.primes:
        literal = literal * (1 - c)
        if (3 * mu).denominator == 1:
            weighted = weighted * (1 - c) ** int(3 * mu)
        else:
            exact = False
    literal = q * p * (q - p) * literal ** 3
    if not exact:
        with mpmath.workprec(precision_bits()):
            weighted = mpmath.mpf(q * p * (q - p))
            for c, mu in g.primes:
                weighted *= mpmath.power(to_approx(1 - c), to_approx(3 * mu))
    return d, weighted, literal


def hessian_on_curve(g: FactoredG, numeric: bool | None = None) -> HessianOnCurve:
    """H(G) along (t^q, t^p) written as c z^d, with c and d checked against samples."""
    d, weighted, literal = _closed_form(g)
    if numeric is None:
        numeric = not g.exponents_integral()
    factors = g.factors()
    pts = [(t ** g.q, t ** g.p) for t in SAMPLE_T]
    if not numeric:
        values = [hessian_of_product(factors, pt) for pt in pts]
        poly = g.as_poly()
        if poly is not None:
            hp = hessian_poly(poly)
            if any(hp(pt) != v for pt, v in zip(pts, values)):
                raise FitFailure("product rule and expanded Hessian disagree")
        if d.denominator != 1:
            raise FitFailure("integer exponents gave a fractional degree")
        cs = [v / pt[0] ** int(d) for pt, v in zip(pts, values)]
        if any(x != cs[0] for x in cs):
            raise FitFailure("H(G) along the curve is not a monomial in z")
        c = cs[0]
        if c != weighted:
            raise FitFailure("sampled constant disagrees with the weighted closed form")
        return HessianOnCurve(c, d, literal, c != literal, "exact", values, d)
    with mpmath.workprec(max(precision_bits(), 256)):
        values = [hessian_of_product(factors, pt, numeric=True) for pt in pts]
        zs = [to_approx(pt[0]) for pt in pts]
        d_fit = mpmath.log(values[0] / values[1]) / mpmath.log(zs[0] / zs[1])
        tol = mpmath.mpf("1e-20")
        if abs(d_fit - to_approx(d)) > tol * max(1, abs(d_fit)):
            raise FitFailure(f"fitted exponent {d_fit} differs from {format_scalar(d)}")
        cs = [v / mpmath.power(z, to_approx(d)) for v, z in zip(values, zs)]
        if any(abs(x - cs[0]) > tol * abs(cs[0]) for x in cs):
            raise FitFailure("H(G) along the curve is not c z^d")
        c = cs[0]
        wt = to_approx(weighted)
        mismatch = abs(c - wt) > tol * abs(wt)
        if mismatch:
            raise FitFailure("sampled constant disagrees with the weighted closed form")
        return HessianOnCurve(c, d, literal, literal != weighted, "numeric", values, d_fit)


def residue_from_hessian(result) -> Fraction:
    d = result.d if hasattr(result, "d") else result[1]
    return -Fraction(d) / 3


# ---------------------------------------------------------------- germs from integrals


def _to_zw(h: Poly) -> Poly:
    """Dehomogenize a (z, w, t) polynomial at t = 1 into (z, w)."""
    out: dict = {}
    for (k, m, _), c in h.terms.items():
        out[(k, m)] = out.get((k, m), 0) + c
    return Poly(out, 2)


def _product(factors) -> Poly:
    out = Poly.const(1, 2)
    for h, k in factors:
        out = out * _to_zw(h) ** k
    return out


def _main_exponent(spec: BilliardSpec):
    if isinstance(spec, PencilBilliard):
        raise ValueError("pencil structures have no integral vanishing on the conic to a power")
    r = catalog_integral(spec)
    nums = [(h, k) for h, k in r.num_factors]
    if len(nums) != 1 or nums[0][0] != Q1:
        raise ValueError("integral numerator is not a power of w t - z^2")
    return r, nums[0][1]


def germ_at_origin(spec: BilliardSpec) -> FactoredG:
    """G = R^(1/m1) with R replaced by its lower (2,1)-parts at the origin."""
    r, m1 = _main_exponent(spec)
    num = factor_qh(lower_part(_product(r.num_factors), 2, 1))
    den = factor_qh(lower_part(_product(r.den_factors), 2, 1))
    primes = dict()
    for c, k in num.primes:
        primes[c] = primes.get(c, 0) + k
    for c, k in den.primes:
        primes[c] = primes.get(c, 0) - k
    if primes.pop(Fraction(1), 0) != m1:
        raise ValueError("lower part of the numerator is not (w - z^2)^m1")
    m = Fraction(m1)
    return FactoredG(
        2,
        1,
        (num.alpha - den.alpha) / m,
        (num.beta - den.beta) / m,
        tuple((c, k / m) for c, k in primes.items() if k),
    )


# ---------------------------------------------------------------- ODE along the conic


ODE_SAMPLES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


@dataclass
class OdeReport:
    rows: list
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(row[3] <= self.tolerance for row in self.rows)

    def to_json(self) -> dict:
        return {
            "samples": [
                {
                    "z0": format_scalar(z0),
                    "lhs": mpmath.nstr(lhs, 25),
                    "rhs": mpmath.nstr(rhs, 25),
                    "relative_error": mpmath.nstr(err, 5),
                }
                for z0, lhs, rhs, err in self.rows
            ],
            "passed": self.passed,
        }


def ode_check(spec: BilliardSpec, samples=ODE_SAMPLES, h: str = "1e-8", tolerance: float = 1e-6) -> OdeReport:
    """dH/dz = -3 f(z) H along w = z^2, with G = R^(1/m1) and finite differences."""
    r, m1 = _main_exponent(spec)
    f = structure_f(spec)
    den = [(_to_zw(p), k) for p, k in r.den_factors]
    den = [(p, k) for p, k in den if p.degree() > 0]
    main = W2 - Z2 * Z2
    rows = []
    with mpmath.workprec(precision_bits()):
        step = mpmath.mpf(h)
        for z0 in samples:
            z0 = as_scalar(z0)
            if f.den(z0) == 0:
                raise SingularSample(f"z0 = {format_scalar(z0)} is a pole of f")
            # flip signs so every power is taken on the positive real branch near z0
            factors = [(main, Fraction(1))]
            for p, k in den:
                sgn = 1 if p((z0, z0 * z0)) > 0 else -1
                factors.append((p * sgn, Fraction(-k, m1)))

            def hess(z):
                return hessian_of_product(factors, (z, z * z), numeric=True)

            zz = to_approx(z0)
            val = hess(zz)
            lhs = (hess(zz + step) - hess(zz - step)) / (2 * step)
            rhs = -3 * to_approx(f(z0)) * val
            err = abs(lhs - rhs) / abs(rhs)
            rows.append((z0, lhs, rhs, err))
    return OdeReport(rows, tolerance)
