"""Dual billiard structures on the parabola w = z^2 (chart t = 1).

Each structure is described by its f-function: on the tangent line at
P = (z0, z0^2), in the coordinate u = z - z0, the involution is
u -> -u / (1 + f(z0) u).  Singular points are the simple poles of f plus
possibly the point at infinity of the parabola.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .conicpencil import (
    PARABOLA,
    Conic,
    Pencil,
    parabola_contact_polynomial,
    pencil_involution,
)
from .errors import (
    DuplicateLocation,
    HigherOrderPole,
    InfinitePoint,
    PencilSpec,
    PointNotOnConic,
    ResidueSumNotFour,
    SingularPoint,
    UnknownSpec,
)
from .exactnum import Scalar, as_scalar, format_scalar, make_quad, scalar_from_json, scalar_to_json
from .polynomial import UniPoly, UniRational, root_sort_key, roots_with_multiplicity
from .projcore import Chart, HomPoint, MobiusMap

CATALOG_KINDS = ("b1", "b2", "c1", "c2", "d")

I = make_quad(0, 1, -1)
# primitive cube roots of unity in Q(sqrt -3)
OMEGA = make_quad(Fraction(-1, 2), Fraction(1, 2), -3)
OMEGA_BAR = make_quad(Fraction(-1, 2), Fraction(-1, 2), -3)


@dataclass(frozen=True)
class CatalogSpec:
    """One of the five exotic structures b1, b2, c1, c2, d."""

    kind: str

    def __post_init__(self):
        if self.kind not in CATALOG_KINDS:
            raise UnknownSpec(f"unknown catalog kind {self.kind!r}")


@dataclass(frozen=True)
class ExoticA:
    """f(z) = rho / z; the families rho = 2 - 2/(2N+1) (odd) and 2 - 1/(N+1) (even)."""

    rho: Fraction
    N: int | None = None
    parity: str | None = None

    kind = "a"

    @classmethod
    def odd(cls, n: int) -> ExoticA:
        if n < 1:
            raise ValueError("N >= 1 required")
        return cls(2 - Fraction(2, 2 * n + 1), n, "odd")

    @classmethod
    def even(cls, n: int) -> ExoticA:
        if n < 1:
            raise ValueError("N >= 1 required")
        return cls(2 - Fraction(1, n + 1), n, "even")

    @classmethod
    def from_rho(cls, rho) -> ExoticA:
        rho = Fraction(rho)
        if rho < 2:
            k = 2 / (2 - rho)  # k = 2N+1 (odd) or 2(N+1) (even)
            if k.denominator == 1 and k >= 3:
                k = int(k)
                return cls.odd((k - 1) // 2) if k % 2 else cls.even(k // 2 - 1)
        return cls(rho)


@dataclass(frozen=True, eq=False)
class PencilBilliard:
    """Structure induced by a pencil B - lam A with B the parabola."""

    pencil: Pencil

    kind = "pencil"

    def __post_init__(self):
        if self.pencil.B != PARABOLA:
            raise ValueError("the pencil's B member must be the parabola w t = z^2")


@dataclass(frozen=True, eq=False)
class CustomSpec:
    """A structure given only by its f-function; integrability is not asserted."""

    f: UniRational
    integrability_verified: bool = False

    kind = "custom"


BilliardSpec = Union[CatalogSpec, ExoticA, PencilBilliard, CustomSpec]

B1, B2, C1, C2, D = (CatalogSpec(k) for k in CATALOG_KINDS)

_F_CATALOG = {
    "b1": UniRational([-3, 5], [0, -2, 2]),
    "b2": UniRational([0, 3], [1, 0, 1]),
    "c1": UniRational([0, 0, 4], [-1, 0, 0, 1]),
    "c2": UniRational([-4, 8], [0, -3, 3]),
    "d": UniRational([-4, 7], [0, -3, 3]),
}

_SINGULARITIES = {
    "b1": ([(0, Fraction(3, 2)), (1, Fraction(1))], Fraction(3, 2)),
    "b2": ([(I, Fraction(3, 2)), (-I, Fraction(3, 2))], Fraction(1)),
    "c1": ([(1, Fraction(4, 3)), (OMEGA, Fraction(4, 3)), (OMEGA_BAR, Fraction(4, 3))], Fraction(0)),
    "c2": ([(0, Fraction(4, 3)), (1, Fraction(4, 3))], Fraction(4, 3)),
    "d": ([(0, Fraction(4, 3)), (1, Fraction(1))], Fraction(5, 3)),
}


def singularities(spec: BilliardSpec) -> tuple[list, Scalar]:
    """Stored singular-point data: ([(z, residue)], residue at infinity)."""
    if isinstance(spec, CatalogSpec):
        poles, inf = _SINGULARITIES[spec.kind]
        return [(as_scalar(z), r) for z, r in poles], inf
    if isinstance(spec, ExoticA):
        return [(Fraction(0), spec.rho)], 4 - spec.rho
    rep = residue_report(spec)
    return list(rep.finite_poles), rep.infinity_residue


def f_function(spec: BilliardSpec) -> UniRational:
    if isinstance(spec, PencilBilliard):
        raise PencilSpec("pencil structures come from the pencil involution; use structure_f")
    if isinstance(spec, CatalogSpec):
        return _F_CATALOG[spec.kind]
    if isinstance(spec, ExoticA):
        return UniRational([spec.rho], [0, 1])
    if isinstance(spec, CustomSpec):
        return spec.f
    raise UnknownSpec(f"not a billiard spec: {spec!r}")


def structure_f(spec: BilliardSpec) -> UniRational:
    """f for any spec; for pencils the log-derivative of the contact polynomial."""
    if isinstance(spec, PencilBilliard):
        q = parabola_contact_polynomial(spec.pencil)
        return UniRational(q.derivative(), q)
    return f_function(spec)


def same_structure(a: BilliardSpec, b: BilliardSpec) -> bool:
    return structure_f(a) == structure_f(b)


def _z_of(point: HomPoint) -> Scalar:
    if not point.is_finite():
        raise InfinitePoint("the point at infinity has no u = z - z0 chart")
    z, w = point.affine()
    if w != z * z:
        raise PointNotOnConic(f"{point} is not on w = z^2")
    return z


def sigma_at(spec: BilliardSpec, point: HomPoint) -> MobiusMap:
    """The involution of the tangent line at ``point`` in the chart u = z - z0."""
    if not point.is_finite():
        _, inf = singularities(spec)
        if inf != 0:
            raise InfinitePoint("the structure is singular at the point at infinity")
        raise InfinitePoint("the point at infinity has no u = z - z0 chart")
    z0 = _z_of(point)
    if isinstance(spec, PencilBilliard):
        return pencil_involution(spec.pencil, point)
    f = f_function(spec)
    if f.den(z0) == 0:
        raise SingularPoint(f"z0 = {format_scalar(z0)} is a singular point")
    return MobiusMap(((-1, 0), (f(z0), 1)), Chart("u", z0))


@dataclass(frozen=True)
class ResidueReport:
    finite_poles: tuple
    infinity_residue: Scalar
    total: Scalar

    def configuration(self) -> list:
        """All nonzero residues, sorted (the singularity configuration)."""
        vals = [r for _, r in self.finite_poles]
        if self.infinity_residue != 0:
            vals.append(self.infinity_residue)
        return sorted(vals)

    def to_json(self) -> dict:
        return {
            "poles": {format_scalar(z): format_scalar(r) for z, r in self.finite_poles},
            "infinity": format_scalar(self.infinity_residue),
            "total": format_scalar(self.total),
        }


def _report(poles: list, inf: Scalar) -> ResidueReport:
    poles = sorted(poles, key=lambda zr: root_sort_key(zr[0]))
    total = sum((r for _, r in poles), Fraction(0)) + inf
    return ResidueReport(tuple(poles), inf, total)


def residues_of_f(f: UniRational) -> ResidueReport:
    """Partial-fraction residues at simple poles and 4 - lambda at infinity."""
    f = f.reduced()
    if f.num.is_zero():
        raise HigherOrderPole("f vanishes identically")
    poles = []
    dprime = f.den.derivative()
    for a, mult in roots_with_multiplicity(f.den):
        if mult > 1:
            raise HigherOrderPole(f"pole of order {mult} at z = {format_scalar(a)}")
        poles.append((a, f.num(a) / dprime(a)))
    dn, dd = f.num.degree, f.den.degree
    if dn >= dd:
        raise HigherOrderPole("f does not vanish at infinity")
    lam = f.num.lead() / f.den.lead() if dd == dn + 1 else Fraction(0)
    return _report(poles, 4 - lam)


def residue_report(spec: BilliardSpec) -> ResidueReport:
    if isinstance(spec, PencilBilliard):
        q = parabola_contact_polynomial(spec.pencil)
        poles = [(a, Fraction(k)) for a, k in roots_with_multiplicity(q)]
        return _report(poles, Fraction(4 - q.degree))
    return residues_of_f(f_function(spec))


def _is_positive_integer(x) -> bool:
    return isinstance(x, Fraction) and x.denominator == 1 and x > 0


def pencil_from_contacts(finite: Sequence[tuple], infinity_order: int) -> PencilBilliard:
    """A pencil through the parabola with the given contact orders.

    The member A is chosen with A(z, z^2, 1) = prod (z - a)^k.
    """
    q = UniPoly([1])
    for a, k in finite:
        q = q * UniPoly([-as_scalar(a), 1]) ** int(k)
    if q.degree + infinity_order != 4:
        raise ResidueSumNotFour("contact orders must add up to 4")
    c = q.c + [Fraction(0)] * (5 - len(q.c))
    a = Conic.from_upper(c[2], c[3] / 2, c[1] / 2, c[4], 0, c[0])
    return PencilBilliard(Pencil(a, PARABOLA))


def spec_from_residues(finite: Sequence[tuple], infinity_residue) -> BilliardSpec:
    """The unique structure with the given simple-pole residues.

    Returns a catalog entry when f matches one, a pencil for integer
    configurations, otherwise a CustomSpec carrying the raw f.
    """
    finite = [(as_scalar(a), as_scalar(r)) for a, r in finite]
    infinity_residue = as_scalar(infinity_residue)
    locs = [a for a, _ in finite]
    if len(set(locs)) != len(locs):
        raise DuplicateLocation("two residues given at the same location")
    if any(r == 0 for _, r in finite):
        raise ValueError("finite residues must be nonzero")
    total = sum((r for _, r in finite), Fraction(0)) + infinity_residue
    if total != 4:
        raise ResidueSumNotFour(f"residues add up to {format_scalar(total)}, not 4")
    f = UniRational([0])
    for a, r in finite:
        f = f + UniRational([r], [-a, 1])
    if len(finite) == 1 and finite[0][0] == 0 and isinstance(finite[0][1], Fraction):
        return ExoticA.from_rho(finite[0][1])
    for kind, g in _F_CATALOG.items():
        if f == g:
            return CatalogSpec(kind)
    if all(_is_positive_integer(r) for _, r in finite) and (
        infinity_residue == 0 or _is_positive_integer(infinity_residue)
    ):
        return pencil_from_contacts(finite, int(infinity_residue))
    return CustomSpec(f)


def check_psi_relation() -> bool:
    """Conjugating theta -> -theta by u = theta/(1 + psi theta) gives f = -2 psi.

    Matrix entries depend linearly on psi, so agreement at three values
    proves the identity.
    """
    chart = Chart("u", 0)
    flip = MobiusMap(((-1, 0), (0, 1)), chart)
    for psi in (Fraction(0), Fraction(1), Fraction(-5, 3)):
        to_u = MobiusMap(((1, 0), (psi, 1)), chart)
        if to_u @ flip @ to_u.inverse() != MobiusMap(((-1, 0), (-2 * psi, 1)), chart):
            return False
    return True


# ---------------------------------------------------------------- JSON


def spec_to_json(spec: BilliardSpec) -> dict:
    if isinstance(spec, CatalogSpec):
        return {"kind": spec.kind}
    if isinstance(spec, ExoticA):
        if spec.N is not None:
            return {"kind": "a", "N": spec.N, "parity": spec.parity}
        return {"kind": "a", "rho": format_scalar(spec.rho)}
    if isinstance(spec, PencilBilliard):
        return {"kind": "pencil", "pencil": spec.pencil.to_json()}
    if isinstance(spec, CustomSpec):
        return {
            "kind": "custom",
            "custom_f": {
                "num": [scalar_to_json(c) for c in spec.f.num.c],
                "den": [scalar_to_json(c) for c in spec.f.den.c],
            },
            "integrability_verified": spec.integrability_verified,
        }
    raise UnknownSpec(f"not a billiard spec: {spec!r}")


def spec_from_json(data: dict) -> BilliardSpec:
    kind = data.get("kind")
    if kind in CATALOG_KINDS:
        return CatalogSpec(kind)
    if kind == "a":
        if "rho" in data:
            return ExoticA.from_rho(Fraction(str(data["rho"])))
        n = int(data["N"])
        parity = data.get("parity", "odd")
        if parity == "odd":
            return ExoticA.odd(n)
        if parity == "even":
            return ExoticA.even(n)
        raise UnknownSpec(f"parity must be 'odd' or 'even', got {parity!r}")
    if kind == "pencil" or "pencil" in data:
        return PencilBilliard(Pencil.from_json(data["pencil"]))
    if kind == "custom" or "custom_f" in data:
        cf = data["custom_f"]
        num = UniPoly([scalar_from_json(c) for c in cf["num"]])
        den = UniPoly([scalar_from_json(c) for c in cf["den"]])
        return CustomSpec(UniRational(num, den))
    raise UnknownSpec(f"unknown spec kind {kind!r}")


def catalog_specs() -> list:
    """The exotic catalog with ExoticA for N = 1..5 in both families."""
    out: list = [CatalogSpec(k) for k in CATALOG_KINDS]
    for n in range(1, 6):
        out.append(ExoticA.odd(n))
        out.append(ExoticA.even(n))
    return out
