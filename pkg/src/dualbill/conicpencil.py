"""Conics as symmetric matrices, line intersections, pencils and their involutions.

A point of a line L is written P + s*D where P is a chosen point of L and D
is a second point (for tangent lines of affine points: the point at infinity
of L, scaled to first nonzero coordinate 1).  For the parabola w t = z^2 and
P = (z0, z0^2, 1) this makes s exactly u = z - z0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    BasePoint,
    DegenerateMember,
    LineOnConic,
    NotRepresentable,
    PointNotOnConic,
    PointOnConic,
    SingularA,
    SingularConic,
    SingularPoint,
)
from .exactnum import Scalar, as_scalar, field_of, scalar_from_json, scalar_to_json, sqrt_exact
from .polynomial import Poly, UniPoly, roots_with_multiplicity
from .projcore import (
    INFINITY,
    Chart,
    HomPoint,
    MobiusMap,
    ProjLine,
    cross,
    dot,
    from_pair,
    mobius_from_three_pairs,
    proportional,
)


def _matvec(m, v) -> tuple:
    return tuple(dot(row, v) for row in m)


def det3(m) -> Scalar:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def adjugate3(m) -> tuple:
    """Transpose of the cofactor matrix, so m * adj(m) = det(m) * I."""
    cols = (cross(m[1], m[2]), cross(m[2], m[0]), cross(m[0], m[1]))
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))


def inverse3(m) -> tuple:
    d = det3(m)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    adj = adjugate3(m)
    return tuple(tuple(x / d for x in row) for row in adj)


@dataclass(frozen=True, eq=False)
class Conic:
    """{x : <M x, x> = 0} for a symmetric 3x3 matrix M."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(as_scalar(x) for x in row) for row in self.matrix)
        if any(m[i][j] != m[j][i] for i in range(3) for j in range(3)):
            raise ValueError("conic matrix must be symmetric")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_upper(cls, m00, m01, m02, m11, m12, m22) -> Conic:
        return cls(((m00, m01, m02), (m01, m11, m12), (m02, m12, m22)))

    @classmethod
    def from_poly(cls, q: Poly) -> Conic:
        """Matrix of a homogeneous quadratic form in (z, w, t)."""
        if q.degree() != 2 or not q.is_homogeneous():
            raise ValueError("a homogeneous quadratic form is required")
        m = [[Fraction(0)] * 3 for _ in range(3)]
        for e, c in q.terms.items():
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = c / 2
        return cls(tuple(tuple(r) for r in m))

    def upper(self) -> tuple:
        m = self.matrix
        return (m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2])

    def form(self, x: Sequence, y: Sequence | None = None) -> Scalar:
        y = x if y is None else y
        return dot(_matvec(self.matrix, x), y)

    def __call__(self, p) -> Scalar:
        return self.form(tuple(p))

    def contains(self, p: HomPoint) -> bool:
        return self.form(p.coords) == 0

    def det(self) -> Scalar:
        return det3(self.matrix)

    def is_regular(self) -> bool:
        return self.det() != 0

    def dual(self) -> Conic:
        """Adjugate conic: tangent lines of self are its points."""
        return Conic(adjugate3(self.matrix))

    def as_poly(self) -> Poly:
        z, w, t = Poly.gens()
        g = (z, w, t)
        out = Poly({})
        for i in range(3):
            for j in range(3):
                out = out + g[i] * g[j] * self.matrix[i][j]
        return out

    def combine(self, other: Conic, lam) -> Conic:
        """self - lam * other."""
        lam = as_scalar(lam)
        return Conic(tuple(
            tuple(a - lam * b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.matrix, other.matrix)
        ))

    def __eq__(self, other):
        if not isinstance(other, Conic):
            return NotImplemented
        return proportional(self.upper(), other.upper())

    def __hash__(self):
        return hash(("conic", _normalize_first(self.upper())))

    def to_json(self) -> list:
        return [scalar_to_json(x) for x in self.upper()]

    @classmethod
    def from_json(cls, data) -> Conic:
        return cls.from_upper(*(scalar_from_json(x) for x in data))


PARABOLA = Conic.from_upper(-1, 0, 0, 0, Fraction(1, 2), 0)  # w t - z^2


def parabola_point(z0) -> HomPoint:
    z0 = as_scalar(z0)
    return HomPoint(z0, z0 * z0, 1)


def tangent_line(c: Conic, p: HomPoint) -> ProjLine:
    if not c.contains(p):
        raise PointNotOnConic(f"{p} does not lie on the conic")
    cov = _matvec(c.matrix, p.coords)
    if all(x == 0 for x in cov):
        raise SingularPoint(f"the conic is singular at {p}")
    return ProjLine(cov)


def _normalize_first(v: Sequence) -> tuple:
    lead = next(x for x in v if x != 0)
    return tuple(x / lead for x in v)


def line_frame(line: ProjLine, base: HomPoint | None = None) -> tuple:
    """(P, D) with P on the line (``base`` if given) and D a second point."""
    cov = line.coords
    if base is None:
        for e in ((0, 0, 1), (1, 0, 0), (0, 1, 0)):
            c = cross(cov, e)
            if any(x != 0 for x in c):
                base = HomPoint(c)
                break
    if not line.contains(base):
        raise PointNotOnConic("frame base point is not on the line")
    p = base.coords
    if p[2] != 0:
        p = tuple(x / p[2] for x in p)
    for e in ((0, 0, 1), (1, 0, 0), (0, 1, 0)):
        d = cross(cov, e)
        if any(x != 0 for x in d) and not proportional(d, p):
            return p, _normalize_first(d)
    raise ValueError("could not build a frame on the line")


def restricted_quadratic(c: Conic, p: Sequence, d: Sequence) -> tuple:
    """Coefficients (a0, a1, a2) of s -> <M(P + sD), P + sD>."""
    return c.form(p), 2 * c.form(p, d), c.form(d)


def _quadratic_params(coeffs: tuple, field: int | None = None) -> list:
    """Roots of a0 + a1 s + a2 s^2 as projective pairs (s : 1) or (1 : 0)."""
    a0, a1, a2 = coeffs
    if a2 == 0:
        if a1 == 0:
            raise LineOnConic("the line lies on the conic")
        return [(-a0 / a1, Fraction(1)), INFINITY]
    disc = a1 * a1 - 4 * a0 * a2
    if disc == 0:
        r = (-a1 / (2 * a2), Fraction(1))
        return [r, r]
    root = sqrt_exact(disc, field if field is not None else field_of(a0, a1, a2))
    return [((-a1 + root) / (2 * a2), Fraction(1)), ((-a1 - root) / (2 * a2), Fraction(1))]


def _point_at(p, d, pair) -> HomPoint:
    s, w = pair
    return HomPoint(tuple(w * pi + s * di for pi, di in zip(p, d)))


def line_conic_points(c: Conic, line: ProjLine) -> tuple[HomPoint, HomPoint]:
    """The two (possibly equal, possibly conjugate) intersection points."""
    p, d = line_frame(line)
    coeffs = restricted_quadratic(c, p, d)
    if all(x == 0 for x in coeffs):
        raise LineOnConic("the line lies on the conic")
    if coeffs[2] == 0 and coeffs[1] == 0:
        # only the point D itself (doubled) lies on c
        return HomPoint(d), HomPoint(d)
    pairs = _quadratic_params(coeffs)
    return _point_at(p, d, pairs[0]), _point_at(p, d, pairs[1])


@dataclass(frozen=True, eq=False)
class Pencil:
    """The conics B - lam A."""

    A: Conic
    B: Conic
    base_points: tuple = field(default=())

    def __post_init__(self):
        if self.A == self.B:
            raise ValueError("pencil generators must not be proportional")
        for bp in self.base_points:
            if not (self.A.contains(bp) and self.B.contains(bp)):
                raise ValueError(f"{bp} is not a base point")

    def member(self, lam) -> Conic:
        return self.B.combine(self.A, lam)

    def to_json(self) -> dict:
        out = {"A": self.A.to_json(), "B": self.B.to_json()}
        if self.base_points:
            out["base_points"] = [bp.to_json() for bp in self.base_points]
        return out

    @classmethod
    def from_json(cls, data: dict) -> Pencil:
        bps = tuple(HomPoint.from_json(b) for b in data.get("base_points", ()))
        return cls(Conic.from_json(data["A"]), Conic.from_json(data["B"]), bps)


def parabola_contact_polynomial(p: Pencil) -> UniPoly:
    """q(z) = A(z, z^2, 1); its roots are the base points on the parabola B.

    The multiplicity of a root is the contact order there; 4 - deg q is the
    contact order at the point at infinity of the parabola.
    """
    if p.B != PARABOLA:
        raise ValueError("the pencil must contain the parabola w t = z^2 as B")
    m = p.A.matrix
    return UniPoly([
        m[2][2],
        2 * m[0][2],
        m[0][0] + 2 * m[1][2],
        2 * m[0][1],
        m[1][1],
    ])


def pencil_base_points(p: Pencil) -> list[tuple[HomPoint, int]]:
    """Base points with contact orders, for pencils through the parabola."""
    q = parabola_contact_polynomial(p)
    out = [(parabola_point(r), k) for r, k in roots_with_multiplicity(q)]
    if q.degree < 4:
        out.append((HomPoint(0, 1, 0), 4 - q.degree))
    return out


def _lambda_with_rational_split(p: Pencil, pt, d, skip=()) -> list:
    """Pencil parameters whose member meets the line in two s-values of the base field.

    With a = B(D) - lam A(D), b = -2 lam A(P,D), c = -lam A(P) the
    discriminant is lam (lam K + B(D) A(P)), K = A(P,D)^2 - A(D) A(P); the
    choice lam = B(D) A(P) / (k^2 - K) makes it the square (lam k)^2.
    """
    ap, apd, ad = p.A.form(pt), p.A.form(pt, d), p.A.form(d)
    bd = p.B.form(d)
    kk = apd * apd - ad * ap
    out = []
    for k in range(1, 12):
        if k * k == kk:
            continue
        lam = bd * ap / (k * k - kk)
        if lam != 0 and lam not in skip:
            out.append(lam)
    out.extend(x for x in (Fraction(1), Fraction(2), Fraction(-1)) if x not in out and x not in skip)
    return out


def pencil_involution(p: Pencil, point: HomPoint) -> MobiusMap:
    """sigma_P on the tangent line of B at P, in the chart s (P + s D).

    Built from one member by three pairs (P fixed, the two intersection
    points swapped), then checked against a different member.
    """
    line = tangent_line(p.B, point)
    if p.A.contains(point):
        raise BasePoint(f"{point} is a base point of the pencil")
    pt, d = line_frame(line, point)
    chart = Chart("u", pt[0])
    sigma = None
    used = None
    for lam in _lambda_with_rational_split(p, pt, d):
        coeffs = restricted_quadratic(p.member(lam), pt, d)
        if coeffs[0] == 0:
            continue
        try:
            r1, r2 = _quadratic_params(coeffs)
        except (LineOnConic, NotRepresentable):
            continue
        if r1[0] * r2[1] == r1[1] * r2[0]:
            continue  # member tangent to the line
        sigma = mobius_from_three_pairs(
            [(0, 0), (from_pair(r1), from_pair(r2)), (from_pair(r2), from_pair(r1))], chart
        )
        used = lam
        break
    if sigma is None:
        raise DegenerateMember("no pencil member splits on the tangent line")
    sigma = MobiusMap(sigma.normalized(), chart)
    _check_member(sigma, p, pt, d, used)
    return sigma


def _binary_pullback(coeffs: tuple, m) -> tuple:
    """Coefficients of Q(a s + b w, c s + d w) for Q = a0 w^2 + a1 s w + a2 s^2."""
    a0, a1, a2 = coeffs
    (a, b), (c, d) = m
    # s-part and w-part of the two images
    return (
        a0 * d * d + a1 * b * d + a2 * b * b,
        2 * a0 * c * d + a1 * (a * d + b * c) + 2 * a2 * a * b,
        a0 * c * c + a1 * a * c + a2 * a * a,
    )


def _check_member(sigma: MobiusMap, p: Pencil, pt, d, used) -> None:
    """sigma must preserve the restricted quadratic of another member up to a factor."""
    for lam in (Fraction(1), Fraction(3), Fraction(-2)):
        if lam == used:
            continue
        coeffs = restricted_quadratic(p.member(lam), pt, d)
        if all(x == 0 for x in coeffs):
            continue
        if not proportional(_binary_pullback(coeffs, sigma.matrix), coeffs):
            raise DegenerateMember("pencil involution failed validation on a second member")
        return


def tangents_from_point(c: Conic, q: HomPoint) -> tuple[ProjLine, ProjLine]:
    """The two lines through Q tangent to C (conjugate when not real)."""
    if not c.is_regular():
        raise SingularConic("tangents are computed for regular conics only")
    if c.contains(q):
        raise PointOnConic(f"{q} lies on the conic")
    dual = c.dual()
    l1, l2 = None, None
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        cand = cross(q.coords, e)
        if any(x != 0 for x in cand):
            if l1 is None:
                l1 = cand
            elif not proportional(cand, l1):
                l2 = cand
                break
    coeffs = restricted_quadratic(dual, l1, l2)
    pairs = _quadratic_params(coeffs)
    lines = []
    for s, w in pairs:
        lines.append(ProjLine(tuple(w * a + s * b for a, b in zip(l1, l2))))
    return lines[0], lines[1]


def tangency_discriminant(c: Conic, line: ProjLine) -> Scalar:
    p, d = line_frame(line)
    a0, a1, a2 = restricted_quadratic(c, p, d)
    return a1 * a1 - 4 * a0 * a2


EUCLIDEAN_FORM = ((1, 0, 0), (0, 1, 0), (0, 0, 0))


def space_form_transversal(a_matrix, c: Conic, q: HomPoint) -> ProjLine:
    """Transversal line at Q for the space form given by A.

    Nondegenerate A: the line through Q and m = A^-1 (r x tau), with r the
    lift of Q and tau the point at infinity of the tangent line.  A =
    diag(1,1,0): the Euclidean normal in the chart x3 = 1.
    """
    a_matrix = tuple(tuple(as_scalar(x) for x in row) for row in a_matrix)
    tan = tangent_line(c, q)
    r = q.coords
    tau = cross(tan.coords, (0, 0, 1))
    if det3(a_matrix) == 0:
        if a_matrix != tuple(tuple(Fraction(x) for x in row) for row in EUCLIDEAN_FORM):
            raise SingularA("degenerate forms other than diag(1,1,0) are not supported")
        normal_dir = (-tau[1], tau[0], Fraction(0))
        return ProjLine(cross(r, normal_dir))
    m = _matvec(inverse3(a_matrix), cross(r, tau))
    if proportional(m, r):
        raise SingularA("A^-1 (r x tau) is proportional to r; the transversal is undefined")
    return ProjLine(cross(r, m))


def caustic_reflection_check(transversal: ProjLine, s: Conic, q: HomPoint, table: Conic) -> bool:
    """Whether reflection at Q (fixing the table tangent, negating the
    transversal) swaps the two tangent lines from Q to S."""
    from .projbilliard import reflect  # projbilliard builds on this module

    tan = tangent_line(table, q)
    if proportional(tan.coords, transversal.coords):
        raise ValueError("tangent and transversal lines coincide")
    l1, l2 = tangents_from_point(s, q)
    d1 = l1.direction()
    d2 = l2.direction()
    image = reflect(q.affine(), tan.direction(), transversal.direction(), d1)
    return image[0] * d2[1] == image[1] * d2[0]
