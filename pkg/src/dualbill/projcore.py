"""Projective points and lines, orthogonal polarity, and Moebius maps in charts.

Values of a chart coordinate are exact scalars or the projective pair
``INFINITY = (1, 0)``; internally every map acts on pairs (x : y).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ChartMismatch, CoincidentPoints, DegeneratePairs, ZeroInput
from .exactnum import Scalar, as_scalar, format_scalar, scalar_from_json, scalar_to_json

INFINITY = (Fraction(1), Fraction(0))

ChartValue = Union[Scalar, tuple]


def cross(a: Sequence, b: Sequence) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _canonical(coords: tuple) -> tuple:
    for c in coords:
        if c != 0:
            return tuple(x / c for x in coords)
    raise ZeroInput("all homogeneous coordinates vanish")


def proportional(a: Sequence, b: Sequence) -> bool:
    """a and b are nonzero multiples of each other (any length)."""
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return any(x != 0 for x in a) and any(x != 0 for x in b)


class _Projective:
    __slots__ = ("coords", "_key")

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("three homogeneous coordinates expected")
        self.coords = tuple(as_scalar(c) for c in coords)
        self._key = _canonical(self.coords)

    def canonical(self) -> tuple:
        return self._key

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash((type(self).__name__, self._key))

    def to_json(self) -> list:
        return [scalar_to_json(c) for c in self.coords]

    @classmethod
    def from_json(cls, data):
        return cls(*(scalar_from_json(c) for c in data))

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(format_scalar(c) for c in self.coords)})"


class HomPoint(_Projective):
    """Point [x1 : x2 : x3] of the projective plane."""

    def affine(self) -> tuple:
        """(x1/x3, x2/x3); raises for points at infinity."""
        if self.coords[2] == 0:
            raise ZeroDivisionError("point at infinity has no affine chart value")
        return self.coords[0] / self.coords[2], self.coords[1] / self.coords[2]

    def is_finite(self) -> bool:
        return self.coords[2] != 0


class ProjLine(_Projective):
    """Line {x : <covector, x> = 0}."""

    def contains(self, p: HomPoint) -> bool:
        return dot(self.coords, p.coords) == 0

    def direction(self) -> tuple:
        """Affine direction (b, -a) of a finite line a x1 + b x2 + c = 0."""
        a, b, _ = self.coords
        return b, -a


def polar_dual(x: HomPoint | ProjLine) -> ProjLine | HomPoint:
    if isinstance(x, HomPoint):
        return ProjLine(x.coords)
    if isinstance(x, ProjLine):
        return HomPoint(x.coords)
    raise TypeError("expected a HomPoint or a ProjLine")


def line_through(p: HomPoint, q: HomPoint) -> ProjLine:
    c = cross(p.coords, q.coords)
    if all(x == 0 for x in c):
        raise CoincidentPoints("the two points coincide")
    return ProjLine(c)


def meet(l1: ProjLine, l2: ProjLine) -> HomPoint:
    c = cross(l1.coords, l2.coords)
    if all(x == 0 for x in c):
        raise CoincidentPoints("the two lines coincide")
    return HomPoint(c)


# ---------------------------------------------------------------- charts


CHART_KINDS = ("zeta", "u", "y")


@dataclass(frozen=True)
class Chart:
    """An affine coordinate on a line, as a Moebius function of the line's z.

    zeta = z / base,  u = z - base,  y = base / (z - base)  (= 1/(zeta - 1)).
    With base = 1 these are zeta, zeta - 1 and 1/(zeta - 1).
    """

    kind: str
    base: Scalar = Fraction(1)

    def __post_init__(self):
        if self.kind not in CHART_KINDS:
            raise ChartMismatch(f"unknown chart {self.kind!r}")
        if self.base == 0 and self.kind != "u":
            raise ChartMismatch("zeta and y charts need a nonzero base point")

    def from_z(self) -> tuple:
        b = self.base
        one, zero = Fraction(1), Fraction(0)
        if self.kind == "zeta":
            return ((one, zero), (zero, b))
        if self.kind == "u":
            return ((one, -b), (zero, one))
        return ((zero, b), (one, -b))


def _mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_adj(a):
    # adjugate = inverse up to the determinant, enough in PGL2
    return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))


def _det(a):
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def as_pair(v: ChartValue) -> tuple:
    if isinstance(v, tuple):
        if len(v) != 2 or (v[0] == 0 and v[1] == 0):
            raise ZeroInput("projective pair must be nonzero")
        return v
    return (as_scalar(v), Fraction(1))


def from_pair(p: tuple) -> ChartValue:
    if p[1] == 0:
        return INFINITY
    return p[0] / p[1]


def pair_equal(a: tuple, b: tuple) -> bool:
    return a[0] * b[1] == a[1] * b[0]


@dataclass(frozen=True, eq=False)
class MobiusMap:
    """x -> (a x + b)/(c x + d) in the given chart; compared up to scale."""

    matrix: tuple
    chart: Chart = Chart("zeta")

    def __post_init__(self):
        m = tuple(tuple(as_scalar(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if _det(m) == 0:
            raise ValueError("Moebius matrix must be invertible")

    def apply_pair(self, p: tuple) -> tuple:
        (a, b), (c, d) = self.matrix
        return (a * p[0] + b * p[1], c * p[0] + d * p[1])

    def apply(self, v: ChartValue) -> ChartValue:
        return from_pair(self.apply_pair(as_pair(v)))

    __call__ = apply

    def compose(self, other: MobiusMap) -> MobiusMap:
        """self after other."""
        if other.chart != self.chart:
            raise ChartMismatch("maps live in different charts")
        return MobiusMap(_mat_mul(self.matrix, other.matrix), self.chart)

    def __matmul__(self, other: MobiusMap) -> MobiusMap:
        return self.compose(other)

    def inverse(self) -> MobiusMap:
        return MobiusMap(_mat_adj(self.matrix), self.chart)

    def is_identity(self) -> bool:
        (a, b), (c, d) = self.matrix
        return b == 0 and c == 0 and a == d

    def is_involution(self) -> bool:
        """m^2 is scalar while m itself is not."""
        sq = _mat_mul(self.matrix, self.matrix)
        return sq[0][1] == 0 and sq[1][0] == 0 and sq[0][0] == sq[1][1] and not self.is_identity()

    def normalized(self) -> tuple:
        """Matrix scaled so its first nonzero entry is 1."""
        flat = [x for row in self.matrix for x in row]
        lead = next(x for x in flat if x != 0)
        return tuple(tuple(x / lead for x in row) for row in self.matrix)

    def __eq__(self, other):
        if not isinstance(other, MobiusMap):
            return NotImplemented
        flat_a = [x for row in self.matrix for x in row]
        flat_b = [x for row in other.matrix for x in row]
        return self.chart == other.chart and proportional(flat_a, flat_b)

    def __hash__(self):
        return hash((self.normalized(), self.chart))

    def to_json(self) -> dict:
        return {
            "matrix": [[scalar_to_json(x) for x in row] for row in self.matrix],
            "chart": self.chart.kind,
            "base": scalar_to_json(self.chart.base),
        }

    def __repr__(self):
        rows = "; ".join(", ".join(format_scalar(x) for x in row) for row in self.matrix)
        return f"MobiusMap([{rows}], {self.chart.kind}@{format_scalar(self.chart.base)})"


def eta(rho) -> MobiusMap:
    """zeta -> ((rho-1) zeta - (rho-2)) / (rho zeta - (rho-1))."""
    rho = as_scalar(rho)
    return MobiusMap(((rho - 1, -(rho - 2)), (rho, -(rho - 1))), Chart("zeta"))


def theta(rho) -> Scalar:
    """eta(rho)(infinity) = (rho - 1)/rho; infinity for rho = 0."""
    return eta(rho).apply(INFINITY)


def _to_normal_form(points: Sequence[tuple]):
    """Matrix sending the three pairs to 0, infinity, 1."""
    p1, p2, p3 = points
    k1 = p3[0] * p2[1] - p3[1] * p2[0]
    k2 = p3[0] * p1[1] - p3[1] * p1[0]
    m = ((k1 * p1[1], -k1 * p1[0]), (k2 * p2[1], -k2 * p2[0]))
    if _det(m) == 0:
        raise DegeneratePairs("the three values are not pairwise distinct")
    return m


def mobius_from_three_pairs(pairs: Sequence[tuple], chart: Chart = Chart("zeta")) -> MobiusMap:
    """The Moebius map sending each source to its target."""
    if len(pairs) != 3:
        raise DegeneratePairs("exactly three pairs are required")
    src = [as_pair(s) for s, _ in pairs]
    dst = [as_pair(t) for _, t in pairs]
    a = _to_normal_form(src)
    b = _to_normal_form(dst)
    return MobiusMap(_mat_mul(_mat_adj(b), a), chart)


def chart_transport(m: MobiusMap, from_chart: Chart, to_chart: Chart) -> MobiusMap:
    """Rewrite ``m`` (acting in from_chart) as a map in to_chart."""
    if m.chart != from_chart:
        raise ChartMismatch(f"map lives in {m.chart}, not {from_chart}")
    if not isinstance(to_chart, Chart):
        raise ChartMismatch(f"unknown target chart {to_chart!r}")
    c_from = from_chart.from_z()
    c_to = to_chart.from_z()
    change = _mat_mul(c_to, _mat_adj(c_from))
    out = _mat_mul(_mat_mul(change, m.matrix), _mat_adj(change))
    return MobiusMap(out, to_chart)
