"""Projective billiards on conics: transversal fields, reflection, flow and integrals.

The catalog fields live on the table x2 = x1^2 in the chart x3 = 1, i.e. the
conic x2 x3 - x1^2 (the same matrix as the parabola w t - z^2).  Integrals
are rational functions of (v1, v2, Delta) with Delta = x1 v2 - x2 v1.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from .conicpencil import PARABOLA, Conic, space_form_transversal
from .dualbilliard import CATALOG_KINDS, BilliardSpec, PencilBilliard, structure_f
from .errors import (
    DegenerateFrame,
    MixedField,
    NoCatalogPsi,
    NoHit,
    NotRepresentable,
    PointNotOnConic,
    SingularFieldPoint,
    SingularHit,
    UnknownSpec,
)
from .exactnum import (
    APPROX_EPS,
    as_scalar,
    format_scalar,
    precision_bits,
    scalar_to_json,
    sign,
    sqrt_exact,
    to_approx,
)
from .integrals import HomRational, c_coefficient, catalog_integral, classpqr_integral
from .polynomial import Poly
from .projcore import INFINITY, HomPoint
from .quasihomog import classify_rho

TABLE = PARABOLA
V1, V2, DL = Poly.gens(3)
PSI_NAMES = ("v1", "v2", "D")


# ---------------------------------------------------------------- fields


@dataclass(frozen=True)
class FieldA:
    rho: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rho", Fraction(self.rho))


@dataclass(frozen=True)
class CatalogField:
    kind: str

    def __post_init__(self):
        if self.kind not in CATALOG_KINDS:
            raise UnknownSpec(f"unknown catalog field {self.kind!r}")


@dataclass(frozen=True, eq=False)
class SpaceFormField:
    """Space form metric A on an arbitrary regular table; Psi needs a pencil pair."""

    a_matrix: tuple
    table: Conic
    psi_pair: tuple | None = None  # two 3x3 symmetric matrices acting on the moment vector


@dataclass(frozen=True, eq=False)
class PencilDualField:
    """The field dual to a dual billiard structure on the parabola."""

    spec: BilliardSpec


TransversalField = Union[FieldA, CatalogField, SpaceFormField, PencilDualField]


def field_table(f: TransversalField) -> Conic:
    return f.table if isinstance(f, SpaceFormField) else TABLE


def _affine(q) -> tuple:
    if isinstance(q, HomPoint):
        if not q.is_finite():
            raise SingularFieldPoint("the point at infinity of the table")
        return q.affine()
    return tuple(q)


def _catalog_direction(kind: str, x1, x2) -> tuple:
    if kind == "b1":
        return (5 * x1 + 3, 2 * (x2 - x1))
    if kind == "b2":
        return (3 * x1, 2 * x2 - 4)
    if kind == "c1":
        return (x2, x1 * x2 - 1)
    if kind == "c2":
        return (2 * x1 + 1, x2 - x1)
    return (7 * x1 + 4, 2 * x2 - 4 * x1)


def tangent_direction(table: Conic, x) -> tuple:
    """Direction of the table's tangent at the affine point x."""
    a, b, _ = (sum(table.matrix[i][j] * v for j, v in enumerate((x[0], x[1], 1))) for i in range(3))
    return (b, -a)


def _on_table(table: Conic, x) -> bool:
    val = table.form((x[0], x[1], 1))
    if _is_approx(val):
        return abs(val) < APPROX_EPS
    return val == 0


def field_at(f: TransversalField, q) -> tuple:
    """Direction of the transversal line at the table point q."""
    x1, x2 = _affine(q)
    table = field_table(f)
    if not _on_table(table, (x1, x2)):
        raise PointNotOnConic(f"({x1}, {x2}) is not on the table")
    if isinstance(f, FieldA):
        d = (f.rho, 2 * (f.rho - 2) * x1)
    elif isinstance(f, CatalogField):
        d = _catalog_direction(f.kind, x1, x2)
    elif isinstance(f, SpaceFormField):
        line = space_form_transversal(f.a_matrix, table, HomPoint(x1, x2, 1))
        d = line.direction()
    elif isinstance(f, PencilDualField):
        fn = structure_f(f.spec)
        den = fn.den(-x1)
        if den == 0:
            raise SingularFieldPoint("the dual point is a singular point of the structure")
        val = fn.num(-x1) / den
        d = (val, 4 + 2 * x1 * val)
    else:
        raise UnknownSpec(f"not a transversal field: {f!r}")
    t = tangent_direction(table, (x1, x2))
    cr = d[0] * t[1] - d[1] * t[0]
    if (abs(cr) < APPROX_EPS) if _is_approx(cr) else cr == 0:
        raise SingularFieldPoint("the field is tangent to the table (or vanishes) here")
    return d


def _is_approx(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


# ---------------------------------------------------------------- reflection


def reflect(q, tangent_dir: Sequence, transversal_dir: Sequence, v: Sequence) -> tuple:
    """v = a tangent + b transversal  ->  a tangent - b transversal."""
    t1, t2, n1, n2, v1, v2 = (
        x if _is_approx(x) else as_scalar(x) for x in (*tangent_dir, *transversal_dir, *v)
    )
    det = t1 * n2 - t2 * n1
    if (abs(det) < APPROX_EPS) if _is_approx(det) else det == 0:
        raise DegenerateFrame("tangent and transversal directions are parallel")
    a = (v1 * n2 - v2 * n1) / det
    b = (t1 * v2 - t2 * v1) / det
    return (a * t1 - b * n1, a * t2 - b * n2)


def moment(x: Sequence, v: Sequence) -> tuple:
    """(-v2, v1, Delta), Delta = x1 v2 - x2 v1."""
    return (-v[1], v[0], x[0] * v[1] - x[1] * v[0])


# ---------------------------------------------------------------- flow


@dataclass(frozen=True)
class FlowState:
    position: tuple
    velocity: tuple

    def __post_init__(self):
        def conv(p):
            return tuple(x if _is_approx(x) else as_scalar(x) for x in p)

        object.__setattr__(self, "position", conv(self.position))
        object.__setattr__(self, "velocity", conv(self.velocity))
        if all(x == 0 for x in self.velocity):
            raise ValueError("velocity must be nonzero")

    @property
    def approx(self) -> bool:
        return any(_is_approx(x) for x in self.position + self.velocity)

    def to_approx(self) -> FlowState:
        return FlowState(tuple(to_approx(x) for x in self.position), tuple(to_approx(x) for x in self.velocity))


def _hit_parameter_exact(a0, a1, a2, on_boundary: bool):
    if a2 == 0:
        if a1 == 0:
            return None
        roots = [-a0 / a1]
    else:
        disc = a1 * a1 - 4 * a2 * a0
        if sign(disc) < 0:
            return None
        if disc == 0:
            s = -a1 / (2 * a2)
            if s > 0 or on_boundary:
                raise SingularHit("the ray is tangent to the table")
            return None
        root = sqrt_exact(disc)
        roots = [(-a1 + root) / (2 * a2), (-a1 - root) / (2 * a2)]
    pos = [s for s in roots if sign(s) > 0]
    return min(pos) if pos else None


def _hit_parameter_approx(a0, a1, a2, on_boundary: bool):
    eps = APPROX_EPS
    if abs(a2) < eps:
        if abs(a1) < eps:
            return None
        roots = [-a0 / a1]
    else:
        disc = a1 * a1 - 4 * a2 * a0
        if disc < -eps:
            return None
        if abs(disc) <= eps:
            raise SingularHit("the ray is tangent to the table")
        root = mpmath.sqrt(disc)
        roots = [(-a1 + root) / (2 * a2), (-a1 - root) / (2 * a2)]
    pos = [s for s in roots if s > eps * 10 ** 6]
    return min(pos) if pos else None


def _advance(table: Conic, fld: TransversalField, s: FlowState) -> FlowState:
    x, v = s.position, s.velocity
    p = (x[0], x[1], 1)
    d = (v[0], v[1], 0)
    a0, a1, a2 = table.form(p), 2 * table.form(p, d), table.form(d)
    on_boundary = _on_table(table, x)
    if s.approx:
        t = _hit_parameter_approx(a0, a1, a2, on_boundary)
    else:
        t = _hit_parameter_exact(a0, a1, a2, on_boundary)
    if t is None:
        if not on_boundary:
            raise NoHit("the ray does not meet the table")
        hit = x  # no forward hit from a boundary point: the state is incoming here
    else:
        hit = (x[0] + t * v[0], x[1] + t * v[1])
    try:
        n = field_at(fld, hit)
    except SingularFieldPoint as exc:
        raise SingularHit(str(exc)) from exc
    return FlowState(hit, reflect(hit, tangent_direction(table, hit), n, v))


def flow_step(table: Conic, fld: TransversalField, s: FlowState) -> FlowState:
    """Fly to the first boundary hit and reflect there."""
    return _advance(table, fld, s)


# ---------------------------------------------------------------- integrals


@dataclass(frozen=True, eq=False)
class Psi:
    """A 0-homogeneous rational function of (v1, v2, Delta)."""

    r: HomRational

    def pair(self, x: Sequence, v: Sequence) -> tuple:
        m = (v[0], v[1], x[0] * v[1] - x[1] * v[0])
        return self.r.evaluate_pair(m)

    def __call__(self, x: Sequence, v: Sequence):
        n, d = self.pair(x, v)
        if d == 0:
            if n == 0:
                raise ZeroDivisionError("indeterminate value 0/0")
            return INFINITY
        return n / d

    def __str__(self):
        return self.r.to_str()


def pairs_equal(a: tuple, b: tuple) -> bool:
    if all(x == 0 for x in a) or all(x == 0 for x in b):
        return False
    lhs, rhs = a[0] * b[1], a[1] * b[0]
    if _is_approx(lhs) or _is_approx(rhs):
        scale = max(abs(lhs), abs(rhs), mpmath.mpf(1) * 10 ** -50)
        return abs(lhs - rhs) <= mpmath.mpf("1e-25") * scale
    return lhs == rhs


Q_DUAL = V1 * DL * 4 - V2 * V2  # image of w t - z^2


def _dual_prime(c) -> Poly:
    return V1 * DL * 4 - V2 * V2 * c


def _psi_a(rho: Fraction) -> HomRational:
    info = classify_rho(rho)
    if not info.in_M:
        raise NoCatalogPsi(f"no catalog integral for the field A({rho})")
    if rho.denominator == 1:
        return integral_from_dual(classpqr_integral(rho))
    m = abs(info.m)
    cs = [c_coefficient(j, m) for j in range(1, (m - 1) // 2 + 1)]
    if m % 2:
        outer = [(V1, 2)] if rho < 2 else [(DL, 2)]
        return HomRational(((Q_DUAL, m),), tuple(outer + [(_dual_prime(c), 2) for c in cs]), names=PSI_NAMES)
    outer = [(V1, 1), (V2, 1)] if rho < 2 else [(V2, 1), (DL, 1)]
    return HomRational(((Q_DUAL, m // 2),), tuple(outer + [(_dual_prime(c), 1) for c in cs]), names=PSI_NAMES)


def _psi_catalog_table() -> dict:
    return {
        "b1": HomRational(
            ((Q_DUAL, 2),),
            ((V1 * DL * 4 + V2 * V2 * 3, 1), (V1 * 2 + V2, 1), (DL * 2 + V2, 1)),
            names=PSI_NAMES,
        ),
        "b2": HomRational(
            ((Q_DUAL, 2),),
            ((V2 * V2 + DL * DL * 4 + V1 * DL * 4 + V1 * V1 * 4, 1), (V2 * V2 + V1 * V1 * 4, 1)),
            names=PSI_NAMES,
        ),
        "c1": HomRational(((Q_DUAL, 3),), ((V1 ** 3 + DL ** 3 + V1 * V2 * DL, 2),), names=PSI_NAMES),
        "c2": HomRational(
            ((Q_DUAL, 3),),
            (
                (
                    V2 ** 3 + V2 * V2 * V1 * 2 + (V1 * V1 + V2 * V2 * 2 + V1 * V2 * 5) * DL + V1 * DL * DL,
                    2,
                ),
            ),
            names=PSI_NAMES,
        ),
        "d": HomRational(
            ((Q_DUAL, 3),),
            (
                (V1 * DL + V2 * V2 * 2, 1),
                (V1 * 2 + V2, 1),
                (
                    V1 * V2 * V2 * 8
                    + V2 ** 3 * 2
                    + (V1 * V1 * 4 + V2 * V2 * 5 + V1 * V2 * 28) * DL
                    + V1 * DL * DL * 16,
                    1,
                ),
            ),
            names=PSI_NAMES,
        ),
    }


_PSI = _psi_catalog_table()


def _quadratic_form(m) -> Poly:
    # the forms act on the moment vector (-v2, v1, Delta)
    mv = (-V2, V1, DL)
    out = Poly({}, 3)
    for i in range(3):
        for j in range(3):
            c = as_scalar(m[i][j])
            if c != 0:
                out = out + mv[i] * mv[j] * c
    return out


def psi_catalog(f: TransversalField) -> Psi:
    if isinstance(f, FieldA):
        return Psi(_psi_a(f.rho))
    if isinstance(f, CatalogField):
        return Psi(_PSI[f.kind])
    if isinstance(f, SpaceFormField):
        if f.psi_pair is None:
            raise NoCatalogPsi("space form fields need a chosen pair of quadratic forms")
        a, b = f.psi_pair
        return Psi(HomRational.ratio(_quadratic_form(a), _quadratic_form(b), PSI_NAMES))
    if isinstance(f, PencilDualField):
        if not isinstance(f.spec, PencilBilliard):
            raise NoCatalogPsi("only pencil structures have a quadratic Psi")
        return Psi(integral_from_dual(catalog_integral(f.spec)))
    raise NoCatalogPsi(f"no Psi for {f!r}")


DUAL_SUBSTITUTION = ((0, 1, 0), (0, 0, -2), (-2, 0, 0))  # (z, w, t) -> (v2, -2 Delta, -2 v1)


def integral_from_dual(r: HomRational) -> HomRational:
    """R(v2, -2 Delta, -2 v1) as a function of (v1, v2, Delta)."""
    out = r.linear_substitute(DUAL_SUBSTITUTION)
    return HomRational(out.num_factors, out.den_factors, out.const, PSI_NAMES)


def dual_constant(r: HomRational, psi: Psi):
    """c with psi = c * integral_from_dual(r), or None when they are not proportional."""
    return psi.r.ratio_to(integral_from_dual(r))


def quadratic_first_integral(rho) -> Poly:
    """rho x2 - (rho - 2) x1^2 in (x1, x2)."""
    rho = Fraction(rho)
    x1, x2 = Poly.gens(2)
    return x2 * rho - x1 * x1 * (rho - 2)


def field_a_annihilates(rho, point) -> bool:
    """The 2a field direction kills dQ at an arbitrary point of the plane."""
    rho = Fraction(rho)
    qf = quadratic_first_integral(rho)
    x1 = as_scalar(point[0])
    return qf.diff(0)(point) * rho + qf.diff(1)(point) * 2 * (rho - 2) * x1 == 0


# ---------------------------------------------------------------- simulation


@dataclass
class Bounce:
    step: int
    position: tuple
    v_in: tuple
    v_out: tuple
    psi_before: tuple | None
    psi_after: tuple | None


@dataclass
class Trajectory:
    start: FlowState
    bounces: list = field(default_factory=list)
    psi_start: tuple | None = None
    demoted: bool = False

    def psi_values(self) -> list:
        out = []
        for b in self.bounces:
            out.extend([b.psi_before, b.psi_after])
        return out

    def psi_conserved(self) -> bool:
        vals = [p for p in self.psi_values() if p is not None]
        if self.psi_start is not None:
            vals.insert(0, self.psi_start)
        return bool(vals) and all(pairs_equal(vals[0], p) for p in vals[1:])

    def _rows(self):
        yield 0, self.start.position, self.start.velocity, self.psi_start
        for b in self.bounces:
            yield b.step, b.position, b.v_out, b.psi_after

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        exact = not self.demoted
        w.writerow(["step", "x1", "x2", "v1", "v2"] + (["psi_num", "psi_den"] if exact else ["psi"]))
        for step, x, v, psi in self._rows():
            cells = [step] + [_fmt(c) for c in x + v]
            if exact:
                cells += ["", ""] if psi is None else [_fmt(psi[0]), _fmt(psi[1])]
            else:
                cells.append("" if psi is None else _fmt_psi_approx(psi))
            w.writerow(cells)
        return buf.getvalue()

    def to_json(self) -> dict:
        def enc(c):
            return mpmath.nstr(c, 40) if _is_approx(c) else scalar_to_json(c)

        def enc_psi(p):
            if p is None:
                return None
            if p[1] == 0:
                return "inf"
            return {"num": enc(p[0]), "den": enc(p[1])}

        return {
            "schema": "1",
            "demoted": self.demoted,
            "start": {"x": [enc(c) for c in self.start.position], "v": [enc(c) for c in self.start.velocity]},
            "psi_start": enc_psi(self.psi_start),
            "bounces": [
                {
                    "step": b.step,
                    "x": [enc(c) for c in b.position],
                    "v_in": [enc(c) for c in b.v_in],
                    "v_out": [enc(c) for c in b.v_out],
                    "psi_before": enc_psi(b.psi_before),
                    "psi_after": enc_psi(b.psi_after),
                }
                for b in self.bounces
            ],
            "psi_conserved": self.psi_conserved(),
        }

    def to_svg(self, size: int = 400) -> str:
        pts = [tuple(float(to_approx(c)) for c in self.start.position)]
        pts += [tuple(float(to_approx(c)) for c in b.position) for b in self.bounces]
        xs = [p[0] for p in pts]
        lo, hi = min(xs + [-1.0]) - 0.5, max(xs + [1.0]) + 0.5
        ys = [p[1] for p in pts] + [lo * lo, hi * hi]
        ylo, yhi = min(ys + [0.0]) - 0.5, max(ys) + 0.5

        def tx(x, y):
            return (x - lo) / (hi - lo) * size, size - (y - ylo) / (yhi - ylo) * size

        table = [tx(lo + (hi - lo) * k / 200, (lo + (hi - lo) * k / 200) ** 2) for k in range(201)]
        path = [tx(*p) for p in pts]

        def poly(points, style):
            coords = " ".join(f"{a:.3f},{b:.3f}" for a, b in points)
            return f'<polyline points="{coords}" {style}/>'

        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">\n'
            + poly(table, 'fill="none" stroke="black"')
            + "\n"
            + poly(path, 'fill="none" stroke="red"')
            + "\n</svg>\n"
        )


def _fmt(c) -> str:
    return mpmath.nstr(c, 30) if _is_approx(c) else format_scalar(c)


def _fmt_psi_approx(p) -> str:
    if p[1] == 0:
        return "inf"
    return mpmath.nstr(p[0] / p[1], 30)


def _psi_or_none(psi: Psi | None, x, v):
    if psi is None:
        return None
    return psi.pair(x, v)


def simulate(table: Conic, fld: TransversalField, s0: FlowState, steps: int, approx: bool = False) -> Trajectory:
    """``steps`` flow steps, with Psi recorded before and after each reflection."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    try:
        psi = psi_catalog(fld)
    except NoCatalogPsi:
        psi = None
    state = s0.to_approx() if approx else s0
    traj = Trajectory(s0, demoted=approx)
    with mpmath.workprec(precision_bits()):
        if approx:
            state = s0.to_approx()
        traj.psi_start = _psi_or_none(psi, state.position, state.velocity)
        for k in range(1, steps + 1):
            try:
                nxt = flow_step(table, fld, state)
            except (NotRepresentable, MixedField):
                warnings.warn("boundary hit left the working quadratic field; continuing in approximate arithmetic")
                traj.demoted = True
                state = state.to_approx()
                nxt = flow_step(table, fld, state)
            v_in = state.velocity
            traj.bounces.append(
                Bounce(
                    k,
                    nxt.position,
                    v_in,
                    nxt.velocity,
                    _psi_or_none(psi, nxt.position, v_in),
                    _psi_or_none(psi, nxt.position, nxt.velocity),
                )
            )
            state = nxt
    return traj


def trajectory_json(traj: Trajectory) -> str:
    return json.dumps(traj.to_json(), sort_keys=True, indent=2)


def field_to_json(f: TransversalField) -> dict:
    if isinstance(f, FieldA):
        return {"field": "a", "rho": format_scalar(f.rho)}
    if isinstance(f, CatalogField):
        return {"field": f.kind}
    if isinstance(f, PencilDualField):
        return {"field": "pencil_dual"}
    return {"field": "space_form"}

