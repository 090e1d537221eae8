from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from dualbill.conicpencil import (
    EUCLIDEAN_FORM,
    PARABOLA,
    Conic,
    Pencil,
    caustic_reflection_check,
    line_conic_points,
    parabola_point,
    pencil_base_points,
    pencil_involution,
    space_form_transversal,
    tangency_discriminant,
    tangent_line,
    tangents_from_point,
)
from dualbill.errors import BasePoint, PointNotOnConic, PointOnConic
from dualbill.projcore import Chart, HomPoint, MobiusMap, ProjLine, cross, dot

UNIT_CIRCLE = Conic.from_upper(1, 0, 0, 1, 0, -1)
MINKOWSKI = ((1, 0, 0), (0, 1, 0), (0, 0, -1))
z0s = st.fractions(min_value=-20, max_value=20, max_denominator=15)


def test_tangent_line_examples():
    assert tangent_line(PARABOLA, parabola_point(1)) == ProjLine(-2, 1, 1)
    z0 = Fraction(5, 3)
    assert tangent_line(PARABOLA, parabola_point(z0)) == ProjLine(-2 * z0, 1, z0 * z0)
    assert tangent_line(UNIT_CIRCLE, HomPoint(1, 0, 1)) == ProjLine(1, 0, -1)
    with pytest.raises(PointNotOnConic):
        tangent_line(PARABOLA, HomPoint(1, 2, 1))


@pytest.mark.parametrize(
    "c, expected",
    [(-8, {Fraction(1, 4), Fraction(-1, 2)}), (-3, {Fraction(-1), Fraction(1, 3)})],
)
@pytest.mark.parametrize("z0", [Fraction(2), Fraction(-3, 7)])
def test_member_meets_tangent_at_orbit_points(c, expected, z0):
    member = Conic.from_upper(-c, 0, 0, 0, Fraction(1, 2), 0)  # w t - c z^2
    pts = line_conic_points(member, tangent_line(PARABOLA, parabola_point(z0)))
    assert {p.affine()[0] / z0 for p in pts} == expected


def test_circle_meets_axis():
    pts = line_conic_points(UNIT_CIRCLE, ProjLine(0, 1, 0))
    assert {p.affine() for p in pts} == {(1, 0), (-1, 0)}


def test_pencil_involution_is_reflection_at_origin():
    circle_like = Conic.from_upper(1, 0, 0, 1, 0, -1)  # z^2 + w^2 = t^2
    pencil = Pencil(circle_like, PARABOLA)
    sigma = pencil_involution(pencil, HomPoint(0, 0, 1))
    assert sigma == MobiusMap(((-1, 0), (0, 1)), Chart("u", 0))
    assert sigma.is_involution()


def test_pencil_involution_refuses_base_points():
    # w t - 4 z^2 + 3 t^2 meets the parabola where z^2 = 1
    pencil = Pencil(Conic.from_upper(-4, 0, 0, 0, Fraction(1, 2), 3), PARABOLA)
    (bp, _), *_ = pencil_base_points(pencil)
    assert bp.affine()[1] == 1
    with pytest.raises(BasePoint):
        pencil_involution(pencil, bp)


def test_tangents_from_point_examples():
    l1, l2 = tangents_from_point(UNIT_CIRCLE, HomPoint(2, 0, 1))
    for line in (l1, l2):
        assert line.contains(HomPoint(2, 0, 1))
        assert tangency_discriminant(UNIT_CIRCLE, line) == 0
    # complex tangents from the centre come back over an imaginary field
    for line in tangents_from_point(UNIT_CIRCLE, HomPoint(0, 0, 1)):
        assert tangency_discriminant(UNIT_CIRCLE, line) == 0
    lines = set(tangents_from_point(PARABOLA, HomPoint(0, -1, 1)))
    assert lines == {ProjLine(-2, 1, 1), ProjLine(2, 1, 1)}
    with pytest.raises(PointOnConic):
        tangents_from_point(PARABOLA, HomPoint(1, 1, 1))


def test_minkowski_transversal_on_circle_is_radial():
    circle = Conic.from_upper(1, 0, 0, 1, 0, -4)
    q = HomPoint(Fraction(6, 5), Fraction(8, 5), 1)
    n = space_form_transversal(MINKOWSKI, circle, q)
    assert n.contains(q) and n.contains(HomPoint(0, 0, 1))


def test_minkowski_transversal_on_parabola_is_orthogonal():
    q = HomPoint(1, 1, 1)
    tau = (1, 2, 0)
    n = space_form_transversal(MINKOWSKI, PARABOLA, q)
    rt = cross(q.coords, tau)
    m = (rt[0], rt[1], -rt[2])  # A is its own inverse
    a_m = rt
    assert n.contains(q) and n.contains(HomPoint(m))
    assert dot(a_m, q.coords) == 0
    assert dot(a_m, tau) == 0


def test_euclidean_form_gives_normal():
    n = space_form_transversal(EUCLIDEAN_FORM, PARABOLA, HomPoint(1, 1, 1))
    d = n.direction()
    assert d[0] * 1 + d[1] * 2 == 0  # orthogonal to the tangent (1, 2)


@given(z0s)
def test_minkowski_caustic(z0):
    circle = Conic.from_upper(1, 0, 0, 1, 0, -4)
    # rational points on the circle of radius 2
    q = HomPoint(2 * (1 - z0 * z0), 4 * z0, 1 + z0 * z0)
    n = space_form_transversal(MINKOWSKI, circle, q)
    absolute = Conic.from_upper(1, 0, 0, 1, 0, -1)
    assert caustic_reflection_check(n, absolute, q, circle)


@given(z0s)
def test_confocal_caustic_for_euclidean_ellipse(s):
    ellipse = Conic.from_upper(Fraction(1, 4), 0, 0, 1, 0, -1)
    q = HomPoint(2 * (1 - s * s), 2 * s, 1 + s * s)
    assume(q.affine()[1] != 0 and q.affine()[0] != 0)
    n = space_form_transversal(EUCLIDEAN_FORM, ellipse, q)
    confocal = Conic.from_upper(Fraction(2, 7), 0, 0, 2, 0, -1)
    assert caustic_reflection_check(n, confocal, q, ellipse)


def test_perturbed_transversal_is_not_caustic():
    ellipse = Conic.from_upper(Fraction(1, 4), 0, 0, 1, 0, -1)
    q = HomPoint(Fraction(6, 5), Fraction(4, 5), 1)
    n = space_form_transversal(EUCLIDEAN_FORM, ellipse, q)
    confocal = Conic.from_upper(Fraction(2, 7), 0, 0, 2, 0, -1)
    off = ProjLine(n.coords[0] + Fraction(1, 10), n.coords[1], n.coords[2] - Fraction(6, 50))
    assert off.contains(q)
    assert not caustic_reflection_check(off, confocal, q, ellipse)
