from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from dualbill import dualbilliard as db
from dualbill import integrals as ig
from dualbill import projbilliard as pb
from dualbill.conicpencil import EUCLIDEAN_FORM, Conic
from dualbill.errors import NoCatalogPsi, NoHit, PointNotOnConic, SingularHit
from dualbill.exactnum import is_rational
from dualbill.projcore import INFINITY

coords = st.fractions(min_value=-12, max_value=12, max_denominator=12)
A43 = pb.FieldA(Fraction(4, 3))
ELLIPSE = Conic.from_upper(Fraction(1, 4), 0, 0, 1, 0, -1)  # x^2/4 + y^2 = 1


def test_field_examples():
    assert pb.field_at(A43, (1, 1)) == (Fraction(4, 3), Fraction(-4, 3))
    assert pb.field_at(pb.CatalogField("c1"), (1, 1)) == (1, 0)
    assert pb.field_at(pb.CatalogField("b2"), (1, 1)) == (3, -2)
    with pytest.raises(PointNotOnConic):
        pb.field_at(A43, (1, 2))


def test_reflect_examples():
    assert pb.reflect((1, 1), (1, 2), (1, -1), (3, 0)) == (-1, 4)
    assert pb.reflect((1, 1), (1, 2), (1, -1), (1, 2)) == (1, 2)
    assert pb.reflect((1, 1), (1, 2), (1, -1), (1, -1)) == (-1, 1)


@given(coords, coords)
def test_reflection_is_involution(a, b):
    assume(a or b)
    v = (a, b)
    once = pb.reflect((1, 1), (1, 2), (1, -1), v)
    assert pb.reflect((1, 1), (1, 2), (1, -1), once) == v


def test_moment_examples():
    assert pb.moment((1, 2), (3, 4)) == (-4, 3, -2)
    assert pb.moment((1, 2), (2, 4)) == (-4, 2, 0)


@given(coords, coords, coords, coords, coords)
def test_moment_constant_along_flight(x1, x2, v1, v2, t):
    x = (x1, x2)
    v = (v1, v2)
    moved = (x1 + t * v1, x2 + t * v2)
    assert pb.moment(moved, v) == pb.moment(x, v)


def test_flow_step_examples():
    s = pb.flow_step(pb.TABLE, pb.CatalogField("c1"), pb.FlowState((0, 2), (0, -1)))
    assert s.position == (0, 0) and s.velocity == (0, 1)
    s = pb.flow_step(pb.TABLE, A43, pb.FlowState((1, 1), (3, 0)))
    assert s.position == (1, 1) and s.velocity == (-1, 4)


def test_singular_field_point_is_reported():
    # A(rho) is tangent to the table at the vertex
    with pytest.raises(SingularHit):
        pb.flow_step(pb.TABLE, A43, pb.FlowState((0, 2), (0, -1)))


def test_ray_missing_the_table():
    with pytest.raises(NoHit):
        pb.flow_step(pb.TABLE, A43, pb.FlowState((3, 0), (1, 0)))


def test_psi_examples():
    c1 = pb.psi_catalog(pb.CatalogField("c1"))
    assert c1((1, 1), (3, 0)) == INFINITY
    psi = pb.psi_catalog(A43)
    assert psi((1, 1), (3, 0)) == -4
    assert psi((1, 1), (-1, 4)) == -4


def test_dual_substitution_of_R2():
    got = pb.integral_from_dual(ig.classpqr_integral(2))
    expected = ig.HomRational.ratio(pb.Q_DUAL, pb.V1 * pb.DL * 4, pb.PSI_NAMES)
    assert got == expected


@pytest.mark.parametrize(
    "spec, field, constant",
    [
        (db.C1, pb.CatalogField("c1"), 64),
        (db.ExoticA.even(1), pb.FieldA(Fraction(3, 2)), -2),
        (db.ExoticA.odd(1), A43, 4),
        (db.D, pb.CatalogField("d"), -8),
        (db.B1, pb.CatalogField("b1"), 1),
    ],
    ids=["c1", "a_even1", "a_odd1", "d", "b1"],
)
def test_dual_constants(spec, field, constant):
    assert pb.dual_constant(ig.catalog_integral(spec), pb.psi_catalog(field)) == constant


@pytest.mark.parametrize("rho", [Fraction(8, 3), Fraction(5, 2), Fraction(12, 5), 0, 4])
def test_field_a_psi_is_dual_to_classpqr(rho):
    psi = pb.psi_catalog(pb.FieldA(rho))
    assert pb.dual_constant(ig.classpqr_integral(rho), psi) is not None


@given(st.sampled_from([Fraction(4, 3), Fraction(3, 2), Fraction(8, 3), Fraction(5, 2)]), coords, coords)
def test_field_a_kills_quadratic_integral(rho, x1, x2):
    assert pb.field_a_annihilates(rho, (x1, x2))


@pytest.mark.parametrize(
    "field, start",
    [
        (A43, pb.FlowState((1, 1), (3, 0))),
        (pb.CatalogField("c1"), pb.FlowState((2, 4), (-1, 0))),
        (pb.CatalogField("d"), pb.FlowState((2, 4), (-1, 0))),
        (pb.CatalogField("b1"), pb.FlowState((Fraction(1, 2), Fraction(1, 4)), (1, 3))),
    ],
    ids=["a43", "c1", "d", "b1"],
)
def test_exact_simulation_conserves_psi(field, start):
    traj = pb.simulate(pb.TABLE, field, start, 10)
    assert not traj.demoted
    assert len(traj.bounces) == 10
    assert traj.psi_conserved()
    for b in traj.bounces:
        assert all(is_rational(x) for x in b.position + b.v_out)


def test_approx_simulation_conserves_psi():
    traj = pb.simulate(pb.TABLE, pb.CatalogField("c1"), pb.FlowState((2, 4), (-1, 0)), 10, approx=True)
    assert len(traj.psi_values()) == 20
    assert traj.psi_conserved()


def test_confocal_integral_on_ellipse():
    # foci at (+-sqrt 3, 0): (Delta^2 - 3 v2^2) / (v1^2 + v2^2)
    num = ((-3, 0, 0), (0, 0, 0), (0, 0, 1))  # forms act on M = (-v2, v1, Delta)
    den = ((1, 0, 0), (0, 1, 0), (0, 0, 0))
    fld = pb.SpaceFormField(EUCLIDEAN_FORM, ELLIPSE, (num, den))
    traj = pb.simulate(ELLIPSE, fld, pb.FlowState((Fraction(6, 5), Fraction(4, 5)), (-1, Fraction(-1, 3))), 8)
    assert traj.psi_conserved()
    with pytest.raises(NoCatalogPsi):
        pb.psi_catalog(pb.SpaceFormField(EUCLIDEAN_FORM, ELLIPSE))


def test_trajectory_exports():
    traj = pb.simulate(pb.TABLE, A43, pb.FlowState((1, 1), (3, 0)), 3)
    data = json.loads(pb.trajectory_json(traj))
    assert data["schema"] == "1"
    rows = list(csv.DictReader(io.StringIO(traj.to_csv())))
    assert [r["step"] for r in rows] == ["0", "1", "2", "3"]
    assert {Fraction(r["psi_num"]) / Fraction(r["psi_den"]) for r in rows} == {-4}
    svg = traj.to_svg()
    assert svg.startswith("<svg") and "polyline" in svg
    assert pb.trajectory_json(traj) == pb.trajectory_json(pb.simulate(pb.TABLE, A43, pb.FlowState((1, 1), (3, 0)), 3))
