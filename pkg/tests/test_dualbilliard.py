from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import assume, given, strategies as st

from dualbill import dualbilliard as db
from dualbill.conicpencil import PARABOLA, Conic, Pencil, parabola_point, pencil_involution
from dualbill.errors import (
    DuplicateLocation,
    InfinitePoint,
    PointNotOnConic,
    ResidueSumNotFour,
    UnknownSpec,
)
from dualbill.polynomial import UniRational
from dualbill.projcore import HomPoint

GOLDEN = Path(__file__).parent / "golden"
z0s = st.fractions(min_value=-30, max_value=30, max_denominator=25)

GOLDEN_SPECS = {
    "b1": db.B1,
    "b2": db.B2,
    "c1": db.C1,
    "c2": db.C2,
    "d": db.D,
    "a_odd1": db.ExoticA.odd(1),
    "a_even1": db.ExoticA.even(1),
    "a_8_3": db.ExoticA(Fraction(8, 3)),
}


def test_f_function_examples():
    assert db.f_function(db.B1) == UniRational([-3, 5], [0, -2, 2])
    assert db.f_function(db.D) == UniRational([-4, 7], [0, -3, 3])
    assert db.f_function(db.C1)(2) == Fraction(16, 7)


def test_sigma_examples():
    p = parabola_point(2)
    assert db.sigma_at(db.B1, p).apply(4) == Fraction(-1, 2)
    assert db.sigma_at(db.C1, p).apply(7) == Fraction(-7, 17)


@pytest.mark.parametrize("spec", list(GOLDEN_SPECS.values()), ids=list(GOLDEN_SPECS))
@given(z0=z0s)
def test_sigma_is_involution_fixing_the_tangency_point(spec, z0):
    f = db.structure_f(spec)
    assume(f.den(z0) != 0 and z0 != 0)
    sigma = db.sigma_at(spec, parabola_point(z0))
    assert sigma.apply(0) == 0
    assert sigma.is_involution()


def test_sigma_rejects_bad_points():
    with pytest.raises(PointNotOnConic):
        db.sigma_at(db.B1, HomPoint(1, 2, 1))
    with pytest.raises(InfinitePoint):
        db.sigma_at(db.B1, HomPoint(0, 1, 0))


@pytest.mark.parametrize("name", sorted(GOLDEN_SPECS))
def test_residue_report_matches_golden(name):
    got = json.dumps(db.residue_report(GOLDEN_SPECS[name]).to_json(), sort_keys=True, indent=2) + "\n"
    assert got == (GOLDEN / f"residues_{name}.json").read_text()


@given(st.fractions(min_value=-6, max_value=6, max_denominator=30))
def test_exotic_residues_sum_to_four(rho):
    assume(rho != 0)
    rep = db.residue_report(db.ExoticA(rho))
    assert rep.total == 4
    assert rep.infinity_residue == 4 - rho


def test_spec_from_residues_examples():
    assert db.spec_from_residues([(0, Fraction(3, 2)), (1, 1)], Fraction(3, 2)) == db.B1
    assert db.spec_from_residues([(0, Fraction(4, 3)), (1, 1)], Fraction(5, 3)) == db.D
    assert db.spec_from_residues([(0, 2)], 2) == db.ExoticA(Fraction(2))


def test_spec_from_residues_errors():
    with pytest.raises(ResidueSumNotFour):
        db.spec_from_residues([(0, 1)], 1)
    with pytest.raises(DuplicateLocation):
        db.spec_from_residues([(0, 1), (0, 2)], 1)


def test_integer_residues_give_a_pencil():
    spec = db.spec_from_residues([(0, 1), (1, 1), (-1, 1)], 1)
    assert isinstance(spec, db.PencilBilliard)
    assert db.residue_report(spec).configuration() == [1, 1, 1, 1]


def test_pencil_structure_matches_pencil_involution():
    pencil = Pencil(Conic.from_upper(-4, 0, 0, 0, Fraction(1, 2), 3), PARABOLA)
    spec = db.PencilBilliard(pencil)
    for z0 in (Fraction(1, 2), Fraction(3), Fraction(-5, 4)):
        assert db.sigma_at(spec, parabola_point(z0)) == pencil_involution(pencil, parabola_point(z0))


def test_psi_relation():
    assert db.check_psi_relation()


def test_spec_json_roundtrip():
    for spec in db.catalog_specs():
        assert db.same_structure(db.spec_from_json(db.spec_to_json(spec)), spec)
    with pytest.raises(UnknownSpec):
        db.spec_from_json({"kind": "zz"})


def test_catalog_contains_all_kinds():
    kinds = [s.kind for s in db.catalog_specs()]
    for k in db.CATALOG_KINDS:
        assert k in kinds
