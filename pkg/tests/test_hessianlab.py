from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from dualbill import dualbilliard as db
from dualbill import hessianlab as hl
from dualbill.errors import SampleOffCurve
from dualbill.polynomial import Poly

Z, W = Poly.gens(2)
ts = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def test_hessian_examples():
    assert hl.hessian_poly(W - Z * Z) == Poly.const(-2, 2)
    assert hl.hessian_poly((W - Z * Z) * 3) == Poly.const(-54, 2)


@pytest.mark.parametrize("p, q", [(2, 1), (3, 2), (5, 3), (4, 1)])
def test_hessian_of_binomial(p, q):
    expected = (
        W ** max(q - 2, 0) * Z ** (2 * (p - 1)) * (q * (q - 1) * p * p)
        - Z ** max(p - 2, 0) * W ** (2 * q - 2) * (p * (p - 1) * q * q)
    )
    assert hl.hessian_poly(W ** q - Z ** p) == expected


@given(st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(bool))
def test_hessian_is_cubic_in_scaling(a):
    g = W * W * Z + Z ** 4 - W
    assert hl.hessian_poly(g * a) == hl.hessian_poly(g) * a ** 3


def test_hess3_examples():
    samples = [(t, t * t) for t in (Fraction(1, 2), 2, 3)]
    assert hl.hess3_check(W - Z * Z, W, samples)
    for t, _ in samples:
        assert hl.hessian_poly((W - Z * Z) * W)((t, t * t)) == -2 * Fraction(t) ** 6
    assert hl.hess3_check(W - Z * Z, Poly.const(1, 2), samples)
    cusp = [(Fraction(t) ** 2, Fraction(t) ** 3) for t in (1, 2, Fraction(-1, 3))]
    assert hl.hess3_check(W * W - Z ** 3, Z + 1, cusp)
    with pytest.raises(SampleOffCurve):
        hl.hess3_check(W - Z * Z, W, [(1, 2)])


@given(ts, st.integers(0, 3), st.integers(0, 3), ts)
def test_hess3_property(t, a, b, c):
    g = Z ** a * W ** b + Poly.const(c, 2)
    assert hl.hess3_check(W - Z * Z, g, [(t, t * t)])


def test_hessian_on_curve_regular():
    res = hl.hessian_on_curve(hl.FactoredG(2, 1))
    assert res.d == 0 and res.c == -2
    assert hl.residue_from_hessian(res) == 0


def test_hessian_on_curve_fractional_exponents():
    res = hl.hessian_on_curve(hl.FactoredG(2, 1, primes=((-8, Fraction(-2, 3)),)))
    assert res.d == -4 and res.path == "numeric"
    assert abs(res.d_fit - (-4)) < mpmath.mpf("1e-18")
    assert hl.residue_from_hessian(res) == Fraction(4, 3)
    res = hl.hessian_on_curve(hl.FactoredG(2, 1, alpha=Fraction(-1, 2), primes=((-3, Fraction(-1, 2)),)))
    assert res.d == Fraction(-9, 2)
    assert hl.residue_from_hessian(res) == Fraction(3, 2)


@given(st.integers(0, 2), st.integers(0, 2), st.sampled_from([-8, -3, 5, Fraction(1, 2)]), st.integers(0, 2))
def test_integer_exponents_match_closed_form(alpha, beta, c, mu):
    g = hl.FactoredG(2, 1, alpha, beta, ((c, mu),))
    res = hl.hessian_on_curve(g)
    assert res.path == "exact"
    assert res.d == 3 * (2 * g.N + alpha + 2 * beta - 2)  # r = 2, rho0 = 2


@pytest.mark.parametrize(
    "spec, residue",
    [(db.B1, Fraction(3, 2)), (db.C2, Fraction(4, 3)), (db.D, Fraction(4, 3)), (db.ExoticA.odd(2), Fraction(8, 5))],
    ids=["b1", "c2", "d", "a_odd2"],
)
def test_origin_germ_residue(spec, residue):
    res = hl.hessian_on_curve(hl.germ_at_origin(spec))
    assert hl.residue_from_hessian(res) == residue
    assert dict(db.residue_report(spec).finite_poles)[0] == residue


@pytest.mark.parametrize("spec", [db.B1, db.C2, db.D, db.ExoticA.odd(1)], ids=["b1", "c2", "d", "a_odd1"])
def test_ode_along_parabola(spec):
    rep = hl.ode_check(spec)
    assert rep.passed
    assert len(rep.rows) == 16


def test_weighted_and_literal_constants_differ_when_mu_is_not_one():
    res = hl.hessian_on_curve(hl.FactoredG(2, 1, primes=((-8, 2),)))
    assert res.c == -2 * 9 ** 6
    assert res.c_literal == -2 * 9 ** 3
    assert res.mismatch
