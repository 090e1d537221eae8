from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualbill import quasihomog as qh
from dualbill.errors import AmbiguousCase, NotPrimitive, RelationViolated, RhoInteger, ZeroPoly
from dualbill.polynomial import Poly, UniPoly
from dualbill.projcore import INFINITY, eta

Z, W = Poly.gens(2)


def qhp(poly, p=2, q=1):
    return qh.QHPoly(poly, p, q)


def test_lower_part_examples():
    assert qh.lower_part(W - Z * Z + Z ** 3, 2, 1) == qhp(W - Z * Z)
    assert qh.lower_part(W * W - Z ** 3 + Z ** 4, 3, 2) == qhp(W * W - Z ** 3, 3, 2)
    assert qh.lower_part((W - Z * Z) ** 2 + Z ** 5, 2, 1) == qhp((W - Z * Z) ** 2)
    with pytest.raises(ZeroPoly):
        qh.lower_part(Poly({}, 2), 2, 1)


def test_restriction_R_examples():
    x = UniPoly.x()
    assert qh.restriction_R(2, 1, -3) == 3 * x * x + 2 * x - 1
    assert qh.restriction_R(2, 1, -8) == 8 * x * x + 2 * x - 1
    assert qh.restriction_R(2, 1, 1) == -((x - 1) ** 2)


@given(st.fractions(min_value=-50, max_value=50, max_denominator=20))
def test_restriction_matches_substitution(c):
    member = qhp(W - Z * Z * c)
    assert qh.restrict_to_L(member) == qh.restriction_R(2, 1, c)


def test_root_divisor_examples():
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    assert qh.root_divisor(qhp(Z * W)).counter() == {0: 1, half: 1}
    assert qh.root_divisor(qhp(W - Z * Z)).counter() == {1: 2}
    assert qh.root_divisor(qhp(W * (W + Z * Z * 8))).counter() == {half: 1, quarter: 1, -half: 1}


def test_quasi_invariance_examples():
    assert qh.is_eta_quasi_invariant(qhp(W - Z * Z), Fraction(7, 5))
    assert qh.is_eta_quasi_invariant(qhp(W * (W + Z * Z * 8)), Fraction(8, 3))
    assert not qh.is_eta_quasi_invariant(qhp(Z * W), 1)


def test_classify_examples():
    assert qh.classify_rho(Fraction(4, 3)) == qh.RhoClass(True, -3)
    assert qh.classify_rho(Fraction(13, 6)) == qh.RhoClass(True, 12)
    assert not qh.classify_rho(Fraction(5, 7)).in_M
    for r in range(5):
        assert qh.classify_rho(r).in_M


@given(st.fractions(min_value=-8, max_value=8, max_denominator=30))
def test_classifiers_agree(rho):
    assert qh.classify_rho(rho) == qh.classify_rho_by_orbit(rho)


def test_primitive_examples():
    p = qh.build_primitive(Fraction(8, 3))
    assert p.c == (-8,)
    assert p.poly == qhp(W * (W + Z * Z * 8))
    assert set(p.orbit) == {Fraction(1, 2), Fraction(1, 4), Fraction(-1, 2)}
    p = qh.build_primitive(Fraction(3, 2))
    assert p.m == -4 and p.c == (-3,)
    assert p.poly == qhp(Z * (W + Z * Z * 3))
    p = qh.build_primitive(Fraction(8, 5))
    assert p.c == (Fraction(-16, 9), -24)


def test_primitive_errors():
    with pytest.raises(RhoInteger):
        qh.build_primitive(3)
    with pytest.raises(NotPrimitive):
        qh.build_primitive(Fraction(5, 7))


@given(st.integers(3, 30), st.sampled_from([1, -1]))
def test_primitives_are_quasi_invariant(k, sgn):
    rho = 2 + sgn * Fraction(2, k)
    prim = qh.build_primitive(rho)
    assert qh.is_eta_quasi_invariant(prim.poly, rho)
    # the emitted orbit is exactly the finite part of the root divisor
    chi = qh.root_divisor(prim.poly).counter()
    assert sorted(prim.orbit) == sorted(x for x in chi if x != INFINITY)
    assert len(prim.orbit) == (k if sgn > 0 else k - 1)
    e = eta(rho)
    assert all(e.apply(x) in chi or e.apply(x) == INFINITY for x in prim.orbit)


@given(st.integers(3, 20), st.sampled_from([1, -1]))
def test_factor_roundtrip(k, sgn):
    prim = qh.build_primitive(2 + sgn * Fraction(2, k))
    fac = qh.factor_qh(prim.poly)
    rebuilt = qh.qh_from_factors(2, 1, fac.alpha, fac.beta, [c for c, _ in fac.primes], fac.lead)
    assert rebuilt == prim.poly
    assert sorted(c for c, _ in fac.primes) == sorted(prim.c)


PAIRS = [
    (Fraction(2), W - Z * Z, W, 1, 1, 3),
    (Fraction(4, 3), W - Z * Z, W + Z * Z * 8, 3, 2, 3),
    (Fraction(3, 2), W - Z * Z, Z * (W + Z * Z * 3), 2, 1, 3),
    (Fraction(8, 3), W - Z * Z, W * (W + Z * Z * 8), 3, 2, 1),
    (Fraction(5, 2), W - Z * Z, Z * W * (W + Z * Z * 3), 2, 1, 1),
]


@pytest.mark.parametrize("rho, p1, p2, m1, m2, case", PAIRS, ids=[str(p[0]) for p in PAIRS])
def test_formula_crosscheck(rho, p1, p2, m1, m2, case):
    rep = qh.formula_crosscheck(qhp(p1), qhp(p2), m1, m2, rho)
    assert rep.case == case
    assert rep.first_ok and rep.second_ok


def test_crosscheck_rejects_wrong_exponents():
    with pytest.raises(RelationViolated):
        qh.formula_crosscheck(qhp(W - Z * Z), qhp(W + Z * Z * 8), 1, 1, Fraction(4, 3))


def test_crosscheck_ambiguity():
    # rho = 2 puts theta at 1/2 = theta_r, the root of the w factor of the first polynomial
    with pytest.raises(AmbiguousCase):
        qh.formula_crosscheck(qhp(W * (W - Z * Z)), qhp(Z), 1, 1, 2)


def test_projective_lift():
    lifted = qh.as_projective(qhp(W * (W + Z * Z * 8)))
    z, w, t = Poly.gens(3)
    assert lifted == w * (w * t + z * z * 8)
