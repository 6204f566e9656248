from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from f1an import monoids as mo
from f1an.errors import InvalidElement, InvalidRadii, NotBounded, Unsupported
from f1an.numeric import NormValue

HALF = Fraction(1, 2)


def test_norm_examples():
    assert mo.GeometricMonoid("N", HALF).norm_of(3) == Fraction(1, 8)
    Z = mo.GeometricMonoid.two_radius("Z", Fraction(1, 4), HALF)
    assert Z.norm_of(-2) == 16
    q = mo.GeometricMonoid("Q", HALF).norm_of(HALF)
    assert q == NormValue.of(2) ** Fraction(-1, 2)
    assert abs(float(q) - 0.707107) < 1e-6


def test_basepoint_and_weight():
    M = mo.GeometricMonoid("N", HALF)
    assert M.norm_of(0) == 0
    assert M.weight(0) == 1


def test_carrier_membership():
    with pytest.raises(InvalidElement):
        mo.GeometricMonoid("N", HALF).norm_of(-1)
    with pytest.raises(InvalidElement):
        mo.GeometricMonoid("Z", HALF).norm_of(HALF)
    assert mo.GeometricMonoid("Z", HALF, denominator=2).contains(Fraction(3, 2))
    Zp = mo.GeometricMonoid("Q", HALF, prime=3)
    assert Zp.contains(Fraction(1, 9)) and not Zp.contains(Fraction(1, 2))


def test_radius_validation():
    with pytest.raises(InvalidRadii):
        mo.GeometricMonoid("N", 0)
    with pytest.raises(InvalidRadii):
        mo.GeometricMonoid.two_radius("Z", Fraction(3, 4), HALF)
    with pytest.raises(InvalidRadii):
        mo.GeometricMonoid.pair(Fraction(1, 3))
    # equal radii on both sides are allowed
    assert mo.GeometricMonoid.pair(HALF).norm_of(-1) == 2


def test_scale_by_p_hand_values():
    f = mo.scale_by_p(mo.GeometricMonoid("Q", Fraction(1, 4)), 2)
    assert f.source.norm_of(3) == Fraction(1, 64) == f.target.norm_of(f(3))
    assert f(0) == 0 and f.target.norm_of(0) == 0
    assert f(HALF) == 1
    assert f.source.norm_of(HALF) == HALF == f.target.norm_of(1)


def test_scale_by_p_examples():
    M = mo.GeometricMonoid("Q", HALF)
    f = mo.scale_by_p(M, 2)
    assert f.target.radius == NormValue.of(HALF) ** HALF
    assert f(Fraction(3, 4)) == Fraction(3, 2)
    assert f.isometry_defect(mo.default_probes()) == 0
    assert f.inverse(3) == Fraction(3, 2)
    # integers are not divisible, so there is no inverse
    assert mo.scale_by_p(mo.GeometricMonoid("N", HALF), 3).inverse is None
    with pytest.raises(Unsupported):
        mo.scale_by_p(M, 1)


def test_divide_pair_by_p_targets():
    g = mo.divide_pair_by_p(Fraction(3, 4), 2)
    assert g.target.radius == Fraction(9, 16)
    assert g.target.neg_radius == Fraction(1, 16)
    for q in mo.default_probes():
        if q:
            assert g.target.norm_of(g(q)) == g.source.norm_of(q)


def test_cokernel_examples():
    assert mo.quotient_cokernel_norm(Fraction(1, 4), HALF, 2) == Fraction(1, 16)
    assert mo.quotient_cokernel_norm(Fraction(1, 4), HALF, 0) == 0
    assert mo.quotient_cokernel_norm(Fraction(1, 4), HALF, 1) == Fraction(1, 4)
    with pytest.raises(InvalidRadii):
        mo.quotient_cokernel_norm(HALF, HALF, 1)


def test_cokernel_by_enumeration():
    # oracle: min over a + b = n of r'^a r^b, enumerated directly
    for rp, r in [(Fraction(1, 4), HALF), (Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 5), Fraction(4, 5))]:
        for n in range(1, 30):
            expected = min(rp**a * r ** (n - a) for a in range(n + 1))
            assert mo.quotient_cokernel_norm(rp, r, n).as_fraction() == expected


def test_frobenius_family_examples():
    fam = mo.NormFamily.pairs([HALF, Fraction(3, 4)])
    probes = [1, -1, HALF, -HALF, 2, -2]
    cert = mo.frobenius_family_bound(fam, 2, probes)
    assert len(cert["times_p"].entries) == 2 and len(cert["divide_p"].entries) == 2
    single = mo.NormFamily.pairs([HALF])
    ident = mo.certify_scaling(single, 1, probes, sources="family")
    assert ident.constants() == [1]


def test_family_sources_fail_with_witness():
    single = mo.NormFamily.pairs([HALF])
    with pytest.raises(NotBounded) as exc:
        mo.certify_scaling(single, HALF, [1, -1, 2, -2], sources="family")
    assert exc.value.witness["direction"] in ("q -> +inf", "q -> -inf")
    # with the whole pair system as source the same map is bounded
    assert mo.certify_scaling(single, HALF, [1, -1, 2, -2]).constants()


def test_projective_family_needs_domination():
    with pytest.raises(InvalidRadii):
        mo.NormFamily.pairs([Fraction(3, 4), HALF])


def test_cokernel_routes_agree():
    via = mo.cokernel_by_coequalizer(Fraction(1, 3), Fraction(2, 3), 7)
    for n, v in via.items():
        assert v == mo.quotient_cokernel_norm(Fraction(1, 3), Fraction(2, 3), n)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30).filter(bool)
radii = st.sampled_from([Fraction(1, 4), HALF, Fraction(9, 10), Fraction(2, 3)])


@given(rationals, radii, st.sampled_from([2, 3, 5]))
def test_scaling_is_isometric(q, r, p):
    f = mo.scale_by_p(mo.GeometricMonoid("Q", r), p)
    assert f.target.norm_of(f(q)) == f.source.norm_of(q)
    assert f.inverse.target.norm_of(f.inverse(q)) == f.target.norm_of(q)


@given(rationals, rationals, radii)
def test_two_sided_monoid_norm_is_submultiplicative(a, b, r):
    M = mo.GeometricMonoid.two_radius("Q", r * Fraction(1, 2), r)
    if a + b:
        assert M.norm_of(a + b) <= M.norm_of(a) * M.norm_of(b)
