import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from parabolic_moduli import elliptic as ell
from parabolic_moduli import stability as sb

W = sb.WeightVector


@pytest.fixture(scope="module")
def setup():
    rng = random.Random(3)
    while True:
        curve, p = ell.random_curve_with_point(rng)
        L = ell.DivisorClass.point(p)
        if not L.is_torsion2(curve):
            break
    Lk = ell.DivisorClass.point(ell.weierstrass_point(curve, 0))
    return curve, L, Lk


def sub(E, name=None, degree=None, through=None):
    for s in sb.admissible_subbundles(E):
        if (name is None or s.name == name) and (degree is None or s.degree == degree) and (
                through is None or s.passes_through == frozenset(through)):
            return s
    raise LookupError((name, degree, through))


weights = st.builds(W, st.fractions(0, 1, max_denominator=12), st.fractions(0, 1, max_denominator=12))
_open = st.fractions(0, 1, max_denominator=12).filter(lambda v: 0 < v < 1)
open_weights = st.builds(W, _open, _open)


def test_weight_validation():
    with pytest.raises(sb.InvalidWeights):
        W(F(3, 2), 0)
    assert tuple(W(0, 1)) == (0, 1)


def test_index_examples(setup):
    curve, L, _ = setup
    E = sb.BundleDescriptor("E1", curve, L, ({"L"}, {"L"}))
    mu = W(F(1, 3), F(1, 7))
    assert sb.parabolic_index(E, sub(E, "L"), mu) == 1 - mu.mu1 - mu.mu2
    E = sb.BundleDescriptor("E1", curve, None)
    assert sb.parabolic_index(E, sub(E, degree=0, through=()), W(F(1, 2), F(1, 2))) == 2
    E = sb.BundleDescriptor("L_plus_Linv", curve, L, ({"L"}, ()))
    assert sb.parabolic_index(E, sub(E, "L"), mu) == -mu.mu1 + mu.mu2


def test_inadmissible_subbundle(setup):
    curve, L, _ = setup
    E = sb.BundleDescriptor("E1", curve, L, ({"L"}, {"L"}))
    with pytest.raises(sb.InadmissibleSubbundle):
        sb.parabolic_index(E, sb.SubbundleDescriptor(1, frozenset(), "too_big"), W(0, 0))


def test_classify_examples(setup):
    curve, L, _ = setup
    E = sb.BundleDescriptor("E1", curve, L, ({"L"}, {"L"}))
    assert sb.classify(E, W(F(1, 4), F(1, 4))).status == "stable"
    res = sb.classify(E, W(F(3, 4), F(3, 4)))
    assert res.status == "unstable" and res.witness.name == "L"
    F_eq = sb.BundleDescriptor("L_plus_Linv", curve, L, ({"L"}, {"Linv"}))
    for m in (F(1, 9), F(1, 2), F(5, 6)):
        assert sb.classify(F_eq, W(m, m)).status == "strictly_semistable"


def test_invalid_descriptors(setup):
    curve, L, Lk = setup
    with pytest.raises(sb.InvalidDescriptor):
        sb.BundleDescriptor("E1", curve, L, ({"L"}, ()))  # odd type: L only as a common subbundle
    with pytest.raises(sb.InvalidDescriptor):
        sb.BundleDescriptor("L_plus_Linv", curve, Lk)
    with pytest.raises(sb.InvalidDescriptor):
        sb.BundleDescriptor("E0_twist", curve, L)


def test_wall_partners(setup):
    curve, L, Lk = setup
    E_lt = sb.BundleDescriptor("E1", curve, L, ({"L"}, {"L"}))
    E_gt = sb.wall_partner(E_lt)
    assert E_gt == sb.BundleDescriptor("L_plus_Linv_winf", curve, L, ((), ()))
    assert sb.wall_partner(E_gt) == E_lt
    F_lt = sb.BundleDescriptor("E0_twist", curve, Lk, ({"Lk"}, ()))
    assert sb.wall_partner(F_lt) == sb.BundleDescriptor("E0_twist", curve, Lk, ((), {"Lk"}))
    with pytest.raises(sb.NotOnWall):
        sb.wall_partner(sb.BundleDescriptor("L_plus_Linv", curve, L, ({"L"}, {"Linv"})))


def test_graded_examples(setup):
    curve, L, _ = setup
    wall = W(F(2, 5), F(3, 5))
    E_lt = sb.BundleDescriptor("E1", curve, L, ({"L"}, {"L"}))
    want = frozenset({(L, frozenset({1, 2})), (L.neg(curve).twist_inf(), frozenset())})
    assert sb.graded(E_lt, wall) == want
    assert sb.graded(sb.wall_partner(E_lt), wall) == want
    F_eq = sb.BundleDescriptor("L_plus_Linv", curve, L, ({"L"}, {"Linv"}))
    assert sb.graded(F_eq, W(F(1, 3), F(1, 3))) == frozenset({(L, frozenset({1})), (L.neg(curve), frozenset({2}))})
    with pytest.raises(sb.NotStrictlySemistable):
        sb.graded(E_lt, W(F(1, 4), F(1, 4)))


def test_catalog_size(setup):
    assert len(sb.catalog(*setup)) == 22
    assert len(sb.weight_grid()) == 25


@given(open_weights, open_weights)
def test_chamber_constancy_property(setup, a, b):
    cat = sb.catalog(*setup)
    for E in cat:
        if sb.chamber(E.parity, a) == sb.chamber(E.parity, b) != "=":
            assert sb.classify(E, a).status == sb.classify(E, b).status


@given(weights)
def test_index_affine_property(setup, mu):
    cat = sb.catalog(*setup)
    for E in cat:
        for L in sb.admissible_subbundles(E):
            base = sb.parabolic_index(E, L, W(0, 0))
            a = sb.parabolic_index(E, L, W(1, 0)) - base
            b = sb.parabolic_index(E, L, W(0, 1)) - base
            assert {a, b} <= {-1, 0, 1}
            assert sb.parabolic_index(E, L, mu) == base + a * mu.mu1 + b * mu.mu2


@given(open_weights)
def test_semistable_only_on_wall(setup, mu):
    for E in sb.catalog(*setup):
        if sb.classify(E, mu).status == "strictly_semistable":
            assert sb.chamber(E.parity, mu) == "="
            assert sb.wall_role(E) is not None


def test_boundary_weight_zero(setup):
    # at mu = 0 a degree 0 summand has index 0 whatever the directions
    curve, L, _ = setup
    E = sb.BundleDescriptor("L_plus_Linv", curve, L)
    assert sb.classify(E, W(0, 0)).status == "strictly_semistable"
    assert sb.classify(E, W(F(1, 3), F(1, 3))).status == "stable"
