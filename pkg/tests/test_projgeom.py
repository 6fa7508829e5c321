from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from oracle import to_sympy
from parabolic_moduli.exactcore import MultiPoly
from parabolic_moduli.projgeom import (
    BiCurve,
    BirMapP2,
    CoincidentPoints,
    MoebiusMap,
    P1,
    P2,
    PlaneCurve,
    RuledMap,
    Undefined,
    apply,
    compose,
    conic_through,
    contracts_to,
    critical_locus,
    exceptional_image,
    from_json,
    identity_p2,
    intersection_multiplicity_line,
    line_through,
    map_equal,
    moebius_through,
    swap_map,
    to_json,
)

b0, b1, b2 = MultiPoly.vars_of("b0", "b1", "b2")
z0, z1, w0, w1 = MultiPoly.vars_of("z0", "z1", "w0", "w1")
STD = BirMapP2([b1 * b2, b0 * b2, b0 * b1])  # standard quadratic involution

q = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def moebius(draw):
    a, b, c, d = (draw(q) for _ in range(4))
    assume(a * d - b * c != 0)
    return MoebiusMap(a, b, c, d)


def test_moebius_apply_and_inverse():
    m = MoebiusMap(1, 2, 3, 4)
    assert m.apply(P1(1)) == P1(Fraction(3, 7))
    assert m.apply(P1(None)) == P1(Fraction(1, 3))
    assert m.compose(m.inverse()).is_identity()


@given(moebius(), moebius(), q)
def test_moebius_composition_is_action(f, g, x):
    assert f.compose(g).apply(P1(x)) == f.apply(g.apply(P1(x)))


@given(q, q, q, q, q, q)
def test_moebius_through_three_points(a, b, c, u, v, w):
    assume(len({a, b, c}) == 3 and len({u, v, w}) == 3)
    m = moebius_through([(a, u), (b, v), (c, w)])
    assert [m.apply(P1(s)) for s in (a, b, c)] == [P1(u), P1(v), P1(w)]


def test_moebius_through_infinity():
    m = moebius_through([(0, 1), (1, None), (None, 0)])  # z -> 1/(1 - z)
    assert m.apply(P1(Fraction(1, 2))) == P1(2)


def test_projective_points():
    assert P2(1, 2, 3) == P2(2, 4, 6)
    assert P2(1, 2, 3) != P2(1, 2, 4)
    assert P1(None) == P1(None) and P1(None) != P1(0)


def test_standard_quadratic_involution():
    assert apply(STD, P2(1, 2, 3)) == P2(6, 3, 2)
    assert map_equal(compose(STD, STD), identity_p2())
    with pytest.raises(Undefined):
        apply(STD, P2(1, 0, 0))


def test_contraction_and_exceptional_image():
    side = line_through(P2(1, 0, 0), P2(0, 1, 0))
    assert side == PlaneCurve(b2)
    assert contracts_to(STD, side) == P2(0, 0, 1)
    kind, _ = exceptional_image(STD, P2(1, 0, 0))
    assert kind == "curve"


def test_line_through_coincident_points():
    with pytest.raises(CoincidentPoints):
        line_through(P2(1, 2, 3), P2(2, 4, 6))


def test_conic_through_five_points_against_sympy():
    pts = [P2(1, 0, 0), P2(0, 1, 0), P2(0, 0, 1), P2(1, 1, 1), P2(1, 2, 3)]
    C = conic_through(pts)
    for p in pts:
        assert C.contains(p)
    # oracle: 5x6 nullspace of the Veronese rows in sympy
    rows = [[x * y for x, y in ((p[0], p[0]), (p[0], p[1]), (p[0], p[2]), (p[1], p[1]), (p[1], p[2]), (p[2], p[2]))]
            for p in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3])]
    (ker,) = sp.Matrix(rows).nullspace()
    B0, B1, B2 = sp.symbols("b0 b1 b2")
    mons = [B0 * B0, B0 * B1, B0 * B2, B1 * B1, B1 * B2, B2 * B2]
    want = sum(k * m for k, m in zip(ker, mons))
    assert sp.simplify(to_sympy(C.poly) / want).is_number


def test_critical_locus_against_sympy_jacobian():
    # (b0:b1) x (b0:b2) has Jacobian determinant proportional to b0
    f = RuledMap((b0, b1), (b0, b2))
    assert critical_locus(f) == PlaneCurve(b0)
    # a less trivial one, compared with the affine Jacobian in sympy
    f = RuledMap((b0 * b0, b1 * b1 + b0 * b2), (b0, b2))
    x, y = sp.symbols("x y")
    J = sp.Matrix([x**2 + y, y]).jacobian([x, y]).det()
    got = to_sympy(critical_locus(f).poly).subs({sp.Symbol("b0"): 1, sp.Symbol("b1"): x, sp.Symbol("b2"): y})
    assert sp.simplify(got / J).is_number


def test_bicurve_pullback_and_swap():
    G = BiCurve(z0 * w1 - z1 * w0)  # the diagonal
    assert G.swapped() == G
    m = MoebiusMap(2, 1, 1, 1)
    assert G.pullback(m, m) == G
    assert G.pullback(m, MoebiusMap.identity()) != G
    assert G.contains(P1(3), P1(3)) and not G.contains(P1(3), P1(4))


def test_intersection_multiplicity_of_tangent_ruling():
    # w^2 = z: the vertical line z = 0 touches at w = 0
    C = BiCurve(z0 * w1 * w1 - z1 * w0 * w0)
    assert intersection_multiplicity_line(C, "vertical", P1(0), P1(0)) == 2
    assert intersection_multiplicity_line(C, "vertical", P1(1), P1(1)) == 1


def test_swap_map():
    s = swap_map()
    assert apply(s, (P1(1), P1(2))) == (P1(2), P1(1))
    assert map_equal(compose(s, s), compose(swap_map(), swap_map()))


@pytest.mark.parametrize("obj", [
    MoebiusMap(1, 2, 3, 4), P2(1, 2, 3), STD, PlaneCurve(b0 * b1 - b2 * b2),
    BiCurve(z0 * w1 - z1 * w0), RuledMap((b0, b1), (b0, b2)),
])
def test_json_round_trip(obj):
    back = from_json(to_json(obj))
    if isinstance(obj, (BirMapP2, RuledMap)):
        assert map_equal(back, obj)
    else:
        assert back == obj
