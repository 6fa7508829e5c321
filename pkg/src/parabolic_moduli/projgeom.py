"""Projective points, Möbius maps, plane and biprojective curves, and
rational maps of P^2 and P^1 x P^1.

Coordinate conventions
----------------------
* P^2 has homogeneous coordinates ``(b0 : b1 : b2)``.
* P^1 x P^1 has coordinates ``(z0 : z1), (w0 : w1)``; the affine coordinate
  is ``z = z1 / z0`` so that ``(1 : 0)`` is zero and ``(0 : 1)`` is infinity.
* A Möbius map ``[[a, b], [c, d]]`` acts as ``z -> (a z + b) / (c z + d)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactcore import (
    ExactError,
    MultiPoly,
    NotDivisible,
    RatFunc,
    exact_divide,
    poly_gcd,
    nullspace,
    univariate_view,
)

__all__ = [
    "P2_VARS",
    "Z_VARS",
    "W_VARS",
    "Undefined",
    "DegeneratePoints",
    "CoincidentPoints",
    "PointNotOnCurve",
    "NotContracted",
    "NoRationalParametrization",
    "ProjPoint",
    "P1",
    "P2",
    "INFINITY",
    "MoebiusMap",
    "PlaneCurve",
    "BiCurve",
    "BirMapP2",
    "RuledMap",
    "moebius_through",
    "apply",
    "compose",
    "map_equal",
    "identity_p2",
    "identity_ruled",
    "swap_map",
    "line_through",
    "conic_through",
    "intersection_multiplicity_line",
    "critical_locus",
    "parametrize",
    "restrict",
    "contracts_to",
    "exceptional_image",
    "lands_in",
    "strip_common_factor",
    "to_json",
    "from_json",
]

P2_VARS = ("b0", "b1", "b2")
Z_VARS = ("z0", "z1")
W_VARS = ("w0", "w1")


class Undefined(ExactError):
    """Map evaluated at a base (indeterminacy) point."""


class DegeneratePoints(ExactError):
    pass


class CoincidentPoints(ExactError):
    pass


class PointNotOnCurve(ExactError):
    pass


class NotContracted(ExactError):
    """The map does not collapse the curve to a point."""


class NoRationalParametrization(ExactError):
    pass


def _poly(x) -> MultiPoly:
    if isinstance(x, RatFunc):
        if not x.is_polynomial():
            raise ValueError("expected a polynomial")
        return x.as_poly()
    return MultiPoly.coerce(x)


def strip_common_factor(polys: Sequence[MultiPoly]) -> tuple:
    """Divide a tuple of polynomials by their gcd and make it primitive.

    The sign is fixed so that the first nonzero entry has a positive leading
    coefficient.
    """
    polys = [_poly(p) for p in polys]
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p if g is None else poly_gcd(g, p)
        if g.is_constant():
            break
    if g is None:
        raise ValueError("all components vanish")
    if not g.is_constant():
        polys = [exact_divide(p, g) for p in polys]
    content = Fraction(0)
    lead = None
    from math import gcd

    num, den = 0, 1
    for p in polys:
        if p.is_zero():
            continue
        c = p.content()
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
        if lead is None:
            lead = p.leading_coefficient()
    content = Fraction(num, den)
    if lead < 0:
        content = -content
    return tuple(p.scale(1 / content) for p in polys)


def strip_parameter_content(poly: MultiPoly, coords: Sequence[str]) -> MultiPoly:
    """Remove the gcd of the coefficients of poly viewed as a form in coords."""
    poly = _poly(poly)
    if poly.is_zero():
        return poly
    groups = {}
    idx = [poly.vars.index(v) if v in poly.vars else None for v in coords]
    for e, c in poly.terms.items():
        key = tuple(0 if i is None else e[i] for i in idx)
        rest = {v: k for v, k in zip(poly.vars, e) if v not in coords and k}
        groups.setdefault(key, []).append(MultiPoly.monomial(rest, c))
    coeffs = [sum(g, MultiPoly.const(0)) for g in groups.values()]
    return _divide_out(poly, coeffs)


def _divide_out(poly, coeffs):
    g = None
    for c in coeffs:
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            break
    if not g.is_constant():
        poly = exact_divide(poly, g)
    c = poly.content()
    if poly.leading_coefficient() < 0:
        c = -c
    return poly.scale(1 / c)


def _minors_vanish(u: Sequence[MultiPoly], v: Sequence[MultiPoly]) -> bool:
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if not (u[i] * v[j] - u[j] * v[i]).is_zero():
                return False
    return True


def _minor_residuals(u, v):
    out = []
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            r = u[i] * v[j] - u[j] * v[i]
            if not r.is_zero():
                out.append(r)
    return out


# ------------------------------------------------------------------ points


class ProjPoint:
    """Point of P^1 or P^2 with polynomial coordinates (denominators cleared)."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        vals = [RatFunc.coerce(c) if not isinstance(c, MultiPoly) else RatFunc(c) for c in coords]
        if len(vals) not in (2, 3):
            raise ValueError("points live in P^1 or P^2")
        if all(v.is_zero() for v in vals):
            raise ValueError("all coordinates vanish")
        common = MultiPoly.const(1)
        for v in vals:
            if not v.den.is_constant():
                g = poly_gcd(common, v.den)
                common = common * exact_divide(v.den, g)
        polys = []
        for v in vals:
            polys.append(exact_divide(common * v.num, v.den) if not v.den.is_constant()
                         else (common * v.num).scale(Fraction(1) / Fraction(v.den.constant_value())))
        self.coords = strip_common_factor(polys)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or other.dim != self.dim:
            return NotImplemented
        return _minors_vanish(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords)

    def subs(self, mapping) -> "ProjPoint":
        return ProjPoint([c.subs(mapping) for c in self.coords])

    def affine(self):
        """Affine value of a P^1 point as RatFunc, or None at infinity."""
        if self.dim != 1:
            raise ValueError("affine value only for P^1 points")
        if self.coords[0].is_zero():
            return None
        return RatFunc(self.coords[1], self.coords[0])

    def is_infinity(self) -> bool:
        return self.dim == 1 and self.coords[0].is_zero()

    def to_json(self):
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, data):
        return cls([MultiPoly.from_json(c) for c in data])

    def __str__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"

    __repr__ = __str__


def P1(value) -> ProjPoint:
    """P^1 point from an affine value (scalar, polynomial, RatFunc) or None for infinity."""
    if value is None:
        return ProjPoint([0, 1])
    r = RatFunc.coerce(value)
    return ProjPoint([r.den, r.num])


def P2(*coords) -> ProjPoint:
    return ProjPoint(coords)


INFINITY = ProjPoint([0, 1])


# ---------------------------------------------------------------- Möbius


class MoebiusMap:
    """Invertible 2x2 matrix up to scalar, acting by z -> (a z + b)/(c z + d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        entries = [RatFunc.coerce(x) if not isinstance(x, MultiPoly) else RatFunc(x) for x in (a, b, c, d)]
        common = MultiPoly.const(1)
        for e in entries:
            if not e.den.is_constant():
                common = common * exact_divide(e.den, poly_gcd(common, e.den))
        polys = [exact_divide(common * e.num, e.den) if not e.den.is_constant()
                 else (common * e.num).scale(Fraction(1) / Fraction(e.den.constant_value()))
                 for e in entries]
        if all(p.is_zero() for p in polys):
            raise DegeneratePoints("zero matrix")
        self.a, self.b, self.c, self.d = strip_common_factor(polys)
        if self.det().is_zero():
            raise DegeneratePoints("singular Möbius matrix")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def det(self) -> MultiPoly:
        return self.a * self.d - self.b * self.c

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def __call__(self, p):
        return self.apply(p)

    def apply(self, p) -> ProjPoint:
        if not isinstance(p, ProjPoint):
            p = P1(p)
        z0, z1 = p.coords
        return ProjPoint([self.c * z1 + self.d * z0, self.a * z1 + self.b * z0])

    def forms(self, v0="z0", v1="z1"):
        """Image as a pair of linear forms (new z0, new z1) in the given variables."""
        x0, x1 = MultiPoly.var(v0), MultiPoly.var(v1)
        return (self.c * x1 + self.d * x0, self.a * x1 + self.b * x0)

    def compose(self, inner: "MoebiusMap") -> "MoebiusMap":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = inner.a, inner.b, inner.c, inner.d
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __matmul__(self, inner):
        return self.compose(inner)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return _minors_vanish((self.a, self.b, self.c, self.d), (other.a, other.b, other.c, other.d))

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def subs(self, mapping) -> "MoebiusMap":
        return MoebiusMap(*(x.subs(mapping) for x in (self.a, self.b, self.c, self.d)))

    def is_identity(self) -> bool:
        return self == MoebiusMap.identity()

    def to_json(self):
        return {"matrix": [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]}

    @classmethod
    def from_json(cls, data):
        (a, b), (c, d) = data["matrix"]
        return cls(*(MultiPoly.from_json(x) for x in (a, b, c, d)))

    def __str__(self):
        return f"z -> ({self.a}*z + {self.b})/({self.c}*z + {self.d})"

    __repr__ = __str__


def _lform(p: ProjPoint, q: ProjPoint) -> MultiPoly:
    """Value at q of the linear form vanishing at p: p0*q1 - p1*q0."""
    return p.coords[0] * q.coords[1] - p.coords[1] * q.coords[0]


def _to_standard(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> MoebiusMap:
    """Möbius map sending p1, p2, p3 to 0, 1, infinity."""
    A = _lform(p3, p2)
    B = _lform(p1, p2)
    if A.is_zero() or B.is_zero() or _lform(p1, p3).is_zero():
        raise DegeneratePoints("points must be pairwise distinct")
    # new z1 = A*l_{p1}(z), new z0 = B*l_{p3}(z) with l_p(z) = p0 z1 - p1 z0
    return MoebiusMap(A * p1.coords[0], -A * p1.coords[1], B * p3.coords[0], -B * p3.coords[1])


def moebius_through(pairs: Sequence) -> MoebiusMap:
    """Unique Möbius map with three prescribed point images.

    ``pairs`` is a sequence of three (source, target) pairs; points are
    :class:`ProjPoint` instances or affine values (None for infinity).
    """
    if len(pairs) != 3:
        raise ValueError("need exactly three point pairs")
    src = [p if isinstance(p, ProjPoint) else P1(p) for p, _ in pairs]
    tgt = [q if isinstance(q, ProjPoint) else P1(q) for _, q in pairs]
    S = _to_standard(*src)
    T = _to_standard(*tgt)
    return T.inverse().compose(S)


# ------------------------------------------------------------------ curves


class PlaneCurve:
    """Homogeneous polynomial in (b0, b1, b2), kept primitive."""

    __slots__ = ("poly", "degree")

    def __init__(self, poly):
        poly = _poly(poly)
        if poly.is_zero():
            raise ValueError("zero polynomial does not define a curve")
        if not poly.is_homogeneous(P2_VARS):
            raise ValueError("plane curve must be homogeneous in b0, b1, b2")
        self.poly = strip_parameter_content(poly, P2_VARS)
        self.degree = max(poly.degree_in(P2_VARS))

    def __call__(self, point: ProjPoint) -> MultiPoly:
        return self.poly.subs(dict(zip(P2_VARS, point.coords)))

    def contains(self, point: ProjPoint) -> bool:
        return self(point).is_zero()

    def __eq__(self, other):
        if not isinstance(other, PlaneCurve):
            return NotImplemented
        return _minors_vanish((self.poly,), (other.poly,)) and _proportional(self.poly, other.poly)

    def __hash__(self):
        return hash(self.poly)

    def subs(self, mapping):
        return PlaneCurve(self.poly.subs(mapping))

    def to_json(self):
        return {"kind": "planecurve", "payload": self.poly.to_json()}

    def __str__(self):
        return f"{self.poly} = 0"

    __repr__ = __str__


def _proportional(p: MultiPoly, q: MultiPoly) -> bool:
    """p = r*q for some nonzero r free of the coordinate variables."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return _same_up_to_factor(p, q)


def _same_up_to_factor(p, q) -> bool:
    # strip both to primitive gcd-free forms and compare up to sign
    names = tuple(v for v in P2_VARS + Z_VARS + W_VARS if v in p.vars or v in q.vars)
    a = strip_parameter_content(p, names)
    b = strip_parameter_content(q, names)
    return a == b or a == -b


class BiCurve:
    """Bihomogeneous polynomial in (z0, z1), (w0, w1)."""

    __slots__ = ("poly", "bidegree")

    def __init__(self, poly, bidegree=None):
        poly = _poly(poly)
        if poly.is_zero():
            raise ValueError("zero polynomial does not define a curve")
        dz = poly.degree_in(Z_VARS)
        dw = poly.degree_in(W_VARS)
        if len(dz) != 1 or len(dw) != 1:
            raise ValueError("curve is not bihomogeneous")
        bd = (dz.pop(), dw.pop())
        if bidegree is not None and tuple(bidegree) != bd:
            raise ValueError(f"bidegree {bd} differs from the stated {tuple(bidegree)}")
        self.poly = strip_parameter_content(poly, Z_VARS + W_VARS)
        self.bidegree = bd

    def __call__(self, zpt: ProjPoint, wpt: ProjPoint) -> MultiPoly:
        return self.poly.subs({"z0": zpt.coords[0], "z1": zpt.coords[1], "w0": wpt.coords[0], "w1": wpt.coords[1]})

    def contains(self, zpt, wpt) -> bool:
        return self(zpt, wpt).is_zero()

    def swapped(self) -> "BiCurve":
        return BiCurve(self.poly.subs({"z0": MultiPoly.var("w0"), "z1": MultiPoly.var("w1"),
                                       "w0": MultiPoly.var("z0"), "w1": MultiPoly.var("z1")}))

    def pullback(self, zmap: MoebiusMap, wmap: MoebiusMap) -> "BiCurve":
        """Curve composed with the product map zmap x wmap."""
        z0, z1 = zmap.forms("z0", "z1")
        w0, w1 = wmap.forms("w0", "w1")
        return BiCurve(self.poly.subs({"z0": z0, "z1": z1, "w0": w0, "w1": w1}))

    def equals_up_to_scalar(self, other: "BiCurve") -> bool:
        return _same_up_to_factor(self.poly, other.poly)

    def subs(self, mapping):
        return BiCurve(self.poly.subs(mapping))

    def to_json(self):
        return {"kind": "bicurve", "payload": self.poly.to_json()}

    def __eq__(self, other):
        if not isinstance(other, BiCurve):
            return NotImplemented
        return self.equals_up_to_scalar(other)

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return f"{self.poly} = 0"

    __repr__ = __str__


# -------------------------------------------------------------------- maps


class BirMapP2:
    """Rational self-map of P^2 given by three forms of a common degree."""

    __slots__ = ("components",)

    def __init__(self, components, strip: bool = True):
        comps = [_poly(c) for c in components]
        if len(comps) != 3:
            raise ValueError("need three components")
        degs = set()
        for c in comps:
            if not c.is_zero():
                if not c.is_homogeneous(P2_VARS):
                    raise ValueError("components must be homogeneous in b")
                degs |= c.degree_in(P2_VARS)
        if not degs:
            raise ValueError("all components vanish")
        if len(degs) != 1:
            raise ValueError("components must share one degree")
        self.components = strip_common_factor(comps) if strip else tuple(comps)

    @property
    def degree(self) -> int:
        for c in self.components:
            if not c.is_zero():
                return max(c.degree_in(P2_VARS))
        return 0

    def __call__(self, p):
        return apply(self, p)

    def subs(self, mapping):
        return BirMapP2([c.subs(mapping) for c in self.components])

    def substitute_into(self, polys: Sequence[MultiPoly]) -> tuple:
        """Components evaluated at the given coordinate expressions."""
        m = dict(zip(P2_VARS, polys))
        return tuple(c.subs(m) for c in self.components)

    def to_json(self):
        return {"kind": "map_p2", "payload": {"components": [c.to_json() for c in self.components]}}

    def __eq__(self, other):
        if not isinstance(other, BirMapP2):
            return NotImplemented
        return map_equal(self, other)

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"

    __repr__ = __str__


class RuledMap:
    """Map to P^1_z x P^1_w given by two pairs of forms in the source coordinates.

    ``source`` is ``"P2"`` (variables b0, b1, b2) or ``"P1xP1"`` (z0, z1, w0, w1).
    """

    __slots__ = ("zpair", "wpair", "source")

    def __init__(self, zpair, wpair, source: str = "P2", strip: bool = True):
        if source not in ("P2", "P1xP1"):
            raise ValueError("unknown source space")
        zp = tuple(_poly(c) for c in zpair)
        wp = tuple(_poly(c) for c in wpair)
        if len(zp) != 2 or len(wp) != 2:
            raise ValueError("pairs must have two entries")
        for pair in (zp, wp):
            if all(c.is_zero() for c in pair):
                raise ValueError("a pair vanishes identically")
        if strip:
            zp = strip_common_factor(zp)
            wp = strip_common_factor(wp)
        self.zpair, self.wpair, self.source = zp, wp, source

    @property
    def source_vars(self):
        return P2_VARS if self.source == "P2" else Z_VARS + W_VARS

    def __call__(self, p):
        return apply(self, p)

    def subs(self, mapping):
        return RuledMap([c.subs(mapping) for c in self.zpair], [c.subs(mapping) for c in self.wpair], self.source)

    def substitute_into(self, polys: Sequence[MultiPoly]):
        m = dict(zip(self.source_vars, polys))
        return tuple(c.subs(m) for c in self.zpair), tuple(c.subs(m) for c in self.wpair)

    @classmethod
    def from_moebius(cls, zmap: MoebiusMap, wmap: MoebiusMap) -> "RuledMap":
        return cls(zmap.forms("z0", "z1"), wmap.forms("w0", "w1"), "P1xP1")

    def to_json(self):
        return {
            "kind": "map_ruled",
            "payload": {
                "source": self.source,
                "z": [c.to_json() for c in self.zpair],
                "w": [c.to_json() for c in self.wpair],
            },
        }

    def __eq__(self, other):
        if not isinstance(other, RuledMap):
            return NotImplemented
        return map_equal(self, other)

    def __hash__(self):
        return hash((self.zpair, self.wpair))

    def __str__(self):
        z = ", ".join(str(c) for c in self.zpair)
        w = ", ".join(str(c) for c in self.wpair)
        return f"(({z}), ({w}))"

    __repr__ = __str__


def identity_p2() -> BirMapP2:
    return BirMapP2([MultiPoly.var(v) for v in P2_VARS])


def identity_ruled() -> RuledMap:
    z0, z1, w0, w1 = MultiPoly.vars_of("z0", "z1", "w0", "w1")
    return RuledMap((z0, z1), (w0, w1), "P1xP1")


def swap_map() -> RuledMap:
    z0, z1, w0, w1 = MultiPoly.vars_of("z0", "z1", "w0", "w1")
    return RuledMap((w0, w1), (z0, z1), "P1xP1")


def apply(f, p):
    """Evaluate a map at a point; raises Undefined at base points.

    For maps with source P^1 x P^1 the point is a pair of P^1 points, and
    ruled maps return such a pair.
    """
    if isinstance(f, MoebiusMap):
        return f.apply(p)
    if isinstance(f, BirMapP2):
        if not isinstance(p, ProjPoint) or p.dim != 2:
            raise ValueError("BirMapP2 expects a point of P^2")
        vals = f.substitute_into(p.coords)
        if all(v.is_zero() for v in vals):
            raise Undefined("base point of the map")
        return ProjPoint(vals)
    if isinstance(f, RuledMap):
        if f.source == "P2":
            if not isinstance(p, ProjPoint) or p.dim != 2:
                raise ValueError("map expects a point of P^2")
            coords = p.coords
        else:
            zp, wp = p
            coords = zp.coords + wp.coords
        zv, wv = f.substitute_into(coords)
        if all(v.is_zero() for v in zv) or all(v.is_zero() for v in wv):
            raise Undefined("base point of the map")
        return ProjPoint(zv), ProjPoint(wv)
    raise TypeError(f"cannot apply {type(f).__name__}")


def compose(outer, inner, strip: bool = True):
    """outer o inner; common factors stripped unless strip=False."""
    if isinstance(outer, MoebiusMap) and isinstance(inner, MoebiusMap):
        return outer.compose(inner)
    if isinstance(outer, BirMapP2) and isinstance(inner, BirMapP2):
        return BirMapP2(outer.substitute_into(inner.components), strip=strip)
    if isinstance(outer, RuledMap) and outer.source == "P2" and isinstance(inner, BirMapP2):
        zp, wp = outer.substitute_into(inner.components)
        return RuledMap(zp, wp, "P2", strip=strip)
    if isinstance(outer, RuledMap) and outer.source == "P1xP1" and isinstance(inner, RuledMap):
        zp, wp = outer.substitute_into(inner.zpair + inner.wpair)
        return RuledMap(zp, wp, inner.source, strip=strip)
    raise TypeError(f"cannot compose {type(outer).__name__} with {type(inner).__name__}")


def map_equal(f, g) -> bool:
    """Projective equality: all 2x2 minors between component tuples vanish."""
    if isinstance(f, MoebiusMap) and isinstance(g, MoebiusMap):
        return f == g
    if isinstance(f, BirMapP2) and isinstance(g, BirMapP2):
        return _minors_vanish(f.components, g.components)
    if isinstance(f, RuledMap) and isinstance(g, RuledMap):
        if f.source != g.source:
            return False
        return _minors_vanish(f.zpair, g.zpair) and _minors_vanish(f.wpair, g.wpair)
    return False


def map_residuals(f, g) -> list:
    """Nonvanishing minors witnessing f != g (empty when equal)."""
    if isinstance(f, BirMapP2):
        return _minor_residuals(f.components, g.components)
    return _minor_residuals(f.zpair, g.zpair) + _minor_residuals(f.wpair, g.wpair)


# ----------------------------------------------------------- construction


def line_through(p: ProjPoint, q: ProjPoint) -> PlaneCurve:
    """Line through two points of P^2 (cross product of coordinates)."""
    a, b = p.coords, q.coords
    cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    if all(c.is_zero() for c in cross):
        raise CoincidentPoints("points coincide")
    b0, b1, b2 = MultiPoly.vars_of(*P2_VARS)
    return PlaneCurve(cross[0] * b0 + cross[1] * b1 + cross[2] * b2)


_CONIC_MONOMIALS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def conic_through(points: Sequence[ProjPoint]) -> PlaneCurve:
    """Conic through five points, by an exact 5x6 linear solve."""
    rows = []
    for p in points:
        x = p.coords
        rows.append([x[0] ** i * x[1] ** j * x[2] ** k for i, j, k in _CONIC_MONOMIALS])
    basis = nullspace(rows)
    if len(basis) != 1:
        raise DegeneratePoints(f"conic fit has a {len(basis)}-dimensional solution space")
    b = MultiPoly.vars_of(*P2_VARS)
    poly = sum((c * b[0] ** i * b[1] ** j * b[2] ** k for c, (i, j, k) in zip(basis[0], _CONIC_MONOMIALS)),
               MultiPoly.const(0))
    return PlaneCurve(poly)


# -------------------------------------------------------------- tangency


def _binary_root_multiplicity(form: MultiPoly, v0: str, v1: str, point: ProjPoint) -> int:
    p0, p1 = point.coords
    lin = p0 * MultiPoly.var(v1) - p1 * MultiPoly.var(v0)
    m = 0
    cur = form
    while True:
        try:
            cur = exact_divide(cur, lin)
        except NotDivisible:
            return m
        m += 1


def intersection_multiplicity_line(curve: BiCurve, ruling: str, at, point) -> int:
    """Multiplicity of ``point`` on the restriction of ``curve`` to a ruling line.

    ``ruling`` is ``"vertical"`` (the line z = at, point is a w value) or
    ``"horizontal"`` (the line w = at, point is a z value).
    """
    at = at if isinstance(at, ProjPoint) else P1(at)
    point = point if isinstance(point, ProjPoint) else P1(point)
    if ruling == "vertical":
        form = curve.poly.subs({"z0": at.coords[0], "z1": at.coords[1]})
        v0, v1 = W_VARS
    elif ruling == "horizontal":
        form = curve.poly.subs({"w0": at.coords[0], "w1": at.coords[1]})
        v0, v1 = Z_VARS
    else:
        raise ValueError("ruling must be 'vertical' or 'horizontal'")
    if form.is_zero():
        raise ValueError("the ruling line is a component of the curve")
    m = _binary_root_multiplicity(form, v0, v1, point)
    if m == 0:
        raise PointNotOnCurve("point is not on the curve")
    return m


# ------------------------------------------------------------ ramification


def _grad(p: MultiPoly, names=P2_VARS):
    return [p.diff(v) for v in names]


def _cross_form(num: MultiPoly, den: MultiPoly):
    """Homogeneous differential of num/den: den*grad(num) - num*grad(den)."""
    gn, gd = _grad(num), _grad(den)
    return [den * a - num * b for a, b in zip(gn, gd)]


def critical_locus(f: RuledMap, literal: bool = False) -> PlaneCurve:
    """Ramification curve of a ruled map from P^2.

    Both cross-form rows are orthogonal to the coordinate vector b (Euler),
    so their cross product is h*b; the curve returned is h.  With
    ``literal=True`` the determinant with the row b appended is returned
    instead, which equals h*(b0^2 + b1^2 + b2^2).
    """
    if f.source != "P2":
        raise ValueError("critical_locus expects a map from P^2")
    cz = _cross_form(f.zpair[1], f.zpair[0])
    cw = _cross_form(f.wpair[1], f.wpair[0])
    cross = [cz[1] * cw[2] - cz[2] * cw[1], cz[2] * cw[0] - cz[0] * cw[2], cz[0] * cw[1] - cz[1] * cw[0]]
    b = MultiPoly.vars_of(*P2_VARS)
    if literal:
        det = cross[0] * b[0] + cross[1] * b[1] + cross[2] * b[2]
        if det.is_zero():
            return None
        return PlaneCurve(det)
    for k in range(3):
        if not b[k].is_zero() and not cross[k].is_zero():
            h = exact_divide(cross[k], b[k])
            return PlaneCurve(h) if not h.is_constant() else PlaneCurve(MultiPoly.const(1))
    return None


# ---------------------------------------------------------- parametrization

_U = MultiPoly.vars_of("u0", "u1")


def _kernel_points(curve: PlaneCurve):
    """Two independent points on a line."""
    a = [curve.poly.coefficient({v: 1}) for v in P2_VARS]
    zero = MultiPoly.const(0)
    cands = [(a[1], -a[0], zero), (a[2], zero, -a[0]), (zero, a[2], -a[1])]
    pts = [c for c in cands if not all(x.is_zero() for x in c)]
    chosen = [pts[0]]
    for c in pts[1:]:
        if not _minors_vanish(chosen[0], c):
            chosen.append(c)
            break
    if len(chosen) < 2:
        raise NoRationalParametrization("degenerate line")
    return chosen


def parametrize(curve: PlaneCurve, point: ProjPoint | None = None):
    """Rational parametrization (three forms in u0, u1) of a line or a conic.

    Conics are projected from a rational point on them: the given ``point``
    or the first of (1:0:0), (0:0:1), (0:1:0), (1:1:1) lying on the conic.
    """
    u0, u1 = _U
    if curve.degree == 1:
        p, q = _kernel_points(curve)
        return tuple(u0 * x + u1 * y for x, y in zip(p, q))
    if curve.degree == 2:
        cands = [point] if point is not None else [P2(1, 0, 0), P2(0, 0, 1), P2(0, 1, 0), P2(1, 1, 1)]
        base = None
        for c in cands:
            if curve.contains(c):
                base = c
                break
        if base is None:
            raise NoRationalParametrization("no known rational point on the conic")
        P = base.coords
        # direction v spans the lines through P; choose two coordinates not both zero at P
        idx = [i for i in range(3) if not P[i].is_zero()]
        j = idx[0]
        others = [i for i in range(3) if i != j]
        v = [MultiPoly.const(0)] * 3
        v[others[0]], v[others[1]] = u0, u1
        Q = curve.poly
        subs_v = dict(zip(P2_VARS, v))
        Qv = Q.subs(subs_v)
        grad = [Q.diff(x).subs(dict(zip(P2_VARS, P))) for x in P2_VARS]
        twoB = sum((g * vi for g, vi in zip(grad, v)), MultiPoly.const(0))  # 2 B(P, v)
        pts = [Qv * P[i] - twoB * v[i] for i in range(3)]
        pts = strip_common_factor(pts)
        return pts
    raise NoRationalParametrization("only lines and conics are parametrized")


def restrict(f, param: Sequence[MultiPoly]):
    """Substitute a parametrization into a map's components."""
    return f.substitute_into(param)


def _is_constant_in(polys, names) -> bool:
    """Projective point independent of the variables ``names``."""
    ref = next((p for p in polys if not p.is_zero()), None)
    if ref is None:
        return False
    for v in names:
        dref = ref.diff(v)
        for p in polys:
            if not (p * dref - ref * p.diff(v)).is_zero():
                return False
    return True


def _constant_point(polys, names) -> ProjPoint:
    ref = next(p for p in polys if not p.is_zero())
    e, _ = ref.leading_term()
    mono = {v: e[ref.vars.index(v)] if v in ref.vars else 0 for v in names}
    return ProjPoint([p.coefficient(mono) for p in polys])


def contracts_to(f, curve: PlaneCurve, point: ProjPoint | None = None):
    """Point to which ``f`` collapses ``curve``; raises NotContracted otherwise.

    For a ruled map the result is a pair of P^1 points.
    """
    param = parametrize(curve, point)
    names = ("u0", "u1")
    if isinstance(f, BirMapP2):
        comps = f.substitute_into(param)
        if all(c.is_zero() for c in comps):
            raise NotContracted("curve lies in the base locus")
        comps = strip_common_factor(comps)
        if _is_constant_in(comps, names):
            return _constant_point(comps, names)
        raise NotContracted("image is a curve")
    if isinstance(f, RuledMap):
        zp, wp = f.substitute_into(param)
        zp, wp = strip_common_factor(zp), strip_common_factor(wp)
        if _is_constant_in(zp, names) and _is_constant_in(wp, names):
            return _constant_point(zp, names), _constant_point(wp, names)
        raise NotContracted("image is a curve")
    raise TypeError("unsupported map")


def lands_in(f, curve: PlaneCurve, target) -> bool:
    """Image-containment: f(curve) lies in ``target`` identically.

    ``target`` is a PlaneCurve for plane maps; for ruled maps it is a BiCurve,
    or a tuple ("V", point) / ("H", point) for a vertical or horizontal line.
    """
    param = parametrize(curve)
    if isinstance(f, BirMapP2):
        comps = f.substitute_into(param)
        return target.poly.subs(dict(zip(P2_VARS, comps))).is_zero()
    zp, wp = f.substitute_into(param)
    return _ruled_target_contains(zp, wp, target)


def _ruled_target_contains(zp, wp, target) -> bool:
    if isinstance(target, BiCurve):
        return target.poly.subs({"z0": zp[0], "z1": zp[1], "w0": wp[0], "w1": wp[1]}).is_zero()
    kind, pt = target
    pt = pt if isinstance(pt, ProjPoint) else P1(pt)
    pair = zp if kind == "V" else wp
    return (pt.coords[0] * pair[1] - pt.coords[1] * pair[0]).is_zero()


def exceptional_image(f, point: ProjPoint):
    """Image of the exceptional curve over a point of P^2.

    Substitutes ``point + eps*v`` with a generic direction v and keeps the
    lowest nonvanishing order in eps.  Returns ``("point", P)`` when the
    leading term does not depend on v, else ``("curve", comps)`` with comps
    forms in (v0, v1, v2) (a pair of pairs for ruled maps).
    """
    eps = MultiPoly.var("eps")
    v = MultiPoly.vars_of("v0", "v1", "v2")
    sub = [c + eps * d for c, d in zip(point.coords, v)]
    if isinstance(f, BirMapP2):
        comps = [_lowest_order(c, "eps") for c in [f.substitute_into(sub)]][0]
        comps = strip_common_factor(comps)
        if _is_constant_in(comps, ("v0", "v1", "v2")):
            return "point", _constant_point(comps, ("v0", "v1", "v2"))
        return "curve", comps
    zp, wp = f.substitute_into(sub)
    zl = strip_common_factor(_lowest_order(zp, "eps"))
    wl = strip_common_factor(_lowest_order(wp, "eps"))
    names = ("v0", "v1", "v2")
    if _is_constant_in(zl, names) and _is_constant_in(wl, names):
        return "point", (_constant_point(zl, names), _constant_point(wl, names))
    return "curve", (zl, wl)


def exceptional_lands_in(f, point: ProjPoint, target) -> bool:
    kind, data = exceptional_image(f, point)
    if kind == "point":
        return False
    if isinstance(f, BirMapP2):
        return target.poly.subs(dict(zip(P2_VARS, data))).is_zero()
    zl, wl = data
    return _ruled_target_contains(zl, wl, target)


def _lowest_order(polys, var):
    views = [univariate_view(p, var) for p in polys]
    k = 0
    while True:
        coeffs = [vw[k] if k < len(vw) else MultiPoly.const(0) for vw in views]
        if any(not c.is_zero() for c in coeffs):
            return coeffs
        k += 1
        if k > max(len(vw) for vw in views):
            raise ValueError("map vanishes identically near the point")


# ---------------------------------------------------------- serialization


def to_json(obj) -> dict:
    if isinstance(obj, (PlaneCurve, BiCurve, BirMapP2, RuledMap)):
        return obj.to_json()
    if isinstance(obj, MoebiusMap):
        return {"kind": "moebius", "payload": obj.to_json()}
    if isinstance(obj, ProjPoint):
        return {"kind": "point", "payload": obj.to_json()}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(data: dict):
    kind = data["kind"]
    payload = data["payload"]
    if kind == "planecurve":
        return PlaneCurve(MultiPoly.from_json(payload))
    if kind == "bicurve":
        return BiCurve(MultiPoly.from_json(payload))
    if kind == "map_p2":
        return BirMapP2([MultiPoly.from_json(c) for c in payload["components"]], strip=False)
    if kind == "map_ruled":
        return RuledMap([MultiPoly.from_json(c) for c in payload["z"]],
                        [MultiPoly.from_json(c) for c in payload["w"]],
                        payload.get("source", "P2"), strip=False)
    if kind == "moebius":
        return MoebiusMap.from_json(payload)
    if kind == "point":
        return ProjPoint.from_json(payload)
    raise ValueError(f"unknown kind {kind!r}")
