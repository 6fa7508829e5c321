"""Arithmetic on the Legendre curve y^2 = x(x-1)(x-lam).

Points are affine pairs of rationals or the point at infinity ``W_INF``,
which is the identity of the group law.  The involution ``i_q(p)`` is the
third point of the line through p and q, so that p + q + i_q(p) ~ 3 w_inf.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable

from .exactcore import ExactError, IrrationalRoot, MultiPoly, RatFunc, as_scalar, univariate_view
from .projgeom import MoebiusMap, P1, ProjPoint

__all__ = [
    "NonzeroDegree",
    "InvalidPuncture",
    "NotOnCurve",
    "CurveParams",
    "EllipticPoint",
    "W_INF",
    "DivisorClass",
    "weierstrass_point",
    "third_collinear",
    "involution",
    "group_add",
    "group_neg",
    "group_mul",
    "divisor_sum",
    "divisor_class_trivial",
    "torsion_translate",
    "beta",
    "projection",
    "epsilon_maps",
    "eval_epsilon",
    "epsilon_invariance_residual",
    "prop2sec_check",
    "rational_sqrt",
    "random_point",
    "random_curve_with_point",
    "reduce_mod_curve",
    "symbolic_chord",
]


class NonzeroDegree(ExactError):
    pass


class InvalidPuncture(ExactError):
    pass


class NotOnCurve(ExactError):
    pass


def rational_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class CurveParams:
    """Legendre parameter; the curve is smooth when lam is not 0 or 1."""

    lam: Fraction

    def __post_init__(self):
        lam = Fraction(as_scalar(self.lam))
        if lam in (0, 1):
            raise ValueError("lambda must avoid 0 and 1")
        object.__setattr__(self, "lam", lam)

    def rhs(self, x):
        x = Fraction(x)
        return x * (x - 1) * (x - self.lam)

    def contains(self, p: "EllipticPoint") -> bool:
        return p.inf or p.y * p.y == self.rhs(p.x)

    def to_json(self):
        return {"lambda": str(self.lam)}

    @classmethod
    def from_json(cls, data):
        return cls(Fraction(data["lambda"]))


@dataclass(frozen=True)
class EllipticPoint:
    """Affine point (x, y) or the point at infinity."""

    x: Fraction | None = None
    y: Fraction | None = None
    inf: bool = False

    def __post_init__(self):
        if self.inf:
            object.__setattr__(self, "x", None)
            object.__setattr__(self, "y", None)
        else:
            if self.x is None or self.y is None:
                raise ValueError("affine point needs both coordinates")
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def at(cls, x, y) -> "EllipticPoint":
        return cls(Fraction(x), Fraction(y))

    def to_json(self):
        if self.inf:
            return {"inf": True}
        return {"x": str(self.x), "y": str(self.y)}

    @classmethod
    def from_json(cls, data):
        if data.get("inf"):
            return W_INF
        return cls(Fraction(data["x"]), Fraction(data["y"]))

    def __str__(self):
        return "w_inf" if self.inf else f"({self.x}, {self.y})"


W_INF = EllipticPoint(inf=True)


def weierstrass_point(curve: CurveParams, k) -> EllipticPoint:
    """w_k for k in {0, 1, 'lam', 'inf'} (numeric lam also accepted)."""
    if k in ("inf", None):
        return W_INF
    if k == "lam":
        return EllipticPoint(curve.lam, 0)
    k = Fraction(k)
    if k not in (0, 1, curve.lam):
        raise ValueError("not a branch point")
    return EllipticPoint(k, 0)


def _check(curve, *pts):
    for p in pts:
        if not curve.contains(p):
            raise NotOnCurve(f"{p} is not on the curve")


def third_collinear(curve: CurveParams, p: EllipticPoint, q: EllipticPoint) -> EllipticPoint:
    """Third intersection of the line pq with the cubic (tangent when p = q)."""
    _check(curve, p, q)
    if p.inf and q.inf:
        return W_INF  # w_inf is a flex
    if p.inf or q.inf:
        r = q if p.inf else p
        return EllipticPoint(r.x, -r.y)
    lam = curve.lam
    if p.x == q.x:
        if p.y != q.y or p.y == 0:
            return W_INF
        m = (3 * p.x * p.x - 2 * (1 + lam) * p.x + lam) / (2 * p.y)
    else:
        m = (q.y - p.y) / (q.x - p.x)
    x3 = m * m + (1 + lam) - p.x - q.x
    y3 = p.y + m * (x3 - p.x)
    return EllipticPoint(x3, y3)


def involution(curve: CurveParams, q: EllipticPoint):
    """The involution i_q as a function."""
    return lambda p: third_collinear(curve, p, q)


def group_neg(curve: CurveParams, p: EllipticPoint) -> EllipticPoint:
    return third_collinear(curve, p, W_INF)


def group_add(curve: CurveParams, p: EllipticPoint, q: EllipticPoint) -> EllipticPoint:
    return group_neg(curve, third_collinear(curve, p, q))


def group_mul(curve: CurveParams, n: int, p: EllipticPoint) -> EllipticPoint:
    if n < 0:
        return group_mul(curve, -n, group_neg(curve, p))
    acc, base = W_INF, p
    while n:
        if n & 1:
            acc = group_add(curve, acc, base)
        base = group_add(curve, base, base)
        n >>= 1
    return acc


def divisor_sum(curve: CurveParams, divisor: Iterable) -> tuple:
    """(degree, group-law sum) of a formal sum of (point, multiplicity)."""
    deg = 0
    acc = W_INF
    for p, m in divisor:
        deg += m
        acc = group_add(curve, acc, group_mul(curve, m, p))
    return deg, acc


def divisor_class_trivial(curve: CurveParams, divisor: Iterable) -> bool:
    """Abel's criterion for a degree-0 divisor."""
    deg, s = divisor_sum(curve, divisor)
    if deg != 0:
        raise NonzeroDegree(f"divisor has degree {deg}")
    return s.inf


@dataclass(frozen=True)
class DivisorClass:
    """Class of a divisor D stored as (deg D, reduction of D - deg(D) w_inf)."""

    degree: int
    reduction: EllipticPoint

    @classmethod
    def of(cls, curve: CurveParams, divisor: Iterable) -> "DivisorClass":
        deg, s = divisor_sum(curve, divisor)
        return cls(deg, s)

    @classmethod
    def point(cls, p: EllipticPoint, degree: int = 0) -> "DivisorClass":
        """Class of O(p - w_inf) shifted to the given degree by multiples of w_inf."""
        return cls(degree, p)

    def add(self, curve, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.degree + other.degree, group_add(curve, self.reduction, other.reduction))

    def neg(self, curve) -> "DivisorClass":
        return DivisorClass(-self.degree, group_neg(curve, self.reduction))

    def twist_inf(self, n: int = 1) -> "DivisorClass":
        """Tensor with O(n w_inf)."""
        return DivisorClass(self.degree + n, self.reduction)

    def is_torsion2(self, curve) -> bool:
        return self.degree == 0 and group_add(curve, self.reduction, self.reduction).inf

    def to_json(self):
        return {"degree": self.degree, "point": self.reduction.to_json()}


# ------------------------------------------------------------ projection


def projection(p: EllipticPoint) -> ProjPoint:
    """Hyperelliptic cover pi(x, y) = x as a point of P^1."""
    return P1(None) if p.inf else P1(p.x)


def beta(k, lam) -> MoebiusMap:
    """Möbius map induced on the x-line by translation by w_k.

    ``k`` is one of 0, 1, 'lam', 'inf'; ``lam`` may be a scalar or a polynomial.
    """
    L = MultiPoly.coerce(lam) if not isinstance(lam, MultiPoly) else lam
    if k == 0:
        return MoebiusMap(0, L, 1, 0)
    if k == 1:
        return MoebiusMap(1, -L, 1, -1)
    if k == "lam":
        return MoebiusMap(L, -L, 1, -L)
    if k in ("inf", None):
        return MoebiusMap.identity()
    raise ValueError(f"unknown branch label {k!r}")


def _branch_point(curve, k):
    if k == "lam":
        return EllipticPoint(curve.lam, 0)
    if k in ("inf", None):
        return W_INF
    return EllipticPoint(Fraction(k), 0)


def torsion_translate(curve: CurveParams, p: EllipticPoint, k) -> EllipticPoint:
    """i_{w_k}(i_{w_inf}(p)), which is translation by the 2-torsion point w_k."""
    return third_collinear(curve, group_neg(curve, p), _branch_point(curve, k))


# --------------------------------------------------------- epsilon maps


def epsilon_maps(curve: CurveParams, t, s):
    """The pair (eps1, eps2) of rational functions in (x, y).

    eps1 = (t y - s x)/(y - s) and eps2 = (t y + s x)/(y + s).
    """
    t = Fraction(as_scalar(t))
    s = Fraction(as_scalar(s))
    if s * s != curve.rhs(t):
        raise InvalidPuncture("s^2 differs from t(t-1)(t-lam)")
    if t in (0, 1, curve.lam):
        raise InvalidPuncture("t must avoid the branch points")
    x, y = MultiPoly.vars_of("x", "y")
    e1 = RatFunc(t * y - s * x, y - s)
    e2 = RatFunc(t * y + s * x, y + s)
    return e1, e2


def epsilon_invariance_residual(curve: CurveParams, t, s, j: int) -> MultiPoly:
    """Numerator of eps_j o i_{t_j} - eps_j reduced modulo the curve equation.

    t_1 = (t, s) and t_2 = (t, -s); the residual is zero exactly when eps_j is
    invariant under the involution i_{t_j}.
    """
    eps = epsilon_maps(curve, t, s)[j - 1]
    tj = (Fraction(as_scalar(t)), Fraction(as_scalar(s)) * (1 if j == 1 else -1))
    x, y = MultiPoly.vars_of("x", "y")
    X, Y = symbolic_chord((x, y), tj, curve.lam)
    image = eps.subs({"x": X, "y": Y})
    diff = image.num * eps.den - eps.num * image.den
    return reduce_mod_curve(diff, lam=curve.lam)


def eval_epsilon(eps: RatFunc, p: EllipticPoint, t) -> ProjPoint:
    """Evaluate an epsilon map at a point, projectively.  At w_inf the value is t."""
    if p.inf:
        return P1(t)
    num = eps.num.subs({"x": p.x, "y": p.y}).constant_value()
    den = eps.den.subs({"x": p.x, "y": p.y}).constant_value()
    if num == 0 and den == 0:
        raise ValueError("indeterminate evaluation")
    return ProjPoint([den, num])


def prop2sec_check(curve: CurveParams, p: EllipticPoint, q: EllipticPoint) -> bool:
    """Whether q is a fixed point of i_p."""
    return third_collinear(curve, q, p) == q


# ---------------------------------------------------------------- sampling


def random_point(curve: CurveParams, rng: random.Random, height: int = 30, tries: int = 20000):
    """Rational point found by sampling x = a/b and keeping square right-hand sides."""
    for _ in range(tries):
        a = rng.randint(-height, height)
        b = rng.randint(1, height)
        x = Fraction(a, b)
        y = rational_sqrt(curve.rhs(x))
        if y is not None:
            return EllipticPoint(x, y if rng.random() < 0.5 else -y)
    raise IrrationalRoot("no rational point found by sampling")


def random_curve_with_point(rng: random.Random, height: int = 20):
    """Random curve and a non-Weierstrass point on it.

    Picks x, y first and solves for lam from y^2 = x(x-1)(x-lam).
    """
    while True:
        x = Fraction(rng.randint(-height, height), rng.randint(1, height))
        y = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if x in (0, 1) or y == 0:
            continue
        lam = x - y * y / (x * (x - 1))
        if lam in (0, 1):
            continue
        return CurveParams(lam), EllipticPoint(x, y)


# ------------------------------------------------------- symbolic helpers


def reduce_mod_curve(p: MultiPoly, yvar: str = "y", xvar: str = "x", lam=None) -> MultiPoly:
    """Reduce y-degree below 2 using y^2 = x(x-1)(x-lam)."""
    L = MultiPoly.var("lam") if lam is None else MultiPoly.coerce(lam)
    x = MultiPoly.var(xvar)
    rhs = x * (x - 1) * (x - L)
    even = MultiPoly.const(0)
    odd = MultiPoly.const(0)
    for k, c in enumerate(univariate_view(p, yvar)):
        if k % 2 == 0:
            even = even + c * rhs ** (k // 2)
        else:
            odd = odd + c * rhs ** (k // 2)
    return even + odd * MultiPoly.var(yvar)


def symbolic_chord(p, q, lam, tangent: bool = False):
    """Third collinear point of symbolic points p = (xp, yp), q = (xq, yq).

    Coordinates are RatFunc; the result is exact in the function field of
    the curve (the curve equation is not used by the chord formula itself).
    """
    xp, yp = (RatFunc.coerce(v) for v in p)
    xq, yq = (RatFunc.coerce(v) for v in q)
    L = RatFunc.coerce(lam)
    if tangent:
        m = (3 * xp * xp - 2 * (1 + L) * xp + L) / (2 * yp)
    else:
        m = (yq - yp) / (xq - xp)
    x3 = m * m + (1 + L) - xp - xq
    y3 = yp + m * (x3 - xp)
    return x3, y3
