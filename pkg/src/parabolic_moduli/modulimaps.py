"""The concrete configuration: five points of P^2_b, ten lines and a conic,
the branch curve Gamma in P^1_z x P^1_w, the ramification cubic Sigma, the
covering map Phi and the involutions tau, sigma_k, psi_T together with the
twists and the swap of P^1 x P^1.

Parameters are (lam, t), either rational numbers or the symbols ``lam`` and
``t``.  Branch labels are ``0, 1, "lam", "inf"`` and the puncture label is
``"t"``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .elliptic import (
    CurveParams,
    EllipticPoint,
    W_INF,
    divisor_class_trivial,
    projection,
    rational_sqrt,
    third_collinear,
)
from .exactcore import (
    ExactError,
    Inconsistent,
    IrrationalRoot,
    MultiPoly,
    NotDivisible,
    RatFunc,
    as_scalar,
    binary_discriminant,
    exact_divide,
    nullspace,
    poly_gcd,
    rational_roots,
    scalar_key,
)
from .projgeom import (
    P2_VARS,
    BiCurve,
    BirMapP2,
    DegeneratePoints,
    MoebiusMap,
    NotContracted,
    P1,
    PlaneCurve,
    ProjPoint,
    RuledMap,
    compose,
    conic_through,
    contracts_to,
    exceptional_image,
    exceptional_lands_in,
    identity_p2,
    identity_ruled,
    lands_in,
    line_through,
    map_equal,
    moebius_through,
    swap_map,
)
from .elliptic import beta as _beta

__all__ = [
    "BRANCH",
    "LABELS",
    "DegenerateParams",
    "UnderdeterminedFit",
    "InvalidRoot",
    "IrrationalBranch",
    "NotGammaType",
    "ModuliParams",
    "ConfigObject",
    "special_points",
    "standard_lines",
    "standard_conic",
    "printed_conic",
    "config_objects",
    "object_curve",
    "gamma_curve",
    "sigma_cubic",
    "named_map",
    "MAP_TAGS",
    "tangency_ordinate",
    "phiW_UC",
    "phiW_UC_derived",
    "derive_phiW",
    "theta_change",
    "TorelliResult",
    "torelli_reconstruct",
    "fiber_quadratic",
    "action_on_objects",
    "ACTION_TABLE",
    "ACTION_TABLE_DERIVED",
    "PHI_TANGENT_LIST",
    "generate_group",
    "segre_model",
    "sigma_label_tag",
    "twist_label_tag",
    "label_str",
    "parse_label",
    "line_key",
    "fiber_size",
    "image_of_object",
    "phi_sends_to",
    "maps_differ_fast",
    "segre_smooth",
    "tau_sigma_cofactors",
    "phi_pullback_of_gamma",
]

BRANCH = (0, 1, "lam", "inf")
LABELS = (0, 1, "lam", "inf", "t")


class DegenerateParams(ExactError):
    pass


class UnderdeterminedFit(ExactError):
    pass


class InvalidRoot(ExactError):
    pass


class IrrationalBranch(ExactError):
    pass


class NotGammaType(ExactError):
    pass


def label_str(k) -> str:
    return {0: "0", 1: "1", "lam": "lam", "inf": "inf", "t": "t"}[k]


def parse_label(text):
    return {"0": 0, "1": 1, "lam": "lam", "lambda": "lam", "inf": "inf", "t": "t"}[str(text)]


# ------------------------------------------------------------ parameters


@dataclass(frozen=True)
class ModuliParams:
    """Parameters (lam, t[, s]); each is a constant or a symbolic polynomial."""

    lam: MultiPoly
    t: MultiPoly
    s: MultiPoly | None = None

    def __post_init__(self):
        for name in ("lam", "t"):
            object.__setattr__(self, name, MultiPoly.coerce(getattr(self, name)))
        if self.s is not None:
            object.__setattr__(self, "s", MultiPoly.coerce(self.s))
        if self.is_numeric():
            lam, t = self.lam_value, self.t_value
            if lam in (0, 1):
                raise DegenerateParams("lambda must avoid 0 and 1")
            if t in (0, 1, lam):
                raise DegenerateParams("t must avoid 0, 1 and lambda")
            if self.s is not None:
                s = Fraction(self.s.constant_value())
                if s * s != t * (t - 1) * (t - lam):
                    raise DegenerateParams("s^2 differs from t(t-1)(t-lam)")

    @classmethod
    def symbolic(cls, with_s: bool = False) -> "ModuliParams":
        return cls(MultiPoly.var("lam"), MultiPoly.var("t"), MultiPoly.var("s") if with_s else None)

    @classmethod
    def rational(cls, lam, t, s=None) -> "ModuliParams":
        lam = Fraction(as_scalar(lam))
        t = Fraction(as_scalar(t))
        if s is None:
            s = rational_sqrt(t * (t - 1) * (t - lam))
        return cls(MultiPoly.const(lam), MultiPoly.const(t), None if s is None else MultiPoly.const(s))

    def is_numeric(self) -> bool:
        return self.lam.is_constant() and self.t.is_constant()

    @property
    def lam_value(self):
        return Fraction(self.lam.constant_value())

    @property
    def t_value(self):
        return Fraction(self.t.constant_value())

    @property
    def s_value(self):
        return None if self.s is None else Fraction(self.s.constant_value())

    def value(self, k):
        """Affine value of a label (None for infinity)."""
        return {0: MultiPoly.const(0), 1: MultiPoly.const(1), "lam": self.lam, "t": self.t, "inf": None}[k]

    def point(self, k) -> ProjPoint:
        return P1(self.value(k))

    def specialize(self, lam, t) -> "ModuliParams":
        return ModuliParams.rational(lam, t)

    def curve(self) -> CurveParams:
        return CurveParams(self.lam_value)

    def to_json(self):
        out = {"lambda": str(self.lam), "t": str(self.t)}
        if self.s is not None:
            out["s"] = str(self.s)
        return out


def _b():
    return MultiPoly.vars_of("b0", "b1", "b2")


# --------------------------------------------------------- configuration


def special_points(params: ModuliParams) -> dict:
    """D_0 = (1:0:0), D_1 = (1:1:1), D_lam = (1:lam:lam^2), D_t = (1:t:t^2), D_inf = (0:0:1)."""
    L, t = params.lam, params.t
    return {
        0: ProjPoint([1, 0, 0]),
        1: ProjPoint([1, 1, 1]),
        "lam": ProjPoint([1, L, L * L]),
        "t": ProjPoint([1, t, t * t]),
        "inf": ProjPoint([0, 0, 1]),
    }


def line_key(i, j) -> tuple:
    a, b = sorted((i, j), key=LABELS.index)
    return (a, b)


def standard_lines(params: ModuliParams) -> dict:
    """The ten lines Pi_ij keyed by label pairs in the order 0, 1, lam, inf, t."""
    D = special_points(params)
    out = {}
    for i, j in itertools.combinations(LABELS, 2):
        out[line_key(i, j)] = line_through(D[i], D[j])
    return out


def standard_conic(params: ModuliParams) -> PlaneCurve:
    """Unique conic through the five points, by an exact 5x6 fit."""
    D = special_points(params)
    return conic_through([D[k] for k in LABELS])


def printed_conic() -> PlaneCurve:
    """The conic equation as printed in the source text, b1^2 - b0*b1."""
    b0, b1, b2 = _b()
    return PlaneCurve(b1 * b1 - b0 * b1)


@dataclass(frozen=True)
class ConfigObject:
    """One of the sixteen (-1)-curves: exceptional Pi_i, a line Pi_ij, or the conic Pi."""

    kind: str  # "exc", "line", "conic"
    labels: tuple = ()

    def __str__(self):
        if self.kind == "conic":
            return "Pi"
        return "Pi_" + ",".join(label_str(k) for k in self.labels)

    @classmethod
    def exc(cls, i):
        return cls("exc", (i,))

    @classmethod
    def line(cls, i, j):
        return cls("line", line_key(i, j))

    @classmethod
    def conic(cls):
        return cls("conic", ())


def config_objects() -> list:
    objs = [ConfigObject.exc(i) for i in LABELS]
    objs += [ConfigObject.line(i, j) for i, j in itertools.combinations(LABELS, 2)]
    objs.append(ConfigObject.conic())
    return objs


def object_curve(obj: ConfigObject, params: ModuliParams) -> PlaneCurve:
    if obj.kind == "line":
        return standard_lines(params)[obj.labels]
    if obj.kind == "conic":
        return standard_conic(params)
    raise ValueError("exceptional curves have no plane equation")


# ---------------------------------------------------------- Gamma, Sigma


def _gamma_affine(L, t, z, w):
    return (t**2 * z**2 - 2 * t * z**2 * w + t**2 * w**2 - 2 * t * z * w**2 + z**2 * w**2
            - 2 * L * t * z - 2 * L * t * w + 2 * (2 * (L + 1) * t - t**2 - L) * z * w + L**2)


def gamma_curve(params: ModuliParams) -> BiCurve:
    """Branch curve of bidegree (2, 2), bihomogenized with z = z1/z0, w = w1/w0."""
    z, w = MultiPoly.vars_of("z", "w")
    aff = _gamma_affine(params.lam, params.t, z, w)
    poly = aff.homogenize(("z",), "_h0").homogenize(("w",), "_h1")
    poly = poly.subs({"z": MultiPoly.var("z1"), "_h0": MultiPoly.var("z0"),
                      "w": MultiPoly.var("w1"), "_h1": MultiPoly.var("w0")})
    return BiCurve(poly, (2, 2))


def sigma_cubic(params: ModuliParams) -> PlaneCurve:
    """Ramification cubic Sigma of the covering map."""
    b0, b1, b2 = _b()
    L, t = params.lam, params.t
    poly = (-b0**2 * b1 * L * t**2 + b0**2 * b2 * L * t + (L * t**2 + L * t + t**2) * b0 * b1**2
            - (t**2 + L) * b1**3 - 2 * (L * t + t) * b0 * b1 * b2 + b1**2 * b2 * (L + t + 1)
            + b0 * b2**2 * t - b1 * b2**2)
    return PlaneCurve(poly)


# ----------------------------------------------------------------- maps


def _tau_rows(L, t, printed: bool = False):
    b0, b1, b2 = _b()
    lead = b0**2 if printed else L * t**2 * b0**2
    return [
        (L * t * b0 * b1 + (t**2 - t * L - t) * b0 * b2 + (-t**2 - L) * b1**2 + (t + L + 1) * b1 * b2 - b2**2)
        * (b0 * t - b1),
        (b0 * L - b1 * L - b1 + b2) * (b0 * t - b1) * (b1 * t - b2) * t,
        (lead + (-t**2 * L - t**2 - t * L) * b0 * b1 + (t * L + t - L) * b0 * b2 + (t**2 + L) * b1**2 - t * b1 * b2)
        * (b1 * t - b2) * t,
    ]


def _sigma_rows(k, L, t):
    b0, b1, b2 = _b()
    if k == 0:
        return [
            (L * b0 + (-1 - L + t) * b1) * (t * b1 - b2),
            L * (t * b0 - b1) * (t * b1 - b2),
            L * (t * b0 - b1) * ((-L + t + L * t) * b1 - t * b2),
        ]
    if k == 1:
        return [
            (t * b0 - (1 + t) * b1 + b2) * ((L - t - 1) * b1 + t * b0),
            t * (L * b0 - b1) * (t * b0 + (-1 - t) * b1 + b2),
            t * (L**2 * t * b0**2 + (L**2 + t) * b1**2 + (-L**2 - L * t - L**2 * t) * b0 * b1
                 + (L - t + L * t) * b0 * b2 - L * b1 * b2),
        ]
    if k == "lam":
        return [
            (L * t * b0 + (1 - L - t) * b1) * (L * t * b0 - (L + t) * b1 + b2),
            L * t * (b0 - b1) * (L * t * b0 - (L + t) * b1 + b2),
            L * t * (L * t * b0**2 + (1 + L * t) * b1**2 - (L + t + L * t) * b0 * b1
                     + (L + t - L * t) * b0 * b2 - b1 * b2),
        ]
    raise ValueError(k)


def _psi_rows(L, t):
    b0, b1, b2 = _b()
    return [
        (-L - t**2) * b1**2 - b2**2 + L * t * b0 * b1 + (t**2 - t - L * t) * b0 * b2 + (L + t + 1) * b1 * b2,
        t * (L * b0 - (1 + L) * b1 + b2) * (t * b1 - b2),
        t * ((t - L + L * t) * b1 - t * b2) * (L * b0 - (1 + L) * b1 + b2),
    ]


def _phi_tilde(L, t) -> RuledMap:
    b0, b1, b2 = _b()
    return RuledMap((b0 * t - b1, b1 * t - b2), (b1 * b1 - b0 * b2, -b1 * (b0 * L - b1 * L - b1 + b2)), "P2")


MAP_TAGS = (
    "tau", "tau_printed", "sigma0", "sigma1", "sigmaLambda", "psiT",
    "twist0", "twist1", "twistLambda", "twistInf", "swap", "phiTilde", "identity",
)


def named_map(tag: str, params: ModuliParams):
    """Map by name.  ``tau`` carries the corrected b0^2 coefficient of its last
    row; ``tau_printed`` keeps the coefficient as typeset."""
    L, t = params.lam, params.t
    if tag == "tau":
        return BirMapP2(_tau_rows(L, t))
    if tag == "tau_printed":
        return BirMapP2(_tau_rows(L, t, printed=True))
    if tag == "sigma0":
        return BirMapP2(_sigma_rows(0, L, t))
    if tag == "sigma1":
        return BirMapP2(_sigma_rows(1, L, t))
    if tag == "sigmaLambda":
        return BirMapP2(_sigma_rows("lam", L, t))
    if tag == "psiT":
        return BirMapP2(_psi_rows(L, t))
    if tag.startswith("twist"):
        k = {"twist0": 0, "twist1": 1, "twistLambda": "lam", "twistInf": "inf"}[tag]
        m = _beta(k, L)
        return RuledMap.from_moebius(m, m)
    if tag == "swap":
        return swap_map()
    if tag == "phiTilde":
        return _phi_tilde(L, t)
    if tag == "identity":
        return identity_p2()
    if tag == "phiW":
        return phiW_UC(params)
    raise ValueError(f"unknown map tag {tag!r}")


def twist_label_tag(k) -> str:
    return {0: "twist0", 1: "twist1", "lam": "twistLambda", "inf": "twistInf"}[k]


def sigma_label_tag(k) -> str:
    return {0: "sigma0", 1: "sigma1", "lam": "sigmaLambda"}[k]


def tangency_ordinate(params: ModuliParams, k) -> ProjPoint:
    """w-coordinate where the vertical line z = k touches Gamma: beta_k(t)."""
    return _beta(k, params.lam).apply(params.point("t"))


# --------------------------------------------------------------- phi_W


def phiW_UC(params: ModuliParams):
    """Both components in the chart (c, l) as typeset."""
    L, t = params.lam, params.t
    c, l = MultiPoly.vars_of("c", "l")
    first = RatFunc(L * (c - 1), c - L)
    second = RatFunc(L * l * (L * (l - 1) + t * (1 - c)), L * (t * (l - c) + l * (c - 1)) + c * t * (1 - l))
    return first, second


def phiW_UC_derived(params: ModuliParams):
    """Components re-derived from the tangency systems (closed form)."""
    L, t = params.lam, params.t
    c, l = MultiPoly.vars_of("c", "l")
    first = RatFunc(L * (c - 1), c - L)
    second = RatFunc(L * l * (L * (l - 1) + t * (1 - c) + c - l),
                     L * (t * (l - c) + l * (c - 1)) + c * t * (1 - l))
    return first, second


def _bihom_unknowns(dz: int, dw: int):
    z0, z1, w0, w1 = MultiPoly.vars_of("z0", "z1", "w0", "w1")
    monos = [(i, j) for i in range(dz + 1) for j in range(dw + 1)]
    basis = [z1**i * z0**(dz - i) * w1**j * w0**(dw - j) for i, j in monos]
    return monos, basis


def _eval_at(p: MultiPoly, zpt: ProjPoint, wpt: ProjPoint):
    return p.subs({"z0": zpt.coords[0], "z1": zpt.coords[1], "w0": wpt.coords[0], "w1": wpt.coords[1]})


def _tangency_rows(basis, zpt, wpt):
    """Rows forcing a double root in w at wpt on the vertical line z = zpt."""
    rows = []
    for expr in (lambda m: m, lambda m: m.diff("w0"), lambda m: m.diff("w1")):
        rows.append([_eval_at(expr(m), zpt, wpt) for m in basis])
    return rows


def _node_rows(basis, zpt, wpt):
    rows = [[_eval_at(m, zpt, wpt) for m in basis]]
    for v in ("z0", "z1", "w0", "w1"):
        rows.append([_eval_at(m.diff(v), zpt, wpt) for m in basis])
    return rows


def _fit(rows, basis):
    ker = nullspace(rows)
    if len(ker) != 1:
        raise UnderdeterminedFit(f"tangency system has a {len(ker)}-dimensional solution space")
    return sum((c * m for c, m in zip(ker[0], basis)), MultiPoly.const(0))


def _linear_root(form: MultiPoly, v0: str, v1: str) -> ProjPoint:
    """Root of a linear binary form a*v1 + b*v0 as the point (a : -b)."""
    a = form.coefficient({v1: 1, v0: 0})
    b = form.coefficient({v0: 1, v1: 0})
    return ProjPoint([a, -b])


def derive_phiW(params: ModuliParams, c=None, l=None):
    """Re-derive both components of phi_W from tangency conditions.

    First component: a bidegree-(2,2) form with vertical tangencies at
    (0,0), (1,1), (lam,c), (inf,inf); the second root of its w = inf section
    is the component.  Second component: a bidegree-(3,2) form with the same
    tangencies and a node at (t, l); the third root of its w = l section is
    the component.  Returns two P^1 points with coordinates in (c, l).
    """
    L, t = params.lam, params.t
    c = MultiPoly.var("c") if c is None else MultiPoly.coerce(c)
    l = MultiPoly.var("l") if l is None else MultiPoly.coerce(l)
    tang = [(P1(0), P1(0)), (P1(1), P1(1)), (P1(L), P1(c)), (P1(None), P1(None))]
    # first component
    _, basis = _bihom_unknowns(2, 2)
    rows = [r for zp, wp in tang for r in _tangency_rows(basis, zp, wp)]
    P = _fit(rows, basis)
    section = P.subs({"w0": 0, "w1": 1})  # w = infinity
    z0 = MultiPoly.var("z0")
    try:
        rest = exact_divide(section, z0)  # the root at z = infinity
    except NotDivisible:
        raise UnderdeterminedFit("fitted curve does not pass through (inf, inf)")
    first = _linear_root(rest, "z0", "z1") if rest.degree_in(("z0", "z1")) == {1} else P1(None)
    # second component
    _, basis3 = _bihom_unknowns(3, 2)
    rows = [r for zp, wp in tang for r in _tangency_rows(basis3, zp, wp)]
    rows += _node_rows(basis3, P1(t), P1(l))
    P3 = _fit(rows, basis3)
    section = P3.subs({"w0": 1, "w1": l})
    z0, z1 = MultiPoly.vars_of("z0", "z1")
    node = (z1 - t * z0) ** 2
    try:
        rest = exact_divide(section, node)
    except NotDivisible:
        raise UnderdeterminedFit("fitted curve lacks the node over t")
    second = _linear_root(rest, "z0", "z1")
    return first, second


# ---------------------------------------------------------------- theta


def theta_change(params: ModuliParams, r: EllipticPoint, convention: str = "corrected"):
    """Coordinate change theta = theta1 x theta2 determined by a root r.

    With p_k = i_{w_k}(r) and q_k = i_{w_inf}(p_k):

    * ``convention="printed"`` fits theta1(pi(p_k)) = k for k in {0, 1, inf}
      and checks k = lam;
    * ``convention="corrected"`` fits k in {0, 1, lam} and checks
      theta1(pi(p_inf)) = t.

    theta2 is fitted the same way on the points pi(q_k).  Raises InvalidRoot
    when 2r is not linearly equivalent to t1 + w_inf, and Inconsistent when
    the fourth point check fails.
    """
    if params.s is None:
        raise InvalidRoot("the puncture t1 = (t, s) needs a rational s")
    curve = params.curve()
    t, s = params.t_value, params.s_value
    t1 = EllipticPoint(t, s)
    if not divisor_class_trivial(curve, [(r, 2), (t1, -1), (W_INF, -1)]):
        raise InvalidRoot("2r is not equivalent to t1 + w_inf")
    lam = curve.lam
    wk = {0: EllipticPoint(0, 0), 1: EllipticPoint(1, 0), "lam": EllipticPoint(lam, 0), "inf": W_INF}
    p = {k: third_collinear(curve, r, wk[k]) for k in BRANCH}
    q = {k: third_collinear(curve, p[k], W_INF) for k in BRANCH}
    value = {0: P1(0), 1: P1(1), "lam": P1(lam), "inf": P1(None)}
    if convention == "printed":
        fit_keys, check_key, check_val = (0, 1, "inf"), "lam", value["lam"]
    elif convention == "corrected":
        fit_keys, check_key, check_val = (0, 1, "lam"), "inf", P1(t)
    else:
        raise ValueError("convention must be 'printed' or 'corrected'")
    maps = []
    for pts in (p, q):
        try:
            m = moebius_through([(projection(pts[k]), value[k]) for k in fit_keys])
        except DegeneratePoints as exc:
            raise Inconsistent(f"fit points collide: {exc}")
        if m.apply(projection(pts[check_key])) != check_val:
            raise Inconsistent(f"fourth point check fails at k = {label_str(check_key)}")
        maps.append(m)
    return tuple(maps)


# --------------------------------------------------------------- Torelli


@dataclass
class TorelliResult:
    lam: Fraction
    t: Fraction
    zmap: MoebiusMap
    wmap: MoebiusMap
    candidates: list = field(default_factory=list)

    @property
    def pair(self):
        return (self.lam, self.t)

    def to_json(self):
        return {
            "lambda": str(self.lam),
            "t": str(self.t),
            "zmap": self.zmap.to_json(),
            "wmap": self.wmap.to_json(),
            "class": [[str(a), str(b)] for a, b in self.candidates],
        }


def _tangent_roots(curve: BiCurve, ruling: str):
    if ruling == "vertical":
        disc = binary_discriminant(curve.poly, "w0", "w1")
        v0, v1 = "z0", "z1"
    else:
        disc = binary_discriminant(curve.poly, "z0", "z1")
        v0, v1 = "w0", "w1"
    if disc.is_zero():
        raise NotGammaType("discriminant vanishes identically")
    if disc.degree_in((v0, v1)) != {4}:
        raise NotGammaType("discriminant is not a binary quartic")
    try:
        roots = rational_roots(disc, v1, projective=True, x0=v0)
    except IrrationalRoot as exc:
        raise IrrationalBranch(str(exc))
    pts = [ProjPoint(list(r)) for r in roots]
    distinct = []
    for p in pts:
        if all(p != q for q in distinct):
            distinct.append(p)
    if len(distinct) != 4:
        raise NotGammaType(f"only {len(distinct)} distinct tangent lines in the {ruling} ruling")
    return distinct


def _affine_scalar(p: ProjPoint):
    a = p.affine()
    return None if a is None else a.evaluate({})


def torelli_reconstruct(curve: BiCurve) -> TorelliResult:
    """Recover (lam, t) from a bidegree (2, 2) curve of Gamma type.

    Every ordering of the vertical tangent abscissas gives a Möbius map
    sending three of them to 0, 1, inf and the fourth to lam'; the horizontal
    side is normalized to {0, 1, inf, lam'} likewise, and t' is read as the
    tangency ordinate over z = inf.  Orderings whose normalized curve is
    Gamma(lam', t') up to scalar are kept; the smallest (lam', t') in the
    (numerator, denominator) order is returned with its normalizing pair.
    """
    if curve.bidegree != (2, 2):
        raise NotGammaType("curve is not of bidegree (2, 2)")
    if any(v not in ("z0", "z1", "w0", "w1") for v in curve.poly.vars):
        raise ValueError("torelli_reconstruct needs rational coefficients")
    zr = _tangent_roots(curve, "vertical")
    wr = _tangent_roots(curve, "horizontal")
    found = {}
    for a, b, c, d in itertools.permutations(zr):
        gz = moebius_through([(a, P1(0)), (b, P1(1)), (c, P1(None))])
        lam = _affine_scalar(gz.apply(d))
        if lam is None or lam in (0, 1):
            continue
        for a2, b2, c2, d2 in itertools.permutations(wr):
            gw = moebius_through([(a2, P1(0)), (b2, P1(1)), (c2, P1(None))])
            if _affine_scalar(gw.apply(d2)) != lam:
                continue
            normalized = curve.pullback(gz.inverse(), gw.inverse())
            at_inf = normalized.poly.subs({"z0": 0, "z1": 1})
            tval = _double_root(at_inf, "w0", "w1")
            if tval is None or tval in (0, 1, lam):
                continue
            std = gamma_curve(ModuliParams.rational(lam, tval))
            if normalized.equals_up_to_scalar(std):
                key = (scalar_key(lam), scalar_key(tval))
                if key not in found:
                    found[key] = (Fraction(lam), Fraction(tval), gz, gw)
    if not found:
        raise NotGammaType("no normalization reproduces the standard curve")
    best = min(found)
    lam, tval, gz, gw = found[best]
    cands = sorted(((v[0], v[1]) for v in found.values()), key=lambda p: (scalar_key(p[0]), scalar_key(p[1])))
    return TorelliResult(lam, tval, gz, gw, cands)


def _double_root(form: MultiPoly, v0: str, v1: str):
    """Affine value of the double root of a binary quadratic, or None."""
    if form.is_zero():
        return None
    try:
        roots = rational_roots(form, v1, projective=True, x0=v0)
    except IrrationalRoot:
        return None
    if len(roots) != 2 or roots[0] != roots[1]:
        return None
    a0, a1 = roots[0]
    if a0 == 0:
        return None
    return Fraction(a1) / Fraction(a0)


# ---------------------------------------------------------- double cover


def fiber_quadratic(params: ModuliParams, zpt: ProjPoint | None = None, wpt: ProjPoint | None = None):
    """Binary quadratic in (s0, s1) cutting the fiber of Phi over (z, w).

    Points of the fiber are s0*D_t + s1*Q on the line through D_t with
    z-coordinate z, where Q = (0, z0, z0*t + z1); the quadratic is the
    restriction of the conic of w-coordinate w.  Without points the fiber
    over the symbolic point (z0:z1), (w0:w1) is returned.
    """
    z0, z1, w0, w1 = MultiPoly.vars_of("z0", "z1", "w0", "w1")
    if zpt is not None:
        z0, z1 = zpt.coords
    if wpt is not None:
        w0, w1 = wpt.coords
    t = params.t
    s0, s1 = MultiPoly.vars_of("s0", "s1")
    Dt = special_points(params)["t"].coords
    Q = (MultiPoly.const(0), z0, z0 * t + z1)
    pt = [s0 * a + s1 * b for a, b in zip(Dt, Q)]
    phi = _phi_tilde(params.lam, t)
    W0, W1 = phi.wpair
    sub = dict(zip(P2_VARS, pt))
    return w0 * W1.subs(sub) - w1 * W0.subs(sub)


def fiber_size(params: ModuliParams, zpt: ProjPoint, wpt: ProjPoint) -> int:
    """Number of distinct geometric points of the fiber (1 or 2) over a point."""
    q = fiber_quadratic(params, zpt, wpt)
    if q.is_zero():
        raise ValueError("fiber quadratic vanishes")
    d = binary_discriminant(q, "s0", "s1")
    return 1 if d.is_zero() else 2


# ------------------------------------------------------ action on objects


def _find_curve_image(contains, params) -> list:
    hits = []
    for obj in config_objects():
        if obj.kind == "exc":
            continue
        if contains(object_curve(obj, params)):
            hits.append(obj)
    return hits


def _match_point(pt: ProjPoint, params) -> ConfigObject | None:
    for k, D in special_points(params).items():
        if pt == D:
            return ConfigObject.exc(k)
    return None


def image_of_object(f: BirMapP2, obj: ConfigObject, params: ModuliParams):
    """Image of one of the sixteen curves under a plane involution."""
    if obj.kind == "exc":
        D = special_points(params)[obj.labels[0]]
        kind, data = exceptional_image(f, D)
        if kind == "point":
            return _match_point(data, params)
        hits = _find_curve_image(lambda C: exceptional_lands_in(f, D, C), params)
        return hits[0] if len(hits) == 1 else None
    curve = object_curve(obj, params)
    try:
        pt = contracts_to(f, curve)
        return _match_point(pt, params)
    except NotContracted:
        pass
    hits = _find_curve_image(lambda C: lands_in(f, curve, C), params)
    return hits[0] if len(hits) == 1 else None


def action_on_objects(f: BirMapP2, params: ModuliParams) -> dict:
    return {obj: image_of_object(f, obj, params) for obj in config_objects()}


def _E(i):
    return ConfigObject.exc(i)


def _Ln(i, j):
    return ConfigObject.line(i, j)


def _others(k):
    return [i for i in (0, 1, "lam") if i != k]


def _action_table():
    """Pairings of the involution table, keyed by map tag."""
    table = {}
    rows = [(_E("t"), ConfigObject.conic())]
    rows += [(_E(i), _Ln(i, "t")) for i in (0, 1, "lam", "inf")]
    for i in (0, 1, "lam"):
        j, k = _others(i)
        rows.append((_Ln(i, "inf"), _Ln(j, k)))
    table["tau"] = rows
    for k in (0, 1, "lam"):
        rows = [(_E(k), _Ln("t", "inf")), (_Ln(k, "t"), _E("inf"))]
        i, j = _others(k)
        rows += [(_Ln(i, "inf"), _Ln(j, "t")), (_Ln(j, "inf"), _Ln(i, "t"))]
        rows += [(_Ln(i, k), _E(i)), (_Ln(j, k), _E(j))]
        rows.append((ConfigObject.conic(), _Ln(i, j)))
        table[sigma_label_tag(k)] = rows
    rows = [(_Ln("t", "inf"), ConfigObject.conic()), (_E("t"), _E("inf"))]
    for k in (0, 1, "lam"):
        i, j = _others(k)
        rows.append((_Ln(i, j), _E(k)))
    table["psiT"] = rows
    return table


ACTION_TABLE = _action_table()


def _derived_action_table():
    """Full pairings computed from the maps; the sigma_k rows pair i with j."""
    table = {"tau": list(ACTION_TABLE["tau"])}
    for k in (0, 1, "lam"):
        i, j = _others(k)
        rows = [(_E(k), _Ln("t", "inf")), (_Ln(k, "t"), _E("inf")), (_E("t"), _Ln(k, "inf"))]
        rows += [(_Ln(i, "inf"), _Ln(j, "inf")), (_Ln(i, "t"), _Ln(j, "t")), (_Ln(i, k), _Ln(j, k))]
        rows += [(_E(i), _E(j)), (ConfigObject.conic(), _Ln(i, j))]
        table[sigma_label_tag(k)] = rows
    rows = list(ACTION_TABLE["psiT"])
    rows += [(_Ln(i, "inf"), _Ln(i, "t")) for i in (0, 1, "lam")]
    table["psiT"] = rows
    return table


ACTION_TABLE_DERIVED = _derived_action_table()


def _phi_tangent_list():
    """Images of the sixteen curves under Phi as vertical (V) or horizontal (H) tangents."""
    rows = []
    for i in (0, 1, "lam", "inf"):
        rows.append((_E(i), ("V", i)))
        rows.append((_Ln(i, "t"), ("V", i)))
    rows.append((_E("t"), ("H", "inf")))
    rows.append((ConfigObject.conic(), ("H", "inf")))
    for i in (0, 1, "lam"):
        j, k = _others(i)
        rows.append((_Ln(i, "inf"), ("H", i)))
        rows.append((_Ln(j, k), ("H", i)))
    return rows


PHI_TANGENT_LIST = _phi_tangent_list()


def phi_sends_to(params: ModuliParams, obj: ConfigObject, target, phi: RuledMap | None = None) -> bool:
    """Whether Phi maps the object into the tangent line target = ("V"|"H", label)."""
    phi = _phi_tilde(params.lam, params.t) if phi is None else phi
    kind, k = target
    tgt = (kind, params.point(k))
    if obj.kind == "exc":
        D = special_points(params)[obj.labels[0]]
        return exceptional_lands_in(phi, D, tgt)
    return lands_in(phi, object_curve(obj, params), tgt)


# ----------------------------------------------------------------- group


def _random_probe(rng, params):
    """Random numeric specialization for fast inequality pre-checks."""
    vals = {"lam": Fraction(rng.randint(2, 40), rng.randint(1, 7)), "t": Fraction(rng.randint(-40, -2), rng.randint(1, 7))}
    pt = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)]
    return vals, pt


def _probe_value(f: BirMapP2, vals, pt):
    comps = [c.subs(vals).subs(dict(zip(P2_VARS, pt))) for c in f.components]
    if all(c.is_zero() for c in comps):
        return None
    return ProjPoint(comps)


def maps_differ_fast(f: BirMapP2, g: BirMapP2, rng: random.Random, probes: int = 5) -> bool:
    """True only if some probe shows different values (a proof of inequality)."""
    for _ in range(probes):
        vals, pt = _random_probe(rng, None)
        a, b = _probe_value(f, vals, pt), _probe_value(g, vals, pt)
        if a is not None and b is not None and a != b:
            return True
    return False


def generate_group(gens: Sequence, equal=map_equal, seed: int = 0, limit: int = 64):
    """Closure of a set of maps under composition (BFS with projective dedup)."""
    rng = random.Random(seed)
    if isinstance(gens[0], BirMapP2):
        elements = [identity_p2()]
    else:
        elements = [identity_ruled()]
    frontier = list(elements)
    while frontier:
        new = []
        for e in frontier:
            for g in gens:
                h = compose(g, e)
                dup = False
                for x in elements:
                    if isinstance(h, BirMapP2) and maps_differ_fast(h, x, rng, probes=2):
                        continue
                    if equal(h, x):
                        dup = True
                        break
                if not dup:
                    elements.append(h)
                    new.append(h)
                    if len(elements) > limit:
                        raise RuntimeError("group closure exceeded the limit")
        frontier = new
    return elements


# ------------------------------------------------------------- Segre model


def segre_model(params: ModuliParams):
    """Quadrics f = u0*u3 - u1*u2 and g(u) with g(Segre(z, w)) = Gamma(z, w)."""
    u = MultiPoly.vars_of("u0", "u1", "u2", "u3")
    # u_{ij} = z_i w_j with index 2*i + j
    G = gamma_curve(params).poly
    g = MultiPoly.const(0)
    for e, c in G.terms.items():
        ex = dict(zip(G.vars, e))
        i = ex.get("z1", 0)
        j = ex.get("w1", 0)
        i1, j1 = min(i, 1), min(j, 1)
        i2, j2 = i - i1, j - j1
        g = g + u[2 * i1 + j1] * u[2 * i2 + j2] * c
    f = u[0] * u[3] - u[1] * u[2]
    return f, g


def _rank(rows) -> int:
    ncols = len(rows[0])
    return ncols - len(nullspace(rows)) if rows else 0


def segre_smooth(params: ModuliParams) -> dict:
    """Smoothness certificate for the double cover v^2 = g on the quadric f = 0.

    Off v = 0 the Jacobian of {f, v^2 - g} has rank 2 because its last
    column is (0, 2v) and grad f vanishes only at u = 0.  On v = 0 the rank
    is 2 exactly where Gamma is smooth, which is certified in each affine
    chart of P^1 x P^1 by a constant gcd of the resultants of Gamma with its
    two partial derivatives.  The Jacobian rank is also evaluated directly at
    the eight tangency points.
    """
    if not params.is_numeric():
        raise ValueError("segre_smooth needs rational parameters")
    from .exactcore import resultant

    G = gamma_curve(params).poly
    charts = {}
    for zi in (0, 1):
        for wi in (0, 1):
            sub = {Z_OF[zi]: 1, Z_OF[1 - zi]: MultiPoly.var("z"), W_OF[wi]: 1, W_OF[1 - wi]: MultiPoly.var("w")}
            h = G.subs(sub)
            r1 = resultant(h, h.diff("w"), "w")
            r2 = resultant(h, h.diff("z"), "w")
            common = poly_gcd(r1, r2)
            ok = True
            if not common.is_constant():
                # a shared z-root may come from different w; check each one
                roots = rational_roots(common, "z")
                if len(roots) < common.degree("z"):
                    ok = False  # irrational common roots are not certified
                roots = sorted(set(roots))
                for z in roots:
                    fib = [q.subs({"z": z}) for q in (h, h.diff("z"), h.diff("w"))]
                    g = fib[0]
                    for q in fib[1:]:
                        g = poly_gcd(g, q) if not q.is_zero() else g
                    if not g.is_constant():
                        ok = False
            charts[f"z{zi}w{wi}"] = ok
    f, g = segre_model(params)
    u = ("u0", "u1", "u2", "u3")
    tangency = []
    for k in BRANCH:
        for zp, wp in ((params.point(k), tangency_ordinate(params, k)), (tangency_ordinate(params, k), params.point(k))):
            a0, a1 = zp.coords
            b0_, b1_ = wp.coords
            pt = {"u0": a0 * b0_, "u1": a0 * b1_, "u2": a1 * b0_, "u3": a1 * b1_}
            rows = [[f.diff(x).subs(pt) for x in u] + [MultiPoly.const(0)],
                    [(-g).diff(x).subs(pt) for x in u] + [MultiPoly.const(0)]]
            tangency.append(_rank(rows) == 2)
    return {"charts": charts, "tangency_points": tangency,
            "smooth": all(charts.values()) and all(tangency)}


Z_OF = ("z0", "z1")
W_OF = ("w0", "w1")


def tau_sigma_cofactors(params: ModuliParams, tau: BirMapP2 | None = None, sigma: PlaneCurve | None = None):
    """Cofactors L_ij with minor_ij(tau(b), b) = L_ij * Sigma (NotDivisible if absent)."""
    tau = (named_map("tau", params) if tau is None else tau).components
    b = _b()
    sigma = (sigma_cubic(params) if sigma is None else sigma).poly
    out = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        minor = tau[i] * b[j] - tau[j] * b[i]
        out[(i, j)] = exact_divide(minor, sigma)
    return out


def phi_pullback_of_gamma(params: ModuliParams, gamma: BiCurve | None = None):
    """Gamma composed with Phi, and its quotient by Sigma (raises if not divisible)."""
    phi = named_map("phiTilde", params)
    G = (gamma_curve(params) if gamma is None else gamma).poly
    (z0, z1), (w0, w1) = phi.zpair, phi.wpair
    pulled = G.subs({"z0": z0, "z1": z1, "w0": w0, "w1": w1})
    return pulled, exact_divide(pulled, sigma_cubic(params).poly)
