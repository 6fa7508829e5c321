"""Certificate suite: every identity of the library as a named, exact check.

Each check returns a witness (a JSON value) and a verdict.  Checks draw the
maps and curves they test from a :class:`Formulas` table, so the suite can
be rerun on a deliberately corrupted formula to confirm that some
certificate notices.
"""

from __future__ import annotations

import fnmatch
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import elliptic as ell
from . import modulimaps as mm
from . import stability as st
from .exactcore import ExactError, MultiPoly, NotDivisible, binary_discriminant, rational_roots
from .projgeom import (
    BiCurve,
    BirMapP2,
    MoebiusMap,
    P1,
    PlaneCurve,
    ProjPoint,
    compose,
    critical_locus,
    identity_p2,
    identity_ruled,
    intersection_multiplicity_line,
    map_equal,
    map_residuals,
)

__all__ = [
    "InvalidPlan",
    "Skip",
    "Certificate",
    "VerifyPlan",
    "Formulas",
    "REGISTRY",
    "PRINTED_CHECKS",
    "INVARIANT_MANIFEST",
    "MUTATION_TARGETS",
    "registered_checks",
    "run_check",
    "run_suite",
    "report",
    "report_json",
    "mutation_sites",
    "mutation_scan",
]


class InvalidPlan(ExactError):
    pass


class Skip(Exception):
    """Raised by a check that cannot run for the given parameters."""


@dataclass
class Certificate:
    name: str
    status: str  # "pass", "fail", "skipped"
    witness: object = None
    elapsed: float = 0.0  # milliseconds
    reason: str | None = None

    def to_json(self, timings: bool = False):
        out = {"name": self.name, "status": self.status, "witness": self.witness}
        if self.reason is not None:
            out["reason"] = self.reason
        if timings:
            out["elapsed_ms"] = round(self.elapsed, 3)
        return out


@dataclass(frozen=True)
class VerifyPlan:
    """What to run: mode, parameters, name patterns, workers, seed, mutation."""

    mode: str = "symbolic"
    params: tuple = ()
    patterns: tuple = ("*",)
    jobs: int = 1
    seed: int = 0
    include_printed: bool = False
    mutation: tuple | None = None  # (target, component, term index)

    def validate(self):
        if self.mode not in ("symbolic", "specialized"):
            raise InvalidPlan(f"unknown mode {self.mode!r}")
        if self.mode == "specialized":
            if not self.params:
                raise InvalidPlan("specialized mode needs at least one (lambda, t)")
            for lt in self.params:
                try:
                    mm.ModuliParams.rational(*lt)
                except mm.DegenerateParams as exc:
                    raise InvalidPlan(str(exc))
        if self.jobs < 1:
            raise InvalidPlan("jobs must be positive")
        if self.mutation is not None and self.mutation[0] not in MUTATION_TARGETS:
            raise InvalidPlan(f"mutation target must be one of {MUTATION_TARGETS}")

    def moduli(self) -> list:
        if self.mode == "symbolic":
            return [mm.ModuliParams.symbolic()]
        return [mm.ModuliParams.rational(*lt) for lt in self.params]


# ------------------------------------------------------------- formulas

MUTATION_TARGETS = ("tau", "sigma0", "gamma")


class Formulas:
    """The maps and curves under test for one parameter set."""

    def __init__(self, params: mm.ModuliParams, mutation=None):
        self.params = params
        self.maps = {tag: mm.named_map(tag, params) for tag in
                     ("tau", "sigma0", "sigma1", "sigmaLambda", "psiT", "phiTilde",
                      "twist0", "twist1", "twistLambda", "twistInf", "swap")}
        self.gamma = mm.gamma_curve(params)
        self.sigma = mm.sigma_cubic(params)
        if mutation is not None:
            self._mutate(*mutation)

    def _mutate(self, target, component, index):
        if target == "gamma":
            self.gamma = BiCurve(_flip(self.gamma.poly, index))
            return
        comps = list(self.maps[target].components)
        comps[component] = _flip(comps[component], index)
        self.maps[target] = BirMapP2(comps, strip=False)

    def sigma_map(self, k):
        return self.maps[mm.sigma_label_tag(k)]

    def twist(self, k):
        return self.maps[mm.twist_label_tag(k)]


def _flip(poly: MultiPoly, index: int) -> MultiPoly:
    """Flip the sign of one term (in the descending term order)."""
    e, c = poly.sorted_terms()[index]
    mono = MultiPoly.monomial(dict(zip(poly.vars, e)), c)
    return poly - mono * 2


def mutation_sites(params: mm.ModuliParams, target: str) -> list:
    """All (component, term index) pairs of a target formula."""
    f = Formulas(params)
    if target == "gamma":
        return [(0, i) for i in range(len(f.gamma.poly.sorted_terms()))]
    comps = f.maps[target].components
    return [(c, i) for c, comp in enumerate(comps) for i in range(len(comp.sorted_terms()))]


# --------------------------------------------------------------- context


class Context:
    def __init__(self, plan: VerifyPlan, name: str):
        self.plan = plan
        self.name = name
        self.params = plan.moduli()
        self._formulas = {}

    @property
    def symbolic(self) -> bool:
        return self.plan.mode == "symbolic"

    def rng(self, salt: str = "") -> random.Random:
        return random.Random(f"{self.plan.seed}:{self.name}:{salt}")

    def formulas(self, params) -> Formulas:
        key = (str(params.lam), str(params.t))
        if key not in self._formulas:
            self._formulas[key] = Formulas(params, self.plan.mutation)
        return self._formulas[key]

    def numeric_params(self, default=((2, 5), (3, -1))) -> list:
        """Numeric parameter sets: the plan's, or fixed ones in symbolic mode."""
        if self.symbolic:
            return [mm.ModuliParams.rational(*lt) for lt in default]
        return self.params


def _residuals(f, g):
    return [str(r) for r in map_residuals(f, g)][:3]


def _params_json(p):
    return p.to_json()


# ======================================================= elliptic checks


def _sample_curve_points(rng, n):
    """n triples (curve, p, q, r) of rational points on seeded random curves."""
    out = []
    while len(out) < n:
        curve, p = ell.random_curve_with_point(rng)
        q = ell.group_mul(curve, 2, p)
        r = ell.group_add(curve, q, ell.weierstrass_point(curve, rng.choice([0, 1, "lam"])))
        if rng.random() < 0.5:
            try:
                q = ell.random_point(curve, rng, height=12, tries=300)
            except ExactError:
                pass
        out.append((curve, p, q, r))
    return out


def check_elliptic_group_axioms(ctx):
    rng = ctx.rng()
    for curve, p, q, r in _sample_curve_points(rng, 50):
        add = lambda a, b: ell.group_add(curve, a, b)
        if add(add(p, q), r) != add(p, add(q, r)):
            return False, {"associativity": [str(p), str(q), str(r)], "lambda": str(curve.lam)}
        if add(p, q) != add(q, p):
            return False, {"commutativity": [str(p), str(q)]}
        if add(p, ell.W_INF) != p:
            return False, {"identity": str(p)}
        if not add(p, ell.third_collinear(curve, p, ell.W_INF)).inf:
            return False, {"inverse": str(p)}
    return True, {"samples": 50}


def check_elliptic_pi_equivariance(ctx):
    rng = ctx.rng()
    for curve, p, q, r in _sample_curve_points(rng, 20):
        for k in mm.BRANCH:
            lhs = ell.projection(ell.torsion_translate(curve, p, k))
            rhs = ell.beta(k, curve.lam).apply(ell.projection(p))
            if lhs != rhs:
                return False, {"point": str(p), "k": mm.label_str(k), "lambda": str(curve.lam)}
    return True, {"samples": 20, "labels": 4}


def check_elliptic_beta_relations(ctx):
    lams = [p.lam for p in ctx.params]
    for lam in lams:
        b = {k: ell.beta(k, lam) for k in mm.BRANCH}
        if b[0] @ b[1] != b["lam"]:
            return False, {"beta0*beta1": str(b[0] @ b[1]), "beta_lam": str(b["lam"])}
        for k in mm.BRANCH:
            if not (b[k] @ b[k]).is_identity():
                return False, {"square": mm.label_str(k), "value": str(b[k] @ b[k])}
    return True, {"lambda": [str(x) for x in lams]}


def _puncture_instances(rng, n):
    """(curve, r, t1) with t1 = 2r, t1 not a Weierstrass point."""
    out = []
    while len(out) < n:
        curve, r = ell.random_curve_with_point(rng)
        t1 = ell.group_add(curve, r, r)
        if t1.inf or t1.y == 0 or t1.x in (0, 1, curve.lam):
            continue
        out.append((curve, r, t1))
    return out


def check_elliptic_epsilon_invariance(ctx):
    for curve, r, t1 in _puncture_instances(ctx.rng(), 6):
        for j in (1, 2):
            res = ell.epsilon_invariance_residual(curve, t1.x, t1.y, j)
            if not res.is_zero():
                return False, {"j": j, "residual": str(res), "lambda": str(curve.lam), "t1": str(t1)}
    return True, {"samples": 6}


def check_elliptic_prop2sec(ctx):
    rng = ctx.rng()
    agree = {True: 0, False: 0}
    for i, (curve, p, q, r) in enumerate(_sample_curve_points(rng, 50)):
        if i % 2 == 0:
            p = ell.third_collinear(curve, q, q)  # tangent line at q
        lhs = ell.prop2sec_check(curve, p, q)
        rhs = ell.divisor_class_trivial(curve, [(p, 1), (q, 2), (ell.W_INF, -3)])
        if lhs != rhs:
            return False, {"p": str(p), "q": str(q), "check": lhs, "divisor_criterion": rhs}
        agree[lhs] += 1
    return True, {"true_cases": agree[True], "false_cases": agree[False]}


# ====================================================== stability checks


def _stability_catalog(ctx):
    rng = ctx.rng("catalog")
    while True:
        curve, p = ell.random_curve_with_point(rng)
        L = ell.DivisorClass.point(p)
        if not L.is_torsion2(curve):
            break
    Lk = ell.DivisorClass.point(ell.weierstrass_point(curve, 0))
    return st.catalog(curve, L, Lk)


def check_stability_wall_characterization(ctx):
    cat = _stability_catalog(ctx)
    grid = st.weight_grid()
    n = 0
    for E in cat:
        for mu in grid:
            got = st.classify(E, mu).status == "strictly_semistable"
            want = st.chamber(E.parity, mu) == "=" and st.wall_role(E) is not None
            if got != want:
                return False, {"bundle": str(E), "mu": str(mu), "semistable": got}
            n += 1
    return True, {"pairs": n}


def check_stability_chamber_constancy(ctx):
    cat = _stability_catalog(ctx)
    for E in cat:
        seen = {}
        for mu in st.weight_grid():
            side = st.chamber(E.parity, mu)
            if side == "=":
                continue
            status = st.classify(E, mu).status
            if seen.setdefault(side, status) != status:
                return False, {"bundle": str(E), "chamber": side, "statuses": [seen[side], status]}
    return True, {"bundles": len(cat)}


def check_stability_graded_partner(ctx):
    cat = _stability_catalog(ctx)
    wall = {"odd": st.WeightVector(Fraction(2, 5), Fraction(3, 5)),
            "even": st.WeightVector(Fraction(2, 5), Fraction(2, 5))}
    classes = {}
    n = 0
    for E in cat:
        role = st.wall_role(E)
        if role is None:
            continue
        mu = wall[E.parity]
        g = st.graded(E, mu)
        key = (E.parity, frozenset(g))
        classes.setdefault((E.parity, role[1]), set()).add(key)
        if role[0] != "=":
            P = st.wall_partner(E)
            if st.graded(P, mu) != g:
                return False, {"bundle": str(E), "partner": str(P)}
            if st.wall_partner(P) != E:
                return False, {"bundle": str(E), "not_involutive": str(st.wall_partner(P))}
            n += 1
    return True, {"partners": n}


def check_stability_index_affine(ctx):
    cat = _stability_catalog(ctx)
    W = st.WeightVector
    for E in cat:
        for L in st.admissible_subbundles(E):
            f0 = st.parabolic_index(E, L, W(0, 0))
            a = st.parabolic_index(E, L, W(1, 0)) - f0
            b = st.parabolic_index(E, L, W(0, 1)) - f0
            if a not in (-1, 0, 1) or b not in (-1, 0, 1):
                return False, {"bundle": str(E), "sub": L.name, "coefficients": [str(a), str(b)]}
            for mu in st.weight_grid():
                if st.parabolic_index(E, L, mu) != f0 + a * mu.mu1 + b * mu.mu2:
                    return False, {"bundle": str(E), "sub": L.name, "mu": str(mu)}
    return True, {"bundles": len(cat)}


# ===================================================== modulimaps checks


def check_gamma_invariance(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        G = F.gamma
        if G.bidegree != (2, 2):
            return False, {"bidegree": list(G.bidegree)}
        if G.swapped() != G:
            return False, {"swap_residual": str(G.swapped().poly - G.poly)}
        for k in mm.BRANCH:
            b = ell.beta(k, p.lam)
            if G.pullback(b, b) != G:
                return False, {"twist": mm.label_str(k), "pullback": str(G.pullback(b, b).poly)}
    return True, {"twists": 4, "swap": True}


def check_covering_conjugacy(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        phi = F.maps["phiTilde"]
        for k in (0, 1, "lam"):
            lhs, rhs = compose(phi, F.sigma_map(k)), compose(F.twist(k), phi)
            if not map_equal(lhs, rhs):
                return False, {"sigma": mm.label_str(k), "residuals": _residuals(lhs, rhs)}
        lhs, rhs = compose(phi, F.maps["psiT"]), compose(F.maps["swap"], phi)
        if not map_equal(lhs, rhs):
            return False, {"psiT": True, "residuals": _residuals(lhs, rhs)}
    return True, {"identities": 4}


def check_involutivity(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        for tag in ("tau", "sigma0", "sigma1", "sigmaLambda", "psiT"):
            sq = compose(F.maps[tag], F.maps[tag])
            if not map_equal(sq, identity_p2()):
                return False, {"map": tag, "residuals": _residuals(sq, identity_p2())}
        lhs = compose(F.maps["sigma0"], F.maps["sigma1"])
        if not map_equal(lhs, F.maps["sigmaLambda"]):
            return False, {"sigma0*sigma1": _residuals(lhs, F.maps["sigmaLambda"])}
    return True, {"involutions": 5, "sigma0*sigma1": "sigmaLambda"}


def check_tau_involution(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        tau, phi = F.maps["tau"], F.maps["phiTilde"]
        sq = compose(tau, tau)
        if not map_equal(sq, identity_p2()):
            return False, {"tau^2": _residuals(sq, identity_p2())}
        lhs = compose(phi, tau)
        if not map_equal(lhs, phi):
            return False, {"phi*tau": _residuals(lhs, phi)}
    return True, {"tau^2": "id", "phi*tau": "phi"}


def check_sigma_pointwise(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        try:
            cof = mm.tau_sigma_cofactors(p, F.maps["tau"], F.sigma)
        except NotDivisible as exc:
            return False, {"not_divisible": str(exc)}
        for key, c in cof.items():
            if c.is_zero() or max(c.degree_in(("b0", "b1", "b2"))) != 1:
                return False, {"minor": list(key), "cofactor": str(c)}
    return True, {"cofactors": {f"{i}{j}": str(c) for (i, j), c in cof.items()}}


def check_ramification(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        crit = critical_locus(F.maps["phiTilde"])
        if crit != F.sigma:
            return False, {"critical_locus": str(crit.poly)}
        G = F.gamma.poly
        (z0, z1), (w0, w1) = F.maps["phiTilde"].zpair, F.maps["phiTilde"].wpair
        pulled = G.subs({"z0": z0, "z1": z1, "w0": w0, "w1": w1})
        try:
            from .exactcore import exact_divide

            exact_divide(pulled, F.sigma.poly)
        except NotDivisible:
            return False, {"gamma_pullback_not_in_sigma": True}
    return True, {"critical_locus": "Sigma", "phi(Sigma)": "in Gamma"}


def check_tangent_line_images(ctx):
    for p in ctx.params:
        phi = ctx.formulas(p).maps["phiTilde"]
        for obj, target in mm.PHI_TANGENT_LIST:
            if not mm.phi_sends_to(p, obj, target, phi):
                return False, {"object": str(obj), "target": f"{target[0]}_{mm.label_str(target[1])}"}
    return True, {"objects": len(mm.PHI_TANGENT_LIST)}


def _root_set_ok(disc: MultiPoly, v0, v1, lam) -> bool:
    x0, x1 = MultiPoly.vars_of(v0, v1)
    expected = x0 * x1 * (x1 - x0) * (x1 - lam * x0)
    from .projgeom import _proportional

    return _proportional(disc, expected)


def check_gamma_tangency_points(ctx):
    for p in ctx.params:
        G = ctx.formulas(p).gamma
        dz = binary_discriminant(G.poly, "w0", "w1")
        dw = binary_discriminant(G.poly, "z0", "z1")
        if not _root_set_ok(dz, "z0", "z1", p.lam) or not _root_set_ok(dw, "w0", "w1", p.lam):
            return False, {"disc_z": str(dz), "disc_w": str(dw)}
        for k in mm.BRANCH:
            w = mm.tangency_ordinate(p, k)
            try:
                m = intersection_multiplicity_line(G, "vertical", p.point(k), w)
            except ExactError:
                m = 0
            if m != 2:
                return False, {"k": mm.label_str(k), "ordinate": str(w), "multiplicity": m}
    note = "the vertical tangent over z = 0 touches at w = lam/t = beta_0(t); the touching points are beta_k(t)"
    return True, {"ordinates": "beta_k(t)", "note": note}


def check_twist_tangent_action(ctx):
    for p in ctx.params:
        for k in (0, 1, "lam"):
            b = ell.beta(k, p.lam)
            if b.apply(p.point("inf")) != p.point(k):
                return False, {"k": mm.label_str(k), "H_inf": str(b.apply(p.point("inf")))}
            i, j = [x for x in (0, 1, "lam") if x != k]
            if b.apply(p.point(i)) != p.point(j) or b.apply(p.point(j)) != p.point(i):
                return False, {"k": mm.label_str(k), "pair": [mm.label_str(i), mm.label_str(j)]}
    return True, {"double_transpositions": 3}


def check_group_closure(ctx):
    # generators are commuting involutions, so every element is one; the
    # conjugation identities on generators give the homomorphism to ruled maps
    for p in ctx.params:
        F = ctx.formulas(p)
        tags = ("sigma0", "sigma1", "psiT", "tau")
        gens = [F.maps[t] for t in tags]
        for t, g in zip(tags, gens):
            if not map_equal(compose(g, g), identity_p2()):
                return False, {"not_involutive": t}
        for a in range(4):
            for b in range(a + 1, 4):
                if not map_equal(compose(gens[a], gens[b]), compose(gens[b], gens[a])):
                    return False, {"not_commuting": [tags[a], tags[b]]}
        try:
            G = mm.generate_group(gens, seed=ctx.plan.seed)
        except RuntimeError as exc:
            return False, {"closure": str(exc)}
        if len(G) != 16:
            return False, {"order": len(G)}
        H = mm.generate_group([F.maps["twist0"], F.maps["twist1"], F.maps["swap"]], seed=ctx.plan.seed)
        phi = F.maps["phiTilde"]
        images = []
        for t, g in zip(tags, gens):
            lhs = compose(phi, g)
            hits = [h for h in H if map_equal(lhs, compose(h, phi))]
            if len(hits) != 1:
                return False, {"conjugate_of": t, "matches": len(hits)}
            images.append(hits[0])
        if not map_equal(images[3], identity_ruled()):
            return False, {"tau_image": str(images[3])}
        image = mm.generate_group([h for h in images if not map_equal(h, identity_ruled())] or [identity_ruled()])
        if len(H) != 8 or len(image) != 8:
            return False, {"ruled_order": len(H), "image_order": len(image)}
    return True, {"order": 16, "ruled_order": 8, "kernel": "tau"}


def check_action_table(ctx):
    for p in ctx.params:
        F = ctx.formulas(p)
        for tag, rows in mm.ACTION_TABLE_DERIVED.items():
            act = mm.action_on_objects(F.maps[tag], p)
            for x, y in rows:
                if act[x] != y or act[y] != x:
                    return False, {"map": tag, "pair": [str(x), str(y)],
                                   "images": [str(act[x]), str(act[y])]}
        # the chosen lift: sigma_k(Pi_{t,inf}) = Pi_k
        for k in (0, 1, "lam"):
            img = mm.image_of_object(F.sigma_map(k), mm.ConfigObject.line("t", "inf"), p)
            if img != mm.ConfigObject.exc(k):
                return False, {"lift": mm.label_str(k), "image": str(img)}
    return True, {"maps": len(mm.ACTION_TABLE_DERIVED), "objects": 16}


def _points_on_gamma(G: BiCurve, rng, lam, count):
    """Rational points of Gamma found by sampling z and solving the w-quadratic."""
    pts = []
    for _ in range(count * 40):
        z = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
        form = G.poly.subs({"z0": 1, "z1": z})
        if form.is_zero():
            continue
        try:
            roots = rational_roots(form, "w1", projective=True, x0="w0")
        except ExactError:
            continue
        a0, a1 = roots[0]
        pts.append((P1(z), ProjPoint([a0, a1])))
        if len(pts) >= count:
            break
    return pts


def check_double_cover_degree(ctx):
    sym = mm.ModuliParams.symbolic()
    if ctx.symbolic:
        q = mm.fiber_quadratic(sym)
        disc = binary_discriminant(q, "s0", "s1")
        if BiCurve(disc) != ctx.formulas(sym).gamma:
            return False, {"fiber_discriminant": str(disc)}
    counts = {"off": 0, "on": 0}
    for p in ctx.numeric_params():
        G = ctx.formulas(p).gamma
        rng = ctx.rng(str(p.lam) + str(p.t))
        n = 0
        while n < 20:
            z = P1(Fraction(rng.randint(-40, 40), rng.randint(1, 9)))
            w = P1(Fraction(rng.randint(-40, 40), rng.randint(1, 9)))
            if G.contains(z, w):
                continue
            if mm.fiber_size(p, z, w) != 2:
                return False, {"off_gamma": [str(z), str(w)], "params": _params_json(p)}
            n += 1
        counts["off"] += n
        on = [(p.point(k), mm.tangency_ordinate(p, k)) for k in mm.BRANCH]
        on += _points_on_gamma(G, rng, p.lam, 4)
        for z, w in on:
            if not G.contains(z, w) or mm.fiber_size(p, z, w) != 1:
                return False, {"on_gamma": [str(z), str(w)], "params": _params_json(p)}
        counts["on"] += len(on)
    return True, counts


# ---------------------------------------------------------------- extras


def check_conic_through_points(ctx):
    for p in ctx.params:
        C = mm.standard_conic(p)
        b0, b1, b2 = MultiPoly.vars_of("b0", "b1", "b2")
        if C != PlaneCurve(b1 * b1 - b0 * b2):
            return False, {"conic": str(C.poly)}
        for k, D in mm.special_points(p).items():
            if not C.contains(D):
                return False, {"missing": mm.label_str(k)}
    return True, {"conic": "b1^2 - b0*b2"}


def _random_moebius(rng):
    while True:
        a, b, c, d = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4))
        if a * d - b * c != 0:
            return MoebiusMap(a, b, c, d)


def check_torelli_roundtrip(ctx):
    rng = ctx.rng()
    pairs = [(p.lam_value, p.t_value) for p in ctx.numeric_params(((2, 5), (3, -1), (Fraction(1, 2), 7)))]
    out = []
    for lam, t in pairs:
        G = mm.gamma_curve(mm.ModuliParams.rational(lam, t))
        for moved in (False, True):
            curve = G.pullback(_random_moebius(rng), _random_moebius(rng)) if moved else G
            res = mm.torelli_reconstruct(curve)
            if (lam, t) not in res.candidates:
                return False, {"input": [str(lam), str(t)], "class": res.to_json()["class"]}
        out.append([str(res.lam), str(res.t)])
    return True, {"representatives": out}


def check_segre_smoothness(ctx):
    for p in ctx.numeric_params():
        res = mm.segre_smooth(p)
        if not res["smooth"]:
            return False, {"params": _params_json(p), "charts": res["charts"]}
    return True, {"specializations": len(ctx.numeric_params())}


def check_phiW_rederivation(ctx):
    for p in ctx.params:
        first, second = mm.derive_phiW(p)
        d1, d2 = mm.phiW_UC_derived(p)
        for got, want, tag in ((first, d1, "first"), (second, d2, "second")):
            if not _point_matches(got, want):
                return False, {"component": tag, "derived": str(got)}
    return True, {"components": 2}


def _point_matches(pt: ProjPoint, f) -> bool:
    """P^1 point (a0 : a1) equals the rational function f = num/den."""
    a0, a1 = pt.coords
    return (a1 * f.den - a0 * f.num).is_zero()


def _theta_instances(ctx):
    if ctx.symbolic:
        return [(mm.ModuliParams(c.lam, t1.x, t1.y), r) for c, r, t1 in _puncture_instances(ctx.rng(), 5)]
    out = []
    for p in ctx.params:
        if p.s is None:
            continue
        curve = p.curve()
        t, s = p.t_value, p.s_value
        x = MultiPoly.var("x")
        L = curve.lam
        quartic = (x * x - L) ** 2 - 4 * t * x * (x - 1) * (x - L)
        for xr in set(rational_roots(quartic, "x")):
            yr = ell.rational_sqrt(curve.rhs(xr))
            if yr is None or yr == 0:
                continue
            for r in (ell.EllipticPoint(xr, yr), ell.EllipticPoint(xr, -yr)):
                if ell.group_add(curve, r, r) == ell.EllipticPoint(t, s):
                    out.append((p, r))
    return out


def check_theta_consistency(ctx):
    inst = _theta_instances(ctx)
    if not inst:
        raise Skip("no rational s or no rational r with 2r = t1 for these parameters")
    for p, r in inst:
        try:
            m1, m2 = mm.theta_change(p, r)
        except ExactError as exc:
            return False, {"params": _params_json(p), "r": str(r), "error": str(exc)}
        if m1 != m2:
            return False, {"theta1": str(m1), "theta2": str(m2)}
    return True, {"instances": len(inst), "convention": "corrected"}


# ------------------------------------------------- typeset-formula checks


def check_printed_conic(ctx):
    for p in ctx.params:
        C = mm.printed_conic()
        missing = [mm.label_str(k) for k, D in mm.special_points(p).items() if not C.contains(D)]
        if missing:
            return False, {"printed": str(C.poly), "misses": missing}
    return True, {}


def check_printed_tau(ctx):
    for p in ctx.params:
        tau = mm.named_map("tau_printed", p)
        sq = compose(tau, tau)
        if not map_equal(sq, identity_p2()):
            return False, {"tau_printed^2": _residuals(sq, identity_p2())}
    return True, {}


def check_printed_phiW(ctx):
    for p in ctx.params:
        first, second = mm.derive_phiW(p)
        w1, w2 = mm.phiW_UC(p)
        for got, want, tag in ((first, w1, "first"), (second, w2, "second")):
            if not _point_matches(got, want):
                return False, {"component": tag, "derived": str(got), "printed": str(want)}
    return True, {}


def check_printed_theta(ctx):
    inst = _theta_instances(ctx)
    if not inst:
        raise Skip("no rational r with 2r = t1 for these parameters")
    for p, r in inst:
        try:
            mm.theta_change(p, r, convention="printed")
        except ExactError as exc:
            return False, {"params": _params_json(p), "r": str(r), "error": str(exc)}
    return True, {}


def check_printed_action_table(ctx):
    for p in ctx.params:
        for tag, rows in mm.ACTION_TABLE.items():
            act = mm.action_on_objects(mm.named_map(tag, p), p)
            bad = [[str(x), str(y)] for x, y in rows if act[x] != y or act[y] != x]
            if bad:
                return False, {"map": tag, "rows": bad}
    return True, {}


# -------------------------------------------------------------- registry

REGISTRY: dict = {
    "elliptic_group_axioms": check_elliptic_group_axioms,
    "elliptic_pi_equivariance": check_elliptic_pi_equivariance,
    "elliptic_beta_relations": check_elliptic_beta_relations,
    "elliptic_epsilon_invariance": check_elliptic_epsilon_invariance,
    "elliptic_prop2sec": check_elliptic_prop2sec,
    "stability_wall_characterization": check_stability_wall_characterization,
    "stability_chamber_constancy": check_stability_chamber_constancy,
    "stability_graded_partner": check_stability_graded_partner,
    "stability_index_affine": check_stability_index_affine,
    "gamma_invariance": check_gamma_invariance,
    "covering_conjugacy": check_covering_conjugacy,
    "involutivity": check_involutivity,
    "tau_involution": check_tau_involution,
    "sigma_pointwise": check_sigma_pointwise,
    "ramification": check_ramification,
    "tangent_line_images": check_tangent_line_images,
    "gamma_tangency_points": check_gamma_tangency_points,
    "twist_tangent_action": check_twist_tangent_action,
    "group_closure": check_group_closure,
    "action_table": check_action_table,
    "double_cover_degree": check_double_cover_degree,
    "conic_through_points": check_conic_through_points,
    "torelli_roundtrip": check_torelli_roundtrip,
    "segre_smoothness": check_segre_smoothness,
    "phiW_rederivation": check_phiW_rederivation,
    "theta_consistency": check_theta_consistency,
}

# checks of formulas as typeset; known to fail, run only on request
PRINTED_CHECKS: dict = {
    "printed_conic": check_printed_conic,
    "printed_tau": check_printed_tau,
    "printed_phiW": check_printed_phiW,
    "printed_theta": check_printed_theta,
    "printed_action_table": check_printed_action_table,
}

# one check per listed invariant of the elliptic, stability and modulimaps layers
INVARIANT_MANIFEST = {
    ("elliptic", "group axioms"): "elliptic_group_axioms",
    ("elliptic", "pi-equivariance"): "elliptic_pi_equivariance",
    ("elliptic", "beta relations"): "elliptic_beta_relations",
    ("elliptic", "epsilon invariance"): "elliptic_epsilon_invariance",
    ("elliptic", "prop2sec criterion"): "elliptic_prop2sec",
    ("stability", "wall characterization"): "stability_wall_characterization",
    ("stability", "chamber constancy"): "stability_chamber_constancy",
    ("stability", "graded across partners"): "stability_graded_partner",
    ("stability", "index affine"): "stability_index_affine",
    ("modulimaps", "gamma invariance"): "gamma_invariance",
    ("modulimaps", "conjugacy"): "covering_conjugacy",
    ("modulimaps", "involutivity"): "involutivity",
    ("modulimaps", "pointwise fixing"): "sigma_pointwise",
    ("modulimaps", "ramification"): "ramification",
    ("modulimaps", "tangent-line images"): "tangent_line_images",
    ("modulimaps", "tangency points"): "gamma_tangency_points",
    ("modulimaps", "twist action on tangents"): "twist_tangent_action",
    ("modulimaps", "group closure"): "group_closure",
    ("modulimaps", "action table"): "action_table",
    ("modulimaps", "double cover degree"): "double_cover_degree",
}

# checks that read each mutable formula
MUTATION_CHECKS = {
    "tau": ("tau_involution", "involutivity", "sigma_pointwise", "group_closure"),
    "sigma0": ("involutivity", "covering_conjugacy", "group_closure"),
    "gamma": ("gamma_invariance", "gamma_tangency_points", "ramification", "double_cover_degree"),
}


def registered_checks(include_printed: bool = False) -> list:
    names = list(REGISTRY)
    if include_printed:
        names += list(PRINTED_CHECKS)
    return names


def _lookup(name) -> Callable:
    return REGISTRY.get(name) or PRINTED_CHECKS[name]


def run_check(name: str, plan: VerifyPlan) -> Certificate:
    ctx = Context(plan, name)
    start = time.perf_counter()
    try:
        ok, witness = _lookup(name)(ctx)
        status, reason = ("pass" if ok else "fail"), None
        if not ok and not witness:
            witness = {"failed": True}
    except Skip as exc:
        status, witness, reason = "skipped", None, str(exc)
    except Exception as exc:  # a crash is a failed certificate, with its message as witness
        status, witness, reason = "fail", {"error": f"{type(exc).__name__}: {exc}"}, None
    return Certificate(name, status, witness, 1000 * (time.perf_counter() - start), reason)


def _selected(plan: VerifyPlan) -> list:
    names = registered_checks(plan.include_printed)
    return [n for n in names if any(fnmatch.fnmatchcase(n, pat) for pat in plan.patterns)]


def run_suite(plan: VerifyPlan) -> list:
    plan.validate()
    names = _selected(plan)
    if plan.jobs == 1 or len(names) < 2:
        return [run_check(n, plan) for n in names]
    with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
        return list(pool.map(run_check, names, [plan] * len(names)))


def report(certs, seed=None, mode=None, timings: bool = False) -> dict:
    summary = {"pass": 0, "fail": 0, "skipped": 0}
    for c in certs:
        summary[c.status] += 1
    if seed is not None:
        summary["seed"] = seed
    if mode is not None:
        summary["mode"] = mode
    return {"suite": [c.to_json(timings) for c in certs], "summary": summary}


def report_json(certs, **kw) -> str:
    return json.dumps(report(certs, **kw), indent=2, sort_keys=True)


def mutation_scan(params: mm.ModuliParams, target: str, sites=None) -> list:
    """For each flipped term of a target formula, the first check that fails (or None)."""
    plan_mode = "symbolic" if not params.is_numeric() else "specialized"
    lt = () if plan_mode == "symbolic" else ((params.lam_value, params.t_value),)
    out = []
    for site in sites if sites is not None else mutation_sites(params, target):
        plan = VerifyPlan(mode=plan_mode, params=lt, mutation=(target,) + tuple(site))
        caught = None
        for name in MUTATION_CHECKS[target]:
            if run_check(name, plan).status == "fail":
                caught = name
                break
        out.append((site, caught))
    return out
