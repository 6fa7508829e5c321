"""Parabolic stability of rank 2 bundles with two parabolic points t1, t2.

A bundle is described combinatorially: its underlying type, the line
bundle L it is built from, and for each parabolic point the named
subbundles its direction lies on.  Stability is decided by minimizing the
parabolic index over a finite list of admissible line subbundles; lower
degree subbundles never reach the minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .elliptic import CurveParams, DivisorClass, W_INF
from .exactcore import ExactError, as_scalar

__all__ = [
    "StabilityError",
    "InvalidWeights",
    "InvalidDescriptor",
    "InadmissibleSubbundle",
    "NotOnWall",
    "NotStrictlySemistable",
    "WeightVector",
    "SubbundleDescriptor",
    "BundleDescriptor",
    "Classification",
    "UNDERLYING",
    "parabolic_index",
    "admissible_subbundles",
    "classify",
    "wall_role",
    "wall_partner",
    "graded",
    "chamber",
    "catalog",
    "weight_grid",
]

UNDERLYING = ("E1", "L_plus_Linv_winf", "L_plus_Linv", "E0_twist", "Lk_plus_Lk")
ODD = ("E1", "L_plus_Linv_winf")

# names a parabolic direction may lie on, per underlying type
_NAMES = {
    "E1": ("L",),
    "L_plus_Linv_winf": ("L", "M"),
    "L_plus_Linv": ("L", "Linv"),
    "E0_twist": ("Lk",),
    "Lk_plus_Lk": ("Lk", "Lk'"),
}


class StabilityError(ExactError):
    pass


class InvalidWeights(StabilityError):
    pass


class InvalidDescriptor(StabilityError):
    pass


class InadmissibleSubbundle(StabilityError):
    pass


class NotOnWall(StabilityError):
    pass


class NotStrictlySemistable(StabilityError):
    pass


@dataclass(frozen=True)
class WeightVector:
    mu1: Fraction
    mu2: Fraction

    def __post_init__(self):
        for name in ("mu1", "mu2"):
            v = Fraction(as_scalar(getattr(self, name)))
            if not 0 <= v <= 1:
                raise InvalidWeights(f"{name} = {v} lies outside [0, 1]")
            object.__setattr__(self, name, v)

    def __getitem__(self, i):
        return (self.mu1, self.mu2)[i]

    def __iter__(self):
        return iter((self.mu1, self.mu2))

    def __str__(self):
        return f"({self.mu1}, {self.mu2})"


@dataclass(frozen=True)
class SubbundleDescriptor:
    """A line subbundle: degree, the parabolic points it contains and a name."""

    degree: int
    passes_through: frozenset
    name: str = ""

    def to_json(self):
        return {"name": self.name, "degree": self.degree, "passes_through": sorted(self.passes_through)}


@dataclass(frozen=True)
class BundleDescriptor:
    """Rank 2 parabolic bundle type.

    ``incidence[i]`` is the set of named subbundles containing the direction
    at t_{i+1}.  ``L`` is the degree 0 class the bundle is built from (for
    E0_twist and Lk_plus_Lk it is the torsion class L_k).
    """

    underlying: str
    curve: CurveParams
    L: DivisorClass | None = None
    incidence: tuple = (frozenset(), frozenset())

    def __post_init__(self):
        inc = tuple(frozenset(s) for s in self.incidence)
        object.__setattr__(self, "incidence", inc)
        self._validate()

    @property
    def parity(self) -> str:
        return "odd" if self.underlying in ODD else "even"

    @property
    def degree(self) -> int:
        return 1 if self.parity == "odd" else 0

    def _validate(self):
        u = self.underlying
        if u not in UNDERLYING:
            raise InvalidDescriptor(f"unknown underlying type {u!r}")
        if len(self.incidence) != 2:
            raise InvalidDescriptor("incidence needs one entry per parabolic point")
        names = _NAMES[u]
        for s in self.incidence:
            if not s <= set(names):
                raise InvalidDescriptor(f"{u} directions can only lie on {names}")
            if len(s) > 1:
                raise InvalidDescriptor("a direction lies on at most one named subbundle")
        if self.L is not None and self.L.degree != 0:
            raise InvalidDescriptor("L must have degree 0")
        torsion = self.L is not None and self.L.is_torsion2(self.curve)
        if u in ODD and any("L" in x for x in self.incidence) and not all("L" in x for x in self.incidence):
            # each direction lies on some degree 0 subbundle; only a common one is recorded
            raise InvalidDescriptor("L marks a subbundle through both directions")
        if u == "E1":
            if any(self.incidence) and self.L is None:
                raise InvalidDescriptor("directions on L need the class L")
        elif u in ("L_plus_Linv_winf", "L_plus_Linv"):
            if self.L is None:
                raise InvalidDescriptor(f"{u} needs the class L")
            if u == "L_plus_Linv" and torsion:
                raise InvalidDescriptor("L + L^-1 with L torsion is Lk_plus_Lk")
        else:
            if self.L is None or not torsion:
                raise InvalidDescriptor(f"{u} needs a 2-torsion class L_k")
            if u == "Lk_plus_Lk" and self.incidence[0] != frozenset({"Lk"}):
                raise InvalidDescriptor("t1 lies on the copy named Lk by convention")
            if u == "Lk_plus_Lk" and not all(self.incidence):
                raise InvalidDescriptor("every direction lies on one copy of L_k")

    def on(self, name: str) -> frozenset:
        """Parabolic points (1, 2) whose direction lies on the named subbundle."""
        return frozenset(i + 1 for i, s in enumerate(self.incidence) if name in s)

    def to_json(self):
        return {
            "type": self.underlying,
            "parity": self.parity,
            "L": None if self.L is None else self.L.to_json(),
            "parabolics": [sorted(s) for s in self.incidence],
        }

    def __str__(self):
        inc = ", ".join("{" + ",".join(sorted(s)) + "}" for s in self.incidence)
        return f"{self.underlying}[{inc}]"


def _sub(degree, points, name):
    return SubbundleDescriptor(degree, frozenset(points), name)


def admissible_subbundles(E: BundleDescriptor) -> list:
    """Named subbundles plus the generic ones that can compete for the minimum."""
    u = E.underlying
    both = _sub(-1, {1, 2}, "generic_deg-1")
    if u == "E1":
        subs = []
        if E.L is not None:
            subs.append(_sub(0, E.on("L"), "L"))
        # through each direction pass degree 0 subbundles other than L
        subs += [_sub(0, {1}, "N1"), _sub(0, {2}, "N2"), _sub(0, set(), "N0")]
        return subs + [both]
    if u == "L_plus_Linv_winf":
        # copies of L form a family; each direction off M lies on exactly one
        subs = [_sub(1, E.on("M"), "M")]
        if E.on("L"):
            subs.append(_sub(0, E.on("L"), "L"))
        else:
            subs += [_sub(0, {i}, "L") for i in (1, 2) if i not in E.on("M")]
        return subs + [_sub(0, set(), "L"), both]
    if u == "L_plus_Linv":
        return [_sub(0, E.on("L"), "L"), _sub(0, E.on("Linv"), "Linv"), both]
    if u == "E0_twist":
        return [_sub(0, E.on("Lk"), "Lk"), both]
    # Lk_plus_Lk: the copy through t1, the copy through t2, and the others
    subs = [_sub(0, E.on("Lk"), "Lk")]
    if E.on("Lk'"):
        subs.append(_sub(0, E.on("Lk'"), "Lk'"))
    return subs + [_sub(0, set(), "Lk''"), both]


def parabolic_index(E: BundleDescriptor, L: SubbundleDescriptor, mu: WeightVector):
    """deg E - 2 deg L + (weights of points off L) - (weights of points on L)."""
    if L.degree > (1 if E.underlying == "L_plus_Linv_winf" else 0):
        raise InadmissibleSubbundle(f"no subbundle of degree {L.degree} in {E.underlying}")
    if not L.passes_through <= {1, 2}:
        raise InadmissibleSubbundle("parabolic points are labelled 1 and 2")
    if L.name and L.name in _NAMES[E.underlying] and E.underlying != "L_plus_Linv_winf" \
            and L.passes_through != E.on(L.name):
        raise InadmissibleSubbundle(f"{L.name} does not pass through {sorted(L.passes_through)}")
    on = sum((mu[i - 1] for i in L.passes_through), Fraction(0))
    off = sum((mu[i - 1] for i in (1, 2) if i not in L.passes_through), Fraction(0))
    return Fraction(E.degree - 2 * L.degree) + off - on


@dataclass(frozen=True)
class Classification:
    status: str  # "stable", "strictly_semistable", "unstable"
    witness: SubbundleDescriptor | None
    index: Fraction

    def to_json(self):
        return {"status": self.status, "index": str(self.index),
                "witness": None if self.witness is None else self.witness.to_json()}


def classify(E: BundleDescriptor, mu: WeightVector) -> Classification:
    best = None
    for L in admissible_subbundles(E):
        v = parabolic_index(E, L, mu)
        if best is None or v < best[0]:
            best = (v, L)
    v, L = best
    if v > 0:
        return Classification("stable", None, v)
    return Classification("strictly_semistable" if v == 0 else "unstable", L, v)


def chamber(parity: str, mu: WeightVector) -> str:
    """'<', '>' or '=' for the odd wall mu1 + mu2 = 1 or the even wall mu1 = mu2."""
    a, b = (mu.mu1 + mu.mu2, Fraction(1)) if parity == "odd" else (mu.mu1, mu.mu2)
    return "<" if a < b else ">" if a > b else "="


# ------------------------------------------------------------ wall roles


def wall_role(E: BundleDescriptor):
    """('<' | '>' | '=', L) when E is one of the three bundles over a point of
    the strictly semistable curve, else None.  For L + L^-1 the returned class
    is the one carrying m1 (or the inverse of the one carrying m2)."""
    u, i1, i2 = E.underlying, E.incidence[0], E.incidence[1]
    if u == "E1":
        return ("<", E.L) if i1 == i2 == {"L"} else None
    if u == "L_plus_Linv_winf":
        if "M" in i1 | i2:
            return None
        return ("=", E.L) if i1 == i2 == {"L"} else (">", E.L)
    if u == "E0_twist":
        if (i1, i2) == ({"Lk"}, set()):
            return ("<", E.L)
        if (i1, i2) == (set(), {"Lk"}):
            return (">", E.L)
        return None
    if u == "Lk_plus_Lk":
        return ("=", E.L) if i2 == {"Lk'"} else None
    # L_plus_Linv
    curve = E.curve
    Linv = E.L.neg(curve)
    key = (tuple(sorted(i1)), tuple(sorted(i2)))
    roles = {
        (("L",), ()): ("<", E.L),
        (("Linv",), ()): ("<", Linv),
        ((), ("Linv",)): (">", E.L),
        ((), ("L",)): (">", Linv),
        (("L",), ("Linv",)): ("=", E.L),
        (("Linv",), ("L",)): ("=", Linv),
    }
    return roles.get(key)


def wall_partner(E: BundleDescriptor) -> BundleDescriptor:
    """Bundle over the same moduli point in the opposite chamber."""
    role = wall_role(E)
    if role is None or role[0] == "=":
        raise NotOnWall(f"{E} has no partner in the opposite chamber")
    side, L = role
    c = E.curve
    u = E.underlying
    if u == "E1":
        return BundleDescriptor("L_plus_Linv_winf", c, L, (frozenset(), frozenset()))
    if u == "L_plus_Linv_winf":
        return BundleDescriptor("E1", c, L, ({"L"}, {"L"}))
    if u == "E0_twist":
        return BundleDescriptor("E0_twist", c, L, ((), {"Lk"}) if side == "<" else ({"Lk"}, ()))
    # m1 on L  <->  m2 on L^-1, keeping the stored class
    swap = {"L": "Linv", "Linv": "L"}
    i1, i2 = E.incidence
    return BundleDescriptor("L_plus_Linv", c, E.L, ({swap[n] for n in i2}, {swap[n] for n in i1}))


def _named_class(E: BundleDescriptor, name: str) -> DivisorClass:
    c = E.curve
    if name in ("L", "Lk", "Lk'", "Lk''"):
        return E.L
    if name == "Linv":
        return E.L.neg(c)
    if name == "M":
        return E.L.neg(c).twist_inf()
    raise NotStrictlySemistable(f"the generic subbundle {name} has no fixed class")


def _det(E: BundleDescriptor) -> DivisorClass:
    return DivisorClass(E.degree, W_INF)


def graded(E: BundleDescriptor, mu: WeightVector) -> frozenset:
    """Graded pieces {(class, points), (class, points)} of a strictly semistable bundle."""
    result = classify(E, mu)
    if result.status != "strictly_semistable":
        raise NotStrictlySemistable(f"{E} is {result.status} at {mu}")
    sub = result.witness
    cls = _named_class(E, sub.name)
    quotient = _det(E).add(E.curve, cls.neg(E.curve))
    rest = frozenset({1, 2}) - sub.passes_through
    return frozenset({(cls, sub.passes_through), (quotient, rest)})


# --------------------------------------------------------------- catalog


def catalog(curve: CurveParams, L: DivisorClass, Lk: DivisorClass) -> list:
    """Every admissible descriptor built from a non-torsion L and a torsion L_k."""
    if L.is_torsion2(curve):
        raise InvalidDescriptor("catalog needs a non-torsion L")
    if not Lk.is_torsion2(curve):
        raise InvalidDescriptor("catalog needs a 2-torsion L_k")
    out = [BundleDescriptor("E1", curve, None), BundleDescriptor("E1", curve, L, ({"L"}, {"L"}))]
    opts = [frozenset(), frozenset({"M"})]
    out += [BundleDescriptor("L_plus_Linv_winf", curve, L, (a, b)) for a in opts for b in opts]
    out.append(BundleDescriptor("L_plus_Linv_winf", curve, L, ({"L"}, {"L"})))
    opts = [frozenset(), frozenset({"L"}), frozenset({"Linv"})]
    out += [BundleDescriptor("L_plus_Linv", curve, L, (a, b)) for a in opts for b in opts]
    opts = [frozenset(), frozenset({"Lk"})]
    out += [BundleDescriptor("E0_twist", curve, Lk, (a, b)) for a in opts for b in opts]
    out += [BundleDescriptor("Lk_plus_Lk", curve, Lk, ({"Lk"}, b)) for b in ({"Lk"}, {"Lk'"})]
    return out


def weight_grid(values: Iterable = (Fraction(1, 5), Fraction(2, 5), Fraction(1, 2), Fraction(3, 5), Fraction(4, 5))):
    """Square grid of weights; the default 5x5 grid meets both walls in five points."""
    vals = [Fraction(v) for v in values]
    return [WeightVector(a, b) for a in vals for b in vals]
