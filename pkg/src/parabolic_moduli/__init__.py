"""Exact geometry of rank-2 parabolic bundles on a twice-punctured elliptic curve."""

from .exactcore import MultiPoly, RatFunc
from .projgeom import BiCurve, BirMapP2, MoebiusMap, PlaneCurve, ProjPoint, RuledMap, compose, map_equal
from .elliptic import CurveParams, EllipticPoint, group_add
from .modulimaps import ModuliParams, gamma_curve, named_map, sigma_cubic, torelli_reconstruct
from .verify import VerifyPlan, report, run_suite

__version__ = "0.1.0"

__all__ = [
    "MultiPoly", "RatFunc",
    "BiCurve", "BirMapP2", "MoebiusMap", "PlaneCurve", "ProjPoint", "RuledMap", "compose", "map_equal",
    "CurveParams", "EllipticPoint", "group_add",
    "ModuliParams", "gamma_curve", "named_map", "sigma_cubic", "torelli_reconstruct",
    "VerifyPlan", "report", "run_suite",
]
