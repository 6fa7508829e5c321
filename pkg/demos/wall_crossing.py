"""Classify the bundle catalog along mu = (m, 1/3).

The path meets the even wall mu1 = mu2 at m = 1/3 and the odd wall
mu1 + mu2 = 1 at m = 2/3.
"""
import random
from fractions import Fraction

from parabolic_moduli import elliptic as ell
from parabolic_moduli import stability as sb


def main():
    rng = random.Random(3)
    while True:
        curve, p = ell.random_curve_with_point(rng)
        L = ell.DivisorClass.point(p)
        if not L.is_torsion2(curve):
            break
    Lk = ell.DivisorClass.point(ell.weierstrass_point(curve, 0))
    print("curve lam =", curve.lam, " L = [", p, "]")
    cat = sb.catalog(curve, L, Lk)
    steps = [Fraction(k, 12) for k in range(1, 12)]
    print(f"{'m =':33s}", " ".join(f"{str(m):6s}" for m in steps))
    for E in cat:
        row = [sb.classify(E, sb.WeightVector(m, Fraction(1, 3))).status[:6] for m in steps]
        inc = " | ".join(",".join(sorted(i)) or "-" for i in E.incidence)
        print(f"{E.underlying:18s} {inc:14s}", " ".join(f"{s:6s}" for s in row))


if __name__ == "__main__":
    main()
