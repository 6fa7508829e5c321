"""Hide Gamma(lam, t) behind random Möbius changes of both factors and recover it."""
import random
import sys
from fractions import Fraction

from parabolic_moduli import modulimaps as mm
from parabolic_moduli.projgeom import MoebiusMap


def random_moebius(rng):
    while True:
        a, b, c, d = (Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(4))
        if a * d != b * c:
            return MoebiusMap(a, b, c, d)


def main(seed=0):
    rng = random.Random(seed)
    for lam, t in [(2, 5), (3, -1), (Fraction(1, 2), 7)]:
        curve = mm.gamma_curve(mm.ModuliParams.rational(lam, t)).pullback(random_moebius(rng), random_moebius(rng))
        res = mm.torelli_reconstruct(curve)
        cls = ", ".join(f"({a}, {b})" for a, b in res.candidates)
        print(f"input ({lam}, {t}): recovered ({res.lam}, {res.t}), class of {len(res.candidates)}: {cls}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
