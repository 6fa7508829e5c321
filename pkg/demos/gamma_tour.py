"""Walk through Gamma(lam, t) at a rational parameter pair.

Prints the curve, its tangent lines in both rulings, the branch cubic Sigma,
and checks a few covering identities on explicit points.

    python3 demos/gamma_tour.py 2 5
"""
import sys
from fractions import Fraction

from parabolic_moduli import modulimaps as mm
from parabolic_moduli.exactcore import binary_discriminant, rational_roots
from parabolic_moduli.projgeom import ProjPoint, apply, compose, map_equal


def main(lam="2", t="5"):
    params = mm.ModuliParams.rational(Fraction(lam), Fraction(t))
    G = mm.gamma_curve(params)
    print(f"Gamma({lam}, {t}) =", G.poly)

    disc = binary_discriminant(G.poly, "w0", "w1")
    roots = rational_roots(disc, "z1", projective=True, x0="z0")
    print("vertical tangents over z =", sorted(str(ProjPoint(list(r))) for r in roots))

    print("Sigma:", mm.sigma_cubic(params).poly)

    phi = mm.named_map("phiTilde", params)
    tau = mm.named_map("tau", params)
    print("Phi o tau == Phi:", map_equal(compose(phi, tau), phi))

    p = ProjPoint((1, 3, 7))
    q = apply(tau, p)
    print(f"tau{p} = {q}, tau(tau(p)) = {apply(tau, q)}")
    print(f"Phi(p) = {apply(phi, p)}, Phi(tau(p)) = {apply(phi, q)}")


if __name__ == "__main__":
    main(*sys.argv[1:3])
