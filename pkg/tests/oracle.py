"""Bridge from library polynomials to sympy, used as an independent oracle."""

from fractions import Fraction

import sympy as sp

from parabolic_moduli.exactcore import MultiPoly


def to_sympy(p) -> sp.Expr:
    if not isinstance(p, MultiPoly):
        p = MultiPoly.coerce(p)
    data = p.to_json()
    syms = [sp.Symbol(v) for v in data["vars"]]
    expr = sp.Integer(0)
    for term in data["terms"]:
        coef = sp.Rational(int(term["n"]), int(term["d"]))
        mono = sp.Integer(1)
        for s, e in zip(syms, term["e"]):
            mono *= s**e
        expr += coef * mono
    return sp.expand(expr)


def from_sympy(expr, names=None) -> MultiPoly:
    expr = sp.expand(sp.sympify(expr))
    gens = sorted(expr.free_symbols, key=lambda s: s.name) if names is None else [sp.Symbol(n) for n in names]
    if not gens:
        q = sp.Rational(expr)
        return MultiPoly.const(Fraction(int(q.p), int(q.q)))
    poly = sp.Poly(expr, *gens)
    out = MultiPoly.const(0)
    for mon, c in poly.terms():
        q = sp.Rational(c)
        term = MultiPoly.const(Fraction(int(q.p), int(q.q)))
        for g, e in zip(gens, mon):
            term = term * MultiPoly.var(g.name) ** e
        out = out + term
    return out


def proportional(u, v) -> bool:
    """Projective equality of two coordinate tuples, checked in sympy."""
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if sp.expand(u[i] * v[j] - u[j] * v[i]) != 0:
                return False
    return True


def compose_sym(outer, inner, names=("b0", "b1", "b2")):
    subs = {sp.Symbol(n): e for n, e in zip(names, inner)}
    return [sp.expand(c.xreplace(subs)) for c in outer]
