"""Exact rational arithmetic: sparse multivariate polynomials, rational
functions, resultants and fraction-free linear algebra.

Scalars are Python ints and :class:`fractions.Fraction` values.  A polynomial
stores an ordered tuple of variable names and a dict mapping exponent tuples
to nonzero coefficients.  Every instance is kept in canonical form, so
equality and hashing are structural.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "VARIABLE_ORDER",
    "ExactError",
    "NotDivisible",
    "DegreeTooSmall",
    "Inconsistent",
    "IrrationalRoot",
    "as_scalar",
    "scalar_to_str",
    "scalar_from_str",
    "scalar_key",
    "MultiPoly",
    "RatFunc",
    "ExactMatrix",
    "LinearSolution",
    "exact_divide",
    "poly_gcd",
    "univariate_view",
    "from_univariate",
    "resultant",
    "discriminant",
    "binary_discriminant",
    "solve_linear",
    "nullspace",
    "bareiss_det",
    "rational_roots",
    "polys_proportional",
]

# Global variable order.  Names outside this list sort after it, alphabetically.
VARIABLE_ORDER = ("b0", "b1", "b2", "z0", "z1", "w0", "w1", "lam", "t", "c", "l", "x", "y", "s")
_RANK = {name: i for i, name in enumerate(VARIABLE_ORDER)}


def _var_key(name):
    r = _RANK.get(name)
    return (0, r, "") if r is not None else (1, 0, name)


class ExactError(ArithmeticError):
    """Base class for the exact-arithmetic error conditions."""


class NotDivisible(ExactError):
    pass


class DegreeTooSmall(ExactError):
    pass


class Inconsistent(ExactError):
    pass


class IrrationalRoot(ExactError):
    pass


# ---------------------------------------------------------------- scalars


def as_scalar(value):
    """Coerce to int or Fraction, demoting integral fractions to int."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return as_scalar(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return scalar_from_str(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def scalar_to_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def scalar_from_str(text: str):
    return _norm(Fraction(text.strip()))


def scalar_key(c):
    """Total order key (numerator, denominator) on reduced fractions."""
    c = Fraction(c)
    return (c.numerator, c.denominator)


# ------------------------------------------------------------- polynomials


def _merge_vars(a, b):
    if a == b:
        return a
    return tuple(sorted(set(a) | set(b), key=_var_key))


def _embed(terms, old, new):
    if old == new:
        return terms
    pos = [new.index(v) for v in old]
    n = len(new)
    out = {}
    for e, c in terms.items():
        f = [0] * n
        for i, p in zip(e, pos):
            f[p] = i
        out[tuple(f)] = c
    return out


class MultiPoly:
    """Sparse multivariate polynomial over the rationals.

    >>> z, w = MultiPoly.var("z"), MultiPoly.var("w")
    >>> str((z - w) * (z + w))
    'z^2 - w^2'
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping | None = None):
        variables = tuple(variables)
        terms = dict(terms or {})
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != len(variables):
                raise ValueError("exponent length does not match variable count")
            if c:
                clean[e] = _norm(c) if isinstance(c, Fraction) else as_scalar(c)
        self.vars, self.terms = _canonical(variables, clean)
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms):
        # trusted constructor: terms nonzero, exponents aligned with variables
        obj = object.__new__(cls)
        obj.vars, obj.terms = _canonical(variables, terms)
        obj._hash = None
        return obj

    # construction helpers
    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = as_scalar(c)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls._raw((name,), {(1,): 1})

    @classmethod
    def vars_of(cls, *names: str):
        return tuple(cls.var(n) for n in names)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "MultiPoly":
        names = tuple(exps)
        return cls._raw(names, {tuple(exps[n] for n in names): as_scalar(coeff)} if coeff else {})

    @classmethod
    def coerce(cls, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return cls.const(value)

    # basic predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self):
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def variables(self) -> tuple:
        return self.vars

    # arithmetic
    def _aligned(self, other):
        other = MultiPoly.coerce(other)
        nv = _merge_vars(self.vars, other.vars)
        return nv, _embed(self.terms, self.vars, nv), _embed(other.terms, other.vars, nv)

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except TypeError:
                return NotImplemented
        nv, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return MultiPoly._raw(nv, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = as_scalar(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        if not self.terms or not other.terms:
            return MultiPoly._raw((), {})
        if not other.vars:
            return self.scale(other.terms[()])
        if not self.vars:
            return other.scale(self.terms[()])
        nv, a, b = self._aligned(other)
        out = {}
        get = out.get
        bl = list(b.items())
        n = len(nv)
        if n == 1:
            for (i,), c in a.items():
                for (j,), d in bl:
                    k = (i + j,)
                    out[k] = get(k, 0) + c * d
        else:
            for e, c in a.items():
                for f, d in bl:
                    k = tuple([x + y for x, y in zip(e, f)])
                    out[k] = get(k, 0) + c * d
        return MultiPoly._raw(nv, {e: _norm(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = as_scalar(c)
        if not c:
            return MultiPoly._raw((), {})
        if c == 1:
            return self
        return MultiPoly._raw(self.vars, {e: _norm(v * c) for e, v in self.terms.items()})

    def __truediv__(self, other):
        # division by a scalar only; polynomial division goes through exact_divide
        c = as_scalar(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(Fraction(1) / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except TypeError:
                return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # degrees and structure
    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in one variable.  The zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def degree_in(self, names: Sequence[str]) -> set:
        """Set of partial degrees in the given group of variables."""
        idx = [self.vars.index(v) for v in names if v in self.vars]
        return {sum(e[i] for i in idx) for e in self.terms}

    def is_homogeneous(self, names: Sequence[str] | None = None, degree: int | None = None) -> bool:
        names = self.vars if names is None else names
        degs = self.degree_in(names)
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda it: (sum(it[0]), it[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if not self.terms:
            return Fraction(0)
        g = 0
        lcm = 1
        for c in self.terms.values():
            c = Fraction(c)
            g = math.gcd(g, c.numerator)
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return Fraction(g, lcm)

    def primitive(self) -> "MultiPoly":
        """Integral primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self.scale(1 / c)

    def monic(self) -> "MultiPoly":
        return self.scale(Fraction(1) / Fraction(self.leading_coefficient()))

    def coefficient(self, exps: Mapping[str, int]) -> "MultiPoly":
        """Coefficient of a monomial in a subset of the variables."""
        sel = [(self.vars.index(v), k) for v, k in exps.items() if v in self.vars]
        missing = [k for v, k in exps.items() if v not in self.vars]
        if any(missing):
            return MultiPoly._raw((), {})
        drop = {i for i, _ in sel}
        keep = tuple(v for j, v in enumerate(self.vars) if j not in drop)
        out = {}
        for e, c in self.terms.items():
            if all(e[i] == k for i, k in sel):
                out[tuple(x for j, x in enumerate(e) if j not in drop)] = c
        return MultiPoly._raw(keep, out)

    # evaluation
    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials or scalars."""
        active = {v: MultiPoly.coerce(p) for v, p in mapping.items() if v in self.vars}
        if not active:
            return self
        idx = [(i, v) for i, v in enumerate(self.vars) if v in active]
        keep_pos = [i for i, v in enumerate(self.vars) if v not in active]
        keep_vars = tuple(self.vars[i] for i in keep_pos)
        cache: dict = {}

        def power(v, k):
            key = (v, k)
            p = cache.get(key)
            if p is None:
                if k == 0:
                    p = MultiPoly.const(1)
                elif k == 1:
                    p = active[v]
                else:
                    p = power(v, k // 2) * power(v, k - k // 2)
                cache[key] = p
            return p

        # group terms by the exponents of substituted variables
        groups: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i, _ in idx)
            rest = tuple(e[i] for i in keep_pos)
            groups.setdefault(key, {})[rest] = c
        total = MultiPoly._raw((), {})
        for key, rest_terms in groups.items():
            part = MultiPoly._raw(keep_vars, rest_terms)
            for (i, v), k in zip(idx, key):
                if k:
                    part = part * power(v, k)
            total = total + part
        return total

    def __call__(self, **values):
        return self.subs(values)

    def evaluate(self, mapping: Mapping[str, object]):
        """Full evaluation to a scalar."""
        p = self.subs(mapping)
        return p.constant_value()

    def diff(self, var: str) -> "MultiPoly":
        if var not in self.vars:
            return MultiPoly._raw((), {})
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.vars, out)

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        new = [mapping.get(v, v) for v in self.vars]
        if len(set(new)) != len(new):
            return self.subs({v: MultiPoly.var(mapping[v]) for v in mapping if v in self.vars})
        return MultiPoly(new, self.terms)

    def homogenize(self, names: Sequence[str], hvar: str, degree: int | None = None) -> "MultiPoly":
        """Homogenize in the variable group ``names`` using ``hvar``."""
        degs = self.degree_in(names)
        d = max(degs) if degree is None else degree
        idx = [self.vars.index(v) for v in names if v in self.vars]
        nv = _merge_vars(self.vars, (hvar,))
        terms = _embed(self.terms, self.vars, nv)
        h = nv.index(hvar)
        pos = [nv.index(self.vars[i]) for i in idx]
        out = {}
        for e, c in terms.items():
            f = list(e)
            f[h] += d - sum(e[p] for p in pos)
            if f[h] < 0:
                raise ValueError("degree too small for homogenization")
            out[tuple(f)] = c
        return MultiPoly._raw(nv, out)

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    # serialization
    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"e": list(e), "n": str(Fraction(c).numerator), "d": str(Fraction(c).denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        variables = tuple(data["vars"])
        terms = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["e"])
            c = Fraction(int(t["n"]), int(t.get("d", "1")))
            if e in terms:
                raise ValueError("duplicate exponent in polynomial JSON")
            terms[e] = c
        return cls(variables, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            c = Fraction(c)
            neg = c < 0
            a = abs(c)
            if mono:
                coef = "" if a == 1 else (f"{a}*" if a.denominator == 1 else f"({a})*")
                body = coef + mono
            else:
                body = str(a)
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


def _canonical(variables, terms):
    """Drop unused variables and sort the rest by the global order."""
    if not terms:
        return (), {}
    n = len(variables)
    used = [False] * n
    for e in terms:
        for i, k in enumerate(e):
            if k:
                used[i] = True
    order = sorted((i for i in range(n) if used[i]), key=lambda i: _var_key(variables[i]))
    if len(order) == n and order == list(range(n)):
        return variables, terms
    nv = tuple(variables[i] for i in order)
    return nv, {tuple(e[i] for i in order): c for e, c in terms.items()}


# --------------------------------------------------------------- division


def _neg_key(e):
    return (-sum(e), tuple(-x for x in e))


def exact_divide(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Return q with a = q*b, or raise NotDivisible."""
    a = MultiPoly.coerce(a)
    b = MultiPoly.coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return a
    if b.is_constant():
        return a.scale(Fraction(1) / Fraction(b.constant_value()))
    if not set(b.vars) <= set(a.vars):
        raise NotDivisible("divisor has variables absent from the dividend")
    nv = a.vars
    rem = dict(a.terms)
    bt = _embed(b.terms, b.vars, nv)
    lb = max(bt, key=lambda e: (sum(e), e))
    lc = Fraction(bt[lb])
    rest = [(e, c) for e, c in bt.items() if e != lb]
    heap = [_neg_key(e) for e in rem]
    heapq.heapify(heap)
    quo = {}
    integral_lc = lc.denominator == 1 and abs(lc.numerator) == 1
    while heap:
        k = heapq.heappop(heap)
        e = tuple(-x for x in k[1])
        c = rem.pop(e, 0)
        if not c:
            continue
        m = tuple(x - y for x, y in zip(e, lb))
        if min(m) < 0:
            raise NotDivisible("leading term not divisible")
        q = c * lc.numerator if integral_lc else c / lc
        q = _norm(q)
        quo[m] = q
        for f, d in rest:
            g = tuple(x + y for x, y in zip(m, f))
            old = rem.get(g)
            if old is None:
                rem[g] = -q * d
                heapq.heappush(heap, _neg_key(g))
            else:
                v = old - q * d
                if v:
                    rem[g] = v
                else:
                    del rem[g]
    return MultiPoly._raw(nv, {e: _norm(c) for e, c in quo.items()})


def _divides(a, b) -> bool:
    try:
        exact_divide(a, b)
        return True
    except NotDivisible:
        return False


# --------------------------------------------------------------------- gcd


def _int_primitive(p: MultiPoly):
    c = p.content()
    return c, p.scale(1 / c)


def _max_norm(p):
    return max(abs(c) for c in p.terms.values())


def _symmetric_mod(x, m):
    r = x % m
    return r - m if r > m // 2 else r


def _heu_gcd(f: MultiPoly, g: MultiPoly, depth=0):
    """Heuristic gcd of integral polynomials (evaluation and interpolation)."""
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(math.gcd(int(f.content() * 1), int(g.content() * 1)) or 1)
    variables = _merge_vars(f.vars, g.vars)
    x = variables[0]
    cf = int(f.content())
    cg = int(g.content())
    cont = math.gcd(cf, cg)
    f = f.scale(Fraction(1, cf))
    g = g.scale(Fraction(1, cg))
    fn, gn = _max_norm(f), _max_norm(g)
    B = 2 * min(fn, gn) + 29
    lf = abs(f.leading_coefficient())
    lg = abs(g.leading_coefficient())
    xi = max(min(B, 99 * math.isqrt(B)), 2 * min(fn // lf, gn // lg) + 4)
    for _ in range(6):
        ff = f.subs({x: xi})
        gg = g.subs({x: xi})
        if not ff.is_zero() and not gg.is_zero():
            h = _heu_gcd(ff, gg, depth + 1)
            h = _interpolate(h, xi, x)
            if not h.is_zero():
                h = h.primitive()
                if _divides(f, h) and _divides(g, h):
                    return h.scale(cont)
        xi = 73794 * xi * math.isqrt(math.isqrt(xi)) // 27011
    raise _HeuristicFailed


class _HeuristicFailed(Exception):
    pass


def _interpolate(h: MultiPoly, xi: int, x: str) -> MultiPoly:
    digits = []
    while not h.is_zero():
        g = MultiPoly._raw(h.vars, {e: _symmetric_mod(int(c), xi) for e, c in h.terms.items()})
        g = MultiPoly._raw(g.vars, {e: c for e, c in g.terms.items() if c})
        digits.append(g)
        h = (h - g).scale(Fraction(1, xi))
    xv = MultiPoly.var(x)
    out = MultiPoly.const(0)
    for i, d in enumerate(digits):
        if not d.is_zero():
            out = out + d * xv ** i
    return out


def _prs_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Recursive primitive-remainder gcd, used when the heuristic fails."""
    if f.is_zero():
        return g.primitive() if g else g
    if g.is_zero():
        return f.primitive()
    variables = _merge_vars(f.vars, g.vars)
    if not variables:
        return MultiPoly.const(1)
    x = variables[0]
    if f.degree(x) < g.degree(x):
        f, g = g, f
    if g.degree(x) == 0:
        return _prs_gcd(_content_in(f, x), g)
    cf, cg = _content_in(f, x), _content_in(g, x)
    c = _prs_gcd(cf, cg)
    a = exact_divide(f, cf)
    b = exact_divide(g, cg)
    while not b.is_zero() and b.degree(x) > 0:
        r = _pseudo_rem(a, b, x)
        a = b
        b = exact_divide(r, _content_in(r, x)) if not r.is_zero() else r
    if not b.is_zero():
        # constant remainder in x: coprime primitive parts
        return c.primitive()
    a = exact_divide(a, _content_in(a, x))
    return (a * c).primitive()


def _content_in(p: MultiPoly, x: str) -> MultiPoly:
    coeffs = [c for c in univariate_view(p, x) if not c.is_zero()]
    g = coeffs[0]
    for c in coeffs[1:]:
        g = _prs_gcd(g, c) if g.vars or c.vars else MultiPoly.const(1)
        if g.is_constant():
            break
    if g.is_constant():
        return MultiPoly.const(1)
    return g.primitive()


def _pseudo_rem(a: MultiPoly, b: MultiPoly, x: str) -> MultiPoly:
    xv = MultiPoly.var(x)
    db = b.degree(x)
    lb = univariate_view(b, x)[-1]
    r = a
    while not r.is_zero() and r.degree(x) >= db:
        dr = r.degree(x)
        lr = univariate_view(r, x)[-1]
        r = r * lb - b * lr * xv ** (dr - db)
    return r


def poly_gcd(a, b) -> MultiPoly:
    """Greatest common divisor over Q, normalized primitive with positive leading coefficient."""
    a = MultiPoly.coerce(a)
    b = MultiPoly.coerce(b)
    if a.is_zero() and b.is_zero():
        return a
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(1)
    # monomial part
    nv = _merge_vars(a.vars, b.vars)
    ea = [min(col) for col in zip(*_embed(a.terms, a.vars, nv))]
    eb = [min(col) for col in zip(*_embed(b.terms, b.vars, nv))]
    mono = MultiPoly._raw(nv, {tuple(min(x, y) for x, y in zip(ea, eb)): 1})
    a = exact_divide(a, MultiPoly._raw(nv, {tuple(ea): 1}))
    b = exact_divide(b, MultiPoly._raw(nv, {tuple(eb): 1}))
    a = a.primitive()
    b = b.primitive()
    if a == b:
        g = a
    elif a.is_constant() or b.is_constant():
        g = MultiPoly.const(1)
    else:
        try:
            g = _heu_gcd(a, b)
        except _HeuristicFailed:
            g = _prs_gcd(a, b)
    return (g * mono).primitive()


# ---------------------------------------------------------- rational funcs


class RatFunc:
    """Quotient of polynomials, reduced by their gcd; the denominator is
    primitive with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, reduce: bool = True):
        num = MultiPoly.coerce(num)
        den = MultiPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, MultiPoly.const(1)
            return
        if reduce and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = exact_divide(num, g)
                den = exact_divide(den, g)
        c = den.content()
        if den.leading_coefficient() < 0:
            c = -c
        self.num = num.scale(1 / c)
        self.den = den.scale(1 / c)

    @classmethod
    def coerce(cls, value) -> "RatFunc":
        return value if isinstance(value, RatFunc) else cls(value)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.den.is_constant():
            raise ValueError("not a polynomial")
        return self.num

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        other = RatFunc.coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(1) / self ** (-n)
        return RatFunc(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def subs(self, mapping) -> "RatFunc":
        mapping = {k: (v if isinstance(v, RatFunc) else RatFunc.coerce(v)) for k, v in mapping.items()}
        if all(v.is_polynomial() for v in mapping.values()):
            pm = {k: v.as_poly() for k, v in mapping.items()}
            return RatFunc(self.num.subs(pm), self.den.subs(pm))
        return _ratfunc_subs(self.num, mapping) / _ratfunc_subs(self.den, mapping)

    def evaluate(self, mapping):
        r = self.subs(mapping)
        if not r.num.is_constant() or not r.den.is_constant():
            raise ValueError("evaluation did not reduce to a scalar")
        return _norm(Fraction(r.num.constant_value()) / Fraction(r.den.constant_value()))

    def __str__(self):
        if self.den == MultiPoly.const(1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(MultiPoly.from_json(data["num"]), MultiPoly.from_json(data["den"]))


def _ratfunc_subs(p: MultiPoly, mapping) -> RatFunc:
    # expand term by term in the field of fractions
    total = RatFunc(0)
    for e, c in p.terms.items():
        term = RatFunc(c)
        for v, k in zip(p.vars, e):
            if k:
                term = term * (mapping[v] ** k if v in mapping else RatFunc(MultiPoly.var(v) ** k))
        total = total + term
    return total


# ------------------------------------------------------------- univariate


def univariate_view(p: MultiPoly, var: str) -> list:
    """Coefficients c_0..c_d (polynomials without ``var``) with p = sum c_i var^i."""
    p = MultiPoly.coerce(p)
    if var not in p.vars:
        return [p]
    i = p.vars.index(var)
    rest = tuple(v for v in p.vars if v != var)
    buckets: dict = {}
    for e, c in p.terms.items():
        buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
    d = max(buckets)
    return [MultiPoly._raw(rest, buckets.get(k, {})) for k in range(d + 1)]


def from_univariate(coeffs: Sequence, var: str) -> MultiPoly:
    x = MultiPoly.var(var)
    out = MultiPoly.const(0)
    for k, c in enumerate(coeffs):
        out = out + MultiPoly.coerce(c) * x ** k
    return out


def _binary_coeffs(form: MultiPoly, x0: str, x1: str, degree: int | None = None) -> list:
    """Coefficients a_i of x1^i x0^(d-i) for a binary form."""
    d = max(form.degree_in((x0, x1))) if degree is None else degree
    if not form.is_homogeneous((x0, x1)):
        raise ValueError("not a binary form in the given variables")
    dehom = form.subs({x0: 1})
    coeffs = univariate_view(dehom, x1)
    return coeffs + [MultiPoly.const(0)] * (d + 1 - len(coeffs))


# ---------------------------------------------------------- linear algebra


class ExactMatrix:
    """Dense matrix of polynomial (or rational function) entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged matrix")
        self.entries = tuple(_entry(x) for r in rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __matmul__(self, vec):
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            acc = RatFunc(0)
            for j in range(self.cols):
                a = self[i, j]
                if not _is_zero(a):
                    acc = acc + RatFunc.coerce(a) * RatFunc.coerce(vec[j])
            out.append(acc)
        return out

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def _entry(x):
    if isinstance(x, (MultiPoly, RatFunc)):
        return x
    return MultiPoly.const(x)


def _is_zero(x):
    return x.is_zero()


def _polynomial_rows(rows):
    """Clear denominators row by row so that every entry is a polynomial."""
    out = []
    for r in rows:
        dens = [e.den for e in r if isinstance(e, RatFunc)]
        if dens:
            common = MultiPoly.const(1)
            for d in dens:
                if not _divides(common, d):
                    common = common * exact_divide(d, poly_gcd(common, d))
            r = [
                (exact_divide(common, e.den) * e.num) if isinstance(e, RatFunc) else e * common
                for e in r
            ]
        out.append([MultiPoly.coerce(e) for e in r])
    return out


def _bareiss(rows, ncols=None):
    """Fraction-free row echelon form.  Returns (rows, pivots, swaps)."""
    m = [list(r) for r in rows]
    n = len(m)
    ncols = len(m[0]) if ncols is None else ncols
    prev = MultiPoly.const(1)
    pivots = []
    swaps = 0
    r = 0
    for c in range(ncols):
        if r >= n:
            break
        piv = None
        best = None
        for i in range(r, n):
            if not m[i][c].is_zero():
                size = len(m[i][c].terms)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            swaps += 1
        p = m[r][c]
        for i in range(r + 1, n):
            a = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, len(row_i)):
                v = p * row_i[j] - a * row_r[j]
                row_i[j] = exact_divide(v, prev) if not v.is_zero() else v
            row_i[c] = MultiPoly.const(0)
        # entries left of the pivot in lower rows are already zero
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots, swaps


def bareiss_det(matrix) -> MultiPoly:
    rows = matrix.to_rows() if isinstance(matrix, ExactMatrix) else [list(map(_entry, r)) for r in matrix]
    n = len(rows)
    if n == 0:
        return MultiPoly.const(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    rows = [[MultiPoly.coerce(e) if not isinstance(e, RatFunc) else e.as_poly() for e in r] for r in rows]
    m, pivots, swaps = _bareiss(rows)
    if len(pivots) < n:
        return MultiPoly.const(0)
    d = m[n - 1][n - 1]
    return -d if swaps % 2 else d


class LinearSolution:
    """Solution set x = particular + span(nullspace) of a linear system."""

    __slots__ = ("particular", "nullspace")

    def __init__(self, particular, nullspace):
        self.particular = list(particular)
        self.nullspace = [list(v) for v in nullspace]

    @property
    def unique(self) -> bool:
        return not self.nullspace

    @property
    def dimension(self) -> int:
        return len(self.nullspace)

    def __repr__(self):
        return f"LinearSolution(dim={self.dimension})"


def _back_substitute(m, pivots, ncols, rhs_col=None, free_col=None):
    """Solve the echelon system for one particular or nullspace vector."""
    x = [RatFunc(0)] * ncols
    if free_col is not None:
        x[free_col] = RatFunc(1)
    for r in range(len(pivots) - 1, -1, -1):
        p = pivots[r]
        acc = RatFunc(m[r][rhs_col]) if rhs_col is not None else RatFunc(0)
        for j in range(p + 1, ncols):
            if not m[r][j].is_zero() and not x[j].is_zero():
                acc = acc - RatFunc(m[r][j]) * x[j]
        x[p] = acc / RatFunc(m[r][p])
    return x


def solve_linear(A, b=None) -> LinearSolution:
    """Exact solution set of A x = b (b defaults to zero)."""
    A = A if isinstance(A, ExactMatrix) else ExactMatrix(A)
    n = A.cols
    rows = A.to_rows()
    if b is None:
        b = [0] * A.rows
    if len(b) != A.rows:
        raise ValueError("right-hand side length mismatch")
    aug = _polynomial_rows([r + [_entry(v)] for r, v in zip(rows, b)])
    m, pivots, _ = _bareiss(aug, n + 1)
    if pivots and pivots[-1] == n:
        raise Inconsistent("linear system has no solution")
    # rows beyond the rank must have zero right-hand side
    for r in range(len(pivots), len(m)):
        if not m[r][n].is_zero():
            raise Inconsistent("linear system has no solution")
    free = [j for j in range(n) if j not in pivots]
    particular = _back_substitute(m, pivots, n, rhs_col=n)
    basis = [_back_substitute(m, pivots, n, free_col=f) for f in free]
    return LinearSolution(particular, basis)


def nullspace(A) -> list:
    """Basis of the kernel with polynomial entries (denominators cleared)."""
    sol = solve_linear(A)
    out = []
    for v in sol.nullspace:
        common = MultiPoly.const(1)
        for e in v:
            if not _divides(common, e.den):
                common = common * exact_divide(e.den, poly_gcd(common, e.den))
        vec = [exact_divide(common, e.den) * e.num for e in v]
        g = MultiPoly.const(0)
        for e in vec:
            if not e.is_zero():
                g = e if g.is_zero() else poly_gcd(g, e)
        vec = [exact_divide(e, g) for e in vec]
        out.append(vec)
    return out


# ------------------------------------------------- resultants, roots


def resultant(p, q, var: str) -> MultiPoly:
    """Sylvester resultant of p and q with respect to ``var``."""
    pc = univariate_view(MultiPoly.coerce(p), var)
    qc = univariate_view(MultiPoly.coerce(q), var)
    m, n = len(pc) - 1, len(qc) - 1
    if m < 1 or n < 1 or pc[-1].is_zero() or qc[-1].is_zero():
        raise DegreeTooSmall("resultant needs positive degrees")
    size = m + n
    zero = MultiPoly.const(0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc[::-1] + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc[::-1] + [zero] * (size - n - 1 - i))
    return bareiss_det(rows)


def discriminant(p, var: str) -> MultiPoly:
    """disc(p) = (-1)^(d(d-1)/2) res(p, p') / lead(p)."""
    p = MultiPoly.coerce(p)
    coeffs = univariate_view(p, var)
    d = len(coeffs) - 1
    if d < 1:
        raise DegreeTooSmall("discriminant needs degree >= 1")
    if d == 1:
        return MultiPoly.const(1)
    r = exact_divide(resultant(p, p.diff(var), var), coeffs[-1])
    return -r if (d * (d - 1) // 2) % 2 else r


def binary_discriminant(form: MultiPoly, x0: str, x1: str) -> MultiPoly:
    """Discriminant of a binary form in (x0, x1), computed with formal degree.

    A vanishing top coefficient is a root at x0 = 0; then
    Disc_d = a_{d-1}^2 Disc_{d-1}, and a double root there gives 0.
    """
    coeffs = _binary_coeffs(form, x0, x1)
    if len(coeffs) < 2:
        raise DegreeTooSmall("discriminant needs degree >= 1")
    factor = MultiPoly.const(1)
    if coeffs[-1].is_zero():
        if coeffs[-2].is_zero():
            return MultiPoly.const(0)
        factor = coeffs[-2] * coeffs[-2]
        coeffs = coeffs[:-1]
    if len(coeffs) == 2:
        return factor
    tmp = "_u"
    return factor * discriminant(from_univariate(coeffs, tmp), tmp)


def polys_proportional(p: MultiPoly, q: MultiPoly) -> bool:
    """True when p = c*q for a nonzero scalar c (both nonzero)."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    if p.vars != q.vars or p.terms.keys() != q.terms.keys():
        return False
    e = next(iter(p.terms))
    r = Fraction(p.terms[e]) / Fraction(q.terms[e])
    return all(Fraction(c) == r * Fraction(q.terms[k]) for k, c in p.terms.items())


def _to_int_coeffs(coeffs):
    fr = [Fraction(c) for c in coeffs]
    lcm = 1
    for c in fr:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in fr]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g else ints


def _horner(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_divmod_q(a, b):
    a = [Fraction(c) for c in a]
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        k = len(a) - len(b)
        q = a[-1] / b[-1]
        out[k] = q
        for i, c in enumerate(b):
            a[i + k] -= q * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return out, a


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _sturm_count(seq, x):
    signs = []
    for p in seq:
        v = _horner(p, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _real_rational_roots(coeffs):
    """Rational roots of an integer square-free polynomial (ascending coefficients)."""
    coeffs = _trim(coeffs)
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        return [_norm(Fraction(-coeffs[0], coeffs[1]))]
    lead = abs(coeffs[-1])
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    seq = [[Fraction(c) for c in coeffs], [Fraction(c) for c in deriv]]
    while len(seq[-1]) > 1:
        _, r = _poly_divmod_q(seq[-2], seq[-1])
        r = _trim([-c for c in r])
        if not r:
            break
        seq.append(r)
    bound = 1 + max(Fraction(abs(c), lead) for c in coeffs[:-1])
    bound = Fraction(math.ceil(bound))
    width = Fraction(1, 2 * lead * lead)
    roots = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        # count roots in (lo, hi]
        n = _sturm_count(seq, lo) - _sturm_count(seq, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo < width:
            mid = (lo + hi) / 2
            cand = mid.limit_denominator(lead)
            for x in (cand, hi):
                if lo < x <= hi and _horner(coeffs, x) == 0:
                    roots.append(_norm(x))
                    break
            continue
        mid = (lo + hi) / 2
        if _horner(coeffs, mid) == 0:
            roots.append(_norm(mid))
            # split around the exact root
            eps = width / 4
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
            # the removed slivers cannot hold another root of small height
            continue
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(set(roots))


def rational_roots(p, var: str | None = None, projective: bool = False, x0: str | None = None):
    """Rational roots with multiplicity.

    Affine mode: ``p`` is univariate in ``var``; returns a sorted list of
    scalars and raises IrrationalRoot only if ``strict`` requirements fail
    (affine mode never raises).  Projective mode: ``p`` is a binary form in
    (x0, var); returns points as pairs (a0, a1) normalized to (1, r) or
    (0, 1), and raises IrrationalRoot unless the roots exhaust the degree.
    """
    p = MultiPoly.coerce(p)
    if p.is_zero():
        raise ValueError("the zero polynomial has no root multiset")
    if projective:
        if x0 is None or var is None:
            raise ValueError("projective mode needs both coordinate names")
        coeffs_p = _binary_coeffs(p, x0, var)
        d = len(coeffs_p) - 1
        coeffs = [c.constant_value() for c in coeffs_p]
        inf_mult = 0
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
            inf_mult += 1
        finite = _roots_with_multiplicity(coeffs)
        pts = [(1, r) for r in finite] + [(0, 1)] * inf_mult
        if len(pts) != d:
            raise IrrationalRoot(f"only {len(pts)} of {d} roots are rational")
        return pts
    if var is None:
        if len(p.vars) > 1:
            raise ValueError("specify the variable")
        var = p.vars[0] if p.vars else "_x"
    coeffs = [c.constant_value() for c in univariate_view(p, var)]
    return _roots_with_multiplicity(coeffs)


def _roots_with_multiplicity(coeffs):
    coeffs = _trim([Fraction(c) for c in coeffs])
    if len(coeffs) <= 1:
        return []
    out = []
    zeros = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    out += [0] * zeros
    # square-free part via gcd with the derivative
    a = coeffs
    b = _trim([i * c for i, c in enumerate(a)][1:])
    g = _uni_gcd(a, b)
    sqf, _ = _poly_divmod_q(a, g)
    sqf = _trim(sqf)
    roots = _real_rational_roots(_to_int_coeffs(sqf))
    for r in roots:
        m = 0
        cur = a
        lin = [-Fraction(r), Fraction(1)]
        while True:
            q, rem = _poly_divmod_q(cur, lin)
            if _trim(rem):
                break
            m += 1
            cur = _trim(q)
            if len(cur) <= 1:
                break
        out += [r] * m
    return sorted(out)


def _uni_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod_q(a, b)
        a, b = b, _trim(r)
    return [c / a[-1] for c in a]
