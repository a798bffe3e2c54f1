"""Rational functions in Q(x, y).

Backed by sympy's sparse fraction field, which keeps numerator and
denominator coprime after every operation; with the graded lexicographic
order fixed below, equal functions have equal representations.
"""

from __future__ import annotations

from math import isqrt

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

from .laurent import VARS2, LaurentPoly
from .scalars import rat, squarefree_part

K, KX, KY = field("x,y", QQ, grlex)
R = K.ring

RatFun = type(KX)

__all__ = [
    "K",
    "KX",
    "KY",
    "R",
    "RatFun",
    "to_ratfun",
    "from_laurent",
    "to_laurent",
    "is_laurent",
    "numer_support",
    "ratfun_to_str",
    "ratfun_to_json",
    "ratfun_from_json",
    "poly_to_json",
    "poly_from_json",
    "split_square",
]


def to_ratfun(v) -> RatFun:
    if isinstance(v, RatFun):
        return v
    if isinstance(v, LaurentPoly):
        return from_laurent(v)
    return K(rat(v))


def from_laurent(p: LaurentPoly) -> RatFun:
    if p.vars != VARS2:
        p = p.drop("t") if "t" in p.vars else p
    if not p:
        return K.zero
    sx = min(0, p.min_degree(0))
    sy = min(0, p.min_degree(1))
    num = R.from_dict({(e[0] - sx, e[1] - sy): c for e, c in p.items()})
    return K.new(num, R.from_dict({(-sx, -sy): rat(1)}))


def is_laurent(f: RatFun) -> bool:
    """True when the denominator is a monomial."""
    return len(f.denom.terms()) == 1


def to_laurent(f: RatFun) -> LaurentPoly:
    den = f.denom.terms()
    if len(den) != 1:
        raise ValueError(f"{f} is not a Laurent polynomial")
    (dexp, dc), = den
    return LaurentPoly(
        {(e[0] - dexp[0], e[1] - dexp[1]): c / dc for e, c in f.numer.terms()}, VARS2
    )


def split_square(f: RatFun):
    """Write ``f = core * root**2`` with ``core`` a squarefree polynomial.

    ``core`` has squarefree integer content, so ``f`` is a square in Q(x, y)
    exactly when ``core == 1``.
    """
    f = to_ratfun(f)
    if not f:
        raise ValueError("zero has no square class")
    P = f.numer * f.denom
    c, facs = P.sqf_list()
    c = rat(c)
    prim = []
    for g, k in facs:
        # make every factor a primitive integer polynomial with positive leading coefficient
        dc, gi = g.clear_denoms()
        cont, gp = gi.primitive()
        scale = rat(cont) / rat(dc)
        if gp.LC < 0:
            gp, scale = -gp, -scale
        c = c * scale**k
        prim.append((gp, k))
    n, m = int(c.numerator), int(c.denominator)
    sign = -1 if n < 0 else 1
    nm = abs(n) * m
    core_int = squarefree_part(nm)
    # c = sign * core_int * (s / m)^2 with s^2 = nm / core_int
    s = isqrt(nm // core_int)
    core = R(sign * core_int)
    root = R(rat(s, m))
    for g, k in prim:
        if k % 2:
            core = core * g
        root = root * g ** (k // 2)
    return K(core), K(root) / K(f.denom)


def numer_support(p) -> list:
    """Exponents of a polynomial (ring element) as integer tuples."""
    return [tuple(int(k) for k in e) for e in p.monoms()]


def _q(c) -> str:
    c = rat(c)
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else f"{c.numerator}"


def poly_to_json(p) -> list:
    return [[list(map(int, e)), _q(c)] for e, c in sorted(p.terms(), reverse=True)]


def poly_from_json(data, ring=R):
    return ring.from_dict({tuple(e): rat(c) for e, c in data})


def ratfun_to_json(f: RatFun) -> dict:
    return {"num": poly_to_json(f.numer), "den": poly_to_json(f.denom)}


def ratfun_from_json(data) -> RatFun:
    return K.new(poly_from_json(data["num"]), poly_from_json(data["den"]))


def _poly_str(p) -> str:
    return str(LaurentPoly({tuple(e): c for e, c in p.terms()}, VARS2))


def ratfun_to_str(f: RatFun) -> str:
    """Canonical string, e.g. ``(x^2 + y)/(2*x*y)``; exponents written with ``^``."""
    num = _poly_str(f.numer)
    if f.denom == 1:
        return num
    den = _poly_str(f.denom)
    if len(f.numer.terms()) > 1:
        num = f"({num})"
    if len(f.denom.terms()) > 1 or f.denom.LC != 1 or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"
