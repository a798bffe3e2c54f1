"""Series expansion of rational functions and of polynomials in a series."""

from __future__ import annotations

from ..algebra.laurent import LaurentPoly
from ..algebra.ratfun import RatFun, to_ratfun
from ..algebra.scalars import rat
from ..cones import OrderWeight
from ..errors import DivisionByZero
from .encoding import ZERO2, PuiseuxEncoding, cone_of, exp2, monoid_heap, sub_exp

DEFAULT_TERMS = 24


def _ring_terms(p) -> dict:
    return {exp2(e): rat(c) for e, c in p.terms()}


def _laurent_terms(p: LaurentPoly) -> dict:
    return {exp2(e): c for e, c in p.items()}


def geometric_series(u: dict, order: OrderWeight, nterms: int) -> PuiseuxEncoding:
    """Encoding of ``1/(1 - u)`` for a finite ``u`` whose exponents are all negative."""
    if not u:
        return PuiseuxEncoding.const(1, order)
    cone = cone_of(list(u), order)
    visited, frontier = monoid_heap(list(u), order, nterms)
    G: dict = {}
    for e in visited:
        c = rat(1) if e == ZERO2 else rat(0)
        for s, us in u.items():
            prev = G.get(sub_exp(e, s))
            if prev is not None:
                c = c + us * prev
        G[e] = c
    return PuiseuxEncoding(order, {e: c for e, c in G.items() if c}, frontier, cone)


def leading_monomial(terms: dict, order: OrderWeight):
    e = order.max(list(terms))
    return e, terms[e]


def expand_ratfun(r, order: OrderWeight, nterms: int = DEFAULT_TERMS) -> PuiseuxEncoding:
    """Expansion ``p / lt(q) * sum_k (1 - q/lt(q))^k`` of ``r = p/q``.

    ``nterms`` bounds the number of monomials of the geometric part that are
    computed explicitly; the rest is covered by the tail certificate.
    """
    if isinstance(r, LaurentPoly):
        return PuiseuxEncoding(order, _laurent_terms(r))
    r = to_ratfun(r)
    num = _ring_terms(r.numer)
    den = _ring_terms(r.denom)
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return PuiseuxEncoding.zero(order)
    a, c = leading_monomial(den, order)
    u = {sub_exp(e, a): -v / c for e, v in den.items() if e != a}
    G = geometric_series(u, order, nterms)
    lead = PuiseuxEncoding(order, {sub_exp(e, a): v / c for e, v in num.items()})
    return lead * G


def expand_any(v, order: OrderWeight, nterms: int = DEFAULT_TERMS) -> PuiseuxEncoding:
    if isinstance(v, PuiseuxEncoding):
        return v
    if isinstance(v, (RatFun, LaurentPoly)):
        return expand_ratfun(v, order, nterms)
    return PuiseuxEncoding.const(rat(v), order)


def apply_poly(q, phi: PuiseuxEncoding, nterms: int = DEFAULT_TERMS) -> PuiseuxEncoding:
    """``q(phi)`` for ``q`` given by coefficients (constant first) in Q(x, y)."""
    out = PuiseuxEncoding.zero(phi.order)
    power = PuiseuxEncoding.const(1, phi.order)
    for k, c in enumerate(q):
        if k:
            power = power * phi
        if c:
            out = out + expand_any(c, phi.order, nterms) * power
    return out
