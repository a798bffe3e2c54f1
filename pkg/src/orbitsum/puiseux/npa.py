"""Generalized Newton-Puiseux algorithm with respect to an additive order.

Roots of ``p(x, y, Z)`` are built term by term from the ordered Newton
polygon: for each coefficient ``p_k`` of ``Z^k`` take its leading exponent
``L_k``; a root exponent ``g`` is admissible when at least two of the values
``L_k + k g`` tie for the maximum. Once a branch is a simple root of the
initial equation, the rest of the series is the unique solution of the
fixed-point equation

    W = -r0 - (r1 - 1) W - sum_{k>=2} r_k W^k

whose data all have exponents <= 0, which yields the tail certificate.
"""

from __future__ import annotations

import functools
import math
from math import comb

from ..algebra import upoly
from ..algebra.ratfun import R, to_ratfun
from ..algebra.scalars import coerce, rat
from ..cones import OrderWeight
from ..errors import NotSquarefree, RamificationOverflow, ResourceExhausted
from .encoding import (
    ZERO2,
    PuiseuxEncoding,
    add_exp,
    cone_of,
    exp2,
    monoid_heap,
    poly_add,
    poly_mul,
    scale_exp,
    sub_exp,
)
from .scalar_roots import scalar_roots

DEFAULT_MAX_RAMIFICATION = 64
DEFAULT_MAX_DEPTH = 64
DEFAULT_TERMS = 16


def _mono(e, c) -> dict:
    return {exp2(e): c}


def _clear_denominators(coeffs):
    """Turn coefficients in Q(x, y) into polynomial dicts with the same roots."""
    fs = [to_ratfun(c) for c in coeffs]
    den = R.one
    for f in fs:
        den = den.lcm(f.denom)
    out = []
    for f in fs:
        q = f.numer * (den.exquo(f.denom))
        out.append({exp2(e): rat(c) for e, c in q.terms()})
    return out


def _lead(p: dict, order: OrderWeight):
    e = order.max(list(p))
    return e, p[e]


def _shift_poly(P, c, g):
    """Coefficients of ``P(c x^g + Z)``."""
    n = len(P) - 1
    pw = [{ZERO2: rat(1)}]
    mono = _mono(g, c)
    for _ in range(n):
        pw.append(poly_mul(pw[-1], mono))
    out = []
    for j in range(n + 1):
        acc: dict = {}
        for k in range(j, n + 1):
            if P[k]:
                acc = poly_add(acc, poly_mul(P[k], pw[k - j]), comb(k, j))
        out.append(acc)
    return out


def _edges(P, order):
    """Edges ``(gamma, tied indices)`` of the ordered Newton polygon, gamma increasing.

    Starting from the lowest index, the next breakpoint is the smallest
    slope ``(L_i - L_j) / (j - i)``; the edge ends at the largest index
    attaining it.
    """
    idx = [k for k, p in enumerate(P) if p]
    L = {k: _lead(P[k], order)[0] for k in idx}
    edges = []
    i = idx[0]
    while i != idx[-1]:
        best, bj = None, None
        for j in idx:
            if j <= i:
                continue
            g = scale_exp(sub_exp(L[i], L[j]), rat(1, j - i))
            s = 1 if best is None else order.cmp(g, best)
            if best is None or s < 0:
                best, bj = g, j
            elif s == 0:
                bj = j
        V = add_exp(L[i], scale_exp(best, i))
        tied = [k for k in idx if i <= k <= bj and add_exp(L[k], scale_exp(best, k)) == V]
        edges.append((best, tied))
        i = bj
    return edges


def newton_puiseux(
    coeffs,
    order: OrderWeight,
    kmin: int = 1,
    *,
    nterms: int = DEFAULT_TERMS,
    max_ramification: int = DEFAULT_MAX_RAMIFICATION,
    max_depth: int = DEFAULT_MAX_DEPTH,
    check_squarefree: bool = True,
):
    """All ``deg_Z p`` series roots of ``p = sum coeffs[k] Z^k`` as encodings.

    ``coeffs`` are elements of Q(x, y) (or anything convertible), constant
    term first. Each encoding lists at least ``max(kmin, separation)``
    explicit terms and carries a tail certificate unless the root is a
    finite sum. Roots are sorted by their term sequences, largest first.
    """
    ks = [to_ratfun(c) for c in coeffs]
    while ks and not ks[-1]:
        ks.pop()
    if len(ks) < 2:
        raise NotSquarefree("polynomial is constant in Z")
    if check_squarefree and not upoly.is_squarefree(tuple(ks)):
        raise NotSquarefree("polynomial is not squarefree in Z")
    P = _clear_denominators(ks)
    results = []
    _solve(P, [], None, order, kmin, nterms, max_ramification, max_depth, results)
    if len(results) != len(P) - 1:
        raise ResourceExhausted(
            f"found {len(results)} roots of a polynomial of degree {len(P) - 1}"
        )
    return sorted(results, key=functools.cmp_to_key(lambda a, b: _cmp_enc(a, b, order)))


def _cmp_enc(a, b, order):
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        s = order.cmp(ea, eb)
        if s:
            return -s
        if ca != cb:
            return -1 if ca > cb else 1
    return len(b.terms) - len(a.terms)


def _check_ram(prefix, g, bound):
    dens = [int(c.denominator) for e, _ in prefix for c in e] + [int(c.denominator) for c in g]
    k = math.lcm(*dens) if dens else 1
    if k > bound:
        raise RamificationOverflow(f"ramification {k} exceeds bound {bound}")


def _solve(P, prefix, gprev, order, kmin, nterms, max_ram, depth, out):
    if depth <= 0:
        raise ResourceExhausted("Newton-Puiseux recursion depth exhausted")
    if not P[0]:
        # the prefix itself is an exact root
        out.append(PuiseuxEncoding(order, prefix))
        P = P[1:]
        if len(P) < 2 or not any(P[1:]):
            return
    for g, tied in _edges(P, order):
        if gprev is not None and order.cmp(g, gprev) >= 0:
            break
        _check_ram(prefix, g, max_ram)
        i0 = tied[0]
        chi = [rat(0)] * (tied[-1] - i0 + 1)
        for k in tied:
            chi[k - i0] = _lead(P[k], order)[1]
        for c, mult in scalar_roots(chi):
            if not c:
                continue
            term = (g, c)
            if mult == 1:
                out.append(_regular(P, g, c, prefix + [term], order, kmin, nterms))
            else:
                _solve(
                    _shift_poly(P, c, g), prefix + [term], g, order, kmin, nterms,
                    max_ram, depth - 1, out,
                )


def _regular(P, g, c, prefix, order, kmin, nterms):
    """Finish a branch whose last term ``c x^g`` is a simple root of its initial equation."""
    n = len(P) - 1
    # Q(W) = P(x^g (c + W)) = sum_j q_j W^j
    q = []
    for j in range(n + 1):
        acc: dict = {}
        for k in range(j, n + 1):
            if P[k]:
                coef = comb(k, j) * c ** (k - j) if k > j else rat(1)
                acc = poly_add(acc, poly_mul(P[k], _mono(scale_exp(g, k), coerce(coef))))
        q.append(acc)
    e1, c1 = _lead(q[1], order)
    r = [{sub_exp(e, e1): coerce(v / c1) for e, v in qj.items()} for qj in q]
    r0 = r[0]
    if not r0:
        return PuiseuxEncoding(order, prefix)
    r1m = dict(r[1])
    r1m.pop(ZERO2)
    gens = set(r0) | set(r1m)
    for rj in r[2:]:
        gens |= {e for e in rj if e != ZERO2}
    cone = cone_of(gens, order)
    count = max(nterms, kmin + 2)
    while True:
        W, frontier = _fixed_point(r0, r1m, r[2:], sorted(gens), order, count)
        terms = prefix + [(add_exp(g, e), v) for e, v in W.items() if v]
        enc = PuiseuxEncoding(order, terms, [add_exp(g, f) for f in frontier], cone)
        if len(enc.terms) >= kmin or count > 8 * max(nterms, kmin):
            return enc
        count *= 2


def _fixed_point(r0, r1m, rhigh, gens, order, count):
    """Coefficients of W on the first ``count`` monoid elements, in decreasing order."""
    visited, frontier = monoid_heap(gens, order, count)
    W: dict = {}
    powers = [None, W] + [dict() for _ in rhigh]  # powers[j][e] = [e] W^j
    nz = []
    for e in visited:
        if e == ZERO2:
            for pw in powers[2:]:
                pw[e] = rat(0)
            W[e] = rat(0)
            continue
        for j in range(2, len(powers)):
            acc = 0
            prev = powers[j - 1]
            for f in nz:
                v = prev.get(sub_exp(e, f))
                if v:
                    acc = acc + W[f] * v
            powers[j][e] = coerce(acc)
        val = -r0.get(e, 0)
        for s, v in r1m.items():
            w = W.get(sub_exp(e, s))
            if w:
                val = val - v * w
        for j, rj in enumerate(rhigh, start=2):
            for s, v in rj.items():
                w = powers[j].get(sub_exp(e, s))
                if w:
                    val = val - v * w
        val = coerce(val)
        W[e] = val
        if val:
            nz.append(e)
    return {e: v for e, v in W.items() if v}, frontier
