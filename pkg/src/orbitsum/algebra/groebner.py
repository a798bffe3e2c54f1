"""Buchberger's algorithm over Q(x, y) with the lexicographic order.

Polynomials in the auxiliary variables X1 > X2 > ... > Xn are dicts mapping
exponent tuples to nonzero elements of ``K``. Lex comparison is plain tuple
comparison, so the leading monomial is ``max(p)``.
"""

from __future__ import annotations

from ..errors import ResourceExhausted
from .ratfun import K

DEFAULT_STEP_BUDGET = 200_000


def lm(p):
    return max(p)


def lc(p):
    return p[max(p)]


def _divides(a, b) -> bool:
    return all(i <= j for i, j in zip(a, b))


def _lcm(a, b):
    return tuple(max(i, j) for i, j in zip(a, b))


def _mono_sub(a, b):
    return tuple(i - j for i, j in zip(a, b))


def monic(p) -> dict:
    if not p:
        return {}
    inv = 1 / lc(p)
    return {e: c * inv for e, c in p.items()}


def _sub_scaled(p, q, c, shift):
    """``p - c * x^shift * q`` in place on ``p``."""
    for e, v in q.items():
        e2 = tuple(i + j for i, j in zip(e, shift))
        w = p.get(e2, K.zero) - c * v
        if w:
            p[e2] = w
        else:
            p.pop(e2, None)
    return p


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise ResourceExhausted(f"Groebner step budget of {self.limit} exhausted")


def reduce(p, basis, budget=None, full=True) -> dict:
    """Remainder of ``p`` on division by ``basis`` (a list of polynomials)."""
    p = dict(p)
    leads = [(lm(g), lc(g), g) for g in basis if g]
    out = {}
    while p:
        e = max(p)
        c = p[e]
        for m, gc, g in leads:
            if _divides(m, e):
                if budget is not None:
                    budget.tick()
                _sub_scaled(p, g, c / gc, _mono_sub(e, m))
                break
        else:
            if not full:
                out.update(p)
                break
            out[e] = c
            del p[e]
    return out


def spoly(f, g) -> dict:
    mf, mg = lm(f), lm(g)
    L = _lcm(mf, mg)
    out = {}
    _sub_scaled(out, f, -1 / lc(f), _mono_sub(L, mf))
    _sub_scaled(out, g, 1 / lc(g), _mono_sub(L, mg))
    return out


def gb_lex(generators, budget=DEFAULT_STEP_BUDGET) -> list:
    """Reduced, monic lex Groebner basis, sorted by decreasing leading monomial."""
    steps = _Budget(budget)
    G = []
    for f in generators:
        f = {e: c for e, c in f.items() if c}
        if f:
            G.append(monic(f))
    if not G:
        return []
    G.sort(key=lm)
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda ij: _lcm(lm(G[ij[0]]), lm(G[ij[1]])), reverse=True)
        i, j = pairs.pop()
        mi, mj = lm(G[i]), lm(G[j])
        L = _lcm(mi, mj)
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue  # coprime leading monomials
        if any(
            k != i and k != j
            and G[k]
            and _divides(lm(G[k]), L)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        steps.tick()
        h = reduce(spoly(G[i], G[j]), G, steps)
        if h:
            h = monic(h)
            if all(v == 0 for v in lm(h)):
                return [{lm(h): K.one}]
            n = len(G)
            G.append(h)
            pairs.extend((k, n) for k in range(n))
    return _reduced(G, steps)


def _reduced(G, steps) -> list:
    G = [g for g in G if g]
    minimal = []
    for g in sorted(G, key=lm):
        if not any(_divides(lm(h), lm(g)) for h in minimal):
            minimal = [h for h in minimal if not _divides(lm(g), lm(h))]
            minimal.append(g)
    out = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        out.append(monic(reduce(g, others, steps)))
    out.sort(key=lm, reverse=True)
    return out


def is_groebner(G) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    for j in range(len(G)):
        for i in range(j):
            if reduce(spoly(G[i], G[j]), G):
                return False
    return True


def shape_form(G, nvars):
    """If ``G`` is ``{X1 - g1(Z), ..., X_{n-1} - g_{n-1}(Z), g(Z)}`` return ``(gs, g)``.

    ``Z`` is the last variable. Polynomials in ``Z`` are returned as dense
    coefficient tuples, constant term first.
    """
    if len(G) != nvars:
        return None
    last = nvars - 1
    eliminant = None
    gs = [None] * last
    for g in G:
        e = lm(g)
        if all(k == 0 for k in e[:last]):
            if eliminant is not None:
                return None
            eliminant = _dense(g, last)
            continue
        idx = [i for i in range(last) if e[i]]
        if len(idx) != 1 or e[idx[0]] != 1 or e[last] != 0:
            return None
        i = idx[0]
        rest = {m: c for m, c in g.items() if m != e}
        if any(any(m[:last]) for m in rest):
            return None
        gs[i] = tuple(-c for c in _dense(rest, last)) if rest else ()
    if eliminant is None or any(x is None for x in gs):
        return None
    return gs, eliminant


def _dense(p, var) -> tuple:
    if not p:
        return ()
    n = max(e[var] for e in p)
    out = [K.zero] * (n + 1)
    for e, c in p.items():
        out[e[var]] = c
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def from_dense(coeffs, var, nvars) -> dict:
    """Embed a univariate polynomial in variable ``var`` into ``nvars`` variables."""
    out = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * nvars
            e[var] = k
            out[tuple(e)] = c
    return out


def poly_mul(p, q) -> dict:
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, K.zero) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_add(p, q) -> dict:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, K.zero) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_scale(p, c) -> dict:
    return {e: v * c for e, v in p.items()} if c else {}


def var(i, nvars, c=None) -> dict:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): K.one if c is None else K(c)}


def const(c, nvars) -> dict:
    c = K(c) if not hasattr(c, "numer") else c
    return {(0,) * nvars: c} if c else {}
