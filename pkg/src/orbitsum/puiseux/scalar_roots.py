"""Roots of univariate polynomials with coefficients in Q or Q(sqrt(D)).

Only what the Newton-Puiseux algorithm needs: rational roots and roots in
one real quadratic extension of Q. Anything larger raises
:class:`ResourceExhausted`.
"""

from __future__ import annotations

from sympy import Poly, QQ, Symbol

from ..algebra.scalars import QuadScalar, coerce, rat, squarefree_part
from ..errors import ResourceExhausted

_c = Symbol("c")


def _is_rational(v) -> bool:
    return not isinstance(v, QuadScalar) or v.b == 0


def _strip(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _divmod(p, q):
    p = list(p)
    out = [rat(0)] * max(len(p) - len(q) + 1, 1)
    while len(p) >= len(q) and p:
        k = len(p) - len(q)
        f = coerce(p[-1] / q[-1])
        out[k] = f
        for i, c in enumerate(q):
            p[k + i] = coerce(p[k + i] - f * c)
        p.pop()
        p = _strip(p)
    return _strip(out), p


def _multiplicity(p, r) -> int:
    m = 0
    lin = [coerce(-r), rat(1)]
    while True:
        q, rem = _divmod(p, lin)
        if rem:
            return m
        m += 1
        p = q


def _sqrt_in(v, D):
    """Square root of ``v`` inside Q(sqrt(D)) (``D`` may be None), or None."""
    from gmpy2 import is_square, isqrt

    def qsqrt(a):
        a = rat(a)
        if a < 0:
            return None
        n, d = int(a.numerator), int(a.denominator)
        if is_square(n) and is_square(d):
            return rat(int(isqrt(n)), int(isqrt(d)))
        return None

    if _is_rational(v):
        a = rat(v.a if isinstance(v, QuadScalar) else v)
        s = qsqrt(a)
        if s is not None:
            return s
        if a <= 0:
            return None
        core = squarefree_part(int(a.numerator) * int(a.denominator))
        if D is not None and core != D:
            return None
        # sqrt(a) = sqrt(core) * sqrt(a / core)
        rest = qsqrt(a / core)
        return QuadScalar(0, rest, core) if rest is not None else None
    # (p + q sqrt(D))^2 = a + b sqrt(D): p^2 + D q^2 = a, 2 p q = b
    a, b = v.a, v.b
    disc = qsqrt(a * a - b * b * v.D)
    if disc is None:
        return None
    for p2 in ((a + disc) / 2, (a - disc) / 2):
        p = qsqrt(p2)
        if p:
            q = b / (2 * p)
            return QuadScalar(p, q, v.D)
    return None


def scalar_roots(coeffs):
    """Nonzero and zero roots with multiplicities of ``sum coeffs[k] c^k``.

    Returns ``[(root, multiplicity), ...]`` sorted decreasingly by value.
    """
    p = _strip(coerce(c) for c in coeffs)
    if len(p) < 2:
        return []
    Ds = {c.D for c in p if isinstance(c, QuadScalar) and c.b != 0}
    if len(Ds) > 1:
        raise ResourceExhausted("coefficients from several quadratic fields")
    D = next(iter(Ds), None)
    roots = []
    if D is None:
        poly = Poly([QQ(int(c.numerator), int(c.denominator)) for c in reversed(p)], _c, domain=QQ)
        _, factors = poly.factor_list()
        for f, mult in factors:
            fc = [rat(int(x.numerator), int(x.denominator)) for x in reversed(f.all_coeffs())]
            roots.extend((r, mult) for r in _solve_small(fc, None))
    else:
        # squarefree part, then linear or quadratic factors only
        sq = _sqf(p)
        for r in _solve_small(sq, D):
            roots.append((r, _multiplicity(p, r)))
    uniq = {}
    for r, m in roots:
        uniq[coerce(r)] = uniq.get(coerce(r), 0) + m
    return sorted(uniq.items(), key=lambda rm: _SortKey(rm[0]), reverse=True)


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return bool(self.v < other.v)


def _deriv(p):
    return _strip(coerce(c * k) for k, c in enumerate(p) if k)


def _gcd(p, q):
    while q:
        p, q = q, _divmod(p, q)[1]
    lc = p[-1]
    return [coerce(c / lc) for c in p]


def _sqf(p):
    g = _gcd(p, _deriv(p))
    return _divmod(p, g)[0] if len(g) > 1 else p


def _solve_small(f, D):
    f = _strip(f)
    if len(f) == 2:
        return [coerce(-f[0] / f[1])]
    if len(f) == 3:
        a, b, c = f[2], f[1], f[0]
        disc = coerce(b * b - 4 * a * c)
        s = _sqrt_in(disc, D)
        if s is None:
            raise ResourceExhausted("initial coefficient needs a field beyond one quadratic extension")
        return [coerce((-b + s) / (2 * a)), coerce((-b - s) / (2 * a))]
    if D is not None:
        raise ResourceExhausted("initial coefficient equation of degree > 2 over Q(sqrt(D))")
    raise ResourceExhausted(f"irreducible initial coefficient equation of degree {len(f) - 1}")
