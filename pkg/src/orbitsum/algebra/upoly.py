"""Dense univariate polynomials over Q(x, y).

A polynomial is a tuple of field coefficients, constant term first, with
no trailing zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from ..errors import DivisionByZero
from .ratfun import K, to_ratfun

ZERO = K.zero
ONE = K.one


def strip(p) -> tuple:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def lift(coeffs) -> tuple:
    return strip(to_ratfun(c) for c in coeffs)


def deg(p) -> int:
    return len(p) - 1


def lc(p):
    return p[-1] if p else ZERO


def add(p, q) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return strip(out)


def neg(p) -> tuple:
    return tuple(-c for c in p)


def sub(p, q) -> tuple:
    return add(p, neg(q))


def scale(p, c) -> tuple:
    if not c:
        return ()
    return tuple(a * c for a in p)


def mul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return strip(out)


def shift(p, k) -> tuple:
    return (ZERO,) * k + tuple(p) if p else ()


def divmod_(p, q):
    if not q:
        raise DivisionByZero("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    if len(r) <= dq:
        return (), strip(r)
    inv = 1 / q[-1]
    quo = [ZERO] * (len(r) - dq)
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c * inv
        quo[k - dq] = c
        for j in range(dq + 1):
            if q[j]:
                r[k - dq + j] -= c * q[j]
    return strip(quo), strip(r[:dq])


def rem(p, q) -> tuple:
    return divmod_(p, q)[1]


def monic(p) -> tuple:
    if not p:
        return ()
    c = p[-1]
    if c == 1:
        return tuple(p)
    inv = 1 / c
    return tuple(a * inv for a in p)


def deriv(p) -> tuple:
    return strip(c * i for i, c in enumerate(p) if i)


def gcd(p, q) -> tuple:
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def gcdex(p, q):
    """Return ``(s, t, h)`` with ``s*p + t*q = h = gcd(p, q)`` and ``h`` monic."""
    r0, r1 = tuple(p), tuple(q)
    s0, s1 = (ONE,), ()
    t0, t1 = (), (ONE,)
    while r1:
        quo, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return (), (), ()
    c = 1 / r0[-1]
    return scale(s0, c), scale(t0, c), scale(r0, c)


def sqf_part(p) -> tuple:
    """Squarefree part (product of distinct irreducible factors), monic."""
    if len(p) <= 2:
        return monic(p)
    g = gcd(p, deriv(p))
    return monic(divmod_(p, g)[0])


def is_squarefree(p) -> bool:
    return len(p) <= 2 or len(gcd(p, deriv(p))) == 1


def evaluate(p, x):
    """Horner evaluation; ``x`` may be anything supporting + and * with coefficients."""
    out = None
    for c in reversed(p):
        out = c if out is None else out * x + c
    return ZERO if out is None else out


def compose_mod(p, q, g) -> tuple:
    """``p(q) mod g``."""
    out: tuple = ()
    for c in reversed(p):
        out = rem(add(mul(out, q), (c,)), g)
    return out

