"""Non-negative and positive parts of series expansions in t."""

from __future__ import annotations

from ..algebra.laurent import VARS2, VARS3, LaurentPoly
from ..algebra.ratfun import R, K, RatFun, from_laurent, is_laurent, to_laurent, to_ratfun
from ..algebra.scalars import QuadScalar, is_scalar_zero
from ..cones import OrderWeight, ShiftedCone, empty_meet_orthant
from ..errors import UncertifiedTail
from .encoding import PuiseuxEncoding
from .expand import DEFAULT_TERMS, expand_ratfun


def _retained(e, strict) -> bool:
    lo = 1 if strict else 0
    return e[0] >= lo and e[1] >= lo


def _encoding_part(enc: PuiseuxEncoding, strict) -> LaurentPoly:
    """Exact retained part of an encoding, or UncertifiedTail."""
    for a in enc.apexes:
        if not empty_meet_orthant(ShiftedCone(a, enc.cone)):
            raise UncertifiedTail(f"tail region at {tuple(map(str, a))} meets the retained orthant")
    terms = {}
    for e, c in enc.terms:
        if _retained(e, strict):
            if any(v.denominator != 1 for v in e):
                raise UncertifiedTail("retained term with a fractional exponent")
            if isinstance(c, QuadScalar):
                if c.b:
                    raise UncertifiedTail("retained term with an irrational coefficient")
                c = c.a
            terms[(int(e[0]), int(e[1]))] = c
    return LaurentPoly(terms, VARS2)


def _slices(f: RatFun, axis: int):
    """``f = sum_j v^j f_j`` with ``v`` the variable ``axis`` and ``f_j`` free of ``v``.

    Only possible when the denominator is a power of ``v`` times a
    polynomial in the other variable; returns None otherwise.
    """
    den = f.denom.terms()
    powers = {m[axis] for m, _ in den}
    if len(powers) != 1:
        return None
    (shift,) = powers

    def drop(m):
        return (m[0], 0) if axis == 1 else (0, m[1])

    q = R.from_dict({drop(m): c for m, c in den})
    groups = {}
    for m, c in f.numer.terms():
        groups.setdefault(m[axis] - shift, {})[drop(m)] = c
    return {j: K.new(R.from_dict(g), q) for j, g in groups.items()}


def _expanded_part(f: RatFun, strict, order, nterms) -> LaurentPoly:
    if is_laurent(f):
        return to_laurent(f).nonneg_part(strict)
    if order is None:
        raise UncertifiedTail("a rational coefficient needs an order to be expanded")
    n = nterms
    for _ in range(4):
        try:
            return _encoding_part(expand_ratfun(f, order, n), strict)
        except UncertifiedTail:
            n *= 2
    return _encoding_part(expand_ratfun(f, order, n), strict)


def _coefficient_part(c, strict, order, nterms) -> LaurentPoly:
    if isinstance(c, LaurentPoly):
        return c.nonneg_part(strict)
    if isinstance(c, PuiseuxEncoding):
        return _encoding_part(c, strict)
    f = to_ratfun(c)
    if is_laurent(f):
        return to_laurent(f).nonneg_part(strict)
    # slices in the variable missing from the denominator are extracted
    # separately, so discarded slices never need an expansion
    lo = 1 if strict else 0
    for axis in (1, 0):
        parts = _slices(f, axis)
        if parts is None:
            continue
        out = LaurentPoly((), VARS2)
        for j, fj in parts.items():
            if j < lo:
                continue
            mono = LaurentPoly.monomial((0, j) if axis == 1 else (j, 0), 1, VARS2)
            out = out + mono * _expanded_part(fj, False, order, nterms)
        return out.nonneg_part(strict)
    return _expanded_part(f, strict, order, nterms)


def positive_part(
    expr,
    N: int,
    *,
    strict: bool = False,
    kernel=None,
    order: OrderWeight | None = None,
    nterms: int = DEFAULT_TERMS,
) -> LaurentPoly:
    """``[x^>= y^>=]`` (``strict``: ``[x^> y^>]``) of ``expr``, truncated at ``t^N``.

    ``expr`` is a LaurentPoly in (x, y) or (x, y, t), a rational function of
    (x, y), an encoding, or a list of such items giving the coefficients of
    ``t^0, t^1, ...``. With ``kernel = (r, S)`` the expression is divided by
    ``1 - t^r S`` first. Coefficients that are not Laurent polynomials are
    expanded under ``order``; the result is exact, or UncertifiedTail is
    raised when a tail certificate reaches the retained orthant.
    """
    coeffs = _t_coefficients(expr)
    r, S = kernel if kernel is not None else (None, None)
    out = {}
    for d in range(N + 1):
        acc = None
        # [t^d] = sum_{j + r n = d} coeffs[j] S^n
        for j, c in enumerate(coeffs):
            if j > d or _is_zero(c):
                continue
            if r is None:
                if j != d:
                    continue
                term = c
            else:
                if (d - j) % r:
                    continue
                term = _times_laurent(c, S ** ((d - j) // r), order, nterms)
            acc = term if acc is None else _add(acc, term, order, nterms)
        if acc is None:
            continue
        part = _coefficient_part(acc, strict, order, nterms)
        for e, v in part.items():
            out[(e[0], e[1], d)] = v
    return LaurentPoly(out, VARS3)


def _t_coefficients(expr):
    if isinstance(expr, (list, tuple)):
        return list(expr)
    if isinstance(expr, LaurentPoly) and expr.vars == VARS3:
        by = expr.by_power("t")
        if any(k < 0 for k in by):
            raise ValueError("negative powers of t")
        top = max(by, default=-1)
        return [by.get(k, LaurentPoly((), VARS2)) for k in range(top + 1)]
    return [expr]


def _is_zero(c) -> bool:
    if isinstance(c, (LaurentPoly, PuiseuxEncoding)):
        return c.is_zero()
    if isinstance(c, RatFun):
        return not c
    return is_scalar_zero(c)


def _times_laurent(c, m: LaurentPoly, order, nterms):
    if isinstance(c, PuiseuxEncoding):
        return c * PuiseuxEncoding(c.order, {e: v for e, v in m.items()})
    if isinstance(c, LaurentPoly):
        return c * m
    f = to_ratfun(c)
    if is_laurent(f):
        return to_laurent(f) * m
    return f * from_laurent(m)


def _add(a, b, order, nterms):
    if isinstance(a, PuiseuxEncoding) or isinstance(b, PuiseuxEncoding):
        enc_order = a.order if isinstance(a, PuiseuxEncoding) else b.order
        return _as_encoding(a, enc_order, nterms) + _as_encoding(b, enc_order, nterms)
    if isinstance(a, LaurentPoly) and isinstance(b, LaurentPoly):
        return a + b
    fa = from_laurent(a) if isinstance(a, LaurentPoly) else to_ratfun(a)
    fb = from_laurent(b) if isinstance(b, LaurentPoly) else to_ratfun(b)
    return fa + fb


def _as_encoding(c, order, nterms):
    if isinstance(c, PuiseuxEncoding):
        return c
    if isinstance(c, LaurentPoly):
        return PuiseuxEncoding(order, dict(c.items()))
    return expand_ratfun(to_ratfun(c), order, nterms)
