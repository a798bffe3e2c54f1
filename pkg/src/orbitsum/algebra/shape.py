"""Primitive elements through lex Groebner bases in shape position."""

from __future__ import annotations

import itertools
import random

from ..errors import NotSquarefree, ResourceExhausted
from . import groebner as gb
from . import upoly
from .field import FieldElem, SplittingField
from .ratfun import K

DEFAULT_BOUND = 5
DEFAULT_RETRIES = 20
DEFAULT_SEED = 0


def _draw(rng, n, bound):
    choices = [a for a in range(-bound, bound + 1) if a]
    return tuple(rng.choice(choices) for _ in range(n))


def _univariate_in(coeffs, var, nvars) -> dict:
    return gb.from_dense(coeffs, var, nvars)


def _divided_difference(m, i, j, nvars) -> dict:
    """``(m(Xi) - m(Xj)) / (Xi - Xj)`` as a polynomial in Xi, Xj."""
    out = {}
    for k, c in enumerate(m):
        if not c or k == 0:
            continue
        # (Xi^k - Xj^k)/(Xi - Xj) = sum_{a+b=k-1} Xi^a Xj^b
        for a in range(k):
            e = [0] * nvars
            e[i] = a
            e[j] = k - 1 - a
            e = tuple(e)
            v = out.get(e, K.zero) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _solve_shape(gens, nvars, budget):
    """Lex basis; returns ``(gs, eliminant)`` or None if not in shape form.

    When the eliminant has repeated factors it is replaced by its squarefree
    part and the basis is recomputed (radical step).
    """
    G = gb.gb_lex(gens, budget)
    shape = gb.shape_form(G, nvars)
    if shape is None:
        # the eliminant may be non-squarefree before the radical step
        elim = [g for g in G if not any(gb.lm(g)[:-1])]
        if len(elim) != 1:
            return None
        dense = gb._dense(elim[0], nvars - 1)
        sq = upoly.sqf_part(dense)
        if len(sq) == len(dense):
            return None
        G = gb.gb_lex(G + [_univariate_in(sq, nvars - 1, nvars)], budget)
        shape = gb.shape_form(G, nvars)
        if shape is None:
            return None
    gs, g = shape
    if not upoly.is_squarefree(g):
        G = gb.gb_lex(G + [_univariate_in(upoly.sqf_part(g), nvars - 1, nvars)], budget)
        shape = gb.shape_form(G, nvars)
        if shape is None:
            return None
        gs, g = shape
    return gs, g


def shape_split(
    minpolys,
    *,
    seed=DEFAULT_SEED,
    bound=DEFAULT_BOUND,
    retries=DEFAULT_RETRIES,
    coeffs=None,
    budget=gb.DEFAULT_STEP_BUDGET,
) -> SplittingField:
    """Splitting field of univariate polynomials over Q(x, y).

    Each input is a dense coefficient tuple (constant term first). The roots
    of the i-th polynomial become variables ``X_i1..X_id``; the ideal

        m_i(X_ij),  1 - Y * prod (X_ij - X_kl),  Z - sum a_ij X_ij

    is brought into lex shape form with ``Z`` smallest. Pass ``coeffs`` to
    fix the ``a_ij`` instead of drawing them.
    """
    polys = [upoly.lift(m) for m in minpolys]
    for m in polys:
        if len(m) < 2:
            raise NotSquarefree("constant polynomial has no roots")
        if not upoly.is_squarefree(m):
            raise NotSquarefree("input polynomial is not squarefree")
    slots = [(i, j) for i, m in enumerate(polys) for j in range(len(m) - 1)]
    n = len(slots)
    nvars = n + 2
    iy, iz = n, n + 1
    base = []
    for s, (i, _) in enumerate(slots):
        base.append(_univariate_in(polys[i], s, nvars))
    for s, t in itertools.combinations(range(n), 2):
        if slots[s][0] == slots[t][0]:
            base.append(_divided_difference(polys[slots[s][0]], s, t, nvars))
    prod = gb.const(1, nvars)
    for s, t in itertools.combinations(range(n), 2):
        prod = gb.poly_mul(prod, gb.poly_add(gb.var(s, nvars), gb.poly_scale(gb.var(t, nvars), K(-1))))
    base.append(gb.poly_add(gb.const(1, nvars), gb.poly_scale(gb.poly_mul(gb.var(iy, nvars), prod), K(-1))))

    rng = random.Random(seed)
    attempts = [tuple(coeffs)] if coeffs is not None else []
    while len(attempts) < (1 if coeffs is not None else retries):
        attempts.append(_draw(rng, n, bound))
    for a in attempts:
        lin = gb.var(iz, nvars)
        for s, c in enumerate(a):
            lin = gb.poly_add(lin, gb.poly_scale(gb.var(s, nvars), K(-c)))
        shape = _solve_shape(base + [lin], nvars, budget)
        if shape is None:
            continue
        gs, g = shape
        return SplittingField(g, gs[:n], witness=a, sources=polys)
    raise ResourceExhausted(f"no shape position found after {len(attempts)} attempts")


def adjoin_sqrt(
    field: SplittingField,
    d: FieldElem,
    *,
    seed=DEFAULT_SEED,
    bound=DEFAULT_BOUND,
    retries=DEFAULT_RETRIES,
    budget=gb.DEFAULT_STEP_BUDGET,
):
    """Extend ``field`` by a square root of ``d``.

    Returns ``(new_field, embed, root)`` where ``embed`` maps elements of the
    old field into the new one and ``root`` squares to the image of ``d``.
    Over Q(x, y) itself the new primitive element is the root, so the
    eliminant is exactly ``Z^2 - d``. Otherwise the ideal
    ``g(U), W^2 - d(U), Z - U - a W`` is put into shape position.
    """
    if not d.coeffs:
        raise NotSquarefree("square root of zero")
    if field.is_base():
        dv = d.rational_value()
        new = SplittingField(
            (-dv, K.zero, K.one),
            [((K.zero, K.one))],
            witness=(1,),
            sources=[(-dv, K.zero, K.one)],
        )
        gen_image = new.zero  # the old primitive element Z satisfies Z = 0
        return new, _embedder(new, gen_image), new.gen()

    nvars = 3  # U > W > Z
    g_u = _univariate_in(field.eliminant, 0, nvars)
    w2 = gb.var(1, nvars)
    w2 = gb.poly_mul(w2, w2)
    d_u = _univariate_in(d.coeffs, 0, nvars)
    base = [g_u, gb.poly_add(w2, gb.poly_scale(d_u, K(-1)))]
    rng = random.Random(seed)
    choices = [a for a in range(-bound, bound + 1) if a]
    for _ in range(retries):
        a = rng.choice(choices)
        lin = gb.poly_add(gb.var(2, nvars), gb.poly_scale(gb.var(0, nvars), K(-1)))
        lin = gb.poly_add(lin, gb.poly_scale(gb.var(1, nvars), K(-a)))
        shape = _solve_shape(base + [lin], nvars, budget)
        if shape is None:
            continue
        (gu, gw), g = shape
        provisional = SplittingField(g, (), check=False)
        gen_image = provisional.elem(gu)
        root_exprs = [
            FieldElem(field, r).lift_to(provisional, gen_image).coeffs for r in field.root_exprs
        ]
        new = SplittingField(
            g,
            root_exprs + [gw],
            witness=field.witness + (a,),
        )
        return new, _embedder(new, new.elem(gu)), new.elem(gw)
    raise ResourceExhausted(f"no shape position found after {retries} attempts")


def _embedder(new: SplittingField, gen_image: FieldElem):
    def embed(e: FieldElem) -> FieldElem:
        return e.lift_to(new, gen_image)

    return embed
