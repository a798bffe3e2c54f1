import pytest
import sympy as sp

from orbitsum.algebra.laurent import VARS2, VARS3, LaurentPoly
from orbitsum.algebra.ratfun import to_laurent
from orbitsum.dde import oracle_expand, to_kernel_form
from orbitsum.orbit import (
    _section_rows,
    compute_orbit,
    normalized_orbit_sum,
    orbit_equations,
    section_free_basis,
)

from conftest import ex1_dde, ex3_kernel

x, y, X = sp.symbols("x y X")

SMALL_STEP_MODELS = {
    "simple": [(1, 0), (0, 1), (-1, 0), (0, -1)],
    "diagonal": [(1, 1), (-1, 1), (1, -1), (-1, -1)],
    "king": [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if a or b],
    "kreweras": [(-1, 0), (0, -1), (1, 1)],
    "reverse-kreweras": [(1, 0), (0, 1), (-1, -1)],
    "tandem": [(1, 0), (0, -1), (-1, 1)],
    "gessel": [(1, 0), (-1, 0), (1, 1), (-1, -1)],
}


def step_poly(steps):
    return LaurentPoly({s: 1 for s in steps}, VARS2)


def sym(e):
    return sp.cancel(e.rational_value().as_expr())


def involution_orbit(steps):
    """Orbit by iterating the two rational involutions with sympy."""
    S = sum(x**a * y**b for a, b in steps)

    def phi(u, v):
        Sx = sp.expand(S * x)  # A_- + A_0 x + A_+ x^2
        am, ap = Sx.coeff(x, 0), Sx.coeff(x, 2)
        return sp.cancel(am.subs(y, v) / ap.subs(y, v) / u), v

    def psi(u, v):
        Sy = sp.expand(S * y)
        bm, bp = Sy.coeff(y, 0), Sy.coeff(y, 2)
        return u, sp.cancel(bm.subs(x, u) / bp.subs(x, u) / v)

    seen, todo = [(x, y)], [(x, y)]
    while todo:
        p = todo.pop()
        for q in (phi(*p), psi(*p)):
            if not any(sp.cancel(q[0] - r[0]) == 0 and sp.cancel(q[1] - r[1]) == 0 for r in seen):
                seen.append(q)
                todo.append(q)
        assert len(seen) < 40
    return seen


# -- orbits ---------------------------------------------------------------


def test_example1_orbit_elements():
    o = compute_orbit(step_poly(SMALL_STEP_MODELS["simple"]))
    assert o.field.is_base
    assert [(sym(u), sym(v)) for u, v in o.elements] == [
        (x, y), (x, 1 / y), (1 / x, y), (1 / x, 1 / y)
    ]


@pytest.mark.parametrize("name", sorted(SMALL_STEP_MODELS))
def test_small_step_orbits_match_involutions(name):
    steps = SMALL_STEP_MODELS[name]
    o = compute_orbit(step_poly(steps))
    assert o.check_invariance()
    got = {(sym(u), sym(v)) for u, v in o.elements}
    want = {(sp.cancel(u), sp.cancel(v)) for u, v in involution_orbit(steps)}
    assert len(got) == len(o.elements)
    assert got == want


def test_example3_orbit():
    o = compute_orbit(ex3_kernel().S)
    assert len(o) == 6
    assert o.field.degree == 2
    assert o.check_invariance()
    m = sp.Poly([c.as_expr() for c in reversed(o.field.eliminant)], X)
    h = x + y + x * y + x * y**2
    want = sp.Poly(X**2 - 4 * x**3 * y**2 - h**2, X)
    ratio = sp.cancel(m.as_expr() / want.as_expr())
    assert ratio.free_symbols <= {x, y} and ratio != 0
    # pairwise distinct elements
    F = o.field
    for i, (u, v) in enumerate(o.elements):
        for u2, v2 in o.elements[:i]:
            assert not (F.is_zero(u - u2) and F.is_zero(v - v2))


# -- orbit sums -----------------------------------------------------------


def _orbit_sum(k):
    o = compute_orbit(k.S)
    eqs = orbit_equations(k, o)
    basis = section_free_basis(eqs, o.field)
    return o, eqs, basis, normalized_orbit_sum(k, o, eqs, basis)


def _check_residual(o, eqs, ose):
    F = o.field
    # the weighted combination cancels every section and reproduces the numerator
    for row in _section_rows(eqs, F):
        assert F.is_zero(sum((w * c for w, c in zip(ose.weights, row)), F.zero))
    powers = {tp for eq in eqs for tp in eq.rhs} | set(ose.numerator)
    for tp in powers:
        acc = sum((w * eq.rhs.get(tp, F.zero) for w, eq in zip(ose.weights, eqs)), F.zero)
        assert F.is_zero(acc - ose.numerator.get(tp, F.zero))


def test_example1_orbit_sum():
    k = to_kernel_form(ex1_dde())
    o, eqs, basis, ose = _orbit_sum(k)
    assert len(basis) == 1
    assert [sym(w) for w in ose.weights] == [1, -1 / y**2, -1 / x**2, 1 / (x**2 * y**2)]
    assert sp.cancel(sym(ose.numerator[0]) - (x * y - y / x + 1 / (x * y) - x / y) / (x * y)) == 0
    _check_residual(o, eqs, ose)


def test_example3_orbit_sum():
    k = ex3_kernel()
    o, eqs, basis, ose = _orbit_sum(k)
    assert len(basis) == 1
    assert o.field.is_zero(ose.weights[0] - o.field.one)
    _check_residual(o, eqs, ose)


def _substitute(F, u, v):
    """F(u, v, t) for a series F and Laurent monomials u, v."""
    (eu, cu), = u.items()
    (ev, cv), = v.items()
    out = {}
    for (i, j, n), c in F.items():
        e = (eu[0] * i + ev[0] * j, eu[1] * i + ev[1] * j, n)
        out[e] = out.get(e, 0) + c * cu**i * cv**j
    return LaurentPoly(out, VARS3)


def test_example1_orbit_sum_holds_for_series():
    # (1 - tS) (sum_g w_g F(g)) = numerator, checked on the oracle series
    N = 8
    k = to_kernel_form(ex1_dde())
    o, _, _, ose = _orbit_sum(k)
    F = oracle_expand(ex1_dde(), N)["F"]
    lhs = LaurentPoly((), VARS3)
    for w, (u, v) in zip(ose.weights, o.elements):
        wl = to_laurent(w.rational_value()).extend(VARS3)
        lhs = lhs + wl * _substitute(F, to_laurent(u.rational_value()), to_laurent(v.rational_value()))
    num = to_laurent(ose.numerator[0].rational_value()).extend(VARS3)
    assert (k.kernel() * lhs).truncate("t", N) == num
