import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitsum.algebra.laurent import VARS2, VARS3, LaurentPoly
from orbitsum.cones import Cone
from orbitsum.dde import (
    DDE,
    DDEEquation,
    DDETerm,
    Section,
    oracle_expand,
    support_cone_bound,
    to_kernel_form,
    verify_kernel_form,
)
from orbitsum.errors import PreconditionViolated, UnsupportedKernelShape, UnsupportedSystem

from conftest import ONE, T, X, XB, Y, YB, L3, ex1_dde, ex3_kernel, ex3_system


def layer(F, n):
    return F.coeff_in("t", n)


# -- oracle ---------------------------------------------------------------


def test_oracle_example1_to_t2():
    F = oracle_expand(ex1_dde(), 2)["F"]
    assert F == ONE + (X + Y) * T + ((X + Y) ** 2 + 2 * ONE) * T**2


def test_oracle_example3_to_t2():
    s = oracle_expand(ex3_system(), 2)
    assert s["F0"] == ONE + (ONE + X + Y) * T**2
    assert s["F1"] == (ONE + X + Y) * T


def test_oracle_order_zero_is_free_term():
    assert oracle_expand(ex1_dde(), 0)["F"] == ONE
    assert oracle_expand(ex3_system(), 0) == {"F0": ONE, "F1": L3({})}


# -- kernel form ----------------------------------------------------------


def test_kernel_form_example1():
    k = to_kernel_form(ex1_dde())
    assert k.r == 1
    assert k.S == LaurentPoly({(1, 0): 1, (0, 1): 1, (-1, 0): 1, (0, -1): 1}, VARS2)
    assert dict((s, c) for c, s in k.sections) == {
        Section("F", "y", 0): -T * XB,
        Section("F", "x", 0): -T * YB,
    }
    assert verify_kernel_form(k, ex1_dde(), 10)


def test_kernel_form_mixed_derivative():
    d = DDE.single(ONE, [(ONE, 1, 1)])
    k = to_kernel_form(d)
    assert k.S == LaurentPoly({(-1, -1): 1}, VARS2)
    g = T * XB * YB
    assert dict((s, c) for c, s in k.sections) == {
        Section("F", "x", 0): -g,
        Section("F", "y", 0): -g,
        Section("F", "0", (0, 0)): g,
    }
    assert verify_kernel_form(k, d, 5)


def test_kernel_form_without_sections():
    k = to_kernel_form(DDE.single(ONE, [(X + Y, 0, 0)]))
    assert k.sections == ()
    assert k.S == LaurentPoly({(1, 0): 1, (0, 1): 1}, VARS2)


def test_kernel_form_rejects_systems():
    with pytest.raises(UnsupportedSystem):
        to_kernel_form(ex3_system())


def test_verify_detects_wrong_kernel():
    assert verify_kernel_form(ex3_kernel(), ex3_system(), 6)
    assert not verify_kernel_form(ex3_kernel((1, 1, 1, 1, -1)), ex3_system(), 2)


# -- support cone bound ---------------------------------------------------


def test_support_cone_examples():
    assert support_cone_bound(ex1_dde()) == Cone([(0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert support_cone_bound(ex3_system()) == Cone([(0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert support_cone_bound(DDE.single(ONE, [(X * X, 0, 0)])) == Cone([(0, 0, 1), (2, 0, 1)])
    with pytest.raises(PreconditionViolated):
        support_cone_bound(DDE.single(ONE + X, [(ONE, 1, 0)]))


@pytest.mark.parametrize("d", [ex1_dde(), ex3_system()], ids=["ex1", "ex3"])
def test_support_cone_contains_oracle(d):
    C = support_cone_bound(d)
    for F in oracle_expand(d, 10).values():
        assert all(C.contains(e) for e in F.support())


# -- properties -----------------------------------------------------------

coefs = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)),
    st.integers(-2, 2).filter(bool),
    min_size=1,
    max_size=2,
).map(lambda d: LaurentPoly(d, VARS3))

single_terms = st.lists(
    st.tuples(coefs, st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3
)


@given(single_terms, st.integers(-2, 2).filter(bool))
def test_kernel_form_always_verifies(terms, c0):
    d = DDE.single(L3({(0, 0, 0): c0}), terms)
    try:
        k = to_kernel_form(d)
    except UnsupportedKernelShape:  # mixed powers of t
        return
    assert verify_kernel_form(k, d, 5)


@given(single_terms, single_terms)
def test_support_cone_bound_is_sound(ta, tb):
    d = DDE(
        ("A", "B"),
        {
            "A": DDEEquation(ONE, [DDETerm(c, k, l, "B") for c, k, l in ta]),
            "B": DDEEquation(ONE, [DDETerm(c, k, l, "A") for c, k, l in tb]),
        },
    )
    C = support_cone_bound(d)
    for F in oracle_expand(d, 6).values():
        assert all(C.contains(e) for e in F.support())
