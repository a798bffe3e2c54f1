import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitsum.algebra.laurent import VARS2, LaurentPoly
from orbitsum.algebra.ratfun import KX, KY, K, from_laurent
from orbitsum.algebra.scalars import QuadScalar, rat
from orbitsum.certifier import (
    CertifierInput,
    candidate_order_regions,
    certificate_from_json,
    input_from_orbit_sum,
    ppe,
    region_for_order,
    replay,
)
from orbitsum.cones import Cone, OrderWeight
from orbitsum.dde import support_cone_bound, to_kernel_form
from orbitsum.errors import PreconditionViolated
from orbitsum.orbit import compute_orbit, normalized_orbit_sum, orbit_equations, section_free_basis

from conftest import ex1_dde, ex3_kernel, ex3_system

W_EX3 = OrderWeight.quad(QuadScalar.sqrt(2), rat(1, 2))


def certifier_input(d, k, C0=None):
    o = compute_orbit(k.S)
    eqs = orbit_equations(k, o)
    ose = normalized_orbit_sum(k, o, eqs, section_free_basis(eqs, o.field))
    return input_from_orbit_sum(ose, C0 or support_cone_bound(d))


@pytest.fixture(scope="module")
def ci1():
    return certifier_input(ex1_dde(), to_kernel_form(ex1_dde()))


@pytest.fixture(scope="module")
def ci3():
    return certifier_input(ex3_system(), ex3_kernel())


def leading_exponent(support, w: OrderWeight):
    best = None
    for e in support:
        if best is None or w.cmp(e, best) > 0:
            best = e
    return best


# -- order regions --------------------------------------------------------


def test_regions_of_a_triangle():
    regions = candidate_order_regions([1 / (1 - KX - KY)])
    assert len(regions) == 3
    assert sorted(r.vertex for r in regions) == [(0, 0), (0, 1), (1, 0)]
    for r in regions:
        assert r.cone.is_strictly_convex()
        assert r.witness.in_dual_interior(r.cone)


def test_regions_of_monomials():
    (r,) = candidate_order_regions([KX**2 * KY, 3 * KY / KX, K.one])
    assert r.cone == Cone.zero(2)


def test_example3_has_region_for_weight(ci3):
    regions = candidate_order_regions(ci3.functions())
    i = region_for_order(regions, W_EX3)
    assert i is not None
    assert W_EX3.in_dual_interior(regions[i].cone)


polys = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.integers(-3, 3).filter(bool),
    min_size=1,
    max_size=4,
).map(lambda d: LaurentPoly(d, VARS2))


@given(st.lists(polys, min_size=1, max_size=3))
def test_region_witness_fixes_leading_monomials(ps):
    fs = [from_laurent(p) for p in ps]
    supports = [[tuple(int(k) for k in e) for e in q.monoms()] for f in fs for q in (f.numer, f.denom)]
    regions = candidate_order_regions(fs)
    vertices = set()
    for r in regions:
        # the witness fixes the leading exponent of every numerator and denominator,
        # and these add up to the region vertex
        lead = [leading_exponent(s, r.witness) for s in supports]
        assert tuple(sum(e[i] for e in lead) for i in (0, 1)) == r.vertex
        for g in r.cone.gens:
            assert r.witness.cmp(g, (0, 0)) < 0
        vertices.add(r.vertex)
    assert len(vertices) == len(regions)


# -- ppe ------------------------------------------------------------------


def test_ppe_example1(ci1):
    cert = ppe(ci1)
    assert cert.verdict
    assert all(t.empty for t in cert.triples)
    assert replay(cert)


def test_ppe_example3_with_weight(ci3):
    cert = ppe(ci3, order=W_EX3)
    assert cert.verdict
    assert cert.order == W_EX3
    assert replay(cert)


def test_ppe_example3_searches_regions(ci3):
    cert = ppe(ci3)
    assert cert.verdict and replay(cert)
    assert cert.order.in_dual_interior(cert.region.cone)


def test_ppe_fails_on_identity_term():
    C0 = support_cone_bound(ex1_dde())
    ci = CertifierInput((K.zero, K.one), (((KX,), (KY,), (K.one,)),), C0)
    cert = ppe(ci)
    assert not cert.verdict
    assert replay(cert)


def test_ppe_precondition(ci1):
    bad = CertifierInput(ci1.m, ci1.triples, Cone([(1, 0, 0), (0, 0, 1)]))
    with pytest.raises(PreconditionViolated):
        ppe(bad)


def test_ppe_monotone_in_C0(ci1):
    # a larger C0 can only lose certificates
    small = Cone([(0, 0, 1), (1, 0, 1)])
    large = Cone([(0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, 0, 2), (0, -1, 2)])
    cones = [small, ci1.C0, large]
    verdicts = [ppe(CertifierInput(ci1.m, ci1.triples, C)).verdict for C in cones]
    for a, b in zip(verdicts, verdicts[1:]):
        assert a or not b
    assert verdicts[1]


def test_ppe_deterministic_across_jobs(ci3):
    assert ppe(ci3, jobs=1).to_json() == ppe(ci3, jobs=4).to_json()


def test_certificate_json_roundtrip_and_tamper(ci3):
    cert = ppe(ci3, order=W_EX3)
    doc = cert.to_json()
    back = certificate_from_json(doc)
    assert replay(back)
    assert {**back.to_json(), "root": None} == {**doc, "root": None}
    bad = dict(doc)
    t0 = dict(doc["triples"][0])
    t0["v3"] = ["0", "0"]
    bad["triples"] = [t0] + doc["triples"][1:]
    assert not replay(certificate_from_json(bad))
