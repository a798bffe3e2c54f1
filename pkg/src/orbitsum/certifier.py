"""Certifying that the non-negative part of an orbit sum is ``F(x, y)`` alone.

For each term ``p3(phi) F(p1(phi), p2(phi))`` of an orbit-sum equation, where
``phi`` is a series root of the eliminant under some additive order, the
support is bounded by ``v3 + C_v3 + C'``: ``(v3, C_v3)`` bounds the support
of ``p3(phi)`` and ``C'`` is the composed cone for ``F(p1(phi), p2(phi))``.
When every such region misses ``Q_{>=0}^2 x Q``, the non-negative part of
the orbit sum reduces to ``F``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .algebra.ratfun import to_ratfun
from .algebra.scalars import QuadScalar, rat
from .cones import (
    Cone,
    OrderWeight,
    ShiftedCone,
    composition_support,
    empty_meet_orthant,
    meets_plane_nontrivially,
)
from .errors import PreconditionViolated, ResourceExhausted
from .puiseux import (
    PuiseuxEncoding,
    apply_poly,
    expand_ratfun,
    newton_puiseux,
    support_vertices,
)
from .puiseux.encoding import sub_exp

DEFAULT_TERMS = 12
MAX_TERM_DOUBLINGS = 3


# -- order regions ----------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Vertices of the convex hull in counter-clockwise order (monotone chain)."""
    pts = sorted(set((rat(p[0]), rat(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def minkowski_hull(polytopes) -> list:
    acc = [(rat(0), rat(0))]
    for P in polytopes:
        hp = convex_hull(P)
        acc = convex_hull([(a[0] + b[0], a[1] + b[1]) for a in acc for b in hp])
    return acc


def _supports(f) -> list:
    """Exponent sets of numerator and denominator of a rational function."""
    f = to_ratfun(f)
    out = []
    for p in (f.numer, f.denom):
        out.append([tuple(int(k) for k in e) for e in p.monoms()])
    return out


@dataclass(frozen=True)
class OrderRegion:
    """Exponent-space cone ``cone`` whose orders (from its dual) fix every leading monomial."""

    cone: Cone
    vertex: tuple
    witness: OrderWeight

    def weights(self) -> Cone:
        return self.cone.dual()

    def to_json(self) -> dict:
        return {
            "cone": self.cone.to_json(),
            "vertex": [str(c) for c in self.vertex],
            "witness": self.witness.to_json(),
        }


def witness_order(cone: Cone, radicand: int = 2) -> OrderWeight:
    """An order given by an irrational weight in the interior of ``cone.dual()``."""
    s = QuadScalar.sqrt(radicand)
    if cone.is_zero():
        return OrderWeight.quad(s, rat(1))
    if len(cone.gens) == 1:
        g = cone.gens[0]
        perp = (-g[1], g[0])
        return OrderWeight.quad(-g[0] + s * perp[0], -g[1] + s * perp[1])
    d1, d2 = cone.facets[:2]
    return OrderWeight.quad(d1[0] + s * d2[0], d1[1] + s * d2[1])


def candidate_order_regions(functions) -> list:
    """Maximal regions of the common refinement of the normal fans of all inputs.

    Each region is the tangent cone ``C`` of the Minkowski sum of all Newton
    polytopes at one of its vertices; for every order from the interior of
    ``C*`` each input has the same leading monomial.
    """
    polys = []
    for f in functions:
        polys.extend(_supports(f))
    M = minkowski_hull(polys)
    out = []
    n = len(M)
    for i, v in enumerate(M):
        if n == 1:
            cone = Cone.zero(2)
        elif n == 2:
            cone = Cone([sub_exp(M[1 - i], v)], 2)
        else:
            cone = Cone([sub_exp(M[i - 1], v), sub_exp(M[(i + 1) % n], v)], 2)
        out.append(OrderRegion(cone, v, witness_order(cone)))
    return out


def region_for_order(regions, order: OrderWeight):
    for i, reg in enumerate(regions):
        if order.in_dual_interior(reg.cone):
            return i
    return None


# -- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class CertifierInput:
    """Eliminant ``m`` and triples ``(p1, p2, p3)`` as polynomials in the primitive element."""

    m: tuple
    triples: tuple
    C0: Cone

    def functions(self):
        fs = list(self.m)
        for tr in self.triples:
            for p in tr:
                fs.extend(p)
        return [f for f in fs if f]


@dataclass(frozen=True)
class TripleCertificate:
    lead1: tuple
    tail1: Cone
    lead2: tuple
    tail2: Cone
    v3: tuple
    cone3: Cone
    composed: Cone | None
    empty: bool
    reason: str = ""

    def to_json(self) -> dict:
        def pt(v):
            return [str(c) for c in v] if v is not None else None

        return {
            "lead1": pt(self.lead1),
            "tail1": self.tail1.to_json() if self.tail1 is not None else None,
            "lead2": pt(self.lead2),
            "tail2": self.tail2.to_json() if self.tail2 is not None else None,
            "v3": pt(self.v3),
            "cone3": self.cone3.to_json() if self.cone3 is not None else None,
            "composed": self.composed.to_json() if self.composed is not None else None,
            "empty": self.empty,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Certificate:
    verdict: bool
    C0: Cone
    root: PuiseuxEncoding | None = None
    root_index: int | None = None
    order_cone: Cone | None = None
    region: OrderRegion | None = None
    region_index: int | None = None
    order: OrderWeight | None = None
    triples: tuple = ()
    log: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "verdict": "True" if self.verdict else "Failed",
            "C0": self.C0.to_json(),
            "root": self.root.to_json() if self.root is not None else None,
            "root_index": self.root_index,
            "order_cone": self.order_cone.to_json() if self.order_cone is not None else None,
            "region": self.region.to_json() if self.region is not None else None,
            "region_index": self.region_index,
            "order": self.order.to_json() if self.order is not None else None,
            "triples": [t.to_json() for t in self.triples],
            "log": list(self.log),
        }


def _series(poly, phi, order, nterms):
    if len(poly) <= 1:
        c = poly[0] if poly else 0
        if not c:
            return PuiseuxEncoding.zero(order)
        return expand_ratfun(to_ratfun(c), order, nterms)
    return apply_poly(poly, phi, nterms)


def _leading_vertex(enc: PuiseuxEncoding):
    lt = enc.leading_term()
    if lt is None:
        return None
    for sv in support_vertices(enc):
        if sv.vertex == lt[0]:
            return sv
    return None


def _certify_triple(C0, e1, e2, e3) -> TripleCertificate:
    s1, s2 = _leading_vertex(e1), _leading_vertex(e2)
    if s1 is None or s2 is None:
        return TripleCertificate(None, None, None, None, None, None, None, False,
                                 "leading term of a substituted coordinate is not determined")
    C = composition_support(C0, s1.vertex, s2.vertex, s1.cone, s2.cone)
    if e3.is_zero():
        return TripleCertificate(s1.vertex, s1.cone, s2.vertex, s2.cone, None, None, C, True,
                                 "coefficient vanishes")
    best = None
    for sv in support_vertices(e3):
        region = ShiftedCone(sv.vertex + (rat(0),), sv.cone.lift(3) + C)
        ok = empty_meet_orthant(region)
        tc = TripleCertificate(s1.vertex, s1.cone, s2.vertex, s2.cone, sv.vertex, sv.cone, C, ok)
        if ok:
            return tc
        best = best or tc
    if best is None:
        return TripleCertificate(s1.vertex, s1.cone, s2.vertex, s2.cone, None, None, C, False,
                                 "coefficient has no support bound")
    return TripleCertificate(best.lead1, best.tail1, best.lead2, best.tail2, best.v3,
                             best.cone3, C, False, "support bound meets the non-negative orthant")


def _roots(m, order, nterms):
    if len(m) <= 2:
        # m is linear: the primitive element is rational
        root = -to_ratfun(m[0]) / to_ratfun(m[1]) if len(m) == 2 else to_ratfun(0)
        return [expand_ratfun(root, order, nterms) if root else PuiseuxEncoding.zero(order)]
    return newton_puiseux(list(m), order, nterms=nterms)


def _attempt(ci: CertifierInput, ri, region: OrderRegion, nterms):
    """All roots for one region; returns (certificate or None, log lines)."""
    log = []
    order = region.witness
    C1 = region.cone
    if not (region.cone + C1).is_strictly_convex():
        return None, [f"region {ri}: C + C1 not strictly convex"]
    n = nterms
    for _ in range(MAX_TERM_DOUBLINGS + 1):
        try:
            roots = _roots(ci.m, order, n)
        except ResourceExhausted as exc:
            return None, [f"region {ri}: root expansion failed: {exc}"]
        undetermined = False
        for k, phi in enumerate(roots):
            certs = []
            ok = True
            for p1, p2, p3 in ci.triples:
                e1, e2, e3 = (_series(p, phi, order, n) for p in (p1, p2, p3))
                tc = _certify_triple(ci.C0, e1, e2, e3)
                certs.append(tc)
                if not tc.empty:
                    ok = False
                    if "not determined" in tc.reason:
                        undetermined = True
                    break
            if ok:
                log.append(f"region {ri}, root {k}: True")
                return Certificate(True, ci.C0, phi, k, C1, region, ri, order, tuple(certs)), log
            log.append(f"region {ri}, root {k}: {certs[-1].reason}")
        if not undetermined:
            break
        n *= 2
    return None, log


def ppe(
    ci: CertifierInput,
    *,
    order: OrderWeight | None = None,
    nterms: int = DEFAULT_TERMS,
    jobs: int = 1,
) -> Certificate:
    """Search order regions and series roots for a certificate.

    A user ``order`` is tried first (as an extra region when it lies in no
    computed region). The result is the successful branch with the smallest
    (region, root) index, independent of ``jobs``.
    """
    if meets_plane_nontrivially(ci.C0):
        raise PreconditionViolated("C0 meets R^2 x {0} outside the origin")
    regions = candidate_order_regions(ci.functions())
    if order is not None:
        i = region_for_order(regions, order)
        if i is not None:
            reg = regions[i]
            regions = [OrderRegion(reg.cone, reg.vertex, order)] + regions[:i] + regions[i + 1:]
        else:
            regions = [OrderRegion(Cone.zero(2), (rat(0), rat(0)), order)] + regions
    tasks = list(enumerate(regions))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(lambda t: _attempt(ci, t[0], t[1], nterms), tasks))
    else:
        results = []
        for t in tasks:
            res = _attempt(ci, t[0], t[1], nterms)
            results.append(res)
            if res[0] is not None:
                break
    log = []
    for cert, lines in results:
        log.extend(lines)
        if cert is not None:
            return Certificate(
                True, cert.C0, cert.root, cert.root_index, cert.order_cone, cert.region,
                cert.region_index, cert.order, cert.triples, tuple(log),
            )
    return Certificate(False, ci.C0, log=tuple(log))


def replay(cert: Certificate) -> bool:
    """Re-derive every verdict of a certificate using only cone operations."""
    if not cert.verdict:
        return not cert.triples or not all(t.empty for t in cert.triples)
    if meets_plane_nontrivially(cert.C0):
        return False
    if not cert.order.in_dual_interior(cert.region.cone):
        return False
    if not (cert.region.cone + cert.order_cone).is_strictly_convex():
        return False
    for t in cert.triples:
        try:
            C = composition_support(cert.C0, t.lead1, t.lead2, t.tail1, t.tail2)
        except (PreconditionViolated, AssertionError):
            return False
        if C != t.composed or not C.is_strictly_convex():
            return False
        if t.v3 is None:
            if t.reason != "coefficient vanishes":
                return False
            continue
        region = ShiftedCone(tuple(t.v3) + (rat(0),), t.cone3.lift(3) + C)
        if empty_meet_orthant(region) != t.empty or not t.empty:
            return False
    return True


def _pt(data):
    return tuple(rat(c) for c in data) if data is not None else None


def _cone(data, dim):
    return Cone.from_json(data, dim) if data is not None else None


def triple_from_json(d: dict) -> TripleCertificate:
    return TripleCertificate(
        _pt(d["lead1"]), _cone(d["tail1"], 2), _pt(d["lead2"]), _cone(d["tail2"], 2),
        _pt(d["v3"]), _cone(d["cone3"], 2), _cone(d["composed"], 3), bool(d["empty"]),
        d.get("reason", ""),
    )


def certificate_from_json(d: dict) -> Certificate:
    """Rebuild the cone data of a certificate; the series root is not restored."""
    region = None
    if d.get("region") is not None:
        r = d["region"]
        region = OrderRegion(
            Cone.from_json(r["cone"], 2), _pt(r["vertex"]), OrderWeight.from_json(r["witness"])
        )
    return Certificate(
        d["verdict"] == "True",
        Cone.from_json(d["C0"], 3),
        None,
        d.get("root_index"),
        _cone(d.get("order_cone"), 2),
        region,
        d.get("region_index"),
        OrderWeight.from_json(d["order"]) if d.get("order") is not None else None,
        tuple(triple_from_json(t) for t in d.get("triples", ())),
        tuple(d.get("log", ())),
    )


def input_from_orbit_sum(ose, C0: Cone) -> CertifierInput:
    triples = tuple((u.coeffs, v.coeffs, w.coeffs) for u, v, w in ose.triples)
    return CertifierInput(tuple(ose.field.eliminant), triples, C0)
