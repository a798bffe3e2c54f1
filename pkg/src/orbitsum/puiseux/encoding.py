"""Finite encodings of series in C_<((x, y)).

An encoding stores explicit terms plus a tail certificate: finitely many
apexes and one common cone ``C``. The encoded series ``phi`` satisfies

    supp(phi - sum of explicit terms)  is contained in  union_a (a + C)

and no explicit term lies in that tail region, so every listed coefficient
is exact. ``C`` only contains directions that are negative for the order,
which makes it strictly convex and bounded above.
"""

from __future__ import annotations

import heapq
import itertools
import math

from ..algebra.scalars import QuadScalar, coerce, rat
from ..cones import Cone, OrderWeight, ShiftedCone, check_same_order

ZERO2 = (rat(0), rat(0))


def exp2(e) -> tuple:
    return (rat(e[0]), rat(e[1]))


def add_exp(a, b) -> tuple:
    return (a[0] + b[0], a[1] + b[1])


def sub_exp(a, b) -> tuple:
    return (a[0] - b[0], a[1] - b[1])


def scale_exp(a, k) -> tuple:
    return (a[0] * k, a[1] * k)


class _Key:
    """Heap key for exponents; larger under the order pops first."""

    __slots__ = ("e", "order")

    def __init__(self, e, order):
        self.e = e
        self.order = order

    def __lt__(self, other):
        return self.order.cmp(self.e, other.e) > 0


def poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = add_exp(e1, e2)
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = coerce(v)
            else:
                out.pop(e, None)
    return out


def poly_add(p: dict, q: dict, s=1) -> dict:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + s * c
        if v:
            out[e] = coerce(v)
        else:
            out.pop(e, None)
    return out


class PuiseuxEncoding:
    __slots__ = ("order", "terms", "apexes", "cone", "_dict")

    def __init__(self, order: OrderWeight, terms, apexes=(), cone: Cone | None = None, trim=True):
        clean: dict = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = exp2(e)
            c = coerce(c)
            if c:
                v = clean.get(e, 0) + c
                if v:
                    clean[e] = coerce(v)
                else:
                    clean.pop(e, None)
        apexes = [exp2(a) for a in apexes]
        if not apexes:
            cone = None
        elif cone is None:
            cone = Cone.zero(2)
        if cone is not None and not order.in_dual_interior(cone):
            raise ValueError("tail cone must be negative for the order")
        apexes = _prune_apexes(apexes, cone, order) if apexes else []
        if trim and apexes:
            clean = {
                e: c for e, c in clean.items() if not _in_region(e, apexes, cone)
            }
        ordered = tuple(sorted(clean.items(), key=lambda kv: _Key(kv[0], order)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "terms", ordered)
        object.__setattr__(self, "apexes", tuple(apexes))
        object.__setattr__(self, "cone", cone)
        object.__setattr__(self, "_dict", dict(ordered))

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxEncoding is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, order) -> "PuiseuxEncoding":
        return cls(order, ())

    @classmethod
    def const(cls, c, order) -> "PuiseuxEncoding":
        return cls(order, [(ZERO2, c)])

    @classmethod
    def from_terms(cls, terms, order) -> "PuiseuxEncoding":
        return cls(order, terms)

    # -- inspection ----------------------------------------------------
    @property
    def exact(self) -> bool:
        return not self.apexes

    def is_zero(self) -> bool:
        return not self.terms and not self.apexes

    @property
    def ramification(self) -> int:
        dens = [int(c.denominator) for e, _ in self.terms for c in e]
        dens += [int(c.denominator) for a in self.apexes for c in a]
        return math.lcm(*dens) if dens else 1

    def coefficient(self, e):
        return self._dict.get(exp2(e), rat(0))

    def in_tail(self, e) -> bool:
        return bool(self.apexes) and _in_region(exp2(e), self.apexes, self.cone)

    def known_above(self, e) -> bool:
        """True when no tail point is >= ``e``, so all terms >= ``e`` are listed."""
        return all(self.order.cmp(a, e) < 0 for a in self.apexes)

    def leading_term(self):
        """Exact leading term, or None when the tail may dominate the listed terms."""
        if not self.terms:
            return None
        e, c = self.terms[0]
        if not self.known_above(e):
            return None
        return e, c

    def leading_exponent(self):
        lt = self.leading_term()
        if lt is None:
            raise ValueError("leading term is not determined by the encoding")
        return lt[0]

    def top_apex(self):
        return self.order.max(self.apexes) if self.apexes else None

    def tail_cert(self) -> ShiftedCone | None:
        """A single shifted cone containing the whole tail region."""
        if not self.apexes:
            return None
        top = self.top_apex()
        extra = [sub_exp(a, top) for a in self.apexes if a != top]
        return ShiftedCone(top, self.cone + Cone(extra, 2) if extra else self.cone)

    def support_bound(self):
        """Points and region bounding the support: listed exponents, apexes, cone."""
        return [e for e, _ in self.terms], list(self.apexes), self.cone

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "PuiseuxEncoding":
        if isinstance(other, PuiseuxEncoding):
            check_same_order(self.order, other.order)
            return other
        return PuiseuxEncoding.const(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        cone = _join_cones(self.cone, other.cone)
        return PuiseuxEncoding(
            self.order,
            poly_add(self._dict, other._dict),
            self.apexes + other.apexes,
            cone,
        )

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxEncoding(
            self.order, {e: -c for e, c in self.terms}, self.apexes, self.cone, trim=False
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "PuiseuxEncoding":
        c = coerce(c)
        if not c:
            return PuiseuxEncoding.zero(self.order)
        return PuiseuxEncoding(
            self.order, {e: v * c for e, v in self.terms}, self.apexes, self.cone, trim=False
        )

    def shift(self, s) -> "PuiseuxEncoding":
        s = exp2(s)
        return PuiseuxEncoding(
            self.order,
            {add_exp(e, s): c for e, c in self.terms},
            [add_exp(a, s) for a in self.apexes],
            self.cone,
            trim=False,
        )

    def __mul__(self, other):
        if not isinstance(other, PuiseuxEncoding):
            return self.scale(other)
        other = self._coerce(other)
        terms = poly_mul(self._dict, other._dict)
        apexes = []
        for s in self._dict:
            apexes.extend(add_exp(s, a) for a in other.apexes)
        for s in other._dict:
            apexes.extend(add_exp(s, a) for a in self.apexes)
        for a, b in itertools.product(self.apexes, other.apexes):
            apexes.append(add_exp(a, b))
        cone = _join_cones(self.cone, other.cone)
        return PuiseuxEncoding(self.order, terms, apexes, cone)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use expand_ratfun for inverses")
        out = PuiseuxEncoding.const(1, self.order)
        for _ in range(n):
            out = out * self
        return out

    def truncate_terms(self, n) -> "PuiseuxEncoding":
        """Keep the ``n`` largest explicit terms; the rest joins the tail."""
        if len(self.terms) <= n:
            return self
        kept = self.terms[:n]
        dropped = [e for e, _ in self.terms[n:]]
        return PuiseuxEncoding(
            self.order, kept, list(self.apexes) + dropped, self.cone or Cone.zero(2), trim=False
        )

    def support_vertices(self):
        from .support import support_vertices

        return support_vertices(self)

    def __eq__(self, other):
        return (
            isinstance(other, PuiseuxEncoding)
            and self.order == other.order
            and self.terms == other.terms
            and self.apexes == other.apexes
            and self.cone == other.cone
        )

    def __hash__(self):
        return hash((self.terms, self.apexes, self.cone))

    def __repr__(self):
        shown = " + ".join(f"{c}*x^{e[0]}*y^{e[1]}" for e, c in self.terms[:6])
        if len(self.terms) > 6:
            shown += " + ..."
        tail = f"; tail {list(map(lambda a: tuple(map(str, a)), self.apexes))} + {self.cone!r}" if self.apexes else ""
        return f"PuiseuxEncoding({shown or '0'}{tail})"

    def to_json(self) -> dict:
        from ..cones import _qstr

        def sc(c):
            if isinstance(c, QuadScalar):
                return {"a": _qstr(c.a), "b": _qstr(c.b), "D": c.D}
            return _qstr(c)

        return {
            "ramification": self.ramification,
            "terms": [[[_qstr(e[0]), _qstr(e[1])], sc(c)] for e, c in self.terms],
            "tail_apexes": [[_qstr(a[0]), _qstr(a[1])] for a in self.apexes],
            "tail_cone": self.cone.to_json() if self.cone is not None else None,
            "exact": self.exact,
        }


def _join_cones(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _in_region(e, apexes, cone) -> bool:
    return any(cone.contains(sub_exp(e, a)) for a in apexes)


def _prune_apexes(apexes, cone, order):
    """Drop duplicate apexes and those inside another apex's region."""
    uniq = order.sort_desc(set(apexes))
    kept = []
    for a in uniq:
        if not any(cone.contains(sub_exp(a, b)) for b in kept):
            kept.append(a)
    return kept


def monoid_heap(gens, order, count, start=ZERO2, limit=None):
    """Enumerate ``start + monoid(gens)`` in decreasing order.

    Returns ``(visited, frontier)``: the first ``count`` elements and the
    elements generated but not yet visited. Every element of the monoid
    that was not visited lies in ``frontier + cone(gens)``.
    """
    gens = [exp2(g) for g in gens]
    start = exp2(start)
    heap = [_Key(start, order)]
    seen = {start}
    visited = []
    while heap and len(visited) < count:
        k = heapq.heappop(heap)
        visited.append(k.e)
        for g in gens:
            n = add_exp(k.e, g)
            if n not in seen:
                seen.add(n)
                heapq.heappush(heap, _Key(n, order))
    return visited, [k.e for k in heap]


def cone_of(points, order) -> Cone:
    pts = [p for p in points if p != ZERO2]
    for p in pts:
        if order.cmp(p, ZERO2) >= 0:
            raise ValueError("direction is not negative for the order")
    return Cone(pts, 2) if pts else Cone.zero(2)
