"""Vertices of the convex hull of a series support, with cone estimates."""

from __future__ import annotations

from dataclasses import dataclass

from ..cones import Cone
from .encoding import PuiseuxEncoding, sub_exp


@dataclass(frozen=True)
class SupportVertex:
    """``supp(phi)`` lies in ``vertex + cone``.

    ``exact`` is True when the vertex is a listed term of the series (so it
    is certainly in the support); apex vertices come from the tail bound and
    may lie outside the actual support.
    """

    vertex: tuple
    cone: Cone
    exact: bool


def support_vertices(e: PuiseuxEncoding) -> list:
    """Candidate vertices ``v`` with cones ``C_v`` such that ``supp <= v + C_v``.

    A candidate ``v`` (listed exponent or tail apex) is kept iff its tangent
    cone ``cone(P - v) + C`` is strictly convex, which is exactly the
    condition for ``v`` to be a vertex of ``conv(P) + (A + C)``. The
    resulting cones are estimates: each one alone contains the support.
    Vertices are returned in decreasing order.
    """
    points, apexes, cone = e.support_bound()
    cands = [(p, True) for p in points] + [(a, False) for a in apexes]
    allpts = points + apexes
    out = []
    for v, exact in cands:
        dirs = [sub_exp(p, v) for p in allpts if p != v]
        tc = Cone(dirs, 2) if dirs else Cone.zero(2)
        if cone is not None:
            tc = tc + cone
        if tc.is_strictly_convex():
            out.append(SupportVertex(v, tc, exact))
    order = e.order
    keyed = order.sort_desc([sv.vertex for sv in out])
    by_v = {sv.vertex: sv for sv in out}
    return [by_v[v] for v in keyed]
