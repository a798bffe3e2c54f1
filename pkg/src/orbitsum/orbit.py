"""Orbits of kernel polynomials, orbit equations and section-free combinations.

The orbit of ``S`` is the closure of ``(x, y)`` under the steps that keep one
coordinate and move the other to another root of ``S(u, Y) = S(u, v)``
(resp. ``S(X, v) = S(u, v)``). Roots are found by deflating the adjacency
polynomial by the known roots and solving what is left when it has degree
one or two; square roots are adjoined to the current splitting field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.field import FieldElem, SplittingField, field_inv
from .algebra.laurent import VARS2, LaurentPoly
from .algebra.ratfun import K, KX, KY, split_square
from .algebra.shape import adjoin_sqrt
from .dde import KernelEquation
from .errors import (
    ExtensionBudgetExceeded,
    OrbitBudgetExceeded,
    Split,
    UnsupportedAdjacencyDegree,
)

DEFAULT_MAX_SIZE = 64
DEFAULT_MAX_EXT_DEG = 16
DEFAULT_MAX_DEGREE = 20


def elem_degree(e: FieldElem) -> int:
    """Largest total degree of a numerator or denominator among the coefficients."""
    return max(
        (sum(m) for c in e.coeffs for p in (c.numer, c.denom) for m in p.monoms()),
        default=0,
    )


def eval_laurent(p: LaurentPoly, u: FieldElem, v: FieldElem) -> FieldElem:
    """``p(u, v)`` for a Laurent polynomial in x, y."""
    if p.vars != VARS2:
        raise ValueError("expected a Laurent polynomial in x, y")
    F = u.field
    cache = {}

    def pw(base, which, k):
        key = (which, k)
        if key not in cache:
            cache[key] = base**k if k >= 0 else field_inv(base) ** (-k)
        return cache[key]

    out = F.zero
    for (i, j), c in sorted(p.items()):
        out = out + pw(u, 0, i) * pw(v, 1, j) * K(c)
    return out


def eval_tpoly(p: LaurentPoly, u: FieldElem, v: FieldElem) -> dict:
    """``{k: [t^k] p (u, v)}`` for ``p`` Laurent in x, y and polynomial in t."""
    if "t" not in p.vars:
        p = p.extend(VARS2 + ("t",)) if p.vars == VARS2 else p
    out = {}
    for k, c in sorted(p.by_power("t").items()):
        val = eval_laurent(c, u, v)
        if val.coeffs:
            out[k] = val
    return out


@dataclass(frozen=True)
class Orbit:
    """Orbit elements as pairs of field elements, with the discovery log.

    ``log`` holds ``(source, target, kept)`` where ``kept`` is 0 when the
    first coordinate was kept and 1 when the second was.
    """

    S: LaurentPoly
    field: SplittingField
    elements: tuple
    log: tuple

    def __len__(self):
        return len(self.elements)

    def check_invariance(self) -> bool:
        s0 = eval_laurent(self.S, self.field.const(KX), self.field.const(KY))
        return all(
            self.field.is_zero(eval_laurent(self.S, u, v) - s0) for u, v in self.elements
        )

    def project(self, target: SplittingField) -> "Orbit":
        """The orbit seen in a branch of its field."""
        f = self.field
        els = tuple((f.project(u, target), f.project(v, target)) for u, v in self.elements)
        return Orbit(self.S, target, els, self.log)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "size": len(self.elements),
            "elements": [[u.to_json(), v.to_json()] for u, v in self.elements],
            "log": [list(e) for e in self.log],
        }


class _OrbitState:
    def __init__(self, S, max_size, max_ext_deg, seed, max_degree=DEFAULT_MAX_DEGREE):
        self.S = S
        self.max_size = max_size
        self.max_degree = max_degree
        self.max_ext_deg = max_ext_deg
        self.seed = seed
        self.field = SplittingField.base()
        F = self.field
        self.elements = [(F.const(KX), F.const(KY))]
        self.log = []
        self.radicands = []  # (squarefree core, its square root in the field)
        self.by_power = [S.by_power("x"), S.by_power("y")]

    # -- field changes -------------------------------------------------
    def _remap(self, f):
        self.elements = [(f(u), f(v)) for u, v in self.elements]
        self.radicands = [(c, f(r)) for c, r in self.radicands]

    def branch(self, split: Split):
        a, b = split.factor, split.cofactor
        keep = a if len(a) <= len(b) else b
        old = self.field
        self.field = old.branch(keep)
        self._remap(lambda e: old.project(e, self.field))

    def adjoin(self, d: FieldElem):
        if 2 * self.field.degree > self.max_ext_deg:
            raise ExtensionBudgetExceeded(
                f"extension degree {2 * self.field.degree} exceeds {self.max_ext_deg}"
            )
        new, embed, root = adjoin_sqrt(self.field, d, seed=self.seed)
        self.field = new
        self._remap(embed)
        return root

    # -- roots of adjacency polynomials ---------------------------------
    def adjacency(self, idx, kept):
        """Coefficients (constant first) of the polynomial whose roots are the moved coordinate."""
        u, v = self.elements[idx]
        fixed = (u, v)[kept]
        parts = self.by_power[1 - kept]  # powers of the moving variable
        lo = min(min(parts), 0)
        hi = max(max(parts), 0)
        coeffs = []
        for k in range(lo, hi + 1):
            c = parts.get(k)
            if c is None:
                coeffs.append(self.field.zero)
                continue
            coeffs.append(_eval_univariate(c, fixed))
        s0 = eval_laurent(self.S, u, v)
        coeffs[-lo] = coeffs[-lo] - s0
        return self._strip(coeffs)

    def _strip(self, q):
        q = list(q)
        while q and self.field.is_zero(q[-1]):
            q.pop()
        while q and self.field.is_zero(q[0]):
            q.pop(0)  # roots at 0 are not points of the torus
        return q

    def new_roots(self, idx, kept):
        q = self.adjacency(idx, kept)
        u = self.elements[idx][kept]
        known = [
            e[1 - kept] for e in self.elements if self.field.is_zero(e[kept] - u)
        ]
        for w in known:
            while len(q) > 1:
                quo, rem = _deflate(q, w)
                if not self.field.is_zero(rem):
                    break
                q = quo
        deg = len(q) - 1
        if deg <= 0:
            return []
        if deg == 1:
            return [-q[0] / q[1]]
        if deg == 2:
            c, b, a = q
            disc = b * b - a * c * 4
            r = self.sqrt(disc)
            if r is None:
                return None  # field changed, recompute
            return [(-b + r) / (a * 2), (-b - r) / (a * 2)]
        raise UnsupportedAdjacencyDegree(f"deflated adjacency polynomial has degree {deg}")

    def sqrt(self, d: FieldElem):
        """A square root of ``d`` in the field, or None after enlarging the field."""
        if d.is_rational():
            core, root = split_square(d.rational_value())
            if core == K.one:
                return self.field.const(root)
            for c, r in self.radicands:
                if c == core:
                    return r * root
            r = self.adjoin(self.field.const(core))
            self.radicands.append((core, r))
            return None
        self.adjoin(d)
        return None

    def find(self, p):
        for i, (u, v) in enumerate(self.elements):
            if self.field.is_zero(u - p[0]) and self.field.is_zero(v - p[1]):
                return i
        return None

    def step(self, idx, kept):
        while True:
            try:
                roots = self.new_roots(idx, kept)
                if roots is None:
                    continue
                fixed = self.elements[idx][kept]
                for w in roots:
                    p = (fixed, w) if kept == 0 else (w, fixed)
                    if self.find(p) is None:
                        self.elements.append(p)
                        self.log.append((idx, len(self.elements) - 1, kept))
                        if len(self.elements) > self.max_size:
                            raise OrbitBudgetExceeded(
                                f"orbit has more than {self.max_size} elements"
                            )
                        if max(elem_degree(w), elem_degree(fixed)) > self.max_degree:
                            raise OrbitBudgetExceeded(
                                f"orbit coordinates exceed degree {self.max_degree}"
                            )
                return
            except Split as sp:
                self.branch(sp)


def _eval_univariate(c: LaurentPoly, w: FieldElem) -> FieldElem:
    """Evaluate a Laurent polynomial in one variable (given as a 1-variable LaurentPoly)."""
    out = w.field.zero
    inv = None
    for (k,), a in sorted(c.items()):
        if k >= 0:
            term = w**k
        else:
            inv = inv if inv is not None else field_inv(w)
            term = inv ** (-k)
        out = out + term * K(a)
    return out


def _deflate(q, w):
    """Synthetic division of ``q`` (constant first) by ``Y - w``: (quotient, remainder)."""
    n = len(q) - 1
    b = [None] * n
    acc = q[n]
    for k in range(n - 1, -1, -1):
        b[k] = acc
        acc = q[k] + w * acc
    return b, acc


def compute_orbit(
    S: LaurentPoly,
    max_size: int = DEFAULT_MAX_SIZE,
    max_ext_deg: int = DEFAULT_MAX_EXT_DEG,
    seed: int = 0,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> Orbit:
    """Breadth-first closure of ``(x, y)`` under the orbit steps of ``S``.

    Raises OrbitBudgetExceeded when the orbit outgrows ``max_size`` elements
    or a coordinate outgrows total degree ``max_degree``.
    """
    if S.vars != VARS2:
        raise ValueError("S must be a Laurent polynomial in x, y")
    if S.is_constant():
        raise ValueError("S must not be constant")
    st = _OrbitState(S, max_size, max_ext_deg, seed, max_degree)
    i = 0
    while i < len(st.elements):
        for kept in (0, 1):
            st.step(i, kept)
        i += 1
    return Orbit(S, st.field, tuple(st.elements), tuple(st.log))


# -- orbit equations ------------------------------------------------------


@dataclass(frozen=True)
class OrbitEquation:
    """The kernel equation at an orbit point.

    ``rhs`` maps t-powers to field elements; ``sections`` holds
    ``(section, argument, {t-power: coefficient})`` where ``argument`` is the
    coordinate the section is evaluated at (None for constants).
    """

    point: tuple
    rhs: dict
    sections: tuple


def orbit_equations(k: KernelEquation, orbit: Orbit) -> list:
    out = []
    for u, v in orbit.elements:
        rhs = eval_tpoly(k.rhs, u, v)
        secs = []
        for c, s in k.sections:
            arg = {"x": u, "y": v, "0": None}[s.kind]
            secs.append((s, arg, eval_tpoly(c, u, v)))
        out.append(OrbitEquation((u, v), rhs, tuple(secs)))
    return out


@dataclass(frozen=True)
class OrbitSumEquation:
    """``F(x, y) + sum p3 F(p1, p2) = numerator(t) / (1 - t^r S)``.

    ``triples`` lists ``(p1, p2, p3)`` for the non-identity orbit points;
    ``numerator`` maps t-powers to field elements.
    """

    field: SplittingField
    unknown: str
    triples: tuple
    numerator: dict
    r: int
    S: LaurentPoly
    weights: tuple

    def to_json(self) -> dict:
        return {
            "unknown": self.unknown,
            "triples": [[p1.to_json(), p2.to_json(), p3.to_json()] for p1, p2, p3 in self.triples],
            "numerator": {str(k): v.to_json() for k, v in sorted(self.numerator.items())},
            "kernel": {"r": self.r, "S": str(self.S)},
            "weights": [w.to_json() for w in self.weights],
        }


def _section_rows(eqs, F):
    """Group section occurrences into rows keyed by (section, argument class, t-power)."""
    keys = []  # list of (section, arg)
    rows = {}
    for e, eq in enumerate(eqs):
        for s, arg, coeffs in eq.sections:
            kid = None
            for i, (s2, a2) in enumerate(keys):
                if s2 == s and (a2 is None or F.is_zero(a2 - arg)):
                    kid = i
                    break
            if kid is None:
                keys.append((s, arg))
                kid = len(keys) - 1
            for tp, c in coeffs.items():
                row = rows.setdefault((kid, tp), [F.zero] * len(eqs))
                row[e] = row[e] + c
    return [rows[k] for k in sorted(rows)]


def _nullspace(rows, n, F):
    """Basis of ``{lam : row . lam = 0}`` over the field, in reduced form."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(rows)):
            if not F.is_zero(rows[i][col]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field_inv(rows[r][col])
        rows[r] = [c * inv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and not F.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [F.zero] * n
        vec[fc] = F.one
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def section_free_basis(eqs: list, field: SplittingField) -> list:
    """Basis of the combinations of orbit equations with all sections cancelled."""
    if not eqs:
        raise ValueError("need at least one equation")
    rows = _section_rows(eqs, field)
    return _nullspace(rows, len(eqs), field)


def normalized_orbit_sum(k: KernelEquation, orbit: Orbit, eqs, basis) -> OrbitSumEquation | None:
    """The basis combination with F(x, y)-coefficient 1, or None if there is none.

    Among several candidates the one with the fewest nonzero weights wins,
    then the lexicographically smallest support.
    """
    F = orbit.field
    cands = []
    for vec in basis:
        if F.is_zero(vec[0]):
            continue
        supp = tuple(i for i, c in enumerate(vec) if not F.is_zero(c))
        cands.append((len(supp), supp, vec))
    if not cands:
        return None
    cands.sort(key=lambda c: (c[0], c[1]))
    vec = cands[0][2]
    inv = field_inv(vec[0])
    w = [c * inv for c in vec]
    num = {}
    for lam, eq in zip(w, eqs):
        for tp, c in eq.rhs.items():
            num[tp] = num.get(tp, F.zero) + lam * c
    num = {tp: c for tp, c in num.items() if not F.is_zero(c)}
    triples = tuple(
        (u, v, lam) for lam, (u, v) in zip(w[1:], orbit.elements[1:]) if not F.is_zero(lam)
    )
    return OrbitSumEquation(F, k.unknown, triples, num, k.r, k.S, tuple(w))
