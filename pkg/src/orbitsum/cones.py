"""Rational polyhedral cones in R^2 and R^3, additive orders on Q^2.

Cones are stored by canonical generators: a basis of the lineality space
(both signs, in reduced echelon form) followed by the extreme rays of the
pointed part, each a primitive integer vector. The dual
``C* = {u : <u, c> <= 0 for all c in C}`` is computed exactly by enumerating
the rays of the inequality description, which is cheap in dimension <= 3.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce as _fold

from .algebra.scalars import QuadScalar, Rat, _sgn, coerce, rat
from .errors import OrderMismatch, PreconditionViolated

__all__ = [
    "Cone",
    "ShiftedCone",
    "OrderWeight",
    "LinMap",
    "order_cmp",
    "primitive",
    "fm_feasible",
    "empty_meet_orthant",
    "composition_support",
]


# -- exact linear algebra --------------------------------------------------


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), rat(0))


def primitive(v) -> tuple:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    v = [rat(c) for c in v]
    den = _fold(lambda a, b: a * b // math.gcd(a, b), (int(c.denominator) for c in v), 1)
    ints = [int(c * den) for c in v]
    g = _fold(math.gcd, (abs(i) for i in ints), 0)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(i // g for i in ints)


def _rref(rows, n):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[rat(c) for c in r] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [c * inv for c in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _nullspace(rows, n):
    """Basis of ``{u : row . u = 0}``, returned in canonical (echelon) form."""
    red, pivots = _rref(rows, n) if rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [rat(0)] * n
        v[f] = rat(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    if not basis:
        return []
    # canonical basis of the span, independent of how rows were given
    canon, _ = _rref(basis, n)
    return [primitive(b) for b in canon]


def rank(rows, n) -> int:
    return len(_rref(rows, n)[0]) if rows else 0


def _rays(rows, n):
    """Generators of the polyhedral cone ``{u in R^n : row . u <= 0 for every row}``."""
    rows = [tuple(r) for r in rows if any(r)]
    lin = _nullspace(rows, n)
    out = []
    for l in lin:
        out.append(tuple(l))
        out.append(tuple(-c for c in l))
    d = n - len(lin)  # dimension of the pointed part
    if d == 0:
        return sorted(set(out))
    rays = set()
    # a ray of the pointed part is cut out by the lineality space plus
    # d-1 independent tight rows
    for combo in itertools.combinations(range(len(rows)), d - 1):
        eqs = [rows[i] for i in combo] + [tuple(l) for l in lin]
        if rank(eqs, n) != n - 1:
            continue
        ns = _nullspace(eqs, n)
        if len(ns) != 1:
            continue
        u = ns[0]
        for s in (1, -1):
            cand = tuple(s * c for c in u)
            if all(_dot(r, cand) <= 0 for r in rows):
                rays.add(cand)
    return sorted(set(out)) + sorted(rays - set(out))


# -- Fourier-Motzkin --------------------------------------------------------


def fm_feasible(ineqs, nvars, eqs=()) -> bool:
    """Decide feasibility of ``{a . z <= b} and {a . z = b}`` over Q.

    Each constraint is a pair ``(a, b)``. Equalities are eliminated by
    substitution first, the remaining variables by Fourier-Motzkin.
    """
    ineqs = [([rat(c) for c in a], rat(b)) for a, b in ineqs]
    eqs = [([rat(c) for c in a], rat(b)) for a, b in eqs]
    while eqs:
        a, b = eqs.pop()
        k = next((i for i, c in enumerate(a) if c != 0), None)
        if k is None:
            if b != 0:
                return False
            continue

        def sub(con, a=a, b=b, k=k):
            c, d = con
            f = c[k] / a[k]
            return ([ci - f * ai for ci, ai in zip(c, a)], d - f * b)

        eqs = [sub(e) for e in eqs]
        ineqs = [sub(e) for e in ineqs]
    for k in range(nvars):
        pos, neg, rest = [], [], []
        for a, b in ineqs:
            if a[k] > 0:
                pos.append((a, b))
            elif a[k] < 0:
                neg.append((a, b))
            else:
                rest.append((a, b))
        new = set()
        for ap, bp in pos:
            for an, bn in neg:
                fp, fn = ap[k], -an[k]
                a = tuple(fn * x + fp * y for x, y in zip(ap, an))
                b = fn * bp + fp * bn
                new.add(_normalize_ineq(a, b))
        for a, b in rest:
            new.add(_normalize_ineq(a, b))
        ineqs = [(list(a), b) for a, b in new]
        for a, b in ineqs:
            if not any(a) and b < 0:
                return False
    return all(b >= 0 for a, b in ineqs if not any(a))


def _normalize_ineq(a, b):
    scale = next((abs(c) for c in a if c != 0), None)
    if scale is None:
        return tuple(a), (rat(-1) if b < 0 else rat(0))
    return tuple(c / scale for c in a), b / scale


# -- cones -----------------------------------------------------------------


class Cone:
    """A rational polyhedral cone given by generators."""

    __slots__ = ("dim", "gens", "_facets", "_hash")

    def __init__(self, gens=(), dim=None):
        gens = [primitive(g) for g in gens]
        if dim is None:
            if not gens:
                raise ValueError("dimension needed for the zero cone")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ValueError("generators of mixed dimension")
        gens = [g for g in gens if any(g)]
        facets = _rays(gens, dim)
        canon = _rays(facets, dim)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "gens", tuple(canon))
        object.__setattr__(self, "_facets", tuple(facets))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    @classmethod
    def zero(cls, dim) -> "Cone":
        return cls((), dim)

    @classmethod
    def full(cls, dim) -> "Cone":
        gens = []
        for i in range(dim):
            e = [0] * dim
            e[i] = 1
            gens.append(tuple(e))
            e[i] = -1
            gens.append(tuple(e))
        return cls(gens, dim)

    def is_zero(self) -> bool:
        return not self.gens

    @property
    def facets(self):
        """Generators of the dual cone: ``x in C`` iff ``<f, x> <= 0`` for every ``f``."""
        return self._facets

    def dual(self) -> "Cone":
        return Cone(self._facets, self.dim)

    def contains(self, v) -> bool:
        return all(_sgn(_dot(f, v)) <= 0 for f in self._facets)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.gens)

    def __add__(self, other: "Cone") -> "Cone":
        return self.sum(other)

    def sum(self, *others) -> "Cone":
        gens = list(self.gens)
        for o in others:
            if o.dim != self.dim:
                raise ValueError("dimension mismatch")
            gens.extend(o.gens)
        return Cone(gens, self.dim)

    hull = sum

    def image(self, M: "LinMap") -> "Cone":
        return Cone([M(g) for g in self.gens], M.rows)

    def lift(self, dim=3) -> "Cone":
        """Embed a cone of R^2 into R^2 x {0}."""
        return Cone([tuple(g) + (0,) * (dim - self.dim) for g in self.gens], dim)

    def lineality_dim(self) -> int:
        return self.dim - rank(self._facets, self.dim) if self._facets else self.dim

    def is_strictly_convex(self) -> bool:
        """``C cap -C = {0}``: no convex combination of generators vanishes."""
        G = self.gens
        if not G:
            return True
        n = len(G)
        eqs = [([g[i] for g in G], 0) for i in range(self.dim)]
        eqs.append(([1] * n, 1))
        ineqs = [([-1 if j == k else 0 for j in range(n)], 0) for k in range(n)]
        return not fm_feasible(ineqs, n, eqs)

    def dual_full_dimensional(self) -> bool:
        return rank(self._facets, self.dim) == self.dim if self._facets else False

    def __eq__(self, other):
        return isinstance(other, Cone) and self.dim == other.dim and self.gens == other.gens

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.dim, self.gens))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        inner = ", ".join("(" + ",".join(str(c) for c in g) + ")" for g in self.gens)
        return f"<{inner}>" if inner else f"<0 in R^{self.dim}>"

    def to_json(self) -> list:
        return [list(g) for g in self.gens]

    @classmethod
    def from_json(cls, data, dim) -> "Cone":
        return cls([tuple(g) for g in data], dim)


class ShiftedCone:
    __slots__ = ("vertex", "cone")

    def __init__(self, vertex, cone: Cone):
        vertex = tuple(rat(c) for c in vertex)
        if len(vertex) != cone.dim:
            raise ValueError("vertex and cone dimensions differ")
        object.__setattr__(self, "vertex", vertex)
        object.__setattr__(self, "cone", cone)

    def __setattr__(self, name, value):
        raise AttributeError("ShiftedCone is immutable")

    @property
    def dim(self):
        return self.cone.dim

    def contains(self, p) -> bool:
        return self.cone.contains(tuple(rat(a) - b for a, b in zip(p, self.vertex)))

    def __add__(self, other):
        if isinstance(other, Cone):
            return ShiftedCone(self.vertex, self.cone + other)
        return ShiftedCone(
            tuple(a + b for a, b in zip(self.vertex, other.vertex)), self.cone + other.cone
        )

    def lift(self, dim=3) -> "ShiftedCone":
        return ShiftedCone(self.vertex + (rat(0),) * (dim - self.dim), self.cone.lift(dim))

    def __eq__(self, other):
        return (
            isinstance(other, ShiftedCone)
            and self.vertex == other.vertex
            and self.cone == other.cone
        )

    def __hash__(self):
        return hash((self.vertex, self.cone))

    def __repr__(self):
        return f"{tuple(str(c) for c in self.vertex)} + {self.cone!r}"

    def to_json(self) -> dict:
        return {"vertex": [_qstr(c) for c in self.vertex], "cone": self.cone.to_json()}

    @classmethod
    def from_json(cls, data) -> "ShiftedCone":
        v = [rat(c) for c in data["vertex"]]
        return cls(v, Cone.from_json(data["cone"], len(v)))


def _qstr(c) -> str:
    c = rat(c)
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else f"{c.numerator}"


class LinMap:
    """A rational matrix acting on column vectors."""

    __slots__ = ("matrix", "rows", "cols")

    def __init__(self, matrix):
        m = tuple(tuple(rat(c) for c in row) for row in matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rows", len(m))
        object.__setattr__(self, "cols", len(m[0]))

    def __setattr__(self, name, value):
        raise AttributeError("LinMap is immutable")

    @classmethod
    def from_columns(cls, cols) -> "LinMap":
        cols = [tuple(c) for c in cols]
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))])

    def columns(self):
        return [tuple(row[j] for row in self.matrix) for j in range(self.cols)]

    def __call__(self, v):
        return tuple(_dot(row, v) for row in self.matrix)


# -- orders ----------------------------------------------------------------


def _span_dim(entries) -> int:
    """Rational dimension of the Q-span of scalars in a common Q(sqrt(D))."""
    vecs = []
    for e in entries:
        if isinstance(e, QuadScalar):
            vecs.append((e.a, e.b))
        else:
            vecs.append((rat(e), rat(0)))
    return rank(vecs, 2)


class OrderWeight:
    """An additive total order on Q^2.

    ``stages`` is a list of weight vectors applied lexicographically. A
    single stage with entries independent over Q is the "quad" form
    ``w = (w1, w2)``; several rational stages give the lex-refined form.
    """

    __slots__ = ("stages", "kind", "D")

    def __init__(self, stages, kind=None):
        st = []
        D = None
        for u in stages:
            u = tuple(coerce(c) for c in u)
            for c in u:
                if isinstance(c, QuadScalar):
                    if D is not None and D != c.D:
                        raise ValueError("weights over different quadratic fields")
                    D = c.D
            st.append(u)
        if not st or any(len(u) != 2 for u in st):
            raise ValueError("weights must be vectors of length 2")
        if any(all(not c for c in u) for u in st):
            raise ValueError("zero weight vector")
        for u, v in itertools.combinations(st, 2):
            if sum((a * b for a, b in zip(u, v)), rat(0)) != 0:
                raise ValueError("stage vectors must be pairwise orthogonal")
        if sum(_span_dim(u) for u in st) != 2:
            raise ValueError("rational dimensions of the stages must sum to 2")
        object.__setattr__(self, "stages", tuple(st))
        object.__setattr__(self, "kind", kind or ("quad" if len(st) == 1 else "stages"))
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("OrderWeight is immutable")

    @classmethod
    def quad(cls, w1, w2) -> "OrderWeight":
        return cls([(w1, w2)], "quad")

    @classmethod
    def lex(cls, *stages) -> "OrderWeight":
        return cls(stages, "stages")

    def key(self, e):
        """A tuple of exact scalars whose lexicographic order is the order on Q^2."""
        return tuple(
            _Scalar(u[0] * rat(e[0]) + u[1] * rat(e[1])) for u in self.stages
        )

    def cmp(self, e1, e2) -> int:
        for u in self.stages:
            d = u[0] * (rat(e1[0]) - rat(e2[0])) + u[1] * (rat(e1[1]) - rat(e2[1]))
            s = _sgn(d)
            if s:
                return s
        return 0

    def is_negative(self, e) -> bool:
        return self.cmp(e, (0, 0)) < 0

    def max(self, points):
        points = list(points)
        best = points[0]
        for p in points[1:]:
            if self.cmp(p, best) > 0:
                best = p
        return best

    def sort_desc(self, points):
        import functools

        return sorted(points, key=functools.cmp_to_key(lambda a, b: self.cmp(b, a)))

    def in_dual_interior(self, cone: Cone) -> bool:
        """True when every nonzero element of ``cone`` is strictly negative.

        Such an order lets every series supported in ``v + cone`` have a
        maximal term.
        """
        return all(self.cmp(g, (0, 0)) < 0 for g in cone.gens)

    def __eq__(self, other):
        return isinstance(other, OrderWeight) and self.stages == other.stages

    def __hash__(self):
        return hash(self.stages)

    def __repr__(self):
        return "OrderWeight(" + "; ".join(
            "(" + ", ".join(str(c) for c in u) + ")" for u in self.stages
        ) + ")"

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, QuadScalar):
                return {"a": _qstr(c.a), "b": _qstr(c.b), "D": c.D}
            return {"a": _qstr(c), "b": "0", "D": self.D or 2}

        return {"kind": self.kind, "stages": [[enc(c) for c in u] for u in self.stages]}

    @classmethod
    def from_json(cls, data) -> "OrderWeight":
        def dec(c):
            b = rat(c["b"])
            return QuadScalar(rat(c["a"]), b, c["D"]).simplify() if b else rat(c["a"])

        return cls([[dec(c) for c in u] for u in data["stages"]], data["kind"])


class _Scalar:
    """Total-order wrapper so that keys mixing rationals and QuadScalars sort."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return _sgn(self.v - other.v) < 0

    def __eq__(self, other):
        return _sgn(self.v - other.v) == 0

    def __hash__(self):
        return hash(self.v)


def order_cmp(w: OrderWeight, e1, e2) -> str:
    s = w.cmp(e1, e2)
    return "<" if s < 0 else (">" if s > 0 else "=")


def check_same_order(a: OrderWeight, b: OrderWeight):
    if a != b:
        raise OrderMismatch(f"{a!r} vs {b!r}")


# -- support tests ----------------------------------------------------------


def empty_meet_orthant(sc: ShiftedCone) -> bool:
    """True iff ``v + C`` contains no point with both first coordinates >= 0."""
    G = sc.cone.gens
    n = len(G)
    v = sc.vertex
    # v_i + sum_k g_k[i] lambda_k >= 0  <=>  -sum g_k[i] lambda_k <= v_i
    ineqs = [([-g[i] for g in G], v[i]) for i in (0, 1)]
    ineqs += [([-1 if j == k else 0 for j in range(n)], 0) for k in range(n)]
    return not fm_feasible(ineqs, n)


def meets_plane_nontrivially(c0: Cone) -> bool:
    """Whether ``C0`` contains a nonzero point of ``R^2 x {0}``."""
    G = c0.gens
    n = len(G)
    pos = [([-1 if j == k else 0 for j in range(n)], 0) for k in range(n)]
    plane = [([g[2] for g in G], 0)]
    for i in (0, 1):
        for s in (1, -1):
            # s * (G lambda)_i >= 1
            cons = pos + [([-s * g[i] for g in G], -1)]
            if fm_feasible(cons, n, plane):
                return True
    return False


def composition_support(c0: Cone, lead1, lead2, tail1: Cone, tail2: Cone) -> Cone:
    """Cone containing the support of ``F(g1, g2, t)`` when ``supp F`` lies in ``c0``.

    ``lead_i`` are leading exponents of ``g_i``; ``tail_i`` contain the
    supports of ``g_i / lt(g_i)``.
    """
    if c0.dim != 3:
        raise ValueError("C0 must live in R^3")
    if meets_plane_nontrivially(c0):
        raise PreconditionViolated("C0 meets R^2 x {0} outside the origin")
    M = composition_map(lead1, lead2)
    out = Cone(
        [M(g) for g in c0.gens] + list(_as3(tail1).gens) + list(_as3(tail2).gens), 3
    )
    assert out.is_strictly_convex(), "composed support cone is not strictly convex"
    return out


def composition_map(lead1, lead2) -> LinMap:
    l1 = (rat(lead1[0]), rat(lead1[1]), rat(0))
    l2 = (rat(lead2[0]), rat(lead2[1]), rat(0))
    return LinMap.from_columns([l1, l2, (0, 0, 1)])


def _as3(c: Cone) -> Cone:
    return c if c.dim == 3 else c.lift(3)
