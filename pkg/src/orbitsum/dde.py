"""Linear discrete differential equations, their kernel form, and the series oracle.

An equation for the unknown ``F_u`` has the shape

    F_u = P_u + t * sum_i c_i * Dx^k_i Dy^l_i F_{v_i}

with ``P_u`` and ``c_i`` polynomials in x, y, t. ``Dx`` is the discrete
derivative ``G -> (G(x, y) - G(0, y)) / x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.laurent import VARS2, VARS3, LaurentPoly
from .algebra.scalars import rat
from .cones import Cone
from .errors import PreconditionViolated, UnsupportedKernelShape, UnsupportedSystem

DEFAULT_VERIFY_ORDER = 10

T = LaurentPoly.monomial((0, 0, 1), 1, VARS3)


def _as3(p) -> LaurentPoly:
    if isinstance(p, LaurentPoly):
        return p if p.vars == VARS3 else p.extend(VARS3)
    return LaurentPoly.const(p, VARS3)


@dataclass(frozen=True)
class DDETerm:
    """``coef * Dx^k Dy^l F_unknown`` inside the t-multiplied sum."""

    coef: LaurentPoly
    k: int
    l: int
    unknown: str

    def __post_init__(self):
        object.__setattr__(self, "coef", _as3(self.coef))
        if not self.coef.is_polynomial():
            raise ValueError("DDE coefficients must be polynomials")
        if self.k < 0 or self.l < 0:
            raise ValueError("negative discrete derivative order")


@dataclass(frozen=True)
class DDEEquation:
    free: LaurentPoly
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "free", _as3(self.free))
        # one term per operator, in a canonical order
        merged = {}
        for tm in self.terms:
            key = (tm.unknown, tm.k, tm.l)
            merged[key] = merged[key] + tm.coef if key in merged else tm.coef
        terms = tuple(DDETerm(c, k, l, u) for (u, k, l), c in sorted(merged.items()) if c)
        object.__setattr__(self, "terms", terms)
        if not self.free.is_polynomial():
            raise ValueError("free term must be a polynomial")


@dataclass(frozen=True)
class DDE:
    unknowns: tuple
    equations: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "unknowns", tuple(self.unknowns))
        if set(self.equations) != set(self.unknowns):
            raise ValueError("need exactly one equation per unknown")
        for eq in self.equations.values():
            for term in eq.terms:
                if term.unknown not in self.unknowns:
                    raise ValueError(f"undeclared unknown {term.unknown}")

    @classmethod
    def single(cls, free, terms, name="F") -> "DDE":
        """``F = free + t * sum coef * Dx^k Dy^l F`` from ``terms = [(coef, k, l), ...]``."""
        eq = DDEEquation(free, [DDETerm(c, k, l, name) for c, k, l in terms])
        return cls((name,), {name: eq})


def delta(G: LaurentPoly, k: int, l: int) -> LaurentPoly:
    """``Dx^k Dy^l G`` for a polynomial ``G`` in x, y (and possibly t)."""
    if not k and not l:
        return G
    out = {}
    for e, c in G.items():
        if e[0] >= k and e[1] >= l:
            out[(e[0] - k, e[1] - l) + tuple(e[2:])] = c
    return LaurentPoly(out, G.vars)


def oracle_expand(d: DDE, N: int) -> dict:
    """``sum_{n <= N} [t^n] F_u t^n`` for every unknown, by iterating the recurrence."""
    if N < 0:
        raise ValueError("N must be non-negative")
    layers = {u: [] for u in d.unknowns}  # layers[u][n] = [t^n] F_u in (x, y)
    free = {u: d.equations[u].free.by_power("t") for u in d.unknowns}
    coefs = {
        u: [(tm, tm.coef.by_power("t")) for tm in d.equations[u].terms] for u in d.unknowns
    }
    zero = LaurentPoly((), VARS2)
    for n in range(N + 1):
        new = {}
        for u in d.unknowns:
            acc = free[u].get(n, zero)
            for tm, cs in coefs[u]:
                # t * c * Delta F_v contributes [t^m] c * Delta [t^(n-1-m)] F_v
                for m, cm in cs.items():
                    j = n - 1 - m
                    if j < 0:
                        continue
                    acc = acc + cm * delta(layers[tm.unknown][j], tm.k, tm.l)
            new[u] = acc
        for u in d.unknowns:
            layers[u].append(new[u])
    out = {}
    for u in d.unknowns:
        terms = {}
        for n, p in enumerate(layers[u]):
            for e, c in p.items():
                terms[(e[0], e[1], n)] = c
        out[u] = LaurentPoly(terms, VARS3)
    return out


@dataclass(frozen=True, order=True)
class Section:
    """A coefficient slice of an unknown series.

    ``kind == "x"``: ``[y^index] F`` as a series in x (``F(x, 0)`` for index 0);
    ``kind == "y"``: ``[x^index] F`` as a series in y;
    ``kind == "0"``: ``[x^i y^j] F`` with ``index = (i, j)``.
    """

    unknown: str
    kind: str
    index: object

    def __post_init__(self):
        if self.kind not in ("x", "y", "0"):
            raise ValueError(f"unknown section kind {self.kind!r}")
        if self.kind == "0":
            object.__setattr__(self, "index", tuple(int(v) for v in self.index))
        else:
            object.__setattr__(self, "index", int(self.index))

    def evaluate(self, F: LaurentPoly) -> LaurentPoly:
        """The section of a truncated series ``F`` in (x, y, t), as a series in (x, y, t)."""
        out = {}
        for e, c in F.items():
            if self.kind == "x" and e[1] == self.index:
                out[(e[0], 0, e[2])] = c
            elif self.kind == "y" and e[0] == self.index:
                out[(0, e[1], e[2])] = c
            elif self.kind == "0" and (e[0], e[1]) == self.index:
                out[(0, 0, e[2])] = c
        return LaurentPoly(out, VARS3)

    def depends_on(self) -> str:
        """Which coordinate the section is a function of: "x", "y" or "" (constant)."""
        return {"x": "x", "y": "y", "0": ""}[self.kind]

    def __str__(self):
        if self.kind == "x":
            return f"{self.unknown}[y^{self.index}](x)"
        if self.kind == "y":
            return f"{self.unknown}[x^{self.index}](y)"
        return f"{self.unknown}[x^{self.index[0]}*y^{self.index[1]}]"


@dataclass(frozen=True)
class KernelEquation:
    """``(1 - t^r S) F = rhs + sum coef * section``.

    ``S`` is a Laurent polynomial in x, y; ``rhs`` and the section
    coefficients are Laurent in x, y and polynomial in t.
    """

    r: int
    S: LaurentPoly
    unknown: str
    rhs: LaurentPoly
    sections: tuple

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("kernel exponent r must be positive")
        if self.S.vars != VARS2:
            raise ValueError("S must be a Laurent polynomial in x, y")
        object.__setattr__(self, "rhs", _as3(self.rhs))
        secs = {}
        for c, s in self.sections:
            secs[s] = secs.get(s, LaurentPoly((), VARS3)) + _as3(c)
        object.__setattr__(
            self, "sections", tuple((c, s) for s, c in sorted(secs.items()) if c)
        )

    def kernel(self) -> LaurentPoly:
        return LaurentPoly.const(1, VARS3) - T**self.r * self.S.extend(VARS3)

    def residual(self, series: dict, N: int) -> LaurentPoly:
        """``kernel F - rhs - sum coef * section`` truncated at ``t^N``."""
        F = series[self.unknown]
        res = self.kernel() * F - self.rhs
        for c, s in self.sections:
            res = res - c * s.evaluate(series[s.unknown])
        return res.truncate("t", N)


def to_kernel_form(d: DDE) -> KernelEquation:
    """Collect all occurrences of ``F(x, y)`` for a single-unknown DDE."""
    if len(d.unknowns) != 1:
        raise UnsupportedSystem("kernel form is only derived for single-unknown equations")
    (u,) = d.unknowns
    eq = d.equations[u]
    K = LaurentPoly((), VARS3)
    sections = []
    for tm in eq.terms:
        mono = LaurentPoly.monomial((-tm.k, -tm.l, 1), 1, VARS3)
        g = tm.coef * mono  # t c xb^k yb^l
        K = K + g
        # Dx^k Dy^l F = xb^k yb^l (F - sum_{i<k} x^i [x^i]F - sum_{j<l} y^j [y^j]F
        #                          + sum_{i<k, j<l} x^i y^j [x^i y^j]F)
        for i in range(tm.k):
            sections.append((-g * LaurentPoly.monomial((i, 0, 0), 1, VARS3), Section(u, "y", i)))
        for j in range(tm.l):
            sections.append((-g * LaurentPoly.monomial((0, j, 0), 1, VARS3), Section(u, "x", j)))
        for i in range(tm.k):
            for j in range(tm.l):
                sections.append(
                    (g * LaurentPoly.monomial((i, j, 0), 1, VARS3), Section(u, "0", (i, j)))
                )
    by_t = {k: v for k, v in K.by_power("t").items() if v}
    if len(by_t) != 1:
        raise UnsupportedKernelShape("kernel mixes several powers of t")
    (r, S), = by_t.items()
    if r < 1:
        raise UnsupportedKernelShape("kernel term without a factor t")
    return KernelEquation(r, S, u, eq.free, sections)


def verify_kernel_form(k: KernelEquation, d: DDE, N: int = DEFAULT_VERIFY_ORDER) -> bool:
    """Whether ``k`` holds for the oracle solution of ``d`` up to ``t^N``."""
    names = {k.unknown} | {s.unknown for _, s in k.sections}
    if not names <= set(d.unknowns):
        raise ValueError("kernel equation refers to undeclared unknowns")
    return k.residual(oracle_expand(d, N), N).is_zero()


def support_cone_bound(d: DDE) -> Cone:
    """A cone in R^3 containing ``supp([t^n] F_u) x {n}`` for every unknown.

    For a term ``x^i y^j t^(1+s) Dx^k Dy^l`` the total degree grows by at
    most ``i + j - k - l`` per ``1 + s`` steps of t, so ``deg [t^n] F <= a n``
    with ``a`` the largest such ratio. When no term can create a power of y
    only the x-direction is needed. Free terms must be constants so that the
    bound holds at ``n = 0``.
    """
    for u in d.unknowns:
        free = d.equations[u].free
        if any(e[0] or e[1] for e in free.support()):
            raise PreconditionViolated("free terms must be constants for a cone bound at the origin")
    mons = []
    for u in d.unknowns:
        for tm in d.equations[u].terms:
            for e in tm.coef.support():
                mons.append((e[0], e[1], e[2], tm.k, tm.l))
    y_free = all(j <= l for i, j, s, k, l in mons)
    if y_free:
        ratios = [rat(i - k, 1 + s) for i, j, s, k, l in mons if l == 0 and j == 0]
        a = max(ratios, default=rat(0))
        if a <= 0:
            return Cone([(0, 0, 1)], 3)
        return Cone([(0, 0, 1), (a, 0, 1)], 3)
    a = max(rat(i + j - k - l, 1 + s) for i, j, s, k, l in mons)
    if a <= 0:
        return Cone([(0, 0, 1)], 3)
    return Cone([(0, 0, 1), (a, 0, 1), (0, a, 1)], 3)
