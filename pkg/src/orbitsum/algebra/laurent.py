"""Sparse Laurent polynomials over Q in a fixed list of variables.

Exponents are integer tuples (negative entries allowed); coefficients are
exact rationals. Instances are immutable and hashable.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .scalars import Rat, rat

VARS2 = ("x", "y")
VARS3 = ("x", "y", "t")


def _grlex_key(exp):
    return (sum(exp), exp)


class LaurentPoly:
    __slots__ = ("_terms", "vars", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), vars=VARS2):
        vars = tuple(vars)
        n = len(vars)
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {vars}")
            c = rat(c)
            if c:
                c = clean.get(exp, 0) + c
                if c:
                    clean[exp] = c
                else:
                    clean.pop(exp, None)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, vars) -> "LaurentPoly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "vars", vars)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def const(cls, c, vars=VARS2) -> "LaurentPoly":
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def monomial(cls, exp, c=1, vars=VARS2) -> "LaurentPoly":
        return cls({tuple(exp): c}, vars)

    @classmethod
    def gen(cls, name, vars=VARS2) -> "LaurentPoly":
        exp = [0] * len(vars)
        exp[vars.index(name)] = 1
        return cls({tuple(exp): 1}, vars)

    # -- inspection ----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        return list(self._terms)

    def coeff(self, exp) -> Rat:
        return self._terms.get(tuple(exp), rat(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def max_degree(self, i: int) -> int:
        return max(e[i] for e in self._terms) if self._terms else 0

    def min_degree(self, i: int) -> int:
        return min(e[i] for e in self._terms) if self._terms else 0

    def sorted_terms(self):
        """Terms in the canonical (graded lexicographic, descending) order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other):
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                other = other.extend(self.vars) if set(other.vars) <= set(self.vars) else None
                if other is None:
                    raise ValueError("variable mismatch")
            return other
        return LaurentPoly.const(other, self.vars)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = rat(other)
            if not c:
                return LaurentPoly._raw({}, self.vars)
            return LaurentPoly._raw({e: v * c for e, v in self._terms.items()}, self.vars)
        other = self._check(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (e, c), = self._terms.items()
            return LaurentPoly._raw({tuple(k * n for k in e): rat(c) ** n}, self.vars)
        out = LaurentPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            if not other.is_monomial():
                raise ValueError("only division by monomials stays Laurent")
            return self * other ** -1
        c = rat(other)
        return self * (1 / c)

    def shift(self, exp) -> "LaurentPoly":
        exp = tuple(exp)
        return LaurentPoly._raw(
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()}, self.vars
        )

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.vars == other.vars and self._terms == other._terms
        try:
            return self == LaurentPoly.const(other, self.vars)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- variable manipulation ----------------------------------------
    def extend(self, vars) -> "LaurentPoly":
        """View this polynomial in a larger variable list."""
        vars = tuple(vars)
        idx = [vars.index(v) for v in self.vars]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(vars)
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return LaurentPoly._raw(out, vars)

    def drop(self, var) -> "LaurentPoly":
        """Forget a variable that does not occur."""
        i = self.vars.index(var)
        if any(e[i] for e in self._terms):
            raise ValueError(f"{var} occurs in {self}")
        vars = self.vars[:i] + self.vars[i + 1 :]
        return LaurentPoly._raw({e[:i] + e[i + 1 :]: c for e, c in self._terms.items()}, vars)

    def coeff_in(self, var, k) -> "LaurentPoly":
        """Coefficient of ``var**k`` as a Laurent polynomial in the remaining variables."""
        i = self.vars.index(var)
        vars = self.vars[:i] + self.vars[i + 1 :]
        return LaurentPoly._raw(
            {e[:i] + e[i + 1 :]: c for e, c in self._terms.items() if e[i] == k}, vars
        )

    def by_power(self, var) -> dict:
        """Split into ``{k: coefficient of var**k}``."""
        i = self.vars.index(var)
        vars = self.vars[:i] + self.vars[i + 1 :]
        out: dict = {}
        for e, c in self._terms.items():
            out.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
        return {k: LaurentPoly._raw(v, vars) for k, v in out.items()}

    def truncate(self, var, max_power) -> "LaurentPoly":
        i = self.vars.index(var)
        return LaurentPoly._raw(
            {e: c for e, c in self._terms.items() if e[i] <= max_power}, self.vars
        )

    def nonneg_part(self, strict=False, over=("x", "y")) -> "LaurentPoly":
        """Keep the terms with non-negative (``strict``: positive) powers of ``over``."""
        idx = [self.vars.index(v) for v in over]
        lo = 1 if strict else 0
        return LaurentPoly._raw(
            {e: c for e, c in self._terms.items() if all(e[i] >= lo for i in idx)}, self.vars
        )

    def subs_monomial(self, images) -> "LaurentPoly":
        """Substitute each variable by a Laurent monomial given as an exponent vector."""
        out: dict = {}
        n = len(self.vars)
        for e, c in self._terms.items():
            ne = [0] * n
            for k, img in zip(e, images):
                for j in range(n):
                    ne[j] += k * img[j]
            ne = tuple(ne)
            v = out.get(ne, 0) + c
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
        return LaurentPoly._raw(out, self.vars)

    def is_polynomial(self) -> bool:
        return all(k >= 0 for e in self._terms for k in e)

    # -- printing ------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r}, vars={self.vars})"


def lp_gens(vars=VARS2):
    return tuple(LaurentPoly.gen(v, vars) for v in vars)
