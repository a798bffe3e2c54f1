"""Arithmetic in Q(x, y)[Z]/<g(Z)> with dynamic evaluation.

``g`` is squarefree but may be reducible. Inverting an element that shares a
factor with ``g`` raises :class:`Split` carrying the factorization, and the
caller continues on one branch via :meth:`SplittingField.branch`.
"""

from __future__ import annotations

from ..errors import DivisionByZero, NotSquarefree, Split
from . import upoly
from .ratfun import K, ratfun_to_json, to_ratfun


class SplittingField:
    """A finite extension of Q(x, y) presented by a primitive element.

    ``eliminant`` is the monic minimal polynomial candidate ``g`` of the
    primitive element ``Z``; ``root_exprs`` express adjoined roots as
    polynomials in ``Z`` of degree below ``deg g``; ``witness`` records the
    integer coefficients used to build ``Z``.
    """

    __slots__ = ("eliminant", "root_exprs", "witness", "sources", "_key")

    def __init__(self, eliminant, root_exprs=(), witness=(), sources=(), check=True):
        g = upoly.monic(upoly.lift(eliminant))
        if len(g) < 2:
            raise ValueError("eliminant must have positive degree")
        if check and not upoly.is_squarefree(g):
            raise NotSquarefree("eliminant is not squarefree")
        object.__setattr__(self, "eliminant", g)
        object.__setattr__(
            self, "root_exprs", tuple(upoly.rem(upoly.lift(r), g) for r in root_exprs)
        )
        object.__setattr__(self, "witness", tuple(witness))
        object.__setattr__(self, "sources", tuple(tuple(s) for s in sources))
        object.__setattr__(self, "_key", (g, self.root_exprs))

    def __setattr__(self, name, value):
        raise AttributeError("SplittingField is immutable")

    @classmethod
    def base(cls) -> "SplittingField":
        """Q(x, y) itself, presented as Q(x, y)[Z]/<Z>."""
        return cls((K.zero, K.one))

    @property
    def degree(self) -> int:
        return len(self.eliminant) - 1

    def is_base(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, SplittingField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"SplittingField(degree={self.degree})"

    # -- elements ------------------------------------------------------
    def elem(self, coeffs) -> "FieldElem":
        return FieldElem(self, upoly.rem(upoly.lift(coeffs), self.eliminant))

    def const(self, c) -> "FieldElem":
        c = to_ratfun(c)
        return FieldElem(self, (c,) if c else ())

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, ())

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, (K.one,))

    def gen(self) -> "FieldElem":
        return self.elem((K.zero, K.one))

    def root(self, i) -> "FieldElem":
        return FieldElem(self, self.root_exprs[i])

    def is_zero(self, e: "FieldElem") -> bool:
        """Zero test that refuses to answer on zero divisors.

        Returns True/False when the element vanishes on every branch or on
        none; raises :class:`Split` when it vanishes on some branch only.
        """
        if not e.coeffs:
            return True
        if len(e.coeffs) == 1:
            return False  # a nonzero element of Q(x, y) is a unit
        h = upoly.gcd(e.coeffs, self.eliminant)
        if len(h) > 1:
            raise Split(h, upoly.monic(upoly.divmod_(self.eliminant, h)[0]))
        return False

    # -- branching -----------------------------------------------------
    def branch(self, factor) -> "SplittingField":
        """Restrict to the factor ``factor`` of the eliminant."""
        factor = upoly.monic(upoly.lift(factor))
        q, r = upoly.divmod_(self.eliminant, factor)
        if r:
            raise ValueError("branch polynomial does not divide the eliminant")
        return SplittingField(factor, self.root_exprs, self.witness, self.sources, check=False)

    def project(self, e: "FieldElem", target: "SplittingField") -> "FieldElem":
        """Image of ``e`` in a branch ``target`` of this field."""
        return FieldElem(target, upoly.rem(e.coeffs, target.eliminant))

    def to_json(self) -> dict:
        return {
            "eliminant": [ratfun_to_json(c) for c in self.eliminant],
            "root_exprs": [[ratfun_to_json(c) for c in r] for r in self.root_exprs],
            "witness": list(self.witness),
        }


class FieldElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: SplittingField, coeffs):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.coeffs
        c = to_ratfun(other)
        return (c,) if c else ()

    def __add__(self, other):
        return FieldElem(self.field, upoly.add(self.coeffs, self._other(other)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, upoly.neg(self.coeffs))

    def __sub__(self, other):
        return FieldElem(self.field, upoly.sub(self.coeffs, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, upoly.sub(self._other(other), self.coeffs))

    def __mul__(self, other):
        o = self._other(other)
        if len(o) <= 1:
            return FieldElem(self.field, upoly.scale(self.coeffs, o[0]) if o else ())
        return FieldElem(self.field, upoly.rem(upoly.mul(self.coeffs, o), self.field.eliminant))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        return field_inv(self)

    def __truediv__(self, other):
        if isinstance(other, FieldElem):
            return self * field_inv(other)
        c = to_ratfun(other)
        if not c:
            raise DivisionByZero("division by zero")
        return FieldElem(self.field, upoly.scale(self.coeffs, 1 / c))

    def __rtruediv__(self, other):
        return field_inv(self) * other

    def __pow__(self, n: int):
        if n < 0:
            return field_inv(self) ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.coeffs == other.coeffs
        try:
            return self.coeffs == self._other(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        """True when the element lies in Q(x, y)."""
        return len(self.coeffs) <= 1

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is not in the base field")
        return self.coeffs[0] if self.coeffs else K.zero

    def lift_to(self, target: SplittingField, image_of_gen) -> "FieldElem":
        """Map into ``target`` given the image of the primitive element."""
        out = target.zero
        for c in reversed(self.coeffs):
            out = out * image_of_gen + c
        return out

    def to_json(self) -> list:
        return [ratfun_to_json(c) for c in self.coeffs]

    def __repr__(self):
        return f"FieldElem({[str(c) for c in self.coeffs]})"


def field_inv(e: FieldElem) -> FieldElem:
    """Inverse modulo the eliminant via the extended Euclidean algorithm."""
    g = e.field.eliminant
    if not e.coeffs:
        raise DivisionByZero("inverse of zero")
    if len(e.coeffs) == 1:
        return FieldElem(e.field, (1 / e.coeffs[0],))
    s, _, h = upoly.gcdex(e.coeffs, g)
    if len(h) == 1:
        return FieldElem(e.field, upoly.rem(s, g))
    if len(h) == len(g):
        raise DivisionByZero("element vanishes modulo the eliminant")
    raise Split(h, upoly.monic(upoly.divmod_(g, h)[0]))
