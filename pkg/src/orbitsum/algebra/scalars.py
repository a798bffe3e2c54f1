"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt(D))."""

from __future__ import annotations

from functools import lru_cache
from numbers import Rational

import gmpy2
from gmpy2 import mpq
from sympy import factorint

Rat = type(mpq(0))

__all__ = ["Rat", "rat", "QuadScalar", "quad_sign", "squarefree_part", "coerce", "is_scalar_zero"]


def rat(value, den=None) -> Rat:
    """Build an exact rational from ints, Fractions, mpq or strings like ``"3/4"``."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, Rat):
        return value
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            n, d = value.split("/")
            return mpq(int(n), int(d))
        return mpq(int(value))
    if isinstance(value, (int, Rational)):
        return mpq(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


@lru_cache(maxsize=256)
def squarefree_part(n: int) -> int:
    """Square-free part of a nonzero integer, keeping the sign."""
    if n == 0:
        raise ValueError("0 has no square-free part")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def quad_sign(a, b, D) -> int:
    """Exact sign of ``a + b*sqrt(D)`` for rationals a, b and a positive integer D."""
    a = rat(a)
    b = rat(b)
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 D
    lhs = a * a
    rhs = b * b * D
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


class QuadScalar:
    """An element ``a + b*sqrt(D)`` of Q(sqrt(D)), D a square-free integer > 1.

    Rational values are still representable (``b == 0``); arithmetic with
    plain rationals and with scalars over the same ``D`` is closed. Mixing
    two different radicands raises :class:`ValueError`.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D=2):
        a = rat(a)
        b = rat(b)
        D = int(D)
        if D <= 1 or squarefree_part(D) != D:
            raise ValueError(f"radicand must be a square-free integer > 1, got {D}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    @classmethod
    def sqrt(cls, D, scale=1):
        """``scale * sqrt(D)`` for any positive integer ``D``, simplified."""
        D = int(D)
        if D <= 0:
            raise ValueError("sqrt of a non-positive integer")
        core = squarefree_part(D)
        outside = gmpy2.isqrt(D // core)
        if core == 1:
            return rat(scale) * int(outside)
        return cls(0, rat(scale) * int(outside), core)

    # -- helpers -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadScalar):
            if other.D != self.D:
                if other.b == 0:
                    return QuadScalar(other.a, 0, self.D)
                if self.b == 0:
                    return None
                raise ValueError(f"cannot mix sqrt({self.D}) and sqrt({other.D})")
            return other
        try:
            return QuadScalar(rat(other), 0, self.D)
        except TypeError:
            return NotImplemented

    def is_rational(self) -> bool:
        return self.b == 0

    def simplify(self):
        """Return a plain rational when ``b == 0``."""
        return self.a if self.b == 0 else self

    def sign(self) -> int:
        return quad_sign(self.a, self.b, self.D)

    def conjugate(self) -> "QuadScalar":
        return QuadScalar(self.a, -self.b, self.D)

    def norm(self) -> Rat:
        return self.a * self.a - self.b * self.b * self.D

    def __float__(self):
        return float(self.a) + float(self.b) * self.D ** 0.5

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other + self.a
        return QuadScalar(self.a + o.a, self.b + o.b, self.D).simplify()

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other * self.a
        return QuadScalar(
            self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D
        ).simplify()

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadScalar(self.a / n, -self.b / n, self.D).simplify()

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self * (1 / other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadScalar(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.D == other.D and self.a == other.a and self.b == other.b
        try:
            return self.b == 0 and self.a == rat(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __lt__(self, other):
        return _sgn(self - other) < 0

    def __le__(self, other):
        return _sgn(self - other) <= 0

    def __gt__(self, other):
        return _sgn(self - other) > 0

    def __ge__(self, other):
        return _sgn(self - other) >= 0

    def __bool__(self):
        return not (self.a == 0 and self.b == 0)

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, {self.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = f"sqrt({self.D})" if self.b == 1 else f"{self.b}*sqrt({self.D})"
        if self.a == 0:
            return rad if self.b != -1 else f"-sqrt({self.D})"
        sign = "+" if self.b > 0 else "-"
        mag = -self.b if self.b < 0 else self.b
        rad = f"sqrt({self.D})" if mag == 1 else f"{mag}*sqrt({self.D})"
        return f"{self.a} {sign} {rad}"


def _sgn(v) -> int:
    if isinstance(v, QuadScalar):
        return v.sign()
    return (v > 0) - (v < 0)


def coerce(v):
    """Normalize a scalar: QuadScalars with zero radical part become rationals."""
    if isinstance(v, QuadScalar):
        return v.simplify()
    return rat(v)


def is_scalar_zero(v) -> bool:
    return not v
