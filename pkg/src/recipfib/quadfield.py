"""Exact arithmetic in the real quadratic field Q(sqrt(D)).

An element ``x + y*sqrt(D)`` is stored as a pair of reduced fractions plus
the radicand.  Signs and comparisons are decided with big-integer squaring,
never with floating point, so every ordering verdict is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union

__all__ = [
    "FieldMismatchError",
    "InvalidFieldError",
    "QuadElem",
    "is_perfect_square",
    "qf_arith",
    "qf_cmp_rational",
    "qf_make",
    "qf_pow",
    "qf_sign",
]

RationalLike = Union[int, Fraction]


class InvalidFieldError(ValueError):
    """Raised when D is not a positive non-square integer."""


class FieldMismatchError(ValueError):
    """Raised when two elements from different fields are combined."""


def is_perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _sgn(v: RationalLike) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class QuadElem:
    """The real number ``x + y*sqrt(D)``."""

    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self) -> None:
        # Coerce ints to Fraction so equality stays structural.
        if not isinstance(self.x, Fraction):
            object.__setattr__(self, "x", Fraction(self.x))
        if not isinstance(self.y, Fraction):
            object.__setattr__(self, "y", Fraction(self.y))

    # -- construction helpers -------------------------------------------

    @classmethod
    def rational(cls, r: RationalLike, D: int) -> QuadElem:
        return cls(Fraction(r), Fraction(0), D)

    @classmethod
    def sqrt_d(cls, D: int) -> QuadElem:
        return cls(Fraction(0), Fraction(1), D)

    def _lift(self, other: object) -> QuadElem:
        if isinstance(other, QuadElem):
            if other.D != self.D:
                raise FieldMismatchError(f"cannot mix D={self.D} with D={other.D}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadElem(Fraction(other), Fraction(0), self.D)
        return NotImplemented

    # -- field operations ------------------------------------------------

    def __add__(self, other: object) -> QuadElem:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self) -> QuadElem:
        return QuadElem(-self.x, -self.y, self.D)

    def __sub__(self, other: object) -> QuadElem:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.x - o.x, self.y - o.y, self.D)

    def __rsub__(self, other: object) -> QuadElem:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> QuadElem:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        x = self.x * o.x + self.y * o.y * self.D
        y = self.x * o.y + self.y * o.x
        return QuadElem(x, y, self.D)

    __rmul__ = __mul__

    def conj(self) -> QuadElem:
        return QuadElem(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.y * self.y * self.D

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            # D is not a square, so the norm vanishes only at zero.
            raise ZeroDivisionError("inverse of zero in Q(sqrt(D))")
        return QuadElem(self.x / n, -self.y / n, self.D)

    def __truediv__(self, other: object) -> QuadElem:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> QuadElem:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> QuadElem:
        return qf_pow(self, n)

    # -- ordering ----------------------------------------------------------

    def sign(self) -> int:
        return qf_sign(self)

    def _cmp(self, other: object) -> int:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return qf_sign(self - o)

    def __lt__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other: object) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadElem):
            return self.D == other.D and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Rational)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.D))

    # -- rendering ---------------------------------------------------------

    def is_rational(self) -> bool:
        return self.y == 0

    def approx(self, digits: int = 12) -> str:
        """Decimal rendering for display only; never used in decisions."""
        scale = 10 ** (digits + 4)
        # floor(y*sqrt(D)*scale) from the integer square root
        yy = self.y * scale
        root = Fraction(isqrt((yy.numerator ** 2 * self.D) // yy.denominator ** 2))
        v = self.x * scale + (root if yy >= 0 else -root)
        return _fraction_to_decimal(v / scale, digits)

    def __str__(self) -> str:
        if self.y == 0:
            return str(self.x)
        if self.x == 0:
            return f"({self.y})*sqrt({self.D})"
        sign = "+" if self.y > 0 else "-"
        return f"{self.x} {sign} ({abs(self.y)})*sqrt({self.D})"


def _fraction_to_decimal(v: Fraction, digits: int) -> str:
    neg = v < 0
    q = round(abs(v) * 10 ** digits)
    whole, frac = divmod(q, 10 ** digits)
    s = f"{whole}.{frac:0{digits}d}" if digits else str(whole)
    return "-" + s if neg and q else s


def qf_make(x: RationalLike, y: RationalLike, D: int) -> QuadElem:
    """Build ``x + y*sqrt(D)``, rejecting non-positive or square ``D``."""
    if D <= 0 or is_perfect_square(D):
        raise InvalidFieldError(f"D={D} must be a positive non-square integer")
    return QuadElem(Fraction(x), Fraction(y), D)


def qf_arith(a: QuadElem, b: QuadElem, op: str) -> QuadElem:
    if a.D != b.D:
        raise FieldMismatchError(f"cannot mix D={a.D} with D={b.D}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def qf_pow(a: QuadElem, n: int) -> QuadElem:
    """Exact ``a**n`` by binary exponentiation; negative ``n`` inverts first."""
    if n < 0:
        a = a.inverse()
        n = -n
    result = QuadElem(Fraction(1), Fraction(0), a.D)
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def qf_sign(a: QuadElem) -> int:
    """Exact sign of ``x + y*sqrt(D)``."""
    sx, sy = _sgn(a.x), _sgn(a.y)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    # Opposite signs: the larger magnitude wins; x^2 vs y^2*D cannot tie
    # because D is not a perfect square.
    lhs = a.x * a.x
    rhs = a.y * a.y * a.D
    return sx if lhs > rhs else sy


def qf_cmp_rational(a: QuadElem, r: RationalLike) -> int:
    """Sign of ``a - r``."""
    return qf_sign(QuadElem(a.x - Fraction(r), a.y, a.D))
