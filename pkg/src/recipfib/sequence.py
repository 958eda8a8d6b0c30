"""Generalized Fibonacci sequences U_n(p, q) as exact integers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .quadfield import QuadElem, is_perfect_square, qf_make, qf_pow

__all__ = [
    "Family",
    "SequenceParams",
    "SequenceTerm",
    "UnsupportedParamsError",
    "binet_eval",
    "seq_range",
    "seq_term",
    "seq_term_doubling",
    "FIBONACCI",
    "PELL",
]

# Convention value for U_{-1}; used only when evaluating closed forms.
U_MINUS_ONE = 1


class UnsupportedParamsError(ValueError):
    pass


class Family(enum.Enum):
    GENERAL_Q_MINUS_1 = "q=-1"
    Q_PLUS_1 = "q=+1"


@dataclass(frozen=True)
class SequenceParams:
    """The recurrence ``U_n = p*U_{n-1} + q*U_{n-2}`` with ``U_0=0, U_1=1``.

    Only two families are supported: ``q = -1`` with ``p >= 3`` and
    ``q = +1`` with ``p >= 1``.  Both grow geometrically with positive terms
    from ``n = 1`` on, which is what the certified tail bounds rely on.
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q == -1:
            if self.p < 3:
                raise UnsupportedParamsError(
                    f"q=-1 requires p >= 3 (got p={self.p})"
                )
        elif self.q == 1:
            if self.p < 1:
                raise UnsupportedParamsError(
                    f"q=+1 requires p >= 1 (got p={self.p})"
                )
        else:
            raise UnsupportedParamsError(f"only q in {{-1, +1}} is supported (got q={self.q})")
        if is_perfect_square(self.D):
            raise UnsupportedParamsError(f"p^2+4q={self.D} is a perfect square")

    @property
    def family(self) -> Family:
        return Family.GENERAL_Q_MINUS_1 if self.q == -1 else Family.Q_PLUS_1

    @property
    def D(self) -> int:
        return self.p * self.p + 4 * self.q

    @cached_property
    def alpha(self) -> QuadElem:
        return qf_make(Fraction(self.p, 2), Fraction(1, 2), self.D)

    @cached_property
    def beta(self) -> QuadElem:
        return qf_make(Fraction(self.p, 2), Fraction(-1, 2), self.D)


FIBONACCI = SequenceParams(1, 1)
PELL = SequenceParams(2, 1)


@dataclass(frozen=True)
class SequenceTerm:
    index: int
    value: int


def seq_term(params: SequenceParams, n: int) -> int:
    """Exact ``U_n`` by straight iteration (the reference implementation).

    ``n = -1`` returns the convention value 1.
    """
    if n < -1:
        raise ValueError(f"index must be >= -1 (got {n})")
    if n == -1:
        return U_MINUS_ONE
    p, q = params.p, params.q
    prev, cur = 0, 1
    if n == 0:
        return 0
    for _ in range(n - 1):
        prev, cur = cur, p * cur + q * prev
    return cur


def seq_term_doubling(params: SequenceParams, n: int) -> int:
    """``U_n`` by fast doubling.

    Uses U_{2k} = U_k (2 U_{k+1} - p U_k) and U_{2k+1} = U_{k+1}^2 + q U_k^2.
    """
    if n < 0:
        raise ValueError(f"index must be >= 0 (got {n})")
    p, q = params.p, params.q
    u, v = 0, 1  # (U_k, U_{k+1}) with k = 0
    for bit in bin(n)[2:]:
        u, v = u * (2 * v - p * u), v * v + q * u * u
        if bit == "1":
            u, v = v, p * v + q * u
    return u


def binet_eval(params: SequenceParams, n: int) -> int:
    """``U_n = (alpha^n - beta^n) / (alpha - beta)`` evaluated in Q(sqrt(D))."""
    if n < 0:
        raise ValueError(f"index must be >= 0 (got {n})")
    a, b = params.alpha, params.beta
    val = (qf_pow(a, n) - qf_pow(b, n)) / (a - b)
    if val.y != 0 or val.x.denominator != 1:
        raise ArithmeticError(f"Binet evaluation is not an integer: {val}")
    return val.x.numerator


def seq_range(params: SequenceParams, lo: int, hi: int) -> list[SequenceTerm]:
    if not -1 <= lo <= hi:
        raise ValueError(f"invalid range [{lo}, {hi}]")
    p, q = params.p, params.q
    terms = []
    prev, cur = 0, 1  # U_0, U_1
    if lo == -1:
        terms.append(SequenceTerm(-1, U_MINUS_ONE))
    for k in range(0, hi + 1):
        if k >= lo:
            terms.append(SequenceTerm(k, prev))
        prev, cur = cur, p * cur + q * prev
    return terms
