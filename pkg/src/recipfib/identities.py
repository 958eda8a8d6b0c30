"""Closed forms for floor((sum_{k>=n} 1/U_k^s)^-1).

Covered: Fibonacci (s = 1, 2), Pell (s = 1, 2, 3) and the cubed sums of
G_n with ``G_{n+2} = a G_{n+1} - G_n`` for ``a >= 3``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .sequence import FIBONACCI, PELL, SequenceParams, seq_term

__all__ = [
    "IdentityFamily",
    "IdentityQuery",
    "closed_form",
    "fib_recip_floor",
    "gen_cubed_sum_indices",
    "gen_fib_cubed_floor",
    "pell_recip_floor",
]


class IdentityFamily(enum.Enum):
    FIB_S1 = "fib-s1"
    FIB_S2 = "fib-s2"
    PELL_S1 = "pell-s1"
    PELL_S2 = "pell-s2"
    PELL_S3 = "pell-s3"
    GEN_CUBED = "gen-cubed"


@dataclass(frozen=True)
class IdentityQuery:
    family: IdentityFamily
    n: int
    a: int | None = None

    def __post_init__(self) -> None:
        if self.family is IdentityFamily.GEN_CUBED:
            if self.a is None or self.a < 3:
                raise ValueError(f"gen-cubed requires a >= 3 (got a={self.a})")
            if self.n < 2:
                raise ValueError(f"gen-cubed requires n >= 2 (got n={self.n})")
        elif self.n < 1:
            raise ValueError(f"n must be >= 1 (got n={self.n})")

    @property
    def s(self) -> int:
        return 3 if self.family is IdentityFamily.GEN_CUBED else int(self.family.value[-1])

    @property
    def params(self) -> SequenceParams:
        if self.family is IdentityFamily.GEN_CUBED:
            return SequenceParams(self.a, -1)
        return FIBONACCI if self.family.value.startswith("fib") else PELL


def fib_recip_floor(n: int, s: int) -> int:
    """Closed form for the Fibonacci numbers; uses F_{-1} = 1 at n = 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1 (got {n})")
    F = lambda k: seq_term(FIBONACCI, k)  # noqa: E731
    even = n % 2 == 0
    if s == 1:
        return F(n - 2) if even else F(n - 2) - 1
    if s == 2:
        return F(n - 1) * F(n) - 1 if even else F(n - 1) * F(n)
    raise ValueError(f"s must be 1 or 2 (got {s})")


def pell_recip_floor(n: int, s: int, display_form: bool = False) -> int:
    """Closed form for the Pell numbers; uses P_{-1} = 1 at n = 1.

    For s = 2 the value is 2 P_{n-1} P_n (minus 1 for even n).  The sum
    variant 2 P_{n-1} + P_n, selected with ``display_form=True``, agrees only
    at n = 2; it grows like P_n while the true floor grows like P_n^2.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1 (got {n})")
    P = lambda k: seq_term(PELL, k)  # noqa: E731
    even = n % 2 == 0
    if s == 1:
        return P(n - 1) + P(n - 2) - (0 if even else 1)
    if s == 2:
        base = 2 * P(n - 1) + P(n) if display_form else 2 * P(n - 1) * P(n)
        return base - (1 if even else 0)
    if s == 3:
        pn, pm = P(n), P(n - 1)
        inner = Fraction(61, 82) * pn + Fraction(91, 82) * pm
        # floor toward -inf; the even branch has a negative argument
        return pn * pn * pm + 3 * pn * pm * pm + floor(-inner if even else inner)
    raise ValueError(f"s must be 1, 2 or 3 (got {s})")


def gen_cubed_sum_indices(n: int) -> list[int]:
    """Indices n-3, n-8, ... of the correction sum, kept while >= 1."""
    return list(range(n - 3, 0, -5))


def gen_fib_cubed_floor(a: int, n: int) -> int:
    """G_n^3 - G_{n-1}^3 - 3*sum G_{n-3-5k} - c, with c = 2 iff a = 3 and n = 3 mod 5."""
    if a < 3:
        raise ValueError(f"a must be >= 3 (got {a})")
    if n < 2:
        raise ValueError(f"n must be >= 2 (got {n})")
    params = SequenceParams(a, -1)
    G = lambda k: seq_term(params, k)  # noqa: E731
    correction = 2 if a == 3 and n % 5 == 3 else 1
    tail = sum(G(j) for j in gen_cubed_sum_indices(n))
    return G(n) ** 3 - G(n - 1) ** 3 - 3 * tail - correction


def closed_form(query: IdentityQuery) -> int:
    f = query.family
    if f is IdentityFamily.GEN_CUBED:
        return gen_fib_cubed_floor(query.a, query.n)
    if f in (IdentityFamily.FIB_S1, IdentityFamily.FIB_S2):
        return fib_recip_floor(query.n, query.s)
    return pell_recip_floor(query.n, query.s)
