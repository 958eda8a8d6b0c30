"""Certified floors of reciprocals of reciprocal-power sums.

For ``S = sum_{k >= n} 1/U_k^s`` an exact rational partial sum ``L`` over
``[n, m)`` and a provable geometric tail bound ``T`` give ``L < S <= L + T``.
The enclosure of ``1/S`` is refined until both endpoints share a floor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Iterator

from .sequence import Family, SequenceParams

__all__ = [
    "DEFAULT_MAX_TERMS",
    "FloorResult",
    "PowerSumQuery",
    "RationalInterval",
    "Undecided",
    "floor_recip_sum",
    "recip_enclosures",
    "sum_enclosure",
    "tail_bound",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 10_000
DEFAULT_STEP = 8


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, other: RationalInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class PowerSumQuery:
    params: SequenceParams
    s: int
    n: int
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValueError(f"s must be >= 1 (got {self.s})")
        if self.n < 1:
            raise ValueError(f"n must be >= 1 (got {self.n})")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be positive (got {self.max_terms})")


@dataclass(frozen=True)
class FloorResult:
    value: int
    terms_used: int
    enclosure: RationalInterval


class Undecided(ArithmeticError):
    """The refinement cap was hit before the floor could be certified."""

    def __init__(self, query: PowerSumQuery, enclosure: RationalInterval, terms_used: int):
        self.query = query
        self.enclosure = enclosure
        self.terms_used = terms_used
        super().__init__(
            f"floor undecided after {terms_used} terms: "
            f"enclosure [{float(enclosure.lo)}, {float(enclosure.hi)}]"
        )


def _growth_ratio(params: SequenceParams, s: int) -> Fraction:
    # Per-step (q=-1) or per-two-step (q=+1) lower bound on U_{k+1}/U_k, to the power s.
    if params.family is Family.GENERAL_Q_MINUS_1:
        return Fraction(params.p - 1) ** s
    return Fraction(params.p * params.p + 1) ** s


def _tail_bound_from_terms(params: SequenceParams, s: int, u_m: int, u_m1: int) -> Fraction:
    r = _growth_ratio(params, s)
    geom = r / (r - 1)  # 1 / (1 - 1/r)
    if params.family is Family.GENERAL_Q_MINUS_1:
        return Fraction(1, u_m ** s) * geom
    return (Fraction(1, u_m ** s) + Fraction(1, u_m1 ** s)) * geom


def tail_bound(params: SequenceParams, s: int, m: int) -> Fraction:
    """Rational ``T`` with ``sum_{k >= m} 1/U_k^s <= T``.

    For q=-1, p>=3: U_{k+1} >= (p-1) U_k, so the tail is dominated by a
    geometric series in (p-1)^-s.  For q=+1: U_{k+2} >= (p^2+1) U_k, so the
    even and odd subsequences are each dominated by one in (p^2+1)^-s.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1 (got {m})")
    if s < 1:
        raise ValueError(f"s must be >= 1 (got {s})")
    u_m, u_m1 = _terms_at(params, m)
    return _tail_bound_from_terms(params, s, u_m, u_m1)


def _terms_at(params: SequenceParams, m: int) -> tuple[int, int]:
    prev, cur = 0, 1
    for _ in range(m - 1):
        prev, cur = cur, params.p * cur + params.q * prev
    return cur, params.p * cur + params.q * prev


def _partial_sums(params: SequenceParams, s: int, n: int) -> Iterator[tuple[int, int, int, int, int]]:
    """Yield ``(m, num, den, U_m, U_{m+1})`` with ``num/den = sum_{n <= k < m} 1/U_k^s``."""
    u, u_next = _terms_at(params, n)
    m = n
    # Accumulate over a common denominator to avoid a gcd per term.
    num, den = 0, 1
    while True:
        yield m, num, den, u, u_next
        us = u ** s
        num, den = num * us + den, den * us
        u, u_next = u_next, params.p * u_next + params.q * u
        m += 1


def sum_enclosure(params: SequenceParams, s: int, n: int, m: int) -> RationalInterval:
    """Enclosure ``[L, L + T]`` of ``sum_{k >= n} 1/U_k^s`` using terms ``[n, m)``."""
    if m < n:
        raise ValueError(f"m must be >= n (got m={m}, n={n})")
    for mm, num, den, u_m, u_m1 in _partial_sums(params, s, n):
        if mm == m:
            partial = Fraction(num, den)
            return RationalInterval(partial, partial + _tail_bound_from_terms(params, s, u_m, u_m1))
    raise AssertionError("unreachable")


def recip_enclosures(
    params: SequenceParams,
    s: int,
    n: int,
    initial_m: int | None = None,
    step: int = DEFAULT_STEP,
) -> Iterator[tuple[int, RationalInterval]]:
    """Successively tighter enclosures of ``(sum_{k >= n} 1/U_k^s)^-1``.

    Yields ``(terms_used, [1/(L+T), 1/L])``; the first one uses
    ``initial_m - n`` exact terms and each later one ``step`` more.
    """
    if step < 1:
        raise ValueError(f"step must be positive (got {step})")
    m_target = n + DEFAULT_STEP if initial_m is None else initial_m
    if m_target <= n:
        # L must be positive for 1/L to be finite.
        m_target = n + 1
    for m, num, den, u_m, u_m1 in _partial_sums(params, s, n):
        if m < m_target:
            continue
        partial = Fraction(num, den)
        t = _tail_bound_from_terms(params, s, u_m, u_m1)
        yield m - n, RationalInterval(1 / (partial + t), 1 / partial)
        m_target += step


def refine(
    query: PowerSumQuery,
    done: Callable[[RationalInterval], bool],
    initial_m: int | None = None,
    step: int = DEFAULT_STEP,
) -> tuple[int, RationalInterval]:
    """Refine the reciprocal enclosure until ``done`` accepts it."""
    terms, enc = 0, None
    for terms, enc in recip_enclosures(query.params, query.s, query.n, initial_m, step):
        if done(enc):
            return terms, enc
        if terms >= query.max_terms:
            break
    raise Undecided(query, enc, terms)


def floor_recip_sum(
    query: PowerSumQuery,
    initial_m: int | None = None,
    step: int = DEFAULT_STEP,
) -> FloorResult:
    """Certified ``floor((sum_{k >= n} 1/U_k^s)^-1)``.

    Raises :class:`Undecided` if ``max_terms`` terms do not separate the
    enclosure from every integer.
    """
    terms, enc = refine(query, lambda e: floor(e.lo) == floor(e.hi), initial_m, step)
    log.debug("floor decided with %d terms", terms)
    return FloorResult(floor(enc.lo), terms, enc)
