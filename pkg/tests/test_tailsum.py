from fractions import Fraction
from math import floor

import pytest

from oracles import brute_recip_floor, brute_terms
from recipfib.sequence import FIBONACCI, PELL, SequenceParams
from recipfib.tailsum import (
    PowerSumQuery,
    RationalInterval,
    Undecided,
    floor_recip_sum,
    recip_enclosures,
    sum_enclosure,
    tail_bound,
)

G3 = SequenceParams(3, -1)
SUPPORTED = [SequenceParams(p, -1) for p in (3, 4, 5, 7, 10)] + [
    SequenceParams(p, 1) for p in (1, 2, 3, 5)
]


def exact_partial(params, s, lo, hi):
    u = brute_terms(params.p, params.q, hi + 1)
    return sum(Fraction(1, u[k] ** s) for k in range(lo, hi + 1))


def test_tail_bound_examples():
    assert tail_bound(G3, 3, 3) == Fraction(1, 448)
    assert tail_bound(FIBONACCI, 1, 2) == 3
    assert tail_bound(PELL, 2, 2) == Fraction(29, 96)


def test_tail_bound_examples_dominate_brute_force():
    assert exact_partial(G3, 3, 3, 32) <= Fraction(1, 448)
    assert exact_partial(FIBONACCI, 1, 2, 61) <= 3
    assert exact_partial(PELL, 2, 2, 61) <= Fraction(29, 96)


def test_tail_bound_errors():
    with pytest.raises(ValueError):
        tail_bound(G3, 3, 0)
    with pytest.raises(ValueError):
        tail_bound(G3, 0, 3)


@pytest.mark.parametrize(
    "params, s, n, expected",
    [
        (G3, 3, 2, 25),
        (G3, 3, 3, 483),
        (FIBONACCI, 1, 4, 1),
        (PELL, 2, 2, 3),
        (SequenceParams(4, -1), 3, 4, 172237),
        (G3, 3, 7, 50596585),
    ],
)
def test_floor_examples(params, s, n, expected):
    oracle, _ = brute_recip_floor(params.p, params.q, s, n)
    assert oracle == expected
    res = floor_recip_sum(PowerSumQuery(params, s, n))
    assert res.value == expected
    assert floor(res.enclosure.lo) == floor(res.enclosure.hi) == expected
    assert res.enclosure.lo > 0


@pytest.mark.parametrize("params", SUPPORTED, ids=str)
@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_floor_matches_oracle(params, s):
    for n in (1, 2, 5, 11, 24):
        oracle, _ = brute_recip_floor(params.p, params.q, s, n, dps=120)
        assert floor_recip_sum(PowerSumQuery(params, s, n)).value == oracle


@pytest.mark.parametrize("params", SUPPORTED, ids=str)
@pytest.mark.parametrize("s", [1, 3])
def test_soundness_at_doubled_terms(params, s):
    for n in (1, 4, 9):
        res = floor_recip_sum(PowerSumQuery(params, s, n))
        m = n + 2 * res.terms_used
        enc = sum_enclosure(params, s, n, m)
        assert floor(1 / enc.hi) == floor(1 / enc.lo) == res.value


@pytest.mark.parametrize("params", SUPPORTED, ids=str)
def test_enclosures_nest(params):
    for s in (1, 2, 3, 4):
        n = 3
        prev = sum_enclosure(params, s, n, n + 1)
        for m in range(n + 1, n + 41, 8):
            cur = sum_enclosure(params, s, n, m)
            assert prev.contains(cur)
            prev = cur


@pytest.mark.parametrize("params", SUPPORTED, ids=str)
def test_start_point_invariance(params):
    for s in (1, 3):
        for n in (1, 6):
            base = floor_recip_sum(PowerSumQuery(params, s, n)).value
            for initial_m, step in [(n + 1, 1), (n + 3, 2), (n + 20, 5), (None, 13)]:
                res = floor_recip_sum(PowerSumQuery(params, s, n), initial_m=initial_m, step=step)
                assert res.value == base


def test_reciprocal_enclosures_shrink():
    widths = [e.width for _, e in zip(range(6), (enc for _, enc in recip_enclosures(G3, 3, 2)))]
    assert widths == sorted(widths, reverse=True)


def test_undecided_reports_enclosure():
    q = PowerSumQuery(FIBONACCI, 1, 4, max_terms=1)
    with pytest.raises(Undecided) as info:
        floor_recip_sum(q, initial_m=5)
    enc = info.value.enclosure
    assert floor(enc.lo) != floor(enc.hi)
    assert info.value.terms_used == 1


@pytest.mark.parametrize("kwargs", [dict(s=0, n=2), dict(s=1, n=0), dict(s=1, n=2, max_terms=0)])
def test_query_validation(kwargs):
    with pytest.raises(ValueError):
        PowerSumQuery(G3, **kwargs)


def test_interval_validation():
    with pytest.raises(ValueError):
        RationalInterval(Fraction(2), Fraction(1))
