from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisection_sign, mp_sign
from recipfib.quadfield import (
    FieldMismatchError,
    InvalidFieldError,
    QuadElem,
    qf_arith,
    qf_cmp_rational,
    qf_make,
    qf_pow,
    qf_sign,
)

ALPHA3 = qf_make(Fraction(3, 2), Fraction(1, 2), 5)
BETA3 = qf_make(Fraction(3, 2), Fraction(-1, 2), 5)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)
radicands = st.sampled_from([2, 3, 5, 8, 12, 13, 21, 32, 45, 77, 96, 140])


@st.composite
def elems(draw, D=None):
    D = draw(radicands) if D is None else D
    return QuadElem(draw(fractions), draw(fractions), D)


@st.composite
def elem_triples(draw):
    D = draw(radicands)
    return draw(elems(D)), draw(elems(D)), draw(elems(D))


def test_make_zero():
    z = qf_make(0, 0, 5)
    assert z == 0 and qf_sign(z) == 0


def test_make_alpha():
    assert ALPHA3.x == Fraction(3, 2) and ALPHA3.y == Fraction(1, 2)
    assert ALPHA3 * ALPHA3 == 3 * ALPHA3 - 1


@pytest.mark.parametrize("D", [4, 0, -5, 1, 9, 144])
def test_make_rejects_bad_radicand(D):
    with pytest.raises(InvalidFieldError):
        qf_make(2, 1, D)


def test_arith_examples():
    a = qf_make(2, 1, 3)
    assert qf_arith(a, a.conj(), "mul") == 1
    assert qf_arith(ALPHA3, BETA3, "add") == 3
    inv = qf_arith(qf_make(1, 0, 5), ALPHA3, "div")
    assert inv == BETA3
    # brute check that it is an inverse
    assert QuadElem(inv.x * ALPHA3.x + inv.y * ALPHA3.y * 5, inv.x * ALPHA3.y + inv.y * ALPHA3.x, 5) == 1


def test_arith_errors():
    with pytest.raises(FieldMismatchError):
        qf_arith(qf_make(1, 1, 5), qf_make(1, 1, 3), "add")
    with pytest.raises(ZeroDivisionError):
        qf_arith(ALPHA3, qf_make(0, 0, 5), "div")
    with pytest.raises(ValueError):
        qf_arith(ALPHA3, ALPHA3, "mod")


def test_pow_examples():
    assert qf_pow(ALPHA3, 0) == 1
    assert qf_pow(ALPHA3, 2) == qf_make(Fraction(7, 2), Fraction(3, 2), 5)
    chain = ALPHA3
    for _ in range(4):
        chain = qf_arith(chain, ALPHA3, "mul")
    assert qf_pow(ALPHA3, 5) == chain
    assert qf_pow(ALPHA3, -5) == qf_pow(BETA3, 5)
    with pytest.raises(ZeroDivisionError):
        qf_pow(qf_make(0, 0, 5), -1)


@pytest.mark.parametrize(
    "x, y, D, expected",
    [(0, 0, 5, 0), (-1, 1, 5, 1), (3, -2, 5, -1), (-3, 2, 5, 1), (2, 0, 7, 1), (0, -1, 7, -1)],
)
def test_sign_examples(x, y, D, expected):
    assert qf_sign(qf_make(x, y, D)) == expected
    assert bisection_sign(Fraction(x), Fraction(y), D) == expected


def test_cmp_rational_examples():
    assert qf_cmp_rational(ALPHA3, Fraction(2618, 1000)) == 1
    assert bisection_sign(Fraction(3, 2) - Fraction(2618, 1000), Fraction(1, 2), 5) == 1
    assert qf_cmp_rational(qf_make(1, 0, 5), 1) == 0
    assert qf_cmp_rational(qf_make(0, 1, 5), Fraction(9, 4)) == -1


def test_operators_with_rationals():
    assert ALPHA3 + 1 == 1 + ALPHA3
    assert 1 - ALPHA3 == -(ALPHA3 - 1)
    assert 2 / ALPHA3 == 2 * BETA3
    assert ALPHA3 > 2 and ALPHA3 < 3 and ALPHA3 >= ALPHA3 and BETA3 <= 1
    assert ALPHA3 == ALPHA3 and ALPHA3 != BETA3


def test_normal_form_reduced():
    e = QuadElem(Fraction(6, 4), Fraction(2, 8), 5)
    assert (e.x.numerator, e.x.denominator) == (3, 2)
    assert e == QuadElem(Fraction(3, 2), Fraction(1, 4), 5)
    assert hash(e) == hash(QuadElem(Fraction(3, 2), Fraction(1, 4), 5))


def test_approx_rendering():
    assert ALPHA3.approx(6) == "2.618034"
    assert (-ALPHA3).approx(6) == "-2.618034"


@settings(max_examples=1000, deadline=None)
@given(elem_triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * a.inverse() == 1


@settings(max_examples=1000, deadline=None)
@given(elem_triples())
def test_conjugation_and_norm(t):
    a, b, _ = t
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).norm() == a.norm() * b.norm()


@settings(max_examples=1000, deadline=None)
@given(elem_triples())
def test_order_compatibility(t):
    a, b, _ = t
    if qf_sign(a) > 0 and qf_sign(b) > 0:
        assert qf_sign(a * b) > 0
        assert qf_sign(a + b) > 0
    assert qf_sign(-a) == -qf_sign(a)


@settings(max_examples=1000, deadline=None)
@given(elems())
def test_sign_matches_bisection(a):
    assert qf_sign(a) == bisection_sign(a.x, a.y, a.D)


@settings(max_examples=300, deadline=None)
@given(elems())
def test_sign_matches_high_precision(a):
    assert qf_sign(a) == mp_sign(a.x, a.y, a.D)


@settings(max_examples=300, deadline=None)
@given(elems(), st.integers(min_value=-12, max_value=12))
def test_pow_matches_repeated_multiplication(a, n):
    if a == 0 and n < 0:
        return
    base = a if n >= 0 else a.inverse()
    expected = QuadElem(Fraction(1), Fraction(0), a.D)
    for _ in range(abs(n)):
        expected = expected * base
    assert qf_pow(a, n) == expected
