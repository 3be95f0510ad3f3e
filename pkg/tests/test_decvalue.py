"""Exact decimal value tests.

Rounding results are checked two ways: against frozen literal values
computed by hand, and against the stdlib decimal module configured for
round-half-even at matching precision (an independent implementation).
"""

import decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimcheck.decvalue import (
    DEFAULT_CONTEXT,
    DecimalParseError,
    DecValue,
    ExponentOverflowError,
    PrecisionContext,
    ulp,
    within_ulps,
)

P5 = PrecisionContext(significant_digits=5)
P6 = PrecisionContext(significant_digits=6)


def dec_ctx(digits: int) -> decimal.Context:
    return decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)


def as_decimal(v: DecValue) -> decimal.Decimal:
    return decimal.Decimal(v.significand).scaleb(
        v.exponent - (len(str(abs(v.significand))) - 1)
    )


# -- construction and normal form -----------------------------------------


def test_parse_pound_conversion_constant():
    v = DecValue.parse("907.18474")
    assert (v.significand, v.exponent) == (90718474, 2)


def test_parse_strips_trailing_zeros():
    v = DecValue.parse("1.500")
    assert (v.significand, v.exponent) == (15, 0)


def test_parse_leading_zeros():
    v = DecValue.parse("000.125")
    assert (v.significand, v.exponent) == (125, -1)


def test_zero_is_canonical():
    for text in ("0", "0.0", "-0", "0e5", "0.000"):
        v = DecValue.parse(text)
        assert (v.significand, v.exponent) == (0, 0), text


def test_make_float_places_point_after_first_digit():
    assert str(DecValue.make_float(5, -1)) == "0.5"
    assert str(DecValue.make_float(125, -1)) == "0.125"
    assert str(DecValue.make_float(90718474, 2)) == "907.18474"
    assert str(DecValue.make_float(-25, 3)) == "-2500"


def test_from_int():
    assert DecValue.from_int(1007).to_rational() == 1007
    assert (DecValue.from_int(-300).significand, DecValue.from_int(-300).exponent) == (-3, 2)


@pytest.mark.parametrize("bad", ["", "1.", "1e", ".5", "1..2", "e5", "--1", "1e+-2", "abc"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(DecimalParseError):
        DecValue.parse(bad)


def test_exponent_bound_is_an_error():
    big = DecValue.make_float(1, 2**31 - 1)
    with pytest.raises(ExponentOverflowError):
        big.mul(big)


# -- frozen division oracles ----------------------------------------------


def test_div_exact_terminating():
    q = DecValue.from_int(1).div(DecValue.from_int(8))
    assert (q.significand, q.exponent) == (125, -1)
    assert str(q) == "0.125"


def test_div_rounds_to_context_precision():
    q = DecValue.from_int(1).div(DecValue.from_int(3), P5)
    assert (q.significand, q.exponent) == (33333, -1)


def test_div_two_thirds_rounds_up():
    q = DecValue.from_int(2).div(DecValue.from_int(3), P5)
    assert (q.significand, q.exponent) == (66667, -1)


def test_from_rational_five_ninths():
    q = DecValue.from_rational(Fraction(5, 9), P6)
    assert (q.significand, q.exponent) == (555556, -1)


def test_half_even_tie_down():
    # 0.123455 at 5 digits: tie, even neighbour below wins
    q = DecValue.from_rational(Fraction(123455, 1000000), P5)
    assert (q.significand, q.exponent) == (12346, -1)
    q2 = DecValue.from_rational(Fraction(123445, 1000000), P5)
    assert (q2.significand, q2.exponent) == (12344, -1)


def test_default_precision_is_34():
    assert DEFAULT_CONTEXT.significant_digits == 34
    q = DecValue.from_int(1).div(DecValue.from_int(3))
    assert q.significand == int("3" * 34)


# -- arithmetic against the stdlib decimal module -------------------------


@given(
    a=st.integers(-10**12, 10**12),
    b=st.integers(-10**12, 10**12),
    ea=st.integers(-6, 6),
    eb=st.integers(-6, 6),
)
@settings(max_examples=300)
def test_add_matches_decimal_module(a, b, ea, eb):
    x = DecValue.from_rational(Fraction(a, 10**6) * Fraction(10) ** ea)
    y = DecValue.from_rational(Fraction(b, 10**6) * Fraction(10) ** eb)
    got = x.add(y, P6)
    want = dec_ctx(6).add(as_decimal(x), as_decimal(y))
    assert Fraction(got.to_rational()) == Fraction(want)


@given(
    a=st.integers(-10**12, 10**12).filter(lambda n: n != 0),
    b=st.integers(-10**12, 10**12).filter(lambda n: n != 0),
)
@settings(max_examples=300)
def test_div_matches_decimal_module(a, b):
    x = DecValue.from_int(a)
    y = DecValue.from_int(b)
    got = x.div(y, P6)
    want = dec_ctx(6).divide(decimal.Decimal(a), decimal.Decimal(b))
    assert Fraction(got.to_rational()) == Fraction(want)


@given(
    a=st.integers(-10**15, 10**15),
    b=st.integers(-10**15, 10**15),
)
@settings(max_examples=300)
def test_mul_matches_decimal_module(a, b):
    got = DecValue.from_int(a).mul(DecValue.from_int(b), P6)
    want = dec_ctx(6).multiply(decimal.Decimal(a), decimal.Decimal(b))
    assert Fraction(got.to_rational()) == Fraction(want)


def test_div_by_zero():
    with pytest.raises(ZeroDivisionError):
        DecValue.from_int(1).div(DecValue.from_int(0))


# -- properties -----------------------------------------------------------


decvalues = st.builds(
    lambda digits, exp, neg: DecValue.from_rational(
        Fraction(-digits if neg else digits) * Fraction(10) ** exp
    ),
    digits=st.integers(0, 10**12),
    exp=st.integers(-12, 12),
    neg=st.booleans(),
)


@given(v=decvalues)
@settings(max_examples=500)
def test_normal_form(v):
    if v.significand == 0:
        assert v.exponent == 0
    else:
        assert v.significand % 10 != 0


@given(v=decvalues)
@settings(max_examples=500)
def test_str_parse_roundtrip(v):
    again = DecValue.parse(str(v))
    assert (again.significand, again.exponent) == (v.significand, v.exponent)


@given(v=decvalues)
@settings(max_examples=500)
def test_rational_roundtrip(v):
    assert DecValue.from_rational(v.to_rational()) == v


@given(a=decvalues, b=decvalues)
@settings(max_examples=500)
def test_compare_matches_fraction_order(a, b):
    got = a.compare(b)
    ra, rb = a.to_rational(), b.to_rational()
    want = (ra > rb) - (ra < rb)
    assert got == want
    assert b.compare(a) == -want


@given(a=decvalues, b=decvalues)
@settings(max_examples=300)
def test_add_exact_within_precision(a, b):
    # operands span at most ~25 decimal places, so a 34-digit context
    # cannot lose digits unless magnitudes are far apart
    got = a.add(b)
    exact = a.to_rational() + b.to_rational()
    if DecValue.from_rational(exact) == got:
        return
    assert within_ulps(got, DecValue.from_rational(exact), 1)


@given(a=decvalues)
@settings(max_examples=300)
def test_sub_self_is_zero(a):
    assert a.sub(a).is_zero()


@given(a=decvalues, b=decvalues.filter(lambda v: not v.is_zero()))
@settings(max_examples=300)
def test_div_mul_roundtrip_within_trip_ulp(a, b):
    # Two roundings: the quotient's error is amplified by |b| on the way
    # back, so the bound is the largest last-place step seen on the trip.
    q = a.div(b)
    back = q.mul(b)
    tol = max(ulp(a), ulp(back), ulp(q) * abs(b.to_rational()))
    assert abs(back.to_rational() - a.to_rational()) <= tol


def test_ulp_scales_with_exponent():
    one = DecValue.from_int(1)
    assert ulp(one) == Fraction(10) ** -(DEFAULT_CONTEXT.significant_digits - 1)
    thousand = DecValue.from_int(1000)
    assert ulp(thousand) == 1000 * ulp(one)


def test_operator_sugar():
    a = DecValue.parse("1.5")
    b = DecValue.parse("2.5")
    assert str(a + b) == "4"
    assert str(b - a) == "1"
    assert str(a * b) == "3.75"
    assert str(b / a) == str(DecValue.from_rational(Fraction(5, 3)))
    assert a < b and b > a and a != b and a == DecValue.parse("1.50")
