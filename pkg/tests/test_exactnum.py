from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from abclosure.exactnum import (CircleInterval, IncompatibleFieldError, QuadExt, circle_distance, floor_of,
                                qe_compare, reduce_mod1, rotate, sign_of)

SQUAREFREE = [2, 3, 5, 6, 7, 10, 11, 13]
ints = st.integers(-10**6, 10**6)
fracs = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


def dec(x: QuadExt) -> Decimal:
    """80-digit decimal oracle, independent of the integer comparison code."""
    q0, q1 = x.q0, x.q1
    return (Decimal(q0.numerator) / Decimal(q0.denominator)
            + Decimal(q1.numerator) / Decimal(q1.denominator) * Decimal(x.D or 0).sqrt())


@st.composite
def quads(draw, d=None):
    d = d if d is not None else draw(st.sampled_from(SQUAREFREE))
    return QuadExt(draw(fracs), draw(fracs), d)


@given(ints, ints, st.sampled_from(SQUAREFREE))
def test_sign_matches_decimal(a, b, d):
    v = Decimal(a) + Decimal(b) * Decimal(d).sqrt()
    assert sign_of(a, b, d) == (v > 0) - (v < 0)


@given(ints, ints, st.sampled_from(SQUAREFREE), st.integers(1, 10**4))
def test_floor_matches_decimal(a, b, d, q):
    v = (Decimal(a) + Decimal(b) * Decimal(d).sqrt()) / q
    assert floor_of(a, b, d, q) == int(v.to_integral_value(rounding="ROUND_FLOOR"))


@given(st.data())
def test_field_arithmetic(data):
    d = data.draw(st.sampled_from(SQUAREFREE))
    x, y = data.draw(quads(d)), data.draw(quads(d))
    assert abs(dec(x + y) - (dec(x) + dec(y))) < Decimal("1e-60")
    assert abs(dec(x * y) - dec(x) * dec(y)) < Decimal("1e-60")
    if x != 0:
        assert (y / x) * x == y
    assert qe_compare(x, y) == (dec(x) > dec(y)) - (dec(x) < dec(y))
    assert x.floor() == int(dec(x).to_integral_value(rounding="ROUND_FLOOR"))


def test_rationals_mix_with_any_field():
    s2, s3 = QuadExt(0, 1, 2), QuadExt(0, 1, 3)
    assert (s2 + Fraction(1, 2)).D == 2
    assert s2 * s2 == 2 and (s2 * s2).is_rational
    with pytest.raises(IncompatibleFieldError):
        _ = s2 + s3
    with pytest.raises(ValueError):
        QuadExt(0, 1, 8)
    assert QuadExt(1, 1, 1) == 2


@given(quads())
def test_reduce_mod1_and_distance(x):
    t = reduce_mod1(x).value
    assert 0 <= t < 1 and (x - t).is_rational and (x - t).q0.denominator == 1
    c = circle_distance(x)
    assert c == min(t, 1 - t) and 0 <= c <= Fraction(1, 2)


def test_interval_conventions():
    a = QuadExt(Fraction(3, 2), Fraction(-1, 2), 5)  # (3 - sqrt5)/2
    under = CircleInterval.under(1 - a, 1)
    bar = CircleInterval.bar(1 - a, 1)
    assert 1 - a in under and 1 - a not in bar
    assert 0 not in under and 0 in bar
    assert under.end == 1 and under.length == a
    wrap = CircleInterval.under(Fraction(9, 10), Fraction(1, 10))
    assert 0 in wrap and Fraction(1, 2) not in wrap and wrap.length == Fraction(1, 5)
    assert rotate(Fraction(9, 10), Fraction(1, 5)).value == Fraction(1, 10)


@given(quads(5), quads(5), quads(5), st.booleans(), st.booleans())
def test_membership_matches_decimal(s, e, p, inc_s, inc_e):
    I = CircleInterval(s, e, inc_s, inc_e)
    if I.is_full:
        return
    start, length = dec(I.start), dec(I.length)
    off = dec(p) - start
    off -= off.to_integral_value(rounding="ROUND_FLOOR")
    if reduce_mod1(p - I.start).value == 0:
        expected = inc_s
    elif reduce_mod1(p - I.start).value == I.length:
        expected = inc_e
    else:
        expected = off < length
    assert (p in I) == expected
