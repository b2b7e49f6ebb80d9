from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from darbouxkit.errors import EmptyIntersection, EmptyInterval, ParseError
from darbouxkit.exactnum import (Ordering, RatInterval, as_rational, compare, interval_arith,
                                 parse_rational, to_decimal)

rats = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**6)


@st.composite
def intervals(draw):
    a, b = draw(rats), draw(rats)
    return RatInterval(min(a, b), max(a, b))


def test_interval_arith_examples():
    assert interval_arith("add", RatInterval(1, 2), RatInterval(3, 4)) == RatInterval(4, 6)
    assert interval_arith("mul", RatInterval(-1, 2), RatInterval(3, 4)) == RatInterval(-4, 8)
    with pytest.raises(EmptyIntersection):
        interval_arith("intersect", RatInterval(0, 1), RatInterval(2, 3))


def test_compare_examples():
    assert compare(Q(1, 3), Q(2, 6)) is Ordering.EQ
    # 355·7 = 2485 < 2486 = 22·113
    assert 355 * 7 < 22 * 113
    assert compare(Q(355, 113), Q(22, 7)) is Ordering.LT
    assert compare(Q(0), Q(1, 10**9)) is Ordering.LT


def test_parse_rational_forms():
    assert parse_rational("3/4") == Q(3, 4)
    assert parse_rational("-0.125") == Q(-1, 8)
    assert parse_rational("1e-12") == Q(1, 10**12)
    assert parse_rational("2.5E3") == Q(2500)
    for bad in ("1/0", "abc", "0.1e", "1//2", "", "nan"):
        with pytest.raises((ParseError, ZeroDivisionError)):
            parse_rational(bad)


def test_no_silent_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


def test_empty_interval_is_an_error():
    with pytest.raises(EmptyInterval):
        RatInterval(1, 0)


def test_decimal_rendering_truncates():
    assert to_decimal(Q(1, 3), 5) == "0.33333"
    assert to_decimal(Q(-7, 2), 2) == "-3.50"


@given(rats, rats, rats)
def test_field_laws_exact(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r


@given(intervals(), intervals(), st.sampled_from(["add", "sub", "mul", "hull"]),
       st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=20))
def test_interval_ops_contain_samples(X, Y, op, ts):
    Z = interval_arith(op, X, Y)
    for s, t in ts:
        x = X.lo + X.width * Q(s)
        y = Y.lo + Y.width * Q(t)
        if op == "hull":
            assert Z.contains(x) and Z.contains(y)
        else:
            v = {"add": x + y, "sub": x - y, "mul": x * y}[op]
            assert Z.contains(v)


@given(intervals(), intervals())
def test_hull_width(X, Y):
    assert X.hull(Y).width >= max(X.width, Y.width)
