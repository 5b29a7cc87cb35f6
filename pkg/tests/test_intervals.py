from fractions import Fraction as F
import math

import pytest
from hypothesis import given, strategies as st

from intervallp.intervals import (
    EnumerationCapExceeded,
    Interval,
    center,
    contains,
    endpoint_scenarios,
    format_extended,
    interval_dot_range,
    parse_extended,
    radius,
    to_rational,
)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@st.composite
def intervals(draw):
    a, b = draw(rationals), draw(rationals)
    return Interval(min(a, b), max(a, b))


def iv(lo, hi):
    return Interval(F(lo), F(hi))


@pytest.mark.parametrize("x, c, r", [
    (iv(0, 1), F(1, 2), F(1, 2)),
    (iv(3, 3), F(3), F(0)),
    (iv(-1, 5), F(2), F(3)),
])
def test_center_radius(x, c, r):
    assert center(x) == c
    assert radius(x) == r


def test_center_radius_nested():
    m = [[iv(0, 1), iv(3, 3)], [iv(-1, 5), iv(2, 4)]]
    assert center(m) == ((F(1, 2), F(3)), (F(2), F(3)))
    assert radius(m) == ((F(1, 2), F(0)), (F(3), F(1)))


def test_contains():
    assert contains(iv(0, 1), F(1, 2))
    assert not contains(iv(0, 1), 2)
    assert contains(iv(3, 3), 3)


def test_reversed_bounds_rejected():
    with pytest.raises(ValueError):
        Interval(F(1), F(0))


def test_floats_rejected():
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(ValueError):
        to_rational("0.5")
    assert to_rational("-3/4") == F(-3, 4)


def test_dot_range_examples():
    a = [iv(0, 1), iv(-1, -1)]
    assert interval_dot_range(a, [F(1), F(1)]) == iv(-1, 0)
    assert interval_dot_range(a, [F(0), F(0)]) == iv(0, 0)
    assert interval_dot_range([iv(2, 2)], [F(3)]) == iv(6, 6)
    with pytest.raises(ValueError):
        interval_dot_range(a, [F(1)])


@given(st.lists(st.tuples(intervals(), rationals), min_size=1, max_size=4))
def test_dot_range_matches_endpoint_brute_force(pairs):
    a = [p[0] for p in pairs]
    x = [p[1] for p in pairs]
    values = [sum(ai * xi for ai, xi in zip(combo, x)) for combo in endpoint_scenarios(a, cap=None)]
    assert interval_dot_range(a, x) == Interval(min(values), max(values))


def test_endpoint_scenarios_order_and_cap():
    assert list(endpoint_scenarios([iv(0, 1)])) == [(0,), (1,)]
    assert list(endpoint_scenarios([iv(3, 3), iv(4, 4)])) == [(3, 4)]
    assert list(endpoint_scenarios([iv(0, 1), iv(2, 5)])) == [(0, 2), (0, 5), (1, 2), (1, 5)]
    with pytest.raises(EnumerationCapExceeded):
        endpoint_scenarios([iv(0, 1)] * 9, cap=256)


def test_extended_format_round_trip():
    for v in (-math.inf, math.inf, F(-7, 3), F(0)):
        assert parse_extended(format_extended(v)) == v
    assert format_extended(math.inf) == "+inf"


@given(intervals())
def test_json_round_trip(x):
    assert Interval.from_json(x.to_json()) == x
