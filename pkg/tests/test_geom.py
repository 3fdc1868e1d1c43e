from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopcroft.geom import (Line, Point, Segment, SideSign, dual_line, dual_point, meet_x, normalize_line,
                           normalize_point, shear, shear_is_admissible, side)

ints = st.integers(-10**6, 10**6)
small = st.integers(-50, 50)
pos = st.integers(1, 50)
rat = st.builds(Fraction, ints, pos)


def test_normalization_is_canonical():
    assert normalize_line(2, 4, 2) == normalize_line(1, 2, 1)
    assert normalize_line(-2, 4, -2) == normalize_line(1, -2, 1)
    assert normalize_point(3, 6, 3) == normalize_point(1, 2, 1)
    assert normalize_point(-3, 6, -3) == normalize_point(1, -2, 1)
    with pytest.raises(ValueError):
        normalize_line(1, 2, 0)


def test_side_basic():
    l = Line(1, 0)
    assert side(Point(0, 1), l) == SideSign.ABOVE
    assert side(Point(2, 2), l) == SideSign.ON
    assert side(Point(3, 2), l) == SideSign.BELOW


def test_meet():
    assert meet_x(Line(1, 0), Line(-1, 2)) == 1
    assert meet_x(Line(1, 0), Line(1, 5)) is None
    assert meet_x(Line(Fraction(1, 3), 0), Line(0, 1)) == 3


@settings(max_examples=300, deadline=None)
@given(rat, rat)
def test_duality_involution(x, y):
    p = Point(x, y)
    assert dual_line(dual_point(p)) == p
    l = Line(x, y)
    assert dual_point(dual_line(l)) == l


@settings(max_examples=300, deadline=None)
@given(rat, rat, rat, rat)
def test_duality_preserves_side(px, py, a, b):
    p, l = Point(px, py), Line(a, b)
    assert side(dual_line(l), dual_point(p)) == side(p, l)


@settings(max_examples=200, deadline=None)
@given(rat, rat, rat, rat, st.integers(1, 1000))
def test_positive_scaling_preserves_side(px, py, a, b, k):
    p, l = Point(px, py), Line(a, b)
    assert side(Point(k * px, k * py), Line(a, k * b)) == side(p, l)


@settings(max_examples=200, deadline=None)
@given(rat, rat, rat, rat, st.builds(Fraction, small, pos))
def test_shear_preserves_incidence(px, py, a, b, lam):
    p, l = Point(px, py), Line(a, b)
    if not shear_is_admissible([l], lam):
        return
    q, m = shear([p, l], lam)
    on = side(p, l) == SideSign.ON
    assert (side(q, m) == SideSign.ON) == on
    if 1 + Fraction(a) * lam > 0:
        assert side(q, m) == side(p, l)


def test_shear_segment_and_rejects_unknown():
    s = Segment(Point(0, 0), Point(1, 1))
    (t,) = shear([s], 2)
    assert {t.p, t.q} == {Point(0, 0), Point(3, 1)}
    with pytest.raises(TypeError):
        shear([object()], 1)
