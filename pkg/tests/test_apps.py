import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hopcroft import generators as gen
from hopcroft.apps import (DiskStats, SegStats, SelectStats, component_graph, distance_select,
                           distance_select_brute, seg_components, seg_components_brute, seg_intersections,
                           seg_intersections_brute, unit_dist_brute, unit_dist_count)
from hopcroft.apps.circles import cmp_quadratic, sign_two_roots

seg_st = st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)).filter(
    lambda s: (s[0], s[1]) != (s[2], s[3]))


def test_segments_hand_cases():
    S = [(0, 0, 2, 2), (0, 2, 2, 0), (3, 3, 4, 4), (1, 1, 3, 3), (5, 0, 5, 9), (5, 9, 7, 9)]
    # crossing, collinear overlap, shared endpoint, a vertical segment
    assert seg_intersections(S) == oracles.intersecting_pairs(S) == 5
    assert seg_components(S) == [0, 0, 0, 0, 4, 4]


@settings(max_examples=120, deadline=None)
@given(st.lists(seg_st, max_size=25))
def test_segments_property(S):
    assert seg_intersections(S) == oracles.intersecting_pairs(S)
    lab = seg_components(S)
    assert lab == oracles.component_labels(S)


@pytest.mark.parametrize("seed", range(4))
def test_segments_random(seed):
    S = gen.segments(250, seed, bound=400, shared=seed % 2 == 1)
    assert seg_intersections(S) == oracles.intersecting_pairs(S) == seg_intersections_brute(S)
    g = component_graph(S)
    assert g.labels == oracles.component_labels(S) == seg_components_brute(S)
    lab = oracles.component_labels(S)
    for i, j in g.edges:
        assert lab[i] == lab[j]


def test_segments_rational_and_stats():
    S = [(Fraction(1, 2), 0, Fraction(5, 2), 3), (0, 3, 3, Fraction(-1, 3)), (1, 1, 1, 5)]
    st_ = SegStats()
    assert seg_intersections(S, st_) == oracles.intersecting_pairs(S)
    assert seg_components(S) == oracles.component_labels(S)


def test_quadratic_compare():
    # 1 + sqrt(2) vs 2 + 0, sqrt(2) vs sqrt(2)
    assert cmp_quadratic((Fraction(1), Fraction(1), Fraction(2)), (Fraction(2), Fraction(0), Fraction(0))) == 1
    assert cmp_quadratic((Fraction(0), Fraction(1), Fraction(2)), (Fraction(0), Fraction(1), Fraction(2))) == 0
    assert sign_two_roots(0, 1, 2, -1, 3) == -1
    rng = random.Random(0)
    for _ in range(2000):
        p, q, s = (Fraction(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(3))
        u, v = rng.randint(0, 30), rng.randint(0, 30)
        approx = float(p) + float(q) * u ** 0.5 + float(s) * v ** 0.5
        got = sign_two_roots(p, q, u, s, v)
        if abs(approx) > 1e-9:
            assert got == (1 if approx > 0 else -1)


@pytest.mark.parametrize("seed", range(4))
def test_disk_counts_random(seed):
    rng = random.Random(seed)
    R, B = gen.bichromatic(rng.randint(50, 400), rng.randint(50, 400), seed, bound=rng.choice([4, 8, 50]))
    r = rng.choice([1, 2, Fraction(5, 2), 5])
    st_ = DiskStats()
    got = unit_dist_count(R, B, r, seed=seed, stats=st_)
    assert got == oracles.disk_counts(R, B, Fraction(r) ** 2) == unit_dist_brute(R, B, r)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), max_size=30),
       st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), max_size=30),
       st.integers(1, 5), st.integers(0, 9))
def test_disk_counts_property(R, B, r, seed):
    assert unit_dist_count(R, B, r, seed=seed) == oracles.disk_counts(R, B, r * r)


def test_disk_count_rejects_bad_radius():
    with pytest.raises(ValueError):
        unit_dist_count([(0, 0)], [(0, 0)], 0)


@pytest.mark.parametrize("seed", range(4))
def test_select_random(seed):
    rng = random.Random(seed)
    R, B = gen.bichromatic(rng.randint(30, 250), rng.randint(30, 250), seed, bound=rng.choice([4, 8, 1000]))
    for _ in range(3):
        k = rng.randint(1, len(R) * len(B))
        st_ = SelectStats()
        v = distance_select(R, B, k, seed=seed, stats=st_)
        assert v == oracles.kth_distance(R, B, k) == distance_select_brute(R, B, k)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=20),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=20),
       st.data())
def test_select_property(R, B, data):
    k = data.draw(st.integers(1, len(R) * len(B)))
    assert distance_select(R, B, k, seed=k) == oracles.kth_distance(R, B, k)


def test_select_range_errors():
    with pytest.raises(ValueError):
        distance_select([(0, 0)], [(1, 1)], 2)
    with pytest.raises(ValueError):
        distance_select([(0, 0)], [(1, 1)], 0)
