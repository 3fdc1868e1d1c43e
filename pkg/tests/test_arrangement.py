import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopcroft.arrangement import build_arrangement
from hopcroft.geom import normalize_line
from hopcroft.locator import PointLocator

line_st = st.tuples(st.integers(-4, 4), st.integers(-6, 6), st.sampled_from([1, 1, 2])).map(lambda t: normalize_line(*t))


def _general_lines(rng, n):
    while True:
        L = [normalize_line(rng.randint(-10**4, 10**4), rng.randint(-10**6, 10**6), 1) for _ in range(n)]
        slopes = {l[0] for l in L}
        if len(slopes) == n:
            arr = build_arrangement(L)
            if len(arr.vertices) == n * (n - 1) // 2:
                return L, arr


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
def test_general_position_counts(n):
    L, arr = _general_lines(random.Random(n), n)
    assert len(arr.faces) == n * (n + 1) // 2 + 1
    assert len(arr.edges) == n * n
    assert arr.euler_ok()


@settings(max_examples=80, deadline=None)
@given(st.lists(line_st, max_size=12))
def test_euler_and_faces_distinct(lines):
    arr = build_arrangement(lines)
    assert arr.euler_ok()
    masks = [f.mask for f in arr.faces]
    assert len(set(masks)) == len(masks)


@settings(max_examples=60, deadline=None)
@given(st.lists(line_st, max_size=10),
       st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8), st.sampled_from([1, 2])), max_size=30))
def test_sweep_location_matches_scan(lines, pts):
    arr = build_arrangement(lines, pts)
    if pts:
        assert len(arr.point_faces) == len(pts)
    for p, fid in zip(pts, arr.point_faces or []):
        assert arr.faces[fid].mask == arr.locate_brute(p)


@settings(max_examples=40, deadline=None)
@given(st.lists(line_st, max_size=10), st.integers(0, 99))
def test_point_locator_matches_scan(lines, seed):
    arr = build_arrangement(lines)
    loc = PointLocator(lines, seed)
    rng = random.Random(seed)
    pts = [(rng.randint(-10, 10), rng.randint(-10, 10), rng.choice([1, 2])) for _ in range(40)]
    pts += [(v.x.numerator * v.y.denominator, v.y.numerator * v.x.denominator, v.x.denominator * v.y.denominator)
            for v in arr.vertices]
    for p in pts:
        assert loc.locate(p) == arr.locate_brute(p)


def test_halfedge_twins_and_faces():
    L, arr = _general_lines(random.Random(3), 6)
    origin, twin, face, nxt = arr.halfedges()
    assert all(twin[twin[h]] == h for h in range(len(twin)))
    for h, g in enumerate(nxt):
        if g is not None:
            assert face[h] == face[g]


def test_trapezoids_partition_faces():
    L, arr = _general_lines(random.Random(4), 7)
    rng = random.Random(0)
    for _ in range(300):
        p = (rng.randint(-10**5, 10**5), rng.randint(-10**7, 10**7), 1)
        hits = [t for t in arr.vd if t.contains(p)]
        assert len(hits) == 1
