import random

import pytest

from checks import check_cascade, check_cutting
from hopcroft.cascade import CascadeInput, cascade_build, cascade_query, cascade_reset
from hopcroft.cutting import build_hier_cutting, levels_for, split_by_points


def _lines(rng, n, slope=100, coord=10**5):
    return [(rng.randint(-slope, slope), rng.randint(-coord, coord), 1) for _ in range(n)]


def test_levels_for():
    assert levels_for(1, 2) == 0
    assert levels_for(10, 2) == 4
    assert levels_for(16, 2) == 4


@pytest.mark.parametrize("seed", range(4))
def test_cutting_structure_small(seed):
    rng = random.Random(seed)
    L = _lines(rng, 150)
    out = check_cutting(L, 6, seed)
    assert out["partition_ok"] and out["below_ok"]
    assert out["max_conflict"] <= out["conflict_bound"]


def test_cutting_with_duplicates_and_concurrency():
    rng = random.Random(7)
    L = [(a, -a * 3 + 5, 1) for a in range(-20, 21)] + _lines(rng, 60, 5, 30)
    L += L[:20]
    out = check_cutting(L, 4, 1)
    assert out["partition_ok"] and out["below_ok"]


def test_cutting_rejects_bad_r():
    with pytest.raises(ValueError):
        build_hier_cutting([(1, 0, 1)], 0)


def test_split_by_points_caps_leaves():
    rng = random.Random(2)
    L = _lines(rng, 80)
    T = build_hier_cutting(L, 4, rng=2)
    pts = [(rng.randint(-50, 50), rng.randint(-10**4, 10**4), 1) for _ in range(300)]
    split_by_points(T, pts, 5)
    counts = {}
    for i, leaf in enumerate(T.point_leaf):
        assert T.nodes[leaf].cell.contains(pts[i])
        counts.setdefault(leaf, set()).add(pts[i])
    assert max(len(s) for s in counts.values()) <= 5


@pytest.mark.parametrize("seed", range(3))
def test_cascade_small(seed):
    out = check_cascade(seed, size=15, z=8, queries=400)
    assert out["answers_ok"] and out["cursor_ok"]
    assert out["max_plus"] <= out["size_bound"]


def test_cascade_rejects_unsorted_and_bad_subtree():
    T = cascade_build(CascadeInput([[1], []], [[(1, 0, 1)], [(0, 1, 1)]]), 4, 0)
    cascade_query(T, (5, 0, 1), {0, 1})
    with pytest.raises(ValueError):
        cascade_query(T, (4, 0, 1), {0})
    cascade_reset(T)
    cascade_query(T, (4, 0, 1), {0})
    with pytest.raises(ValueError):
        cascade_query(T, (6, 0, 1), {1})
    with pytest.raises(ValueError):
        cascade_build(CascadeInput([[1, 2], [], []], [[], [], []]), 2, 0)
