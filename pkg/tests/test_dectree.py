import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopcroft import dectree as dt


def _shrinks_ok(transcript, r=None):
    """Per-step shrink bounds: basic steps answered false lose >= 1/r, dag steps keep <= b/(b+1)."""
    for s in transcript.steps:
        if s.kind == "basic" and not s.outcome:
            assert s.after * r <= (r - 1) * s.before
        if s.kind in ("dag:case1", "dag:case2"):
            assert s.after * 3 <= 2 * s.before


def test_predicate_keys_and_values():
    p = dt.LinPredicate((2, -4), 6)
    q = dt.LinPredicate((-1, 2), -3)
    assert p.key()[0] == q.key()[0] and p.key()[1] == -q.key()[1]
    assert p.value((1, 1)) == 4
    with pytest.raises(ValueError):
        dt.LinPredicate((0, 0), 1)
    ps = dt.PredicateSet(2)
    assert ps.add(p) == (0, True)
    assert ps.add(q) == (0, False)
    with pytest.raises(ValueError):
        ps.add(dt.LinPredicate((1, 1, 1), 0))


def _brute_feasible(rows, consts, grid=range(-6, 7)):
    for x in itertools.product(grid, repeat=len(rows[0])):
        if all(sum(a * v for a, v in zip(r, x)) + t > 0 for r, t in zip(rows, consts)):
            return True
    return None


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda N: st.lists(
    st.tuples(st.lists(st.integers(-3, 3), min_size=N, max_size=N), st.integers(-3, 3)), min_size=1, max_size=6)))
def test_strict_feasibility_is_certified(system):
    rows = [r for r, _ in system]
    consts = [t for _, t in system]
    w = dt.strict_feasible(rows, consts)
    ex = dt.exact_strict_feasible(rows, consts)
    assert (w is None) == (ex is None)
    if w is not None:
        assert all(sum(Fraction(a) * v for a, v in zip(r, w)) + t > 0 for r, t in zip(rows, consts))
    else:
        # a grid point satisfying every row would contradict the answer
        assert _brute_feasible(rows, consts) is None


def test_enumerate_cells_matches_sampling():
    rng = random.Random(3)
    for N, H in ((2, 5), (3, 6)):
        preds = [dt.LinPredicate([rng.randint(-3, 3) or 1 for _ in range(N)], rng.randint(-3, 3)) for _ in range(H)]
        ps = dt.PredicateSet(N, preds)
        cells = dt.enumerate_cells(ps)
        seen = dt.sampled_sign_vectors(ps, samples=20000, seed=1, bound=30)
        got = {tuple(bool(v) for v in row) for row in cells.signs}
        assert seen <= got
        assert len(got) == len(cells)
        for sv, w in zip(cells.signs, cells.witnesses):
            assert tuple(P.value(w) > 0 for P in ps.planes) == tuple(sv)


def test_line_arrangement_cell_count():
    # n lines in general position in the plane: 1 + n + C(n, 2) cells
    preds = [dt.LinPredicate((a, -1), b) for a, b in ((1, 0), (2, 1), (-1, 3), (3, -5), (-2, -7))]
    assert len(dt.enumerate_cells(dt.PredicateSet(2, preds))) == 1 + 5 + 10


def test_guardrails():
    ps = dt.PredicateSet(9, [dt.LinPredicate([1] * 9, 0)])
    with pytest.raises(dt.GuardrailError):
        dt.enumerate_cells(ps)
    prob = dt.x_plus_y(3, 3)
    with pytest.raises(dt.GuardrailError):
        prob.enumerate_orderings(max_cells=10)


def test_hidden_input_perturbation():
    ps = dt.PredicateSet(2, [dt.LinPredicate((1, -1), 0), dt.LinPredicate((1, 0), 0)])
    h = dt.HiddenInput((0, 0), ps)
    assert h.perturbed
    assert all(P.value(h.x) != 0 for P in ps.planes)


def _tracker(N=2, H=6, seed=0):
    rng = random.Random(seed)
    preds = [dt.LinPredicate((rng.randint(-4, 4) or 1, rng.randint(-4, 4)), rng.randint(-9, 9)) for _ in range(H)]
    ps = dt.PredicateSet(N, preds)
    cells = dt.enumerate_cells(ps)
    hidden = dt.HiddenInput((Fraction(rng.randint(-20, 20), 3), Fraction(rng.randint(-20, 20), 7)), ps)
    return ps, cells, dt.Tracker(cells, hidden)


@pytest.mark.parametrize("seed", range(8))
def test_basic_search(seed):
    ps, cells, tr = _tracker(seed=seed)
    # candidates: every cell's full sign vector as a conjunction, grouped into r buckets by plane 0..1
    cands = [((0, a), (1, b)) for a in (True, False) for b in (True, False)]
    k = dt.basic_search(cands, tr)
    assert tr.hidden.test(cands[k])
    assert tr.sound()
    _shrinks_ok(tr.transcript, r=len(cands))
    assert tr.transcript.replay(tr.hidden)


def test_basic_search_promise_violation():
    ps, cells, tr = _tracker(seed=1)
    with pytest.raises(dt.PromiseViolation):
        dt.basic_search([((-1, False),)], tr)


@pytest.mark.parametrize("seed", range(8))
def test_dag_search(seed):
    ps, cells, tr = _tracker(seed=seed)
    # binary tree: source true everywhere, split on plane 0 then plane 1
    preds = [(), ((0, True),), ((0, False),), ((0, True), (1, True)), ((0, True), (1, False)),
             ((0, False), (1, True)), ((0, False), (1, False))]
    out = [[1, 2], [3, 4], [5, 6], [], [], [], []]
    G = dt.SearchDag(preds, out)
    t = dt.dag_search(G, tr)
    assert not G.out[t] and tr.hidden.test(preds[t])
    _shrinks_ok(tr.transcript)
    assert tr.transcript.steps[-1].kind == "dag:case0"


def test_dag_promise_checked():
    ps, cells, tr = _tracker(seed=2)
    G = dt.SearchDag([(), ((0, True),)], [[1], []])
    with pytest.raises(dt.PromiseViolation):
        dt.dag_search(G, tr)


@pytest.fixture(scope="module")
def xy3():
    prob = dt.x_plus_y(3, 3)
    return prob, prob.enumerate_orderings()


def test_xy_orderings_count_against_sampling(xy3):
    prob, cells = xy3
    seen = set()
    rng = random.Random(0)
    for _ in range(20000):
        x = sorted(rng.randint(-10**6, 10**6) for _ in range(3))
        y = sorted(rng.randint(-10**6, 10**6) for _ in range(3))
        v = [a + b for a in x for b in y]
        if len(set(v)) == len(v) and len(set(x)) == 3 and len(set(y)) == 3:
            seen.add(tuple(sorted(range(9), key=lambda i: v[i])))
    assert len(seen) <= len(cells)
    assert len(seen) == len(cells)   # every cell is large enough to be hit at this sample size


@pytest.mark.parametrize("mode", ["tree", "quantile"])
@pytest.mark.parametrize("seed", range(5))
def test_fredman_sort_xy3(xy3, mode, seed):
    prob, cells = xy3
    x = dt.random_xy_input(3, 3, seed, bound=4 if seed == 0 else 1000)
    res = dt.fredman_sort(prob, x, mode=mode, cells=cells, seed=seed)
    vals = [x[i] + x[3 + j] for i in range(3) for j in range(3)]
    assert all(vals[a] <= vals[b] for a, b in zip(res.order, res.order[1:]))
    assert res.sound and res.transcript.replay(dt.HiddenInput(x, prob.pset, seed))
    phis = res.transcript.phis()
    assert all(b <= a for a, b in zip(phis, phis[1:]))
    M, N = 9, 6
    assert math.ceil(math.log2(len(cells))) <= res.comparisons <= 2 * (M + N * math.log2(N))
    r = max(2, math.ceil(math.sqrt(M)))
    _shrinks_ok(res.transcript, r=r)


def test_fredman_rejects_outside_domain(xy3):
    prob, cells = xy3
    with pytest.raises(ValueError):
        dt.fredman_sort(prob, [3, 2, 1, 0, 1, 2], cells=cells)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_vertex_sorting(n):
    rng = random.Random(n)
    slopes = rng.sample(range(-10, 11), n)
    b = [rng.randint(-50, 50) for _ in range(n)]
    pairs, res = dt.sort_arr_vertices(slopes, b, seed=n)
    xs = [Fraction(b[j] - b[i], slopes[i] - slopes[j]) for i, j in pairs]
    assert xs == sorted(xs)
    assert sorted(pairs) == [(i, j) for i in range(n) for j in range(i + 1, n)]


def test_vertex_problem_rejects_parallel():
    with pytest.raises(ValueError):
        dt.arr_vertex_problem([1, 1, 2])
