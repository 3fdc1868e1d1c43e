"""Counting point-above-line pairs and point-line incidences.

Every engine returns the same two numbers: ``above`` (pairs with the point
strictly above the line) and ``incidences`` (pairs with the point on the
line).  Duplicated points or lines count once per copy.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .arrangement import build_arrangement, face_weight_sums, group_lines, sweep_counts
from .cascade import CascadeInput, cascade_build, descend
from .cells import classify_closed
from .cutting import build_hier_cutting, split_by_points
from .geom import Line, Point, normalize_line, normalize_point

_SAFE = 1 << 62
# weighted_counts locates points in the full arrangement when n^2 <= PRIMAL_RATIO * m
PRIMAL_RATIO = 4


@dataclass
class CountResult:
    above: int = 0
    incidences: int = 0
    preds: int = 0
    wall: float = 0.0
    seed: Optional[int] = None
    stats: Dict = field(default_factory=dict)

    def pair(self):
        return self.above, self.incidences


@dataclass
class WeightedResult:
    per_point: List        # weight of lines strictly below each point
    per_line: List         # weight of points strictly above each line
    preds: int = 0
    wall: float = 0.0


def _pts(points):
    # reduced homogeneous form, so equal points get equal keys
    return [p.key if isinstance(p, Point) else normalize_point(*p) for p in points]


def _lines(lines):
    out = []
    for l in lines:
        t = l.key if isinstance(l, Line) else tuple(l)
        if len(t) != 3 or t[2] == 0:
            raise ValueError(f"vertical or malformed line {l!r}")
        out.append(normalize_line(*t))
    return out


def dual_points_as_lines(pts):
    """Raw dual lines of raw points."""
    return [(X, -Y, W) for X, Y, W in pts]


def dual_lines_as_points(lines):
    return [(A, -B, D) for A, B, D in lines]


def cube_root_ceil(n: int) -> int:
    r = max(1, round(n ** (1 / 3)))
    while r ** 3 < n:
        r += 1
    while r > 1 and (r - 1) ** 3 >= n:
        r -= 1
    return r


# ---------------------------------------------------------------------------
# oracle


def count_brute(points, lines) -> CountResult:
    """All pairs.  Vectorized when the products fit in int64."""
    t0 = time.perf_counter()
    P, L = _pts(points), _lines(lines)
    m, n = len(P), len(L)
    res = CountResult(preds=m * n)
    if m and n:
        mp = max(max(abs(x), abs(y), w) for x, y, w in P)
        ml = max(max(abs(a), abs(b), d) for a, b, d in L)
        if 3 * mp * ml < _SAFE:
            X, Y, W = (np.array(c, dtype=np.int64) for c in zip(*P))
            A, B, D = (np.array(c, dtype=np.int64) for c in zip(*L))
            step = max(1, 4_000_000 // n)
            for s in range(0, m, step):
                S = D[None, :] * Y[s:s + step, None] - A[None, :] * X[s:s + step, None] \
                    - B[None, :] * W[s:s + step, None]
                res.above += int((S > 0).sum())
                res.incidences += int((S == 0).sum())
        else:
            for X, Y, W in P:
                for A, B, D in L:
                    v = D * Y - A * X - B * W
                    if v > 0:
                        res.above += 1
                    elif v == 0:
                        res.incidences += 1
    res.wall = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# arrangement baseline


def count_arrangement(points, lines) -> CountResult:
    """Sweep the arrangement of the lines and locate every point in it."""
    t0 = time.perf_counter()
    P, L = _pts(points), _lines(lines)
    counter = [0]
    lt, le = sweep_counts(L, P, counter=counter)
    res = CountResult(sum(lt), sum(le) - sum(lt), counter[0])
    res.wall = time.perf_counter() - t0
    return res


def _base(P, L, counter):
    """Arrangement counting on whichever side has fewer objects."""
    if not P or not L:
        return 0, 0
    if len(L) > len(P):
        P, L = dual_lines_as_points(L), dual_points_as_lines(P)
    lt, le = sweep_counts(L, P, counter=counter)
    a = sum(lt)
    return a, sum(le) - a


# ---------------------------------------------------------------------------
# cutting stages shared by the recursive and asymmetric engines


def _stage(P, L, r, prng, counter):
    """Cut the lines with parameter ``r`` and split the points to ``|P|/r^2`` per cell.

    Returns (pairs settled outside conflict lists, list of (points, lines)
    subproblems).  Settled pairs are all strictly-above pairs.
    """
    tree = build_hier_cutting(L, r, prng)
    uniq = {}
    for p in P:
        uniq[p] = uniq.get(p, 0) + 1
    dp = list(uniq)
    cap = max(1, math.ceil(len(dp) / (r * r)))
    split_by_points(tree, dp, cap, counter)
    counter[0] += tree.preds
    by_leaf: Dict[int, List[int]] = {}
    for i, leaf in enumerate(tree.point_leaf):
        by_leaf.setdefault(leaf, []).append(i)
    above = 0
    subs = []
    for leaf, idxs in by_leaf.items():
        node = tree.nodes[leaf]
        pts = [dp[i] for i in idxs for _ in range(uniq[dp[i]])]
        above += node.below * len(pts)
        lines = [L[j] for d in node.conflict.tolist() for j in tree.members[d]]
        if lines:
            subs.append((pts, lines))
    return above, subs


def count_recursive(points, lines, depth_limit: int = 2, seed=0, C: float = 3.0) -> CountResult:
    """Cutting stages in the primal and then the dual, ``depth_limit`` times.

    Each stage uses ``r = (n / log^C n)^(1/3)`` (at least 2) for its current
    line count ``n``; the remaining subproblems are solved by the arrangement
    baseline on the smaller side.
    """
    if depth_limit < 0:
        raise ValueError("depth_limit must be >= 0")
    t0 = time.perf_counter()
    P, L = _pts(points), _lines(lines)
    prng = random.Random(seed)
    counter = [0]

    def r_for(n):
        if n < 4:
            return None
        r = max(2, math.ceil((n / math.log2(n) ** C) ** (1 / 3)))
        return r if r < n else None

    def stage_or_none(P, L):
        r = r_for(len(L))
        if r is None or not P:
            return None
        return _stage(P, L, r, prng, counter)

    above = incid = 0
    work = [(P, L, depth_limit)]
    while work:
        P, L, depth = work.pop()
        if not P or not L:
            continue
        first = stage_or_none(P, L) if depth > 0 else None
        if first is None:
            a, i = _base(P, L, counter)
            above += a
            incid += i
            continue
        a, subs = first
        above += a
        for P1, L1 in subs:
            # dual problem: lines become points and vice versa, counts unchanged
            P2, L2 = dual_lines_as_points(L1), dual_points_as_lines(P1)
            second = stage_or_none(P2, L2)
            if second is None:
                work.append((P2, L2, depth - 1))
                continue
            a2, subs2 = second
            above += a2
            for P3, L3 in subs2:
                work.append((P3, L3, depth - 1))
    res = CountResult(above, incid, counter[0], seed=seed)
    res.wall = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# cascade engine


class _LeafChains:
    """Lower boundary chains of the faces of one leaf arrangement, with cursors."""

    __slots__ = ("arr", "lw", "vw", "chains")

    def __init__(self, arr, own_weights):
        self.arr = arr
        self.lw = [sum(own_weights[i] for i in mem) for mem in arr.members]
        self.vw = [sum(self.lw[l] for l in v.lines) for v in arr.vertices]
        self.chains = {}

    def incidences(self, mask, X, Y, W, tally):
        """Weight of own lines through (X, Y, W), which lies in face ``mask``."""
        ch = self.chains.get(mask)
        if ch is None:
            arr = self.arr
            f = arr.face_by_mask(mask)
            items = []
            for eid in f.bottom:
                e = arr.edges[eid]
                x = arr.vertices[e.left].x if e.left is not None else None
                items.append(((x.numerator, x.denominator) if x is not None else None,
                              arr.distinct[e.line], self.lw[e.line],
                              self.vw[e.left] if e.left is not None else 0))
            ch = self.chains[mask] = [items, 0]
        items, j = ch
        if not items:
            return 0
        nj = len(items)
        while j + 1 < nj:
            p, q = items[j + 1][0]
            tally[0] += 1
            if X * q >= p * W:
                j += 1
            else:
                break
        ch[1] = j
        start, (A, B, D), lw, vw = items[j]
        tally[0] += 1
        if D * Y - A * X - B * W != 0:
            return 0
        if start is not None and X * start[1] == start[0] * W:
            return vw
        return lw


def _binarize(tree, has_pts, confs_out, own_out, children_out, leaf_of):
    """Cascade shape: points-free subtrees dropped, unary chains skipped, fan-out 2."""

    def new(conf, own, kids, leaf):
        confs_out.append(conf)
        own_out.append(own)
        children_out.append(kids)
        leaf_of.append(leaf)
        return len(confs_out) - 1

    # iterative post-order over the cutting tree
    memo = {}
    stack = [(0, False)]
    while stack:
        u, done = stack.pop()
        node = tree.nodes[u]
        if not done:
            stack.append((u, True))
            for v in node.children:
                if has_pts[v]:
                    stack.append((v, False))
            continue
        if not node.children:
            memo[u] = new(node.conflict, True, [], u)
            continue
        kids = [memo[v] for v in node.children if has_pts[v]]
        while len(kids) > 2:
            nxt = []
            for a in range(0, len(kids) - 1, 2):
                x, y = kids[a], kids[a + 1]
                nxt.append(new(np.union1d(confs_out[x], confs_out[y]), False, [x, y], None))
            if len(kids) % 2:
                nxt.append(kids[-1])
            kids = nxt
        if len(kids) == 1:
            memo[u] = kids[0]
        else:
            memo[u] = new(node.conflict, False, kids, None)
    return memo[0]


def count_cascade(points, lines, seed=0, c: int = 8, rho: int = 2, kappa: float = 2.0) -> CountResult:
    """Cutting with ``r = ceil(n^(1/3))``, then one x-sorted cascade pass over the dual lines.

    Pairs whose line misses a leaf cell are settled by the cell's below
    count.  Every line is then located, as a dual point, in the dual
    arrangements of the points of the leaves its conflict lists reach.
    """
    t0 = time.perf_counter()
    P, L = _pts(points), _lines(lines)
    res = CountResult(seed=seed)
    if not P or not L:
        res.wall = time.perf_counter() - t0
        return res
    prng = random.Random(seed)
    uniq = {}
    for p in P:
        uniq[p] = uniq.get(p, 0) + 1
    dp = list(uniq)
    pmult = [uniq[p] for p in dp]
    nd = len(group_lines(L)[0])
    r = cube_root_ceil(nd)
    cap = max(1, math.ceil(nd / (r * r)))
    tree = build_hier_cutting(L, r, prng, rho=rho, kappa=kappa)
    counter = [0]
    split_by_points(tree, dp, cap, counter)
    preds = tree.preds + counter[0]
    distinct, members = tree.distinct, tree.members
    lmult = [len(m) for m in members]

    above = 0
    leaf_pts: Dict[int, List[int]] = {}
    for i, leaf in enumerate(tree.point_leaf):
        above += tree.nodes[leaf].below * pmult[i]
        leaf_pts.setdefault(leaf, []).append(i)
    has_pts = [False] * len(tree.nodes)
    for leaf in leaf_pts:
        v = leaf
        while v is not None and not has_pts[v]:
            has_pts[v] = True
            v = tree.nodes[v].parent

    confs, is_leaf, kids, leaf_of = [], [], [], []
    root = _binarize(tree, has_pts, confs, is_leaf, kids, leaf_of)
    N = len(confs)
    own_lines, own_w = [], []
    for u in range(N):
        if is_leaf[u]:
            idx = leaf_pts[leaf_of[u]]
            own_lines.append(dual_points_as_lines([dp[i] for i in idx]))
            own_w.append([pmult[i] for i in idx])
        else:
            own_lines.append([])
            own_w.append([])
    # renumber so the cascade root is node 0
    perm = [root] + [u for u in range(N) if u != root]
    inv = {u: k for k, u in enumerate(perm)}
    inp = CascadeInput([[inv[v] for v in kids[u]] for u in perm], [own_lines[u] for u in perm])
    confs = [confs[u] for u in perm]
    own_w = [own_w[u] for u in perm]
    ctree = cascade_build(inp, c, prng)
    build_preds = ctree.preds

    # T_l: cascade nodes whose conflict list holds line l
    lens = np.array([len(cf) for cf in confs], dtype=np.int64)
    node_of = np.repeat(np.arange(N, dtype=np.int64), lens)
    line_of = np.concatenate(confs) if N else np.zeros(0, dtype=np.int64)
    order = np.argsort(line_of, kind="stable")
    node_sorted = node_of[order]
    starts = np.searchsorted(line_of[order], np.arange(len(distinct) + 1))
    T_total = int(lens.sum())
    T_cut = int(sum(len(v.conflict) for v in tree.nodes))

    chains: Dict[int, _LeafChains] = {}
    unit = [all(w == 1 for w in ws) for ws in own_w]
    tally = [0]
    incid = 0
    qorder = sorted(range(len(distinct)),
                    key=lambda j: (Fraction(distinct[j][0], distinct[j][2]),
                                   Fraction(distinct[j][1], distinct[j][2]), j))
    for j in qorder:
        inc = set(node_sorted[starts[j]:starts[j + 1]].tolist())
        if 0 not in inc:
            continue
        A, B, D = distinct[j]
        X, Y, W = A, -B, D
        a_j = i_j = 0
        for u, F in descend(ctree, X, Y, W, inc):
            node = ctree.nodes[u]
            if not node.own:
                continue
            F &= node.own_mask
            if unit[u]:
                le = F.bit_count()
            else:
                le, ws, b = 0, own_w[u], 0
                while F >> b:
                    if (F >> b) & 1:
                        le += ws[b]
                    b += 1
            lc = chains.get(u)
            if lc is None:
                arr = ctree.own_arrangement(u)
                preds += arr.preds
                lc = chains[u] = _LeafChains(arr, own_w[u])
            on = lc.incidences(F & node.own_mask, X, Y, W, tally) if le else 0
            a_j += le - on
            i_j += on
        above += a_j * lmult[j]
        incid += i_j * lmult[j]
    preds += ctree.preds + tally[0]
    res.above, res.incidences, res.preds = above, incid, preds
    phases = {"cutting": tree.preds, "split": counter[0], "cascade_build": build_preds,
              "cascade_queries": ctree.preds - build_preds,
              "leaf_arrangements": preds - tree.preds - counter[0] - ctree.preds - tally[0],
              "incidence_cursors": tally[0]}
    n = len(L)
    res.stats = {
        "r": r, "cap": cap, "cut": tree.stats(), "cascade_nodes": N,
        "z": ctree.z, "max_plus": ctree.max_plus(), "c": c, "c0": ctree.c0,
        "T_total": T_total, "T_cut": T_cut,
        "T_over_n43": T_total / max(1.0, n ** (4 / 3)),
        "T_over_nr": T_total / max(1, n * r),
        "visits": ctree.visits, "conflict_scanned": ctree.conflict_scanned,
        "phases": phases,
    }
    res.wall = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# asymmetric sizes


def count_asymmetric(points, lines, seed=0, small: int = 8) -> CountResult:
    """Balance m points against n lines by one cutting stage with ``r = m/n``.

    With ``m > n^2`` the arrangement of the lines is cheap and used
    directly; with ``n > m^2`` the same holds in the dual.  Subproblems with
    at most ``small`` points or lines are counted pair by pair.
    """
    t0 = time.perf_counter()
    P, L = _pts(points), _lines(lines)
    m, n = len(P), len(L)
    res = CountResult(seed=seed)
    if not m or not n:
        return res
    counter = [0]
    prng = random.Random(seed)
    if m > n * n:
        lt, le = sweep_counts(L, P, counter=counter)
        res.above, res.incidences = sum(lt), sum(le) - sum(lt)
    elif n > m * m:
        lt, le = sweep_counts(dual_points_as_lines(P), dual_lines_as_points(L), counter=counter)
        res.above, res.incidences = sum(lt), sum(le) - sum(lt)
    else:
        if n > m:
            P, L = dual_lines_as_points(L), dual_points_as_lines(P)
            m, n = n, m
        r = m // n
        if r <= 1:
            sub = [(P, L)]
            above = 0
        else:
            above, sub = _stage(P, L, r, prng, counter)
        incid = 0
        for P1, L1 in sub:
            if len(P1) <= small or len(L1) <= small:
                b = count_brute(P1, L1)
            else:
                b = count_cascade(P1, L1, seed=prng.randrange(1 << 30))
            above += b.above
            incid += b.incidences
            counter[0] += b.preds
        res.above, res.incidences = above, incid
    res.preds = counter[0]
    res.wall = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# weighted and individual counts


def weighted_counts(points, lines, point_weights=None, line_weights=None, seed=0,
                    r: Optional[int] = None) -> WeightedResult:
    """Per-point weight of lines strictly below, per-line weight of points strictly above.

    A cutting of the lines distributes whole-cell contributions; inside each
    leaf the pairs are settled in the dual, where the leaf's points are few:
    their dual lines form a small arrangement, each conflict line is located
    in it as a dual point, and the face sums give both directions.  Only
    additions of weights are performed.
    """
    t0 = time.perf_counter()
    P, L = _pts(points), _lines(lines)
    m, n = len(P), len(L)
    pw = list(point_weights) if point_weights is not None else [1] * m
    lw = list(line_weights) if line_weights is not None else [1] * n
    if len(pw) != m or len(lw) != n:
        raise ValueError("one weight per point and per line is required")
    if not m or not n:
        return WeightedResult([0] * m, [0] * n)
    prng = random.Random(seed)
    nd = len(group_lines(L)[0])
    uniq: Dict[tuple, List[int]] = {}
    for i, p in enumerate(P):
        uniq.setdefault(p, []).append(i)
    dp = list(uniq)
    if r is None and nd * nd <= PRIMAL_RATIO * len(dp):
        return _weighted_primal(P, L, pw, lw, t0)
    if r is None:
        # the cutting costs about n r and the leaves about m^2 / r^2; the
        # halved balance point was fastest in measurements
        r = min(nd, max(cube_root_ceil(nd), cube_root_ceil(-(-len(dp) ** 2 // nd)) // 2))
    tree = build_hier_cutting(L, r, prng, weights=lw)
    counter = [0]
    cap = max(1, math.ceil(len(dp) / (r * r)))
    split_by_points(tree, dp, cap, counter)
    exact = sum(abs(w) for w in pw) >= _SAFE or sum(abs(w) for w in lw) >= _SAFE
    dt = object if exact else np.int64

    per_point = [0] * m
    leaf_pts: Dict[int, List[int]] = {}
    for k, leaf in enumerate(tree.point_leaf):
        leaf_pts.setdefault(leaf, []).append(k)
        b = tree.nodes[leaf].below
        for i in uniq[dp[k]]:
            per_point[i] = b

    # weight of points per cutting node, bottom-up
    nn = len(tree.nodes)
    wsum = [0] * nn
    for leaf, ks in leaf_pts.items():
        s = 0
        for k in ks:
            for i in uniq[dp[k]]:
                s += pw[i]
        wsum[leaf] = s
    for v in reversed(tree.nodes):
        if v.parent is not None:
            wsum[v.parent] += wsum[v.id]

    per_distinct = np.zeros(len(tree.distinct), dtype=dt)
    arrays = tree.arrays
    for u in tree.nodes:
        if not u.children:
            continue
        conf = u.conflict
        LA, LB, LD = arrays.take(conf)
        for vid in u.children:
            if not wsum[vid]:
                continue
            lo, _ = classify_closed(LA, LB, LD, tree.nodes[vid].cell, arrays.mag)
            counter[0] += len(conf)
            per_distinct[conf[lo]] += wsum[vid]

    # leaves: dual arrangement of the leaf's points, conflict lines as dual points
    for leaf, ks in leaf_pts.items():
        conf = tree.nodes[leaf].conflict.tolist()
        if not conf:
            continue
        pidx = [i for k in ks for i in uniq[dp[k]]]
        dlines = dual_points_as_lines([P[i] for i in pidx])
        qpts = dual_lines_as_points([tree.distinct[d] for d in conf])
        arr = build_arrangement(dlines, qpts, rule="down", masks=False)
        counter[0] += arr.preds
        fw = [0] * len(arr.faces)
        for q, d in enumerate(conf):
            fw[arr.point_faces[q]] += tree.wt[d]
        per_face, per_dual = face_weight_sums(arr, [pw[i] for i in pidx], fw)
        counter[0] += len(arr.distinct) ** 2 + len(arr.faces)
        for q, d in enumerate(conf):
            per_distinct[d] += per_face[arr.point_faces[q]]
        for t, i in enumerate(pidx):
            per_point[i] += per_dual[t]

    per_line = [0] * n
    for d, mem in enumerate(tree.members):
        v = int(per_distinct[d]) if not exact else per_distinct[d]
        for j in mem:
            per_line[j] = v
    res = WeightedResult(per_point, per_line, counter[0] + tree.preds)
    res.wall = time.perf_counter() - t0
    return res


def _weighted_primal(P, L, pw, lw, t0) -> WeightedResult:
    """Few lines: locate the points in the arrangement of all lines.

    With the downward push a point on a line lies below it, so face sums
    give exactly the strictly-below and strictly-above weights.
    """
    arr = build_arrangement(L, P, rule="down", masks=False)
    fw = [0] * len(arr.faces)
    for i, f in enumerate(arr.point_faces):
        fw[f] += pw[i]
    per_face, per_line = face_weight_sums(arr, lw, fw)
    per_point = [per_face[f] for f in arr.point_faces]
    preds = arr.preds + len(arr.distinct) ** 2 + len(arr.faces)
    res = WeightedResult(per_point, list(per_line), preds)
    res.wall = time.perf_counter() - t0
    return res


def weighted_brute(points, lines, point_weights=None, line_weights=None) -> WeightedResult:
    """Double loop oracle for :func:`weighted_counts`."""
    P, L = _pts(points), _lines(lines)
    pw = list(point_weights) if point_weights is not None else [1] * len(P)
    lw = list(line_weights) if line_weights is not None else [1] * len(L)
    pp = [0] * len(P)
    pl = [0] * len(L)
    for i, (X, Y, W) in enumerate(P):
        for j, (A, B, D) in enumerate(L):
            if D * Y - A * X - B * W > 0:
                pp[i] += lw[j]
                pl[j] += pw[i]
    return WeightedResult(pp, pl, len(P) * len(L))
