"""Randomized hierarchical cuttings of a line set into trapezoidal cells.

Construction uses one random permutation of the lines.  Level ``i`` of the
hierarchy is obtained by cutting every level ``i-1`` cell with the lines of
the ``s_i`` first lines of the permutation that meet it (a nested sample), so
every level refines the previous one.  A cell whose conflict list is still
larger than its level bound is cut again with a fresh sample drawn from its
own conflict list, until the bound holds (Las Vegas).

A line is *in conflict* with a cell when it meets the closed cell.  Every
other line lies strictly below or strictly above the whole closed cell, so a
point inside the cell is strictly above all of the former and strictly below
all of the latter.  Points sitting on a wall or a bounding line are assigned
by the upward push rule.
"""
from __future__ import annotations

import math
import random
from bisect import bisect_left
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .arrangement import Trapezoid, group_lines
from .cells import LineArrays, PointArrays, classify_closed, in_cell, subdivide
from .geom import Line, Point


class CutNode:
    __slots__ = ("id", "cell", "conflict", "below", "children", "level", "parent", "kind")

    def __init__(self, nid, cell, conflict, below, level, parent, kind="cut"):
        self.id = nid
        self.cell: Trapezoid = cell
        self.conflict = conflict        # np.ndarray of distinct line ids
        self.below = below              # multiplicity (or weight) of lines below the cell
        self.children: List[int] = []
        self.level = level
        self.parent = parent
        self.kind = kind                # "cut" or "split"


class CuttingTree:
    """Tree of trapezoidal cells; ``nodes[0]`` is the whole plane."""

    def __init__(self, lines, distinct, members, weights, r, rho, kappa, beta, seed):
        self.lines = lines
        self.distinct = distinct
        self.members = members
        self.weights = weights          # per distinct line
        self.n = len(distinct)
        self.r = r
        self.rho = rho
        self.kappa = kappa
        self.beta = beta
        self.seed = seed
        self.k = levels_for(r, rho)
        self.nodes: List[CutNode] = []
        self.arrays = LineArrays(distinct)
        self.preds = 0                  # predicate evaluations spent building
        self.resamples = 0
        self.violations = 0             # cells where the bound could not be met
        self.point_leaf = None

    @property
    def root(self) -> CutNode:
        return self.nodes[0]

    def leaves(self) -> List[CutNode]:
        return [v for v in self.nodes if not v.children]

    def level_bound(self, i: int) -> float:
        return self.kappa * self.n / min(self.rho ** i, self.r) if self.r > 1 else float(self.n)

    @property
    def c0(self) -> int:
        """Measured maximum out-degree."""
        return max((len(v.children) for v in self.nodes), default=0)

    def height(self) -> int:
        h = 0
        for v in self.leaves():
            d = 0
            while v.parent is not None:
                v = self.nodes[v.parent]
                d += 1
            h = max(h, d)
        return h

    def stats(self):
        leaves = self.leaves()
        return {
            "leaves": len(leaves),
            "nodes": len(self.nodes),
            "C": len(leaves) / max(1, self.r) ** 2,
            "max_leaf_conflict": max((len(v.conflict) for v in leaves), default=0),
            "c0": self.c0,
            "height": self.height(),
            "resamples": self.resamples,
            "violations": self.violations,
        }


def levels_for(r: int, rho: int) -> int:
    k, p = 0, 1
    while p < r:
        p *= rho
        k += 1
    return k


def _raw_lines(lines):
    return [l.key if isinstance(l, Line) else tuple(l) for l in lines]


def build_hier_cutting(lines: Sequence, r: int, rng=None, rho: int = 2,
                       kappa: float = 2.0, beta: float = 1.0, weights=None,
                       max_tries: int = 12) -> CuttingTree:
    """Hierarchical cutting with ``k = ceil(log_rho r)`` levels.

    Every level-``i`` node meets at most ``kappa*n/min(rho^i, r)`` distinct
    lines unless the lines are so degenerate (many through one point) that
    no trapezoid can separate them; such cells are counted in
    ``tree.violations``.  ``weights`` (one per input line) replaces the
    multiplicity in the below values.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if isinstance(rng, random.Random):
        seed = None
        prng = rng
    else:
        seed = rng
        prng = random.Random(rng)
    raw = _raw_lines(lines)
    distinct, members = group_lines(raw)
    if weights is None:
        wd = [len(m) for m in members]
    else:
        wd = [sum(weights[i] for i in m) for m in members]
    tree = CuttingTree(raw, distinct, members, wd, r, rho, kappa, beta, seed)
    n = tree.n
    wt = np.asarray(wd, dtype=object if sum(abs(w) for w in wd) >= 1 << 62 else np.int64)
    tree.wt = wt
    perm = list(range(n))
    prng.shuffle(perm)
    rank = np.empty(n, dtype=np.int64)
    rank[perm] = np.arange(n)
    tree.rank = rank
    root_conf = np.asarray(perm, dtype=np.int64)
    tree.nodes.append(CutNode(0, Trapezoid(None, None, None, None), root_conf, 0, 0, None))
    frontier = [tree.root]
    for i in range(1, tree.k + 1):
        bound = tree.level_bound(i)
        s_i = min(n, math.ceil(beta * min(rho ** i, r)))
        nxt = []
        for node in frontier:
            conf = node.conflict
            cut = int(np.searchsorted(rank[conf], s_i))
            sample = conf[:cut]
            if len(sample):
                cells = subdivide(node.cell, [distinct[l] for l in sample])
            else:
                cells = [node.cell]
            kids = _make_nodes(tree, node.conflict, node.below, cells, i, node.id)
            final = []
            for kid in kids:
                final.extend(_enforce(tree, kid, bound, prng, max_tries))
            node.children = [c.id for c in final]
            nxt.extend(final)
        frontier = nxt
    return compact(tree)


def _make_nodes(tree: CuttingTree, conf, below0, cells, level, parent_id, kind="cut"):
    """One node per cell with exact conflict lists and below values."""
    LA, LB, LD = tree.arrays.take(conf)
    mag = tree.arrays.mag
    out = []
    for cell in cells:
        if len(cells) == 1:
            c2, below = conf, below0
        else:
            lo, hi = classify_closed(LA, LB, LD, cell, mag)
            tree.preds += 2 * len(conf)
            c2 = conf[~(lo | hi)]
            below = below0 + int(tree.wt[conf[lo]].sum())
        kid = CutNode(len(tree.nodes), cell, c2, below, level, parent_id, kind)
        tree.nodes.append(kid)
        out.append(kid)
    return out


def _enforce(tree, node, bound, prng, max_tries):
    """Cut ``node`` further until every resulting cell meets the bound.

    Returns the cells replacing ``node`` at its level (just ``node`` when it
    already meets the bound).
    """
    k = len(node.conflict)
    if k <= bound:
        return [node]
    for attempt in range(max_tries):
        s = min(k, max(2, math.ceil(2 * k / bound) + attempt))
        pick = prng.sample(range(k), s)
        cells = subdivide(node.cell, [tree.distinct[node.conflict[j]] for j in pick])
        tree.resamples += 1
        if len(cells) > 1:
            break
    else:
        tree.violations += 1
        return [node]
    kids = _make_nodes(tree, node.conflict, node.below, cells, node.level, node.parent, node.kind)
    node.kind = "dead"
    out = []
    for c in kids:
        out.extend(_enforce(tree, c, bound, prng, max_tries))
    return out


def compact(tree: CuttingTree) -> CuttingTree:
    """Drop retired nodes and renumber ids densely (root stays 0)."""
    alive = [v for v in tree.nodes if v.kind != "dead"]
    remap = {v.id: i for i, v in enumerate(alive)}
    for v in alive:
        v.id = remap[v.id]
        v.children = [remap[c] for c in v.children]
        v.parent = remap[v.parent] if v.parent is not None else None
    tree.nodes = alive
    return tree


def _raw_points(points):
    return [p.key if isinstance(p, Point) else tuple(p) for p in points]


def locate_batch(tree: CuttingTree, points: Sequence, counter=None) -> List[int]:
    """Leaf id for every point (upward push rule), by vectorized descent."""
    raw = _raw_points(points)
    m = len(raw)
    out = [0] * m
    if m == 0:
        return out
    pa = PointArrays(raw)
    stack = [(0, np.arange(m))]
    preds = 0
    while stack:
        nid, idx = stack.pop()
        node = tree.nodes[nid]
        if not node.children:
            for i in idx.tolist():
                out[i] = nid
            continue
        X, Y, W = pa.X[idx], pa.Y[idx], pa.W[idx]
        left = np.ones(len(idx), dtype=bool)
        for c in node.children:
            if not left.any():
                break
            sub = np.nonzero(left)[0]
            hit = in_cell(X[sub], Y[sub], W[sub], tree.nodes[c].cell, pa.mag)
            preds += 4 * len(sub)
            if hit.any():
                stack.append((c, idx[sub[hit]]))
                left[sub[hit]] = False
        if left.any():
            raise AssertionError("children do not cover their parent cell")
    if counter is not None:
        counter[0] += preds
    return out


def _split_cells(cell: Trapezoid, pts):
    """Cut ``cell`` so that the distinct points ``pts`` (raw, all inside) separate.

    A vertical wall at the abscissa that best halves the points is used when
    the points have at least two distinct x; otherwise a horizontal line at
    the median y (the points then share one x and have distinct y).
    """
    xs = sorted({Fraction(X, W) for X, _, W in pts})
    half = len(pts) / 2
    if len(xs) > 1:
        keys = sorted(Fraction(X, W) for X, _, W in pts)
        best, best_gap = None, None
        for x in xs[1:]:
            left = bisect_left(keys, x)
            gap = abs(left - half)
            if best_gap is None or gap < best_gap:
                best, best_gap = x, gap
        return [Trapezoid(cell.bottom, cell.top, cell.xl, best),
                Trapezoid(cell.bottom, cell.top, best, cell.xr)]
    ys = sorted(Fraction(Y, W) for _, Y, W in pts)
    ym = ys[len(ys) // 2]
    h = (0, ym.numerator, ym.denominator)
    return subdivide(cell, [h])


def split_by_points(tree: CuttingTree, points: Sequence, cap: int, counter=None) -> CuttingTree:
    """Refine leaves until each holds at most ``cap`` distinct points.

    New nodes have kind "split".  Afterwards ``tree.point_leaf[i]`` is the
    leaf holding input point ``i``.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    raw = _raw_points(points)
    leaf_of = locate_batch(tree, raw, counter)
    by_leaf = {}
    for i, l in enumerate(leaf_of):
        by_leaf.setdefault(l, []).append(i)
    work = list(by_leaf.items())
    while work:
        nid, idxs = work.pop()
        uniq = {}
        for i in idxs:
            uniq.setdefault(raw[i], []).append(i)
        if len(uniq) <= cap:
            for i in idxs:
                leaf_of[i] = nid
            continue
        node = tree.nodes[nid]
        keys = list(uniq)
        cells = _split_cells(node.cell, keys)
        kids = _make_nodes(tree, node.conflict, node.below, cells, node.level + 1, nid, "split")
        node.children = [k.id for k in kids]
        pa = PointArrays(keys)
        left = np.ones(len(keys), dtype=bool)
        for kid in kids:
            hit = in_cell(pa.X, pa.Y, pa.W, kid.cell, pa.mag) & left
            if counter is not None:
                counter[0] += 4 * len(keys)
            sel = [i for j in np.nonzero(hit)[0].tolist() for i in uniq[keys[j]]]
            left &= ~hit
            if sel:
                work.append((kid.id, sel))
        if left.any():
            raise AssertionError("split cells do not cover the points")
    tree.point_leaf = leaf_of
    return tree
