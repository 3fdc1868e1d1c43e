"""Point location in a line arrangement by randomized incremental refinement.

Lines are inserted in random order in rounds of doubling size.  Each round
cuts every cell still crossed by some line with the newly inserted lines that
cross it (their vertical decomposition clipped to the cell), so the cells of
round ``i`` refine those of round ``i-1`` and the rounds form a search DAG
(a tree here, since cells are clipped).  Once every line is inserted no cell
is crossed, and each leaf lies inside one face of the arrangement.

A query walks from the root, picking at every node the child cell that
contains the point under the upward push rule.
"""
from __future__ import annotations

import random
from typing import List, Sequence

import numpy as np

from .arrangement import Trapezoid, group_lines
from .cells import LineArrays, classify_open, subdivide
from .geom import Line, Point


class _LocNode:
    __slots__ = ("cell", "children", "mask")

    def __init__(self, cell, mask):
        self.cell = cell
        self.children = []
        self.mask = mask


class PointLocator:
    """Search structure answering face queries as below-set bitmasks.

    The mask has bit ``i`` set when input line ``i`` is below the query
    point or passes through it.

    >>> loc = PointLocator([Line(0, 0), Line(1, 0)], seed=1)
    >>> loc.locate(Point(5, 1)) == 0b01
    True
    """

    def __init__(self, lines: Sequence, seed=0):
        raw = [l.key if isinstance(l, Line) else tuple(l) for l in lines]
        self.lines = raw
        distinct, members = group_lines(raw)
        self.distinct = distinct
        bits = []
        for mem in members:
            b = 0
            for i in mem:
                b |= 1 << i
            bits.append(b)
        n = len(distinct)
        prng = seed if isinstance(seed, random.Random) else random.Random(seed)
        perm = list(range(n))
        prng.shuffle(perm)
        rank = np.empty(n, dtype=np.int64)
        rank[perm] = np.arange(n)
        arrays = LineArrays(distinct)
        self.preds = 0
        self.nodes: List[_LocNode] = []
        root = _LocNode(Trapezoid(None, None, None, None), 0)
        self.nodes.append(root)
        frontier = [(root, np.asarray(perm, dtype=np.int64))] if n else []
        s = 1
        while frontier:
            s = min(n, 2 * s)
            nxt = []
            for node, conf in frontier:
                cut = int(np.searchsorted(rank[conf], s))
                if cut == 0:
                    nxt.append((node, conf))
                    continue
                cells = subdivide(node.cell, [distinct[l] for l in conf[:cut]])
                LA, LB, LD = arrays.take(conf)
                for cell in cells:
                    lo, hi = classify_open(LA, LB, LD, cell, arrays.mag)
                    self.preds += 2 * len(conf)
                    m = node.mask
                    for l in conf[lo].tolist():
                        m |= bits[l]
                    kid = _LocNode(cell, m)
                    self.nodes.append(kid)
                    node.children.append(kid)
                    rest = conf[~(lo | hi)]
                    if len(rest):
                        nxt.append((kid, rest))
            frontier = nxt
        self.root = root

    def locate(self, p) -> int:
        X, Y, W = p.key if isinstance(p, Point) else tuple(p)
        node = self.root
        while node.children:
            for c in node.children:
                if c.cell.contains((X, Y, W)):
                    node = c
                    break
            else:
                raise AssertionError("no child cell contains the point")
        return node.mask

    def locate_counted(self, p):
        """(mask, number of cell tests)."""
        X, Y, W = p.key if isinstance(p, Point) else tuple(p)
        node, tests = self.root, 0
        while node.children:
            for c in node.children:
                tests += 1
                if c.cell.contains((X, Y, W)):
                    node = c
                    break
            else:
                raise AssertionError("no child cell contains the point")
        return node.mask, tests

    def __len__(self):
        return len(self.nodes)


def locate(loc: PointLocator, p) -> int:
    return loc.locate(p)
