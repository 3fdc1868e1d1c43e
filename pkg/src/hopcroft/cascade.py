"""Fractional cascading over a tree of line sets, for x-sorted query points.

Every node ``u`` owns a line list ``L_u``.  Bottom-up, each child ``v``
hands its parent a random sample ``R_v`` of ``ceil(|L_v+| / c)`` lines from its
augmented list, and ``L_u+ = L_u + R_v1 + R_v2 + ...`` (a concatenation, so
a line shared by two children simply appears twice).  Faces are named by the
bitmask of lines of the list lying below them, so the maps "face of
``A(L_u+)``" -> "face of ``A(L_u)``" and -> "face of ``A(R_v)``" are a mask
and a shift.

For each child, the faces of ``A(R_v)`` are cut into trapezoids by vertical
walls at their vertices, and every trapezoid stores the lines of ``L_v+``
crossing it plus a base mask of the lines lying below it.  A query at node
``v`` reads its face of ``A(R_v)`` off the parent's answer, advances that
face's cursor to the trapezoid containing the query abscissa, and finishes
with one scan of the trapezoid's conflict list.  Only the root is located
from scratch.

Cursors only move right, which is why queries must come in nondecreasing x
order between resets.
"""
from __future__ import annotations

import math
import random
from typing import Dict, Iterable, List, Optional, Sequence

from .arrangement import build_arrangement
from .geom import Line, Point
from .locator import PointLocator


class CascadeInput:
    """Rooted tree (node 0 is the root) with a line list per node."""

    def __init__(self, children: Sequence[Sequence[int]], lines: Sequence[Sequence], root: int = 0):
        self.children = [list(c) for c in children]
        self.lines = [[l.key if isinstance(l, Line) else tuple(l) for l in ls] for ls in lines]
        self.root = root
        if len(self.children) != len(self.lines):
            raise ValueError("one line list per node is required")

    @property
    def c0(self) -> int:
        return max((len(c) for c in self.children), default=0)

    @property
    def z(self) -> int:
        return max((len(ls) for ls in self.lines), default=0)


def _dsign(l, m, x, at):
    """Sign of l(x) - m(x); x is (num, den) or None for the limit at +-inf."""
    A, B, D = l
    A2, B2, D2 = m
    if x is None:
        s = A * D2 - A2 * D
        if s:
            return ((s > 0) - (s < 0)) * at
        t = B * D2 - B2 * D
        return (t > 0) - (t < 0)
    p, q = x
    v = (A * p + B * q) * D2 - (A2 * p + B2 * q) * D
    return (v > 0) - (v < 0)


def open_relation(l, bottom, top, xl, xr):
    """-1 if l lies weakly below the open trapezoid, +1 if weakly above, 0 if it crosses."""
    if bottom is not None and _dsign(l, bottom, xl, -1) <= 0 and _dsign(l, bottom, xr, 1) <= 0:
        return -1
    if top is not None and _dsign(l, top, xl, -1) >= 0 and _dsign(l, top, xr, 1) >= 0:
        return 1
    return 0


def _frac(x):
    return None if x is None else (x.numerator, x.denominator)


class FaceWalk:
    """Trapezoids of one face of A(R_v), left to right, with a cursor."""

    __slots__ = ("walls", "traps", "cursor", "advances")

    def __init__(self, walls, traps):
        self.walls = walls      # list of (num, den), strictly increasing
        self.traps = traps      # list of (conflict [(bit, A, B, D)], base mask)
        self.cursor = 0
        self.advances = 0


class CascadeNode:
    __slots__ = ("id", "own", "plus", "children", "parent", "off", "size", "walks",
                 "own_mask", "own_arr", "links")

    def __init__(self, nid, own, parent):
        self.id = nid
        self.own = own            # L_u as raw lines
        self.plus = []            # L_u+ = own + R_v1 + ...
        self.children = []
        self.parent = parent
        self.off = {}             # child -> offset of R_v inside plus
        self.size = {}            # child -> |R_v|
        self.walks = {}           # child -> {face mask of A(R_v): FaceWalk}
        self.own_mask = 0
        self.own_arr = None       # arrangement of L_u (faces by mask), built lazily
        self.links = []           # (child, offset, low mask, walks) per child


class CascadeTree:
    def __init__(self, nodes, root, c, c0, z):
        self.nodes: List[CascadeNode] = nodes
        self.root = root
        self.c = c
        self.c0 = c0
        self.z = z
        self.locator: Optional[PointLocator] = None
        self.last_x = None
        # instrumentation
        self.preds = 0
        self.visits = 0
        self.conflict_scanned = 0
        self.second_moment = {}   # node -> sum over its children's trapezoids of |conflict|^2
        self.root_locates = 0

    def max_plus(self) -> int:
        return max(len(v.plus) for v in self.nodes)

    def size_bound(self) -> float:
        """Closed-form cap on |L_u+| implied by ceil-rounded samples."""
        if self.c0 == 0:
            return float(self.z)
        return (self.z + self.c0) * self.c / (self.c - self.c0)

    def face_walks(self):
        for v in self.nodes:
            for walks in v.walks.values():
                yield from walks.values()

    def own_arrangement(self, nid):
        v = self.nodes[nid]
        if v.own_arr is None:
            v.own_arr = build_arrangement(v.own, masks=True)
        return v.own_arr


def cascade_build(inp: CascadeInput, c: Optional[int] = None, rng=None) -> CascadeTree:
    """Build the cascade bottom-up.  ``c`` defaults to ``4 * c0``."""
    c0 = inp.c0
    if c is None:
        c = max(2, 4 * c0)
    if c <= c0:
        raise ValueError(f"sampling ratio c={c} must exceed the degree bound c0={c0}")
    prng = rng if isinstance(rng, random.Random) else random.Random(rng)
    N = len(inp.children)
    parent = [None] * N
    for u, ch in enumerate(inp.children):
        for v in ch:
            if parent[v] is not None:
                raise ValueError("not a tree")
            parent[v] = u
    nodes = [CascadeNode(u, inp.lines[u], parent[u]) for u in range(N)]
    for u in range(N):
        nodes[u].children = inp.children[u]
    tree = CascadeTree(nodes, inp.root, c, c0, inp.z)

    # post-order without recursion
    order, stack = [], [inp.root]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(inp.children[u])
    for u in reversed(order):
        node = nodes[u]
        plus = list(node.own)
        node.own_mask = (1 << len(node.own)) - 1
        sm = 0
        for v in node.children:
            child = nodes[v]
            k = math.ceil(len(child.plus) / c)
            R = [child.plus[i] for i in sorted(prng.sample(range(len(child.plus)), k))]
            node.off[v] = len(plus)
            node.size[v] = len(R)
            plus.extend(R)
            walks, s2 = _child_walks(R, child.plus, tree)
            node.walks[v] = walks
            sm += s2
        node.plus = plus
        node.links = [(v, node.off[v], (1 << node.size[v]) - 1, node.walks[v]) for v in node.children]
        tree.second_moment[u] = sm
    tree.locator = PointLocator(nodes[inp.root].plus, prng)
    tree.preds += tree.locator.preds
    return tree


def _child_walks(R, plus_v, tree):
    """Face walks of VD(R) with conflict lists taken from plus_v."""
    arr = build_arrangement(R, masks=True)
    walks = {}
    s2 = 0
    for f in arr.faces:
        walls = [_frac(t.xl) for t in f.traps[1:]]
        traps = []
        for t in f.traps:
            xl, xr = _frac(t.xl), _frac(t.xr)
            conf = []
            base = 0
            for bit, l in enumerate(plus_v):
                rel = open_relation(l, t.bottom, t.top, xl, xr)
                if rel < 0:
                    base |= 1 << bit
                elif rel == 0:
                    conf.append((1 << bit,) + tuple(l))
            tree.preds += len(plus_v)
            traps.append((conf, base))
            s2 += len(conf) ** 2
        walks[f.mask] = FaceWalk(walls, traps)
    return walks, s2


def cascade_reset(tree: CascadeTree) -> None:
    for w in tree.face_walks():
        w.cursor = 0
    tree.last_x = None


def _check_monotone(tree, X, W):
    if tree.last_x is not None:
        lx, lw = tree.last_x
        if X * lw < lx * W:
            raise ValueError("query abscissa decreased since the last query; call cascade_reset first")
    tree.last_x = (X, W)


def cascade_query(tree: CascadeTree, q, subtree: Iterable[int]) -> Dict[int, int]:
    """Face of A(L_u) containing ``q`` for every node of the parent-closed ``subtree``.

    Faces are returned as masks over L_u (bit i = i-th line of L_u lies below
    or through q).
    """
    X, Y, W = q.key if isinstance(q, Point) else tuple(q)
    inc = set(subtree)
    if tree.root not in inc:
        raise ValueError("query subtree must contain the root")
    for u in inc:
        p = tree.nodes[u].parent
        if p is not None and p not in inc:
            raise ValueError("query subtree is not closed under parents")
    _check_monotone(tree, X, W)
    return {u: F & tree.nodes[u].own_mask for u, F in descend(tree, X, Y, W, inc)}


def descend(tree: CascadeTree, X, Y, W, inc) -> List[tuple]:
    """(node, face mask over L_u+) for every node of ``inc`` reached from the root.

    No validation: ``inc`` must be parent-closed and contain the root, and
    the caller keeps queries x-sorted.
    """
    F, tests = tree.locator.locate_counted((X, Y, W))
    tree.root_locates += 1
    nodes = tree.nodes
    out = [(tree.root, F)]
    k = 0
    walls_seen = scanned = 0
    while k < len(out):
        u, F = out[k]
        k += 1
        for v, off, low, walks in nodes[u].links:
            if v not in inc:
                continue
            fw = walks[(F >> off) & low]
            walls = fw.walls
            j = j0 = fw.cursor
            nw = len(walls)
            while j < nw:
                p, q = walls[j]
                walls_seen += 1
                if X * q >= p * W:
                    j += 1
                else:
                    break
            if j != j0:
                fw.advances += j - j0
                fw.cursor = j
            conf, bits = fw.traps[j]
            for bit, A, B, D in conf:
                if D * Y - A * X - B * W >= 0:
                    bits |= bit
            scanned += len(conf)
            out.append((v, bits))
    tree.visits += len(out) - 1
    tree.conflict_scanned += scanned
    tree.preds += tests + walls_seen + scanned
    return out
