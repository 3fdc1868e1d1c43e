"""Segment intersection counting and connected components by slab recursion.

Both algorithms walk the same tree of vertical slabs.  Inside a slab a
segment is *long* when it spans the slab and *short* when it has an endpoint
strictly inside.  Long segments behave like lines there and are handled in
bulk; the short ones are passed to the two halves of the slab, split between
the middle pair of interior endpoint abscissae (so slab walls never pass
through an endpoint).

Closed segments are used throughout: a shared endpoint is an intersection
and a collinear overlap is one intersecting pair.  Vertical segments are
first removed by the map (x, y) -> (Kx + y, y), which preserves incidences
between segments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from ..geom import Segment, as_scalar
from ._counts import SlopeSorted, hom, line_through, lines_meeting


# ---------------------------------------------------------------------------
# input handling


def _parse(segments) -> List[Tuple[Fraction, Fraction, Fraction, Fraction]]:
    out = []
    for s in segments:
        if isinstance(s, Segment):
            x1, y1, x2, y2 = s.p.x, s.p.y, s.q.x, s.q.y
        elif len(s) == 2:
            (x1, y1), (x2, y2) = s
        else:
            x1, y1, x2, y2 = s
        x1, y1, x2, y2 = (Fraction(as_scalar(v)) for v in (x1, y1, x2, y2))
        if (x1, y1) == (x2, y2):
            raise ValueError(f"degenerate segment {s!r}")
        if (x2, y2) < (x1, y1):
            x1, y1, x2, y2 = x2, y2, x1, y1
        out.append((x1, y1, x2, y2))
    return out


def unvertical(segs):
    """Apply (x, y) -> (Kx + y, y) with K large enough that no image is vertical."""
    if all(s[0] != s[2] for s in segs):
        return segs, 0
    K = 1
    for x1, y1, x2, y2 in segs:
        if x1 != x2:
            K = max(K, int(abs((y2 - y1) / (x2 - x1))) + 1)
    out = []
    for x1, y1, x2, y2 in segs:
        a, b = (K * x1 + y1, y1), (K * x2 + y2, y2)
        if b < a:
            a, b = b, a
        out.append((a[0], a[1], b[0], b[1]))
    return out, K


def _orient(ax, ay, bx, by, cx, cy):
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (v > 0) - (v < 0)


def leftmost_meet(s, t) -> Optional[Fraction]:
    """Smallest x of the closed intersection of two non-vertical segments, or None."""
    ax, ay, bx, by = s
    cx, cy, dx, dy = t
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    if o1 == 0 and o2 == 0:
        lo, hi = max(ax, cx), min(bx, dx)
        return lo if lo <= hi else None
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 * o2 > 0 or o3 * o4 > 0:
        return None
    # single common point: intersection of the supporting lines
    m1 = (by - ay) / (bx - ax)
    m2 = (dy - cy) / (dx - cx)
    return (cy - m2 * cx - ay + m1 * ax) / (m1 - m2)


def _meets(s, t) -> bool:
    """Closed segments s, t (left endpoint first) share a point."""
    ax, ay, bx, by = s
    cx, cy, dx, dy = t
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    if o1 == 0 and o2 == 0:
        return max(ax, cx) <= min(bx, dx) and max(min(ay, by), min(cy, dy)) <= min(max(ay, by), max(cy, dy))
    if o1 * o2 > 0:
        return False
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    return o3 * o4 <= 0


def _integral(segs):
    """Scale by the common denominator; intersections are unchanged."""
    L = 1
    for s in segs:
        for v in s:
            L = L * v.denominator // gcd(L, v.denominator)
    return [tuple(int(v * L) for v in s) for s in segs]


def seg_intersections_brute(segments) -> int:
    segs = _integral(_parse(segments))
    n = len(segs)
    return sum(1 for i in range(n) for j in range(i + 1, n) if _meets(segs[i], segs[j]))


# ---------------------------------------------------------------------------
# slab tree


def _y_at(s, x):
    x1, y1, x2, y2 = s
    return y1 + (y2 - y1) * (x - x1) / (x2 - x1)


def _inside(x, xl, xr):
    return (xl is None or x > xl) and (xr is None or x < xr)


def _split_value(ids, segs, xl, xr):
    """Wall between the middle interior endpoint abscissae, or None when fewer than two."""
    xs = sorted({x for i in ids for x in (segs[i][0], segs[i][2]) if _inside(x, xl, xr)})
    if len(xs) < 2:
        return None
    k = len(xs) // 2
    return (xs[k - 1] + xs[k]) / 2


def _children(ids, segs, xl, xm, xr):
    left = [i for i in ids if segs[i][0] < xm]
    right = [i for i in ids if segs[i][2] > xm]
    return (xl, xm, left), (xm, xr, right)


def _is_long(s, xl, xr):
    return xl is not None and xr is not None and s[0] < xl and s[2] > xr


@dataclass
class SegStats:
    slabs: int = 0
    leaves: int = 0
    leaf_pairs: int = 0
    tests: int = 0
    engine_calls: int = 0
    extra: Dict = field(default_factory=dict)


def seg_intersections(segments, stats: Optional[SegStats] = None) -> int:
    """Number of unordered pairs of closed segments with a common point.

    Each pair is charged to the slab holding the leftmost point of the
    intersection, at the first slab on the way down where one of the two is
    long.  Pairs that stay short down to a leaf are tested directly.
    """
    segs, _ = unvertical(_parse(segments))
    st = stats if stats is not None else SegStats()
    cnt_stats: Dict = {}
    total = 0
    work = [(None, None, list(range(len(segs))))]
    while work:
        xl, xr, ids = work.pop()
        st.slabs += 1
        long_ = [i for i in ids if _is_long(segs[i], xl, xr)]
        short = [i for i in ids if not _is_long(segs[i], xl, xr)]
        if long_:
            total += _slab_pairs(segs, long_, short, xl, xr, cnt_stats)
        xm = _split_value(short, segs, xl, xr)
        if xm is None:
            if len(short) > 1:
                st.leaves += 1
                total += _leaf_pairs(segs, short, xl, xr, st)
            continue
        for child in _children(short, segs, xl, xm, xr):
            if child[2]:
                work.append(child)
    st.tests += cnt_stats.get("tests", 0)
    st.engine_calls += cnt_stats.get("engine_calls", 0)
    return total


_line = lru_cache(maxsize=1 << 16)(line_through)
_hom = lru_cache(maxsize=1 << 16)(hom)


def _on_line(l, x):
    """Homogeneous point of line l above abscissa x."""
    A, B, D = l
    p, q = x.numerator, x.denominator
    X, Y, W = p * D, A * p + B * q, D * q
    g = gcd(gcd(X, Y), W)
    return X // g, Y // g, W // g


def _clip(s, xl, xr):
    """Homogeneous endpoints of s clipped to [xl, xr], whether the right end
    was cut, and the supporting line."""
    x1, y1, x2, y2 = s
    l = _line(*s)
    a = _hom(x1, y1) if xl is None or x1 >= xl else _on_line(l, xl)
    cut = xr is not None and x2 > xr
    b = _on_line(l, xr) if cut else _hom(x2, y2)
    return a, b, cut, l


def _slab_pairs(segs, long_, short, xl, xr, cnt_stats):
    """Pairs involving a long segment whose leftmost common point lies in [xl, xr)."""
    lines = [_line(*segs[i]) for i in long_]
    ss = SlopeSorted(lines)
    queries = [_clip(segs[i], xl, xr) for i in short]
    for i in long_:
        a, b, _, l = _clip(segs[i], xl, xr)
        queries.append((a, b, True, l))
    counts = lines_meeting(ss, queries, cnt_stats)
    ns = len(short)
    total = sum(counts[:ns])
    # a short segment entering from the left overlaps its collinear long
    # segments already left of xl, so those pairs belong elsewhere
    for i in short:
        if segs[i][0] < xl:
            total -= ss.keys.get(_line(*segs[i]), 0)
    # long-long: each crossing pair is seen from both sides; a collinear pair
    # (and the segment itself) overlaps on all of the slab, so its leftmost
    # common point lies further left and is not charged here
    ll = 0
    for k, i in enumerate(long_):
        ll += counts[ns + k] - ss.keys[lines[k]]
    return total + ll // 2


def _leaf_pairs(segs, short, xl, xr, st):
    total = 0
    for a in range(len(short)):
        for b in range(a + 1, len(short)):
            st.leaf_pairs += 1
            x = leftmost_meet(segs[short[a]], segs[short[b]])
            if x is not None and (xl is None or x >= xl) and (xr is None or x < xr):
                total += 1
    return total


# ---------------------------------------------------------------------------
# connected components


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[a] = b
        return True


class _Envelope:
    """Lower (or upper) envelope of lines, evaluated exactly."""

    def __init__(self, lines, lower=True):
        # lower envelope: as x grows the minimum moves to smaller slopes
        ls = sorted({(Fraction(A, D), Fraction(B, D)) for A, B, D in lines},
                    key=lambda t: (-t[0], t[1]) if lower else (t[0], -t[1]))
        hull, xs = [], []
        for m, c in ls:
            if hull and hull[-1][0] == m:
                continue
            while hull:
                m0, c0 = hull[-1]
                x = (c - c0) / (m0 - m)
                if xs and x <= xs[-1]:
                    hull.pop()
                    xs.pop()
                else:
                    break
            if hull:
                m0, c0 = hull[-1]
                xs.append((c - c0) / (m0 - m))
            hull.append((m, c))
        self.hull, self.xs = hull, xs

    def at(self, x):
        from bisect import bisect_right
        m, c = self.hull[bisect_right(self.xs, x)]
        return m * x + c


@dataclass
class ComponentGraph:
    """Spanning structure of the intersection graph.

    Every edge joins two segments of one component, but an edge need not be
    an intersecting pair: long segments of a slab are chained through the
    segments they share.  The edges connect each component.
    """
    n: int
    edges: List[Tuple[int, int]]
    labels: List[int]


def seg_components(segments, stats: Optional[SegStats] = None) -> List[int]:
    """Component label per segment (labels are the smallest index in the component)."""
    return component_graph(segments, stats).labels


def component_graph(segments, stats: Optional[SegStats] = None) -> ComponentGraph:
    segs, _ = unvertical(_parse(segments))
    n = len(segs)
    st = stats if stats is not None else SegStats()
    cnt_stats: Dict = {}
    edges: List[Tuple[int, int]] = []
    seen = set()

    def add(a, b):
        if a == b:
            return
        key = (a, b) if a < b else (b, a)
        if key not in seen:
            seen.add(key)
            edges.append(key)

    work = [(None, None, list(range(n)))]
    while work:
        xl, xr, ids = work.pop()
        st.slabs += 1
        long_ = [i for i in ids if _is_long(segs[i], xl, xr)]
        short = [i for i in ids if not _is_long(segs[i], xl, xr)]
        if long_:
            _slab_components(segs, long_, short, xl, xr, add, cnt_stats)
        xm = _split_value(short, segs, xl, xr)
        if xm is None:
            if len(short) > 1:
                st.leaves += 1
                local = _DSU(len(short))
                for a in range(len(short)):
                    for b in range(a + 1, len(short)):
                        st.leaf_pairs += 1
                        if local.find(a) != local.find(b) and _meets(segs[short[a]], segs[short[b]]):
                            local.union(a, b)
                            add(short[a], short[b])
            continue
        for child in _children(short, segs, xl, xm, xr):
            if child[2]:
                work.append(child)
    st.tests += cnt_stats.get("tests", 0)
    st.engine_calls += cnt_stats.get("engine_calls", 0)
    st.extra["edges"] = len(edges)

    # graph traversal
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    labels = [-1] * n
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if labels[v] < 0:
                    labels[v] = s
                    stack.append(v)
    return ComponentGraph(n, edges, labels)


def _slab_components(segs, long_, short, xl, xr, add, cnt_stats):
    """Edges joining segments that are connected through an intersection in the closed slab involving a long segment."""
    yl = {i: _y_at(segs[i], xl) for i in long_}
    yr = {i: _y_at(segs[i], xr) for i in long_}
    order = sorted(long_, key=lambda i: (yl[i], yr[i]))
    # stack of components, bottom to top; each is [members, max yl, max yr, argmax yr]
    stack: List[list] = []
    for j in order:
        merged = [j]
        while stack and (stack[-1][2] >= yr[j] or stack[-1][1] == yl[j]):
            comp = stack.pop()
            if comp[2] >= yr[j]:
                add(j, comp[3])
            else:
                # touching on the left wall
                add(j, next(i for i in comp[0] if yl[i] == yl[j]))
            merged.extend(comp[0])
        best = max(merged, key=lambda i: yr[i])
        stack.append([merged, yl[j], yr[best], best])
    comps = [c[0] for c in stack]
    reps = [c[3] for c in stack]
    lowers = [_Envelope([_line(*segs[i]) for i in c], lower=True) for c in comps]
    uppers = [_Envelope([_line(*segs[i]) for i in c], lower=False) for c in comps]

    def position(x, y):
        """2k+1 when inside the band of component k, 2k when in the gap below it."""
        lo, hi = 0, len(comps)
        while lo < hi:
            mid = (lo + hi) // 2
            if y < lowers[mid].at(x):
                hi = mid
            else:
                lo = mid + 1
        # components 0..lo-1 have their lower envelope at or below the point
        if lo > 0 and y <= uppers[lo - 1].at(x):
            return 2 * (lo - 1) + 1
        return 2 * lo

    nxt = list(range(len(comps)))   # nxt[k] > k once band k is linked to band k + 1

    def jump(k):
        root = k
        while nxt[root] != root:
            root = nxt[root]
        while nxt[k] != root and nxt[k] != k:
            nxt[k], k = root, nxt[k]
        return root

    find_one = []   # (short id, component index)
    for i in short:
        x1, y1, x2, y2 = segs[i]
        a = max(x1, xl)
        b = min(x2, xr)
        pa = position(a, _y_at(segs[i], a))
        pb = position(b, _y_at(segs[i], b))
        if pa == pb:
            if pa % 2:
                find_one.append((i, pa // 2))
            continue
        lo, hi = min(pa, pb), max(pa, pb)
        k1, k2 = lo // 2, (hi - 1) // 2
        if k1 > k2:
            continue
        add(i, reps[k1])
        # s crosses every band from k1 to k2; chain their representatives,
        # jumping over links already made in this slab
        k = jump(k1)
        while k < k2:
            add(reps[k], reps[k + 1])
            nxt[k] = k + 1
            k = jump(k + 1)

    by_comp: Dict[int, List[int]] = {}
    for i, k in find_one:
        by_comp.setdefault(k, []).append(i)
    for k, qs in by_comp.items():
        hit = _find_one(segs, comps[k], qs, xl, xr, cnt_stats)
        for i, j in hit.items():
            add(i, j)


def _find_one(segs, members, queries, xl, xr, cnt_stats) -> Dict[int, int]:
    """For each query segment, one member line meeting its clipped part (if any).

    Offline halving: count against the first half; nonzero counts continue
    there, the rest continue in the second half.
    """
    clipped = {}
    for i in queries:
        a, b, _, l = _clip(segs[i], xl, xr)
        clipped[i] = (a, b, False, l)
    out = {}
    ss = SlopeSorted([_line(*segs[j]) for j in members])
    counts = lines_meeting(ss, [clipped[i] for i in queries], cnt_stats)
    work = [(list(members), [i for i, c in zip(queries, counts) if c > 0])]
    while work:
        mem, qs = work.pop()
        if not qs:
            continue
        if len(mem) == 1:
            for i in qs:
                out[i] = mem[0]
            continue
        half = len(mem) // 2
        first, second = mem[:half], mem[half:]
        ss = SlopeSorted([_line(*segs[j]) for j in first])
        c1 = lines_meeting(ss, [clipped[i] for i in qs], cnt_stats)
        work.append((first, [i for i, c in zip(qs, c1) if c > 0]))
        work.append((second, [i for i, c in zip(qs, c1) if c == 0]))
    return out


def seg_components_brute(segments) -> List[int]:
    segs = _integral(_parse(segments))
    n = len(segs)
    d = _DSU(n)
    for i in range(n):
        for j in range(i + 1, n):
            if _meets(segs[i], segs[j]):
                d.union(i, j)
    root_min = {}
    for i in range(n):
        r = d.find(i)
        root_min.setdefault(r, i)
    return [root_min[d.find(i)] for i in range(n)]
