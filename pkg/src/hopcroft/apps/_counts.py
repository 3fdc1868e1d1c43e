"""Batched side counts shared by the segment applications.

The core primitive answers, for a set of non-vertical lines and a batch of
closed query segments, how many lines meet each segment.  A line misses a
segment exactly when both endpoints lie strictly on one side of it, and
which endpoint decides depends only on whether the line is steeper than the
segment.  So with the lines sorted by slope, every query becomes two prefix
queries of the form "how many of the first i lines lie strictly below
(above) this point".  Prefixes are cut into aligned dyadic blocks and each
block is counted in one batch against all queries that use it.
"""
from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..counting import weighted_counts

_SAFE = 1 << 62
# blocks with at most this many (point, line) tests use the vectorized oracle
BATCH_BRUTE = 60_000


def hom(x: Fraction, y: Fraction):
    """Normalized homogeneous triple of a rational point."""
    x, y = Fraction(x), Fraction(y)
    W = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    return (x.numerator * (W // x.denominator), y.numerator * (W // y.denominator), W)


def line_through(x1, y1, x2, y2):
    """Raw line through two points with x1 != x2."""
    m = Fraction(y2 - y1) / Fraction(x2 - x1)
    c = Fraction(y1) - m * x1
    D = m.denominator * c.denominator // gcd(m.denominator, c.denominator)
    A, B = m.numerator * (D // m.denominator), c.numerator * (D // c.denominator)
    g = gcd(gcd(A, B), D)
    return (A // g, B // g, D // g)


def strict_counts(pts: Sequence, lines: Sequence, stats=None) -> Tuple[List[int], List[int]]:
    """Per line: (#points strictly above, #points strictly below)."""
    m, n = len(pts), len(lines)
    if not m or not n:
        return [0] * n, [0] * n
    if stats is not None:
        stats["tests"] = stats.get("tests", 0) + m * n
    if m * n > BATCH_BRUTE:
        if stats is not None:
            stats["engine_calls"] = stats.get("engine_calls", 0) + 2
        up = weighted_counts(pts, lines).per_line
        rp = [(X, -Y, W) for X, Y, W in pts]
        rl = [(-A, -B, D) for A, B, D in lines]
        down = weighted_counts(rp, rl).per_line
        return list(up), list(down)
    mp = max(max(abs(X), abs(Y), W) for X, Y, W in pts)
    ml = max(max(abs(A), abs(B), D) for A, B, D in lines)
    dt = np.int64 if 3 * mp * ml < _SAFE else object
    X, Y, W = (np.array(c, dtype=dt) for c in zip(*pts))
    A, B, D = (np.array(c, dtype=dt) for c in zip(*lines))
    S = D[:, None] * Y[None, :] - A[:, None] * X[None, :] - B[:, None] * W[None, :]
    return [int(v) for v in (S > 0).sum(axis=1)], [int(v) for v in (S < 0).sum(axis=1)]


class SlopeSorted:
    """Lines sorted by slope with their dual points, for prefix side counts."""

    def __init__(self, lines: Sequence):
        self.lines = sorted(lines, key=lambda l: Fraction(l[0], l[2]))
        self.slopes = [Fraction(A, D) for A, _, D in self.lines]
        self.duals = [(A, -B, D) for A, B, D in self.lines]
        self.n = len(self.lines)
        self.keys: Dict[tuple, int] = {}
        for l in self.lines:
            self.keys[l] = self.keys.get(l, 0) + 1

    def prefix_counts(self, requests: Sequence[Tuple[tuple, int]], stats=None):
        """For each (point, i): (#lines among the first i with the point strictly
        above, #lines among the first i with the point strictly below)."""
        out = [[0, 0] for _ in requests]
        blocks: Dict[Tuple[int, int], List[int]] = {}
        for k, (_, i) in enumerate(requests):
            start = 0
            bit = 1 << max(0, i.bit_length() - 1)
            while bit:
                if i & bit:
                    blocks.setdefault((start, bit), []).append(k)
                    start += bit
                bit >>= 1
        for (start, size), ks in blocks.items():
            pts = self.duals[start:start + size]
            qlines = {}
            for k in ks:
                X, Y, W = requests[k][0]
                qlines.setdefault((X, -Y, W), []).append(k)
            keys = list(qlines)
            # point p strictly above line l  <=>  l* strictly above p*
            up, down = strict_counts(pts, keys, stats)
            for j, key in enumerate(keys):
                for k in qlines[key]:
                    out[k][0] += up[j]
                    out[k][1] += down[j]
        return out


def lines_meeting(ss: SlopeSorted, queries: Sequence[Tuple[tuple, tuple, bool]], stats=None) -> List[int]:
    """Number of lines meeting each query segment.

    A query is (a, b, open_right) or (a, b, open_right, supporting line)
    with homogeneous endpoints, a left of b.  With ``open_right`` the
    endpoint b is excluded, so lines meeting the segment only at b are not
    counted.
    """
    n = ss.n
    reqs = []
    info = []
    for q in queries:
        a, b, open_right = q[:3]
        if len(q) > 3:
            own = q[3]
        else:
            own = line_through(Fraction(a[0], a[2]), Fraction(a[1], a[2]),
                               Fraction(b[0], b[2]), Fraction(b[1], b[2]))
        i = bisect_left(ss.slopes, Fraction(own[0], own[2]))
        base = len(reqs)
        reqs.extend([(a, i), (a, n), (b, i), (b, n)])
        info.append((base, open_right, own))
    res = ss.prefix_counts(reqs, stats)
    out = []
    for base, open_right, own in info:
        (ua_i, da_i), (ua_n, da_n), (ub_i, db_i), (ub_n, db_n) = res[base:base + 4]
        # lines flatter than the segment lie below it iff below its left end
        both_below = ua_i + (ub_n - ub_i)
        both_above = db_i + (da_n - da_i)
        cnt = n - both_below - both_above
        if open_right:
            through_b = n - ub_n - db_n
            cnt -= through_b - ss.keys.get(own, 0)
        out.append(cnt)
    return out
