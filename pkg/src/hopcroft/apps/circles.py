"""Counting red/blue pairs within a fixed distance.

Each red point is the centre of a disk of squared radius R2 and we count the
blue points in every disk (boundary inclusive).  The engine is a recursive
cutting: a few disks are sampled, the plane is cut into vertical slabs at the
abscissae where their boundary arcs start, end or cross, and inside a slab the
points are grouped by how many sampled arcs pass below them.  For every
group, a disk whose boundary misses the group's bounding box either contains
the whole group or none of it; the rest (the conflict list) recurse with the
group.  Small subproblems are counted directly.

Slab abscissae are numbers a + b*sqrt(u) with rational a, b, u and are
ordered exactly.  Grouping only affects speed; counts depend on exact
rational tests alone.
"""
from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from functools import cmp_to_key
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..geom import as_scalar

# subproblems with at most this many (disk, point) pairs are counted directly
BRUTE_PAIRS = 30_000
SAMPLE = 8
_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# exact quadratic numbers


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _sign_root(p, q, u) -> int:
    """Sign of p + q*sqrt(u), u >= 0."""
    sp = _sgn(p)
    sq = _sgn(q) if u else 0
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    return sp * _sgn(p * p - q * q * u)


def sign_two_roots(p, q, u, s, v) -> int:
    """Sign of p + q*sqrt(u) + s*sqrt(v) with u, v >= 0."""
    sa = _sign_root(p, q, u)
    sb = _sgn(s) if v else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare squares, A^2 - B^2 = (p^2 + q^2 u - s^2 v) + 2pq sqrt(u)
    d = _sign_root(p * p + q * q * u - s * s * v, 2 * p * q, u)
    return sa if d > 0 else (sb if d < 0 else 0)


def cmp_quadratic(x, y) -> int:
    """Order of two values (a, b, u) meaning a + b*sqrt(u)."""
    return sign_two_roots(x[0] - y[0], x[1], x[2], -y[1], y[2])


def _approx(v) -> float:
    a, b, u = v
    return float(a) + float(b) * float(u) ** 0.5


# ---------------------------------------------------------------------------
# input handling


def _coords(pts):
    out = []
    for p in pts:
        x, y = p[0], p[1]
        out.append((Fraction(as_scalar(x)), Fraction(as_scalar(y))))
    return out


def _to_int(red, blue, R2):
    """Scale everything by a common denominator so coordinates are integers."""
    L = 1
    for x, y in red + blue:
        L = lcm(L, x.denominator, y.denominator)
    # R2 * L^2 must be an integer as well
    while (R2 * L * L).denominator != 1:
        L *= (R2 * L * L).denominator
    ired = [(int(x * L), int(y * L)) for x, y in red]
    iblue = [(int(x * L), int(y * L)) for x, y in blue]
    return ired, iblue, int(R2 * L * L)


# ---------------------------------------------------------------------------
# engine


class DiskStats:
    def __init__(self):
        self.nodes = 0
        self.brute_pairs = 0
        self.bbox_tests = 0
        self.stalls = 0
        self.max_depth = 0

    def as_dict(self):
        return dict(self.__dict__)


def _critical(cs, R2):
    """Slab boundaries for the sampled disks, sorted exactly."""
    vals = []
    R = Fraction(R2)
    for cx, _ in cs:
        vals.append((Fraction(cx), Fraction(-1), R))
        vals.append((Fraction(cx), Fraction(1), R))
    for i in range(len(cs)):
        x1, y1 = cs[i]
        for j in range(i + 1, len(cs)):
            x2, y2 = cs[j]
            dx, dy = x2 - x1, y2 - y1
            d2 = dx * dx + dy * dy
            if d2 == 0 or d2 > 4 * R2:
                continue
            mx = Fraction(x1 + x2, 2)
            u = Fraction(4 * R2 - d2, 4 * d2)
            vals.append((mx, Fraction(-dy), u))
            vals.append((mx, Fraction(dy), u))
    vals.sort(key=cmp_to_key(cmp_quadratic))
    dedup = []
    for v in vals:
        if not dedup or cmp_quadratic(dedup[-1], v) != 0:
            dedup.append(v)
    return dedup


def _slab_index(xs, crit):
    """Number of critical values <= x for each integer x (exact near ties)."""
    approx = np.array([_approx(v) for v in crit], dtype=float)
    xf = xs.astype(float)
    idx = np.searchsorted(approx, xf, side="right")
    tol = 1e-7 * (np.abs(xf) + 1.0)
    # points whose float position is close to any boundary are placed exactly
    near = np.zeros(len(xs), dtype=bool)
    for k in (idx - 1, idx):
        ok = (k >= 0) & (k < len(crit))
        kk = np.clip(k, 0, max(len(crit) - 1, 0))
        if len(crit):
            near |= ok & (np.abs(approx[kk] - xf) <= tol)
    for t in np.nonzero(near)[0]:
        x = Fraction(int(xs[t]))
        lo, hi = 0, len(crit)
        while lo < hi:
            mid = (lo + hi) // 2
            if cmp_quadratic(crit[mid], (x, Fraction(0), Fraction(0))) <= 0:
                lo = mid + 1
            else:
                hi = mid
        idx[t] = lo
    return idx


def _arc_counts(px, py, cs, R2):
    """Per point: how many sampled boundary arcs pass weakly below it."""
    cnt = np.zeros(len(px), dtype=np.int64)
    for cx, cy in cs:
        dx = px - cx
        h = R2 - dx * dx
        spans = h >= 0
        dy = py - cy
        dy2 = dy * dy
        up = dy >= 0
        lower_ok = up | (dy2 <= h)
        upper_ok = up & (dy2 >= h)
        cnt += (spans & lower_ok).astype(np.int64) + (spans & upper_ok).astype(np.int64)
    return cnt


def _brute_into(counts, ci, cx, cy, pi, px, py, pw, R2, stats):
    dx = cx[ci][:, None] - px[pi][None, :]
    dy = cy[ci][:, None] - py[pi][None, :]
    inside = (dx * dx + dy * dy) <= R2
    counts[ci] += (inside * pw[pi][None, :]).sum(axis=1)
    stats.brute_pairs += len(ci) * len(pi)


def _disk_counts(red, blue, R2, seed=0, stats: Optional[DiskStats] = None):
    """Per red point, number of blue points at squared distance <= R2."""
    st = stats if stats is not None else DiskStats()
    if not red or not blue:
        return [0] * len(red)
    if R2 < 0:
        return [0] * len(red)
    ired, iblue, R = _to_int(_coords(red), _coords(blue), Fraction(R2))
    rc = Counter(ired)
    bc = Counter(iblue)
    centres = list(rc)
    points = list(bc)
    span = max(max(abs(v) for p in centres + points for v in p), 1)
    dt = np.int64 if 8 * span * span + R < _SAFE and R < _SAFE else object
    cx = np.array([c[0] for c in centres], dtype=dt)
    cy = np.array([c[1] for c in centres], dtype=dt)
    px = np.array([p[0] for p in points], dtype=dt)
    py = np.array([p[1] for p in points], dtype=dt)
    pw = np.array([bc[p] for p in points], dtype=np.int64)
    counts = np.zeros(len(centres), dtype=np.int64 if dt is np.int64 else object)
    rng = random.Random(seed)
    zero = dt(0) if dt is np.int64 else 0

    stack = [(np.arange(len(centres)), np.arange(len(points)), 0)]
    while stack:
        ci, pi, depth = stack.pop()
        st.nodes += 1
        st.max_depth = max(st.max_depth, depth)
        if len(ci) * len(pi) <= BRUTE_PAIRS or len(ci) <= SAMPLE or len(pi) == 1:
            _brute_into(counts, ci, cx, cy, pi, px, py, pw, R, st)
            continue
        picks = rng.sample(range(len(ci)), SAMPLE)
        cs = [(int(cx[ci[k]]), int(cy[ci[k]])) for k in picks]
        crit = _critical(cs, R)
        qx, qy = px[pi], py[pi]
        slab = _slab_index(qx, crit)
        arcs = _arc_counts(qx, qy, cs, R)
        key = slab.astype(np.int64) * (2 * SAMPLE + 1) + arcs
        _, inv = np.unique(key, return_inverse=True)
        order = np.argsort(inv, kind="stable")
        bounds = np.flatnonzero(np.diff(inv[order])) + 1
        groups = np.split(order, bounds)
        ccx, ccy = cx[ci], cy[ci]
        children = []
        for g in groups:
            gi = pi[g]
            x0, x1 = qx[g].min(), qx[g].max()
            y0, y1 = qy[g].min(), qy[g].max()
            ex = np.maximum(np.maximum(x0 - ccx, ccx - x1), zero)
            ey = np.maximum(np.maximum(y0 - ccy, ccy - y1), zero)
            fx = np.maximum(np.abs(ccx - x0), np.abs(ccx - x1))
            fy = np.maximum(np.abs(ccy - y0), np.abs(ccy - y1))
            dmin = ex * ex + ey * ey
            dmax = fx * fx + fy * fy
            st.bbox_tests += len(ci)
            full = dmax <= R
            if full.any():
                counts[ci[full]] += int(pw[gi].sum())
            conf = (dmin <= R) & ~full
            if conf.any():
                children.append((ci[conf], gi))
        if len(children) == 1 and len(children[0][0]) == len(ci) and len(children[0][1]) == len(pi):
            # the sample did not separate anything
            st.stalls += 1
            _brute_into(counts, ci, cx, cy, pi, px, py, pw, R, st)
            continue
        for c_, p_ in children:
            stack.append((c_, p_, depth + 1))

    idx = {c: k for k, c in enumerate(centres)}
    return [int(counts[idx[p]]) for p in ired]


def unit_dist_count(red, blue, r=1, seed=0, stats: Optional[DiskStats] = None, r2=None):
    """(#pairs at distance <= r, per-red counts).  ``r2`` gives the squared radius directly."""
    if r2 is None:
        r = Fraction(as_scalar(r))
        if r <= 0:
            raise ValueError("radius must be positive")
        r2 = r * r
    per = _disk_counts(list(red), list(blue), Fraction(as_scalar(r2)), seed, stats)
    return sum(per), per


def unit_dist_brute(red, blue, r=1, r2=None):
    if r2 is None:
        r2 = Fraction(as_scalar(r)) ** 2
    R2 = Fraction(as_scalar(r2))
    red, blue = _coords(red), _coords(blue)
    per = [sum(1 for bx, by in blue if (rx - bx) ** 2 + (ry - by) ** 2 <= R2) for rx, ry in red]
    return sum(per), per
