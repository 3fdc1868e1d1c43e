"""Vectorized exact tests of lines and points against trapezoidal cells.

All arithmetic is integer.  Arrays are int64 when a magnitude bound shows
that no intermediate product can overflow, and Python-int object arrays
otherwise, so results never depend on the fast path.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .arrangement import Trapezoid, build_arrangement

_SAFE = 1 << 62


class LineArrays:
    """Coefficient arrays A, B, D for a list of raw lines plus magnitude bounds."""

    __slots__ = ("A", "B", "D", "mA", "mB", "mD")

    def __init__(self, lines: Sequence):
        self.mA = max((abs(l[0]) for l in lines), default=0)
        self.mB = max((abs(l[1]) for l in lines), default=0)
        self.mD = max((l[2] for l in lines), default=1)
        dt = object if max(self.mA, self.mB, self.mD) >= _SAFE else np.int64
        self.A = np.asarray([l[0] for l in lines], dtype=dt)
        self.B = np.asarray([l[1] for l in lines], dtype=dt)
        self.D = np.asarray([l[2] for l in lines], dtype=dt)

    @property
    def mag(self):
        return (self.mA, self.mB, self.mD)

    def take(self, idx):
        return self.A[idx], self.B[idx], self.D[idx]


def _cast(arrs, obj):
    if obj and arrs[0].dtype != object:
        return tuple(a.astype(object) for a in arrs)
    return arrs


def diff_sign(LA, LB, LD, line, x: Optional[Fraction], at: int, mag):
    """Sign of (l(x) - line(x)) for every l; x=None means the limit at -inf
    (at=-1) or +inf (at=+1).  ``mag`` bounds |A|, |B|, D over the arrays."""
    A, B, D = line
    mA, mB, mD = mag
    if x is None:
        big = max(mA * D + abs(A) * mD, mB * D + abs(B) * mD) >= _SAFE
        LA, LB, LD = _cast((LA, LB, LD), big)
        s = LA * D - A * LD
        t = LB * D - B * LD
        ss = np.sign(s) if at > 0 else -np.sign(s)
        return np.where(s != 0, ss, np.sign(t)).astype(np.int64)
    p, q = x.numerator, x.denominator
    ap = abs(p)
    big = (mA * ap + mB * q) * D + (abs(A) * ap + abs(B) * q) * mD >= _SAFE
    LA, LB, LD = _cast((LA, LB, LD), big)
    v = (LA * p + LB * q) * D - (A * p + B * q) * LD
    return np.sign(v).astype(np.int64)


def classify_closed(LA, LB, LD, cell: Trapezoid, mag: int):
    """Return (strictly_below, strictly_above) boolean arrays for the closed cell.

    A line meets the closed cell iff it is neither.
    """
    n = len(LA)
    if cell.bottom is None:
        below = np.zeros(n, dtype=bool)
    else:
        below = (diff_sign(LA, LB, LD, cell.bottom, cell.xl, -1, mag) < 0) & \
                (diff_sign(LA, LB, LD, cell.bottom, cell.xr, 1, mag) < 0)
    if cell.top is None:
        above = np.zeros(n, dtype=bool)
    else:
        above = (diff_sign(LA, LB, LD, cell.top, cell.xl, -1, mag) > 0) & \
                (diff_sign(LA, LB, LD, cell.top, cell.xr, 1, mag) > 0)
    return below, above


def classify_open(LA, LB, LD, cell: Trapezoid, mag: int):
    """Return (weakly_below, weakly_above) for the open cell.

    A line crosses the open interior iff it is neither; weakly-below lines
    lie below (or on the boundary of) every interior point.
    """
    n = len(LA)
    if cell.bottom is None:
        below = np.zeros(n, dtype=bool)
    else:
        below = (diff_sign(LA, LB, LD, cell.bottom, cell.xl, -1, mag) <= 0) & \
                (diff_sign(LA, LB, LD, cell.bottom, cell.xr, 1, mag) <= 0)
    if cell.top is None:
        above = np.zeros(n, dtype=bool)
    else:
        above = (diff_sign(LA, LB, LD, cell.top, cell.xl, -1, mag) >= 0) & \
                (diff_sign(LA, LB, LD, cell.top, cell.xr, 1, mag) >= 0)
    return below, above


class PointArrays:
    __slots__ = ("X", "Y", "W", "mag")

    def __init__(self, pts: Sequence):
        self.mag = max((max(abs(x), abs(y), w) for x, y, w in pts), default=1)
        dt = object if self.mag >= _SAFE else np.int64
        self.X = np.asarray([p[0] for p in pts], dtype=dt)
        self.Y = np.asarray([p[1] for p in pts], dtype=dt)
        self.W = np.asarray([p[2] for p in pts], dtype=dt)


def in_cell(X, Y, W, cell: Trapezoid, mag: int):
    """Half-open membership (upward-push rule) for arrays of points."""
    ok = np.ones(len(X), dtype=bool)
    if len(X) == 0:
        return ok
    for x, right in ((cell.xl, False), (cell.xr, True)):
        if x is None:
            continue
        p, q = x.numerator, x.denominator
        Xc, Wc = _cast((X, W), 2 * mag * max(abs(p), q) >= _SAFE)
        v = Xc * q - p * Wc
        ok &= (v < 0) if right else (v >= 0)
    for line, top in ((cell.bottom, False), (cell.top, True)):
        if line is None:
            continue
        A, B, D = line
        m = max(abs(A), abs(B), D)
        Xc, Yc, Wc = _cast((X, Y, W), 3 * mag * m >= _SAFE)
        v = D * Yc - A * Xc - B * Wc
        ok &= (v < 0) if top else (v >= 0)
    return ok


def subdivide(cell: Trapezoid, lines: Sequence) -> List[Trapezoid]:
    """Vertical decomposition of ``lines`` restricted to ``cell``.

    Returns trapezoids tiling the cell (interior-disjoint, covering it).
    """
    base = []
    if cell.bottom is not None:
        base.append(cell.bottom)
    if cell.top is not None:
        base.append(cell.top)
    arr = build_arrangement(base + list(lines), masks=True)
    bbit = 1 if cell.bottom is not None else 0
    tbit = (1 << len(base) - 1) if cell.top is not None else 0
    out = []
    for f in arr.faces:
        m = f.mask
        if bbit and not m & bbit:
            continue
        if tbit and m & tbit:
            continue
        for t in f.traps:
            xl, xr = t.xl, t.xr
            if cell.xl is not None and (xl is None or xl < cell.xl):
                xl = cell.xl
            if cell.xr is not None and (xr is None or xr > cell.xr):
                xr = cell.xr
            if xl is not None and xr is not None and xl >= xr:
                continue
            out.append(Trapezoid(t.bottom, t.top, xl, xr))
    return out


def sample_point(cell: Trapezoid):
    """A rational point strictly inside the cell."""
    if cell.xl is None and cell.xr is None:
        x = Fraction(0)
    elif cell.xl is None:
        x = cell.xr - 1
    elif cell.xr is None:
        x = cell.xl + 1
    else:
        x = (cell.xl + cell.xr) / 2

    def at(l):
        return Fraction(l[0] * x.numerator + l[1] * x.denominator, l[2] * x.denominator)

    if cell.bottom is None and cell.top is None:
        y = Fraction(0)
    elif cell.bottom is None:
        y = at(cell.top) - 1
    elif cell.top is None:
        y = at(cell.bottom) + 1
    else:
        y = (at(cell.bottom) + at(cell.top)) / 2
    return x, y
