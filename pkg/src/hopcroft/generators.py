"""Seeded instance generators.

Every generator is a pure function of its parameters and seed, and returns
raw integer tuples: points (X, Y, 1) and lines (A, B, 1) for y = A x + B.
"""
from __future__ import annotations

import random
from typing import Dict, List, Tuple

COORD = 1 << 20
SLOPE = 1 << 10


def _rng(tag, seed):
    # string seeds are hashed with sha512, so streams do not depend on PYTHONHASHSEED
    return random.Random(f"{tag}:{seed}")


def uniform_points(m: int, seed=0, xbound: int = SLOPE, ybound: int = COORD) -> List[tuple]:
    """Integer points with |x| <= xbound and |y| <= ybound."""
    rng = _rng("pts", seed)
    return [(rng.randint(-xbound, xbound), rng.randint(-ybound, ybound), 1) for _ in range(m)]


def uniform_lines(n: int, seed=0, slope: int = SLOPE, bound: int = COORD) -> List[tuple]:
    """Lines y = a x + b with integer |a| <= slope and |b| <= bound."""
    rng = _rng("lines", seed)
    return [(rng.randint(-slope, slope), rng.randint(-bound, bound), 1) for _ in range(n)]


def uniform(m: int, n: int, seed=0, xbound: int = SLOPE, ybound: int = COORD):
    """Points in [-xbound, xbound] x [-ybound, ybound]; lines with slopes up to
    xbound and intercepts up to ybound.  Matching the box aspect to the slope
    range keeps every line crossing the point cloud at a comparable angle."""
    return uniform_points(m, seed, xbound, ybound), uniform_lines(n, seed, xbound, ybound)


def grid(k: int):
    """Points on [1,k] x [1,2k^2], lines y = i x + j with 1 <= i <= k, 1 <= j <= k^2.

    2k^3 points, k^3 lines, and each line passes through exactly k points,
    so there are k^4 incidences.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    pts = [(x, y, 1) for x in range(1, k + 1) for y in range(1, 2 * k * k + 1)]
    lines = [(i, j, 1) for i in range(1, k + 1) for j in range(1, k * k + 1)]
    return pts, lines


def clustered(m: int, n: int, seed=0, clusters: int = 5, spread: int = 64):
    """Points in tight clusters; lines through cluster centres with small offsets."""
    rng = _rng("cl", seed)
    centres = [(rng.randint(-COORD, COORD), rng.randint(-COORD, COORD)) for _ in range(clusters)]
    pts = []
    for _ in range(m):
        cx, cy = rng.choice(centres)
        pts.append((cx + rng.randint(-spread, spread), cy + rng.randint(-spread, spread), 1))
    lines = []
    for _ in range(n):
        cx, cy = rng.choice(centres)
        a = rng.randint(-SLOPE, SLOPE)
        lines.append((a, cy - a * cx + rng.randint(-spread, spread), 1))
    return pts, lines


def degenerate(m: int, n: int, seed=0, box: int = 8):
    """Small coordinates: duplicate points and lines, many concurrent lines,
    points on lines and at vertices."""
    rng = _rng("deg", seed)
    pts = [(rng.randint(-box, box), rng.randint(-box, box), 1) for _ in range(max(1, m // 2))]
    while len(pts) < m:
        pts.append(rng.choice(pts))
    lines = []
    hubs = [(rng.randint(-box, box), rng.randint(-box, box)) for _ in range(3)]
    for t in range(n):
        if t % 3 == 0 and lines:
            lines.append(rng.choice(lines))
            continue
        hx, hy = rng.choice(hubs)
        a = rng.randint(-3, 3)
        lines.append((a, hy - a * hx, 1))
    rng.shuffle(pts)
    rng.shuffle(lines)
    return pts, lines


def segments(n: int, seed=0, bound: int = 1 << 12, shared: bool = False):
    """Random segments; with ``shared`` many endpoints repeat."""
    rng = _rng("seg", seed)
    pool = [(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(max(2, n // 2))]
    out = []
    while len(out) < n:
        if shared:
            p, q = rng.choice(pool), rng.choice(pool)
        else:
            p = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            q = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if p != q:
            out.append((p[0], p[1], q[0], q[1]))
    return out


def bichromatic(nr: int, nb: int, seed=0, bound: int = 8):
    """Red and blue integer points in a small box (many unit distances)."""
    rng = _rng("bi", seed)
    red = [(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(nr)]
    blue = [(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(nb)]
    return red, blue


GENERATORS: Dict[str, str] = {
    "uniform": "points+lines",
    "grid": "points+lines",
    "clustered": "points+lines",
    "degenerate": "points+lines",
    "segments": "segments",
    "bichromatic": "bichromatic",
}
