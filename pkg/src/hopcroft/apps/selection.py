"""k-th smallest red/blue distance by sampling-based selection.

The candidates are the squared distances of all red/blue pairs inside the
current window (lo, hi].  Each round samples s candidates, picks two sample
order statistics a and b around the expected position of the target and
checks with two disk-count passes that the target lies in (a, b].  If so the
window shrinks to (a, b]; otherwise the round is retried.  Once the window
holds few enough candidates they are listed and sorted directly.

Candidates are drawn without materializing them: a red point is picked with
probability proportional to its number of blue points inside the window,
then one of those blue points is picked uniformly by scanning.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional

import numpy as np

from .circles import _coords, _disk_counts, _to_int

# sample size s = S_MULT * n^0.3 and gap g = G_MULT * n^0.2
S_MULT = 64
G_MULT = 8
MAX_RETRIES = 3


def _arrays(red, blue):
    """Integer coordinate arrays after scaling by a common denominator L."""
    ired, iblue, _ = _to_int(_coords(red), _coords(blue), Fraction(0))
    L = 1
    for x, y in _coords(red) + _coords(blue):
        L = lcm(L, x.denominator, y.denominator)
    span = max([abs(v) for p in ired + iblue for v in p] + [1])
    dt = np.int64 if 8 * span * span < 1 << 62 else object
    R = np.array(ired, dtype=dt).reshape(-1, 2)
    B = np.array(iblue, dtype=dt).reshape(-1, 2)
    return R, B, L


def _row(R, B, i):
    d = B - R[i]
    return d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]


class SelectStats:
    def __init__(self):
        self.rounds = 0
        self.failures = 0
        self.fallback = False
        self.count_calls = 0
        self.window_sizes: List[int] = []
        self.enumerated = 0

    def as_dict(self):
        return dict(self.__dict__)


def distance_select_brute(red, blue, k) -> Fraction:
    if not 1 <= k <= len(red) * len(blue):
        raise ValueError(f"k={k} out of range 1..{len(red) * len(blue)}")
    R, B, L = _arrays(red, blue)
    ds = np.concatenate([_row(R, B, i) for i in range(len(R))])
    ds.sort()
    return Fraction(int(ds[k - 1]), L * L)


def distance_select(red, blue, k: int, seed=0, stats: Optional[SelectStats] = None,
                    s_mult: float = S_MULT, g_mult: float = G_MULT) -> Fraction:
    """Exact k-th smallest squared distance over red x blue (1-based)."""
    m, nb = len(red), len(blue)
    if not 1 <= k <= m * nb:
        raise ValueError(f"k={k} out of range 1..{m * nb}")
    st = stats if stats is not None else SelectStats()
    rng = random.Random(seed)
    R, B, L = _arrays(red, blue)
    # work with integer squared distances; the answer is scaled back at the end
    ired = [(int(x), int(y)) for x, y in R]
    iblue = [(int(x), int(y)) for x, y in B]
    n = max(m, nb)
    s = max(1, math.ceil(s_mult * n ** 0.3))
    g = max(1, math.ceil(g_mult * n ** 0.2))
    base = max(64, math.ceil(n ** (4 / 3)))

    def counts(v):
        """Per red: blue points at squared distance <= v."""
        st.count_calls += 1
        if v < 0:
            return [0] * m
        return _disk_counts(ired, iblue, v, seed=rng.randrange(1 << 30))

    lo, hi = None, None          # window (lo, hi]; None means unbounded
    c_lo = [0] * m
    c_hi = [nb] * m
    k_rel = k
    while True:
        c = [b - a for a, b in zip(c_lo, c_hi)]
        N = sum(c)
        st.window_sizes.append(N)
        if N <= base:
            return Fraction(_enumerate(R, B, c, lo, hi, k_rel, st), L * L)
        if st.failures >= MAX_RETRIES:
            st.fallback = True
            return distance_select_brute(red, blue, k)
        sample = _sample(R, B, c, lo, hi, s, rng)
        sample.sort()
        t = k_rel * s / N
        ia = math.ceil(t - g)
        ib = math.ceil(t + g)
        a = sample[ia - 1] if ia >= 1 else lo
        b = sample[ib - 1] if ib <= s else hi
        base_rank = sum(c_lo)
        ca = c_lo if a is lo else counts(a)
        ka = sum(ca) - base_rank
        if a is not lo and ka >= k_rel:
            # the target is at most a; it equals a when fewer than k_rel lie below a
            if sum(counts(a - 1)) - base_rank < k_rel:
                return Fraction(a, L * L)
            st.failures += 1
            continue
        cb = c_hi if b is hi else counts(b)
        kb = sum(cb) - base_rank
        if ka < k_rel <= kb and (kb - ka) < N:
            st.rounds += 1
            lo, hi, c_lo, c_hi, k_rel = a, b, ca, cb, k_rel - ka
        else:
            st.failures += 1


def _window_mask(d, lo, hi):
    mask = np.ones(len(d), dtype=bool)
    if lo is not None:
        mask &= d > lo
    if hi is not None:
        mask &= d <= hi
    return mask


def _sample(R, B, c, lo, hi, s, rng):
    """s candidates drawn uniformly (with replacement) from the window."""
    reds = [i for i in range(len(c)) if c[i]]
    weights = [c[i] for i in reds]
    picks: Dict[int, List[int]] = {}
    for i in rng.choices(reds, weights=weights, k=s):
        picks.setdefault(i, []).append(rng.randrange(c[i]))
    out = []
    for i, wanted in picks.items():
        d = _row(R, B, i)
        inside = d[_window_mask(d, lo, hi)]
        out.extend(int(inside[j]) for j in wanted)
    return out


def _enumerate(R, B, c, lo, hi, k_rel, st):
    parts = []
    for i in range(len(c)):
        if c[i]:
            d = _row(R, B, i)
            parts.append(d[_window_mask(d, lo, hi)])
    ds = np.concatenate(parts)
    st.enumerated = len(ds)
    ds.sort()
    return int(ds[k_rel - 1])
