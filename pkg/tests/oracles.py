"""Quadratic reference answers written independently of the package."""
from fractions import Fraction

import numpy as np


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on(a, b, p):
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _exact(v):
    return v if isinstance(v, int) else Fraction(v)


def segments_meet(s, t):
    a, b = (_exact(s[0]), _exact(s[1])), (_exact(s[2]), _exact(s[3]))
    c, d = (_exact(t[0]), _exact(t[1])), (_exact(t[2]), _exact(t[3]))
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return ((o1 == 0 and _on(a, b, c)) or (o2 == 0 and _on(a, b, d))
            or (o3 == 0 and _on(c, d, a)) or (o4 == 0 and _on(c, d, b)))


def intersecting_pairs(S):
    return sum(1 for i in range(len(S)) for j in range(i + 1, len(S)) if segments_meet(S[i], S[j]))


def component_labels(S):
    parent = list(range(len(S)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(S)):
        for j in range(i + 1, len(S)):
            if segments_meet(S[i], S[j]):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(len(S))]


def disk_counts(red, blue, r2):
    r2 = Fraction(r2)
    per = []
    for rx, ry in red:
        per.append(sum(1 for bx, by in blue if (Fraction(rx) - bx) ** 2 + (Fraction(ry) - by) ** 2 <= r2))
    return sum(per), per


def kth_distance(red, blue, k):
    ds = sorted((Fraction(rx) - bx) ** 2 + (Fraction(ry) - by) ** 2 for rx, ry in red for bx, by in blue)
    return ds[k - 1]


def _int_arrays(red, blue):
    R = np.array(red, dtype=np.int64).reshape(-1, 2)
    B = np.array(blue, dtype=np.int64).reshape(-1, 2)
    return R, B


def disk_counts_int(red, blue, r2):
    """Integer coordinates only; r2 may be a Fraction."""
    r2 = Fraction(r2)
    R, B = _int_arrays(red, blue)
    per = []
    for x, y in R:
        d = (B[:, 0] - x) ** 2 + (B[:, 1] - y) ** 2
        per.append(int((d * r2.denominator <= r2.numerator).sum()))
    return sum(per), per


def kth_distance_int(red, blue, k):
    R, B = _int_arrays(red, blue)
    d = ((R[:, None, 0] - B[None, :, 0]) ** 2 + (R[:, None, 1] - B[None, :, 1]) ** 2).ravel()
    return int(np.partition(d, k - 1)[k - 1])
