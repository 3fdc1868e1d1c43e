"""Line arrangements built by an exact plane sweep.

The sweep keeps the lines in bottom-to-top order along a vertical sweep line
and processes crossings left to right.  Lines through a common point form a
contiguous block that is reversed in one step, so concurrent lines, parallel
bundles and duplicate lines need no special casing.  The space between two
consecutive lines (a *gap*) always belongs to exactly one face; faces are
opened and closed as blocks reverse.

Query points can ride along the sweep as extra events.  A point is placed
using an infinitesimal upward push ``(x + eps^2, y + eps)``: a point on a line
counts as lying above it, and a point on a vertical wall counts as lying to its
right.  With ``rule="down"`` the push is ``(x + eps^2, y - eps)`` instead,
which puts points on a line below it.

Faces of a line arrangement are identified by the set of lines lying below
them.  When ``masks=True`` that set is stored as a Python int bitmask over
the input line indices; duplicated input lines get identical bits.
"""
from __future__ import annotations

import heapq
from bisect import bisect_right
from fractions import Fraction
from typing import List, Optional, Sequence

from .geom import Line, Point

INF = float("inf")


def _raw_line(l):
    return l.key if isinstance(l, Line) else tuple(l)


def _raw_point(p):
    return p.key if isinstance(p, Point) else tuple(p)


def group_lines(raw_lines):
    """Collapse duplicates.

    Returns (distinct, members) where ``members[i]`` lists the input indices
    equal to ``distinct[i]``.
    """
    index = {}
    distinct, members = [], []
    for i, l in enumerate(raw_lines):
        j = index.get(l)
        if j is None:
            index[l] = len(distinct)
            distinct.append(l)
            members.append([i])
        else:
            members[j].append(i)
    return distinct, members


def initial_order(lines):
    """Bottom-to-top order at x = -infinity: slope descending, then intercept."""
    if all(l[2] == 1 for l in lines):
        return sorted(range(len(lines)), key=lambda i: (-lines[i][0], lines[i][1]))
    return sorted(range(len(lines)),
                  key=lambda i: (-Fraction(lines[i][0], lines[i][2]),
                                 Fraction(lines[i][1], lines[i][2])))


def _crossing(lo, hi):
    """Event for lines lo (below) and hi (above) if they cross to the right."""
    A1, B1, D1 = lo
    A2, B2, D2 = hi
    den = A1 * D2 - A2 * D1
    if den <= 0:
        return None
    num = B2 * D1 - B1 * D2
    return num / den, num, den


class Vertex:
    __slots__ = ("id", "x", "y", "lines", "mult")

    def __init__(self, vid, x, y, lines, mult):
        self.id, self.x, self.y, self.lines, self.mult = vid, x, y, lines, mult

    def __repr__(self):
        return f"Vertex({self.id}, {self.x}, {self.y}, lines={self.lines})"


class Edge:
    """Maximal piece of one (distinct) line between consecutive vertices."""

    __slots__ = ("id", "line", "left", "right", "below", "above")

    def __init__(self, eid, line, left, right, below, above):
        self.id = eid
        self.line = line      # distinct line index
        self.left = left      # vertex id or None (-infinity)
        self.right = right
        self.below = below    # face ids on either side
        self.above = above


class Trapezoid:
    """Vertical-decomposition cell.

    ``bottom``/``top`` are raw line triples (None when unbounded) and
    ``xl``/``xr`` are Fractions (None when unbounded).
    """

    __slots__ = ("bottom", "top", "xl", "xr", "face")

    def __init__(self, bottom, top, xl, xr, face=None):
        self.bottom, self.top, self.xl, self.xr, self.face = bottom, top, xl, xr, face

    def contains(self, p) -> bool:
        """Membership of a point under the upward-push rule (half-open cell)."""
        X, Y, W = _raw_point(p)
        if self.xl is not None and X * self.xl.denominator < self.xl.numerator * W:
            return False
        if self.xr is not None and X * self.xr.denominator >= self.xr.numerator * W:
            return False
        if self.bottom is not None:
            A, B, D = self.bottom
            if D * Y - A * X - B * W < 0:
                return False
        if self.top is not None:
            A, B, D = self.top
            if D * Y - A * X - B * W >= 0:
                return False
        return True

    def __repr__(self):
        return f"Trapezoid(bottom={self.bottom}, top={self.top}, xl={self.xl}, xr={self.xr})"


class Face:
    __slots__ = ("id", "below", "mask", "left", "right", "bottom", "top", "traps")

    def __init__(self, fid, below, mask):
        self.id = fid
        self.below = below      # multiplicity count of lines strictly below
        self.mask = mask        # bitmask over input indices, or None
        self.left = None        # leftmost vertex id, None if unbounded
        self.right = None
        self.bottom = []        # edge ids of the lower chain, left to right
        self.top = []           # edge ids of the upper chain, left to right
        self.traps = []         # Trapezoids, left to right

    @property
    def walls(self):
        """Distinct x of the face's vertices, i.e. the VD wall positions."""
        return [t.xl for t in self.traps[1:]]

    @property
    def bounded(self):
        return self.left is not None and self.right is not None and bool(self.top) and bool(self.bottom)


class Arrangement:
    """Planar subdivision induced by a list of lines (DCEL-style records).

    >>> arr = build_arrangement([Line(0, 0), Line(1, 0), Line(-1, 1)])
    >>> len(arr.vertices), len(arr.faces)
    (3, 7)
    """

    def __init__(self, lines, distinct, members):
        self.lines = lines            # raw input triples
        self.distinct = distinct      # distinct raw triples
        self.members = members        # input indices per distinct line
        self.mult = [len(m) for m in members]
        self.vertices: List[Vertex] = []
        self.edges: List[Edge] = []
        self.faces: List[Face] = []
        self.point_faces = None       # filled when queries ride the sweep
        self.preds = 0                # predicate evaluations spent building
        self._by_mask = None

    # -- derived views --
    @property
    def vd(self) -> List[Trapezoid]:
        return [t for f in self.faces for t in f.traps]

    def face_by_mask(self, mask) -> Face:
        if self._by_mask is None:
            self._by_mask = {f.mask: f for f in self.faces}
        return self._by_mask[mask]

    def halfedges(self):
        """Return (origin, twin, face, next) arrays of a half-edge structure.

        Half-edge ``2e`` runs left to right along edge ``e`` with the face
        above on its left; ``2e+1`` is its twin.  ``next`` is None where a
        face boundary escapes to infinity.
        """
        E = len(self.edges)
        origin = [None] * (2 * E)
        face = [None] * (2 * E)
        nxt = [None] * (2 * E)
        twin = [i ^ 1 for i in range(2 * E)]
        for e in self.edges:
            origin[2 * e.id] = e.left
            origin[2 * e.id + 1] = e.right
            face[2 * e.id] = e.above
            face[2 * e.id + 1] = e.below
        for f in self.faces:
            cyc = [2 * e for e in f.bottom] + [2 * e + 1 for e in reversed(f.top)]
            for a, b in zip(cyc, cyc[1:]):
                # consecutive only if they share a finite vertex
                ea, eb = self.edges[a >> 1], self.edges[b >> 1]
                end_a = ea.right if a % 2 == 0 else ea.left
                start_b = eb.left if b % 2 == 0 else eb.right
                if end_a is not None and end_a == start_b:
                    nxt[a] = b
            if f.bounded and cyc:
                nxt[cyc[-1]] = cyc[0]
        return origin, twin, face, nxt

    def euler_ok(self) -> bool:
        """V - E + F = 1 for line arrangements (one extra vertex at infinity)."""
        return len(self.vertices) + 1 - len(self.edges) + len(self.faces) == 2

    def locate_brute(self, p, rule="up"):
        """Face containing ``p`` by scanning every line (oracle)."""
        X, Y, W = _raw_point(p)
        mask = 0
        for i, (A, B, D) in enumerate(self.lines):
            v = D * Y - A * X - B * W
            if v > 0 or (v == 0 and rule == "up"):
                mask |= 1 << i
        return mask


def _line_y(l, x: Fraction):
    A, B, D = l
    return Fraction(A * x.numerator + B * x.denominator, D * x.denominator)


def build_arrangement(lines: Sequence, points: Sequence = (), rule: str = "up",
                      masks: bool = True) -> Arrangement:
    """Build the arrangement of ``lines``; optionally locate ``points``.

    When points are given, ``arr.point_faces[i]`` is the face id containing
    point ``i`` under the chosen push rule.
    """
    raw = [_raw_line(l) for l in lines]
    distinct, members = group_lines(raw)
    arr = Arrangement(raw, distinct, members)
    n = len(distinct)
    mult = arr.mult
    bits = None
    if masks:
        bits = []
        for m in members:
            b = 0
            for i in m:
                b |= 1 << i
            bits.append(b)

    order = initial_order(distinct)
    pos = [0] * n
    for k, l in enumerate(order):
        pos[l] = k
    below = [0] * (n + 1)
    gmask = [0] * (n + 1) if masks else None
    for g in range(1, n + 1):
        below[g] = below[g - 1] + mult[order[g - 1]]
        if masks:
            gmask[g] = gmask[g - 1] | bits[order[g - 1]]

    faces = arr.faces
    gap_face = []
    for g in range(n + 1):
        f = Face(len(faces), below[g], gmask[g] if masks else None)
        faces.append(f)
        gap_face.append(f.id)
    gap_start = [None] * (n + 1)
    last_vertex = [None] * n
    edges, vertices = arr.edges, arr.vertices

    def close_trap(g, x):
        s = gap_start[g]
        if s is not None and s == x:
            return
        f = faces[gap_face[g]]
        f.traps.append(Trapezoid(distinct[order[g - 1]] if g > 0 else None,
                                 distinct[order[g]] if g < n else None,
                                 s, x, f.id))

    def add_edge(l, right, below_f, above_f):
        e = Edge(len(edges), l, last_vertex[l], right, below_f, above_f)
        edges.append(e)
        faces[above_f].bottom.append(e.id)
        faces[below_f].top.append(e.id)

    tally = [n - 1 if n > 1 else 0]   # predicate evaluations: crossing tests and comparisons
    heap = []
    for k in range(n - 1):
        ev = _crossing(distinct[order[k]], distinct[order[k + 1]])
        if ev is not None:
            heap.append(ev + (order[k], order[k + 1]))
    heapq.heapify(heap)

    qs = []
    if points:
        rp = [_raw_point(p) for p in points]
        qs = sorted(range(len(rp)), key=lambda i: Fraction(rp[i][0], rp[i][2]))
        arr.point_faces = [None] * len(rp)

    def process(num, den, lo, hi):
        if pos[hi] != pos[lo] + 1:
            return
        x = Fraction(num, den)
        Alo, Blo, Dlo = distinct[lo]
        ynum = Alo * num + Blo * den  # y = ynum / (Dlo * den)
        i, j = pos[lo], pos[hi]
        while i > 0:
            A, B, D = distinct[order[i - 1]]
            if (A * num + B * den) * Dlo == ynum * D:
                i -= 1
            else:
                break
        while j < n - 1:
            A, B, D = distinct[order[j + 1]]
            if (A * num + B * den) * Dlo == ynum * D:
                j += 1
            else:
                break
        block = order[i:j + 1]
        tally[0] += j - i + 4
        v = Vertex(len(vertices), x, Fraction(ynum, Dlo * den), block[:],
                   sum(mult[l] for l in block))
        vertices.append(v)
        for g in range(i, j + 2):
            close_trap(g, x)
        for k in range(i, j + 1):
            add_edge(order[k], v.id, gap_face[k], gap_face[k + 1])
        for g in range(i + 1, j + 1):
            faces[gap_face[g]].right = v.id
        block.reverse()
        order[i:j + 1] = block
        for k in range(i, j + 1):
            pos[order[k]] = k
            last_vertex[order[k]] = v.id
        for g in range(i + 1, j + 1):
            below[g] = below[g - 1] + mult[order[g - 1]]
            if masks:
                gmask[g] = gmask[g - 1] | bits[order[g - 1]]
            f = Face(len(faces), below[g], gmask[g] if masks else None)
            f.left = v.id
            faces.append(f)
            gap_face[g] = f.id
        for g in range(i, j + 2):
            gap_start[g] = x
        if i > 0:
            ev = _crossing(distinct[order[i - 1]], distinct[order[i]])
            if ev is not None:
                heapq.heappush(heap, ev + (order[i - 1], order[i]))
        if j < n - 1:
            ev = _crossing(distinct[order[j]], distinct[order[j + 1]])
            if ev is not None:
                heapq.heappush(heap, ev + (order[j], order[j + 1]))

    def answer(qidx):
        X, Y, W = rp[qidx]
        lo_, hi_ = 0, n
        while lo_ < hi_:
            tally[0] += 1
            mid = (lo_ + hi_) >> 1
            A, B, D = distinct[order[mid]]
            s = D * Y - A * X - B * W
            if s > 0 or (s == 0 and rule == "up"):
                lo_ = mid + 1
            else:
                hi_ = mid
        arr.point_faces[qidx] = gap_face[lo_]

    _run_events(heap, qs, rp if points else None, process, answer)

    for g in range(n + 1):
        close_trap(g, None)
    for k in range(n):
        add_edge(order[k], None, gap_face[k], gap_face[k + 1])
    arr.preds = tally[0]
    return arr


def _run_events(heap, qs, rp, process, answer):
    """Drive crossing events and query points in exact x order.

    Queries at the same x as a vertex are answered after it (points on a
    wall belong to the right side).
    """
    qi, nq = 0, len(qs)
    fqs = [rp[i][0] / rp[i][2] for i in qs]
    fqs.append(INF)
    pop = heapq.heappop
    while True:
        fq = fqs[qi]
        if heap:
            fx = heap[0][0]
        elif qi >= nq:
            return
        else:
            fx = INF
        if fx < fq:
            h = heap
            if (len(h) > 1 and h[1][0] == fx) or (len(h) > 2 and h[2][0] == fx):
                _tie(fx, heap, qs, qi, rp, process, answer)
                continue
            _, num, den, lo, hi = pop(heap)
            process(num, den, lo, hi)
        elif fq < fx:
            answer(qs[qi])
            qi += 1
        else:
            qi = _tie(fx, heap, qs, qi, rp, process, answer)


def _tie(fx, heap, qs, qi, rp, process, answer):
    """Process every event and query whose float abscissa equals ``fx``."""
    exact = []
    pop, push = heapq.heappop, heapq.heappush
    nq = len(qs)
    while True:
        while heap and heap[0][0] == fx:
            _, num, den, lo, hi = pop(heap)
            push(exact, (Fraction(num, den), num, den, lo, hi))
        q_here = qi < nq and rp[qs[qi]][0] / rp[qs[qi]][2] == fx
        if exact:
            if q_here:
                X, _, W = rp[qs[qi]]
                if exact[0][0] > Fraction(X, W):
                    answer(qs[qi])
                    qi += 1
                    continue
            _, num, den, lo, hi = pop(exact)
            process(num, den, lo, hi)
        elif q_here:
            answer(qs[qi])
            qi += 1
        else:
            return qi


# ---------------------------------------------------------------------------
# streaming counts (no face records): the arrangement-based counting baseline


def sweep_counts(lines: Sequence, points: Sequence, weights=None, counter=None):
    """For every point return (#lines strictly below, #lines below or through).

    Duplicated lines count with multiplicity.  With ``weights`` (one per
    input line) a third list with the weight sum of strictly-below lines is
    returned.  ``counter`` (a list with one int) accumulates predicate
    evaluations.
    """
    raw = [_raw_line(l) for l in lines]
    rp = [_raw_point(p) for p in points]
    m = len(rp)
    lt = [0] * m
    le = [0] * m
    wlt = [0] * m if weights is not None else None
    if not raw:
        return (lt, le, wlt) if weights is not None else (lt, le)
    distinct, members = group_lines(raw)
    n = len(distinct)
    mult = [len(g) for g in members]
    wt = None
    if weights is not None:
        wt = [sum(weights[i] for i in g) for g in members]
    order = initial_order(distinct)
    pos = [0] * n
    for k, l in enumerate(order):
        pos[l] = k
    below = [0] * (n + 1)
    wbelow = [0] * (n + 1)
    for g in range(1, n + 1):
        below[g] = below[g - 1] + mult[order[g - 1]]
        if wt is not None:
            wbelow[g] = wbelow[g - 1] + wt[order[g - 1]]
    heap = []
    for k in range(n - 1):
        ev = _crossing(distinct[order[k]], distinct[order[k + 1]])
        if ev is not None:
            heap.append(ev + (order[k], order[k + 1]))
    heapq.heapify(heap)
    qs = sorted(range(m), key=lambda i: Fraction(rp[i][0], rp[i][2]))
    preds = [0]
    push = heapq.heappush

    def process(num, den, lo, hi):
        i, j = pos[lo], pos[hi]
        if j != i + 1:
            return
        Alo, Blo, Dlo = distinct[lo]
        ynum = Alo * num + Blo * den
        while i > 0:
            A, B, D = distinct[order[i - 1]]
            if (A * num + B * den) * Dlo == ynum * D:
                i -= 1
            else:
                break
        while j < n - 1:
            A, B, D = distinct[order[j + 1]]
            if (A * num + B * den) * Dlo == ynum * D:
                j += 1
            else:
                break
        preds[0] += j - i + 3
        if j == i + 1:
            order[i], order[j] = hi, lo
            pos[hi], pos[lo] = i, j
            below[j] = below[i] + mult[hi]
            if wt is not None:
                wbelow[j] = wbelow[i] + wt[hi]
        else:
            block = order[i:j + 1]
            block.reverse()
            order[i:j + 1] = block
            for k in range(i, j + 1):
                pos[order[k]] = k
            for g in range(i + 1, j + 1):
                below[g] = below[g - 1] + mult[order[g - 1]]
                if wt is not None:
                    wbelow[g] = wbelow[g - 1] + wt[order[g - 1]]
        if i > 0:
            a, b = order[i - 1], order[i]
            A1, B1, D1 = distinct[a]
            A2, B2, D2 = distinct[b]
            den2 = A1 * D2 - A2 * D1
            if den2 > 0:
                num2 = B2 * D1 - B1 * D2
                push(heap, (num2 / den2, num2, den2, a, b))
        if j < n - 1:
            a, b = order[j], order[j + 1]
            A1, B1, D1 = distinct[a]
            A2, B2, D2 = distinct[b]
            den2 = A1 * D2 - A2 * D1
            if den2 > 0:
                num2 = B2 * D1 - B1 * D2
                push(heap, (num2 / den2, num2, den2, a, b))

    def answer(qidx):
        X, Y, W = rp[qidx]
        # first gap whose upper line is not strictly below the point
        lo_, hi_ = 0, n
        while lo_ < hi_:
            mid = (lo_ + hi_) >> 1
            A, B, D = distinct[order[mid]]
            if D * Y - A * X - B * W > 0:
                lo_ = mid + 1
            else:
                hi_ = mid
        g1 = lo_
        hi_ = n
        while lo_ < hi_:
            mid = (lo_ + hi_) >> 1
            A, B, D = distinct[order[mid]]
            if D * Y - A * X - B * W >= 0:
                lo_ = mid + 1
            else:
                hi_ = mid
        preds[0] += 2 * max(1, n.bit_length())
        lt[qidx] = below[g1]
        le[qidx] = below[lo_]
        if wt is not None:
            wlt[qidx] = wbelow[g1]

    _run_events(heap, qs, rp, process, answer)
    if counter is not None:
        counter[0] += preds[0]
    return (lt, le, wlt) if weights is not None else (lt, le)


# ---------------------------------------------------------------------------
# annotations


def annotate_below(arr: Arrangement) -> Arrangement:
    """Recompute every face's below-count by walking across edges.

    Starts from the face below all lines (count 0) and adds the line's
    multiplicity on each upward crossing.  Independent of the sweep's own
    bookkeeping, so it doubles as a consistency check.
    """
    return _propagate(arr, list(arr.mult), attr="below")


def _propagate(arr, wline, attr=None):
    nf = len(arr.faces)
    val = [None] * nf
    if nf == 0:
        return arr if attr else val
    adj = [[] for _ in range(nf)]
    for e in arr.edges:
        adj[e.below].append((e.above, wline[e.line]))
        adj[e.above].append((e.below, -wline[e.line]))
    # the face below everything has no lower chain
    start = next(f.id for f in arr.faces if not f.bottom)
    val[start] = 0 * (wline[0] if wline else 0)
    stack = [start]
    while stack:
        f = stack.pop()
        for g, d in adj[f]:
            if val[g] is None:
                val[g] = val[f] + d
                stack.append(g)
    if attr:
        for f in arr.faces:
            setattr(f, attr, val[f.id])
        return arr
    return val


def _edge_rep_x(arr, e: Edge) -> Fraction:
    """An abscissa strictly inside edge ``e``."""
    vl = arr.vertices[e.left].x if e.left is not None else None
    vr = arr.vertices[e.right].x if e.right is not None else None
    if vl is None and vr is None:
        return Fraction(0)
    if vl is None:
        return vr - 1
    if vr is None:
        return vl + 1
    return (vl + vr) / 2


def face_weight_sums(arr: Arrangement, line_weights, face_weights):
    """(per-face weight of lines strictly below, per-line weight of faces strictly above).

    ``line_weights`` has one entry per input line (duplicates included) and
    ``face_weights`` one per face of ``arr``.  Only additions are used.

    The per-line part maps each face to a representative point on one of
    its boundary edges: the edge at its highest vertex for bounded faces,
    otherwise the rightmost edge of its upper chain (or lower chain when it
    has none).  For a line h, the faces above h assigned to another line l
    form a prefix or suffix of l's representatives sorted by x, split where
    l crosses h.
    """
    zero = 0
    wl = [zero] * len(arr.distinct)
    for d, mem in enumerate(arr.members):
        s = zero
        for i in mem:
            s = s + line_weights[i]
        wl[d] = s
    per_face = _propagate(arr, wl) if arr.faces else []
    if not arr.distinct:
        return per_face, []

    n = len(arr.distinct)
    reps = [[] for _ in range(n)]   # per distinct line: (x, weight)
    own = [zero] * n                # faces lying on top of their own line
    for f in arr.faces:
        w = face_weights[f.id]
        if f.bounded:
            vid = max((v for e in f.top + f.bottom
                       for v in (arr.edges[e].left, arr.edges[e].right)),
                      key=lambda v: (arr.vertices[v].y, arr.vertices[v].x))
            cands = [e for e in f.top if vid in (arr.edges[e].left, arr.edges[e].right)]
            if not cands:
                cands = [e for e in f.bottom if vid in (arr.edges[e].left, arr.edges[e].right)]
            eid = cands[0]
        elif f.top:
            eid = f.top[-1]
        else:
            eid = f.bottom[-1]
        e = arr.edges[eid]
        if eid in f.bottom:
            own[e.line] = own[e.line] + w
        reps[e.line].append((_edge_rep_x(arr, e), w))

    sorted_x, prefix = [], []
    for l in range(n):
        rs = sorted(reps[l], key=lambda t: t[0])
        xs = [t[0] for t in rs]
        pre = [zero]
        for _, w in rs:
            pre.append(pre[-1] + w)
        sorted_x.append(xs)
        prefix.append(pre)

    per_distinct = [zero] * n
    D = arr.distinct
    for h in range(n):
        Ah, Bh, Dh = D[h]
        tot = own[h]
        for l in range(n):
            if l == h or not reps[l]:
                continue
            Al, Bl, Dl = D[l]
            s = Al * Dh - Ah * Dl
            pre = prefix[l]
            if s == 0:
                if Bl * Dh > Bh * Dl:
                    tot = tot + pre[-1]
                continue
            xh = Fraction(Bh * Dl - Bl * Dh, s)
            k = bisect_right(sorted_x[l], xh)
            if s > 0:
                tot = tot + (pre[-1] - pre[k])
            else:
                tot = tot + pre[k]
        per_distinct[h] = tot
    per_line = [zero] * len(arr.lines)
    for d, mem in enumerate(arr.members):
        for i in mem:
            per_line[i] = per_distinct[d]
    return per_face, per_line


def build_vd(lines: Sequence) -> List[Trapezoid]:
    """Vertical decomposition: every face split by walls at its vertices."""
    return build_arrangement(lines, masks=False).vd
