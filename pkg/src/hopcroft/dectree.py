"""Comparison-counting laboratory for decision-tree algorithms with linear predicates.

The hidden input is a rational vector x in R^N.  A predicate is a strict
linear inequality <w, x> + t > 0, and a comparison may also be the
conjunction of a few such inequalities (e.g. "p_i < p_j < p_k").  The
hyperplanes of all predicates cut R^N into open cells; the algorithms keep the
set of cells consistent with every answer so far (the active cells) and use
cell counts to decide what to ask next.  Only comparisons against the hidden
input are counted; cell bookkeeping is free.

Cells are certified full-dimensional by exact feasibility tests of strict
linear systems.  The fast path solves a floating-point LP (HiGHS) and then
checks its answer exactly: a rational witness point for feasible systems, a
rational Gordan certificate (y >= 0, y != 0, y^T A = 0) for infeasible ones.
When rounding does not give a valid certificate an exact simplex over
Fractions decides.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

MAX_DIM = 8
MAX_PREDICATES = 64
MAX_CELLS = 1_000_000


class GuardrailError(ValueError):
    pass


class PromiseViolation(RuntimeError):
    """A search precondition does not hold on the active cells."""


# ---------------------------------------------------------------------------
# predicates


def _frac_vec(v):
    return tuple(Fraction(c) for c in v)


@dataclass(frozen=True)
class LinPredicate:
    """<w, x> + t > 0."""
    w: Tuple[Fraction, ...]
    t: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "w", _frac_vec(self.w))
        object.__setattr__(self, "t", Fraction(self.t))
        if not any(self.w):
            raise ValueError("predicate has a zero coefficient vector")

    def value(self, x) -> Fraction:
        return sum((a * b for a, b in zip(self.w, x)), Fraction(0)) + self.t

    def negated(self) -> "LinPredicate":
        return LinPredicate(tuple(-a for a in self.w), -self.t)

    def key(self):
        """Scale-free key of the hyperplane and the orientation (+1/-1) of this predicate."""
        vals = list(self.w) + [self.t]
        den = 1
        for v in vals:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        lead = next(v for v in ints if v)
        s = 1 if lead > 0 else -1
        return tuple(s * v for v in ints), s


def less_than(p, q) -> LinPredicate:
    """Predicate p(x) < q(x) for linear forms given as (w, t)."""
    (wp, tp), (wq, tq) = p, q
    return LinPredicate(tuple(Fraction(b) - Fraction(a) for a, b in zip(wp, wq)), Fraction(tq) - Fraction(tp))


class PredicateSet:
    """Distinct hyperplanes of a family of predicates in R^N."""

    def __init__(self, N: int, preds: Sequence[LinPredicate] = ()):
        self.N = N
        self.planes: List[LinPredicate] = []
        self.index: Dict[tuple, int] = {}
        for p in preds:
            self.add(p)

    def add(self, p: LinPredicate) -> Tuple[int, bool]:
        """Register p; returns (hyperplane index, True if p is its positive side)."""
        if len(p.w) != self.N:
            raise ValueError(f"predicate over {len(p.w)} variables, expected {self.N}")
        key, s = p.key()
        if key not in self.index:
            self.index[key] = len(self.planes)
            self.planes.append(p if s > 0 else p.negated())
        return self.index[key], s > 0

    def __len__(self):
        return len(self.planes)


# A comparison is a conjunction of literals (plane index, positive side?).
# An empty conjunction is always true; a literal (-1, b) is the constant b.
Comparison = Tuple[Tuple[int, bool], ...]


# ---------------------------------------------------------------------------
# exact feasibility


class LPStats:
    def __init__(self):
        self.calls = 0
        self.float_feasible = 0
        self.float_infeasible = 0
        self.exact_fallbacks = 0

    def as_dict(self):
        return dict(self.__dict__)


LP_STATS = LPStats()


def _simplex_max(c, A, b):
    """Exact max c.z s.t. A z <= b, z >= 0.  Returns (status, value, z)."""
    m, n = len(A), len(c)
    # tableau rows: [coeffs over n + m + 1 (aux)] | rhs ; basis list
    W = n + m + 1
    aux = n + m
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(-1)]
        row[n + i] = Fraction(1)
        T.append(row + [Fraction(b[i])])
    basis = [n + i for i in range(m)]

    def pivot(r, col):
        pr = T[r]
        piv = pr[col]
        if piv != 1:
            T[r] = pr = [v / piv for v in pr]
        for i in range(len(T)):
            if i != r:
                f = T[i][col]
                if f:
                    ri = T[i]
                    T[i] = [a - f * p for a, p in zip(ri, pr)]
        basis[r] = col

    def run(obj, allowed):
        # obj: list of W coefficients (maximize); reduced costs recomputed each step
        while True:
            z = [obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(m)) for j in range(W)]
            col = next((j for j in range(W) if j in allowed and z[j] > 0), None)
            if col is None:
                return "optimal"
            best = None
            for i in range(m):
                a = T[i][col]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], col)

    if m and min(T[i][-1] for i in range(m)) < 0:
        r = min(range(m), key=lambda i: T[i][-1])
        pivot(r, aux)
        obj = [Fraction(0)] * W
        obj[aux] = Fraction(-1)
        run(obj, set(range(W)))
        val = sum(obj[basis[i]] * T[i][-1] for i in range(m))
        if val < 0:
            return "infeasible", None, None
        if aux in basis:
            r = basis.index(aux)
            col = next((j for j in range(W) if j != aux and T[r][j] != 0), None)
            if col is not None:
                pivot(r, col)
    obj = [Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    allowed = set(range(W)) - {aux}
    status = run(obj, allowed)
    if status == "unbounded":
        return "unbounded", None, None
    z = [Fraction(0)] * W
    for i in range(m):
        z[basis[i]] = T[i][-1]
    return "optimal", sum(cj * zj for cj, zj in zip(c, z[:n])), z[:n]


def exact_strict_feasible(rows, consts) -> Optional[List[Fraction]]:
    """Witness of {a_i . x + t_i > 0} by exact simplex, or None."""
    N = len(rows[0]) if rows else 0
    # homogenize: variables x = u - v, x0, eps; maximize eps
    # a.x + t x0 - eps >= 0, x0 - eps >= 0, eps <= 1, x0 <= 1
    nv = 2 * N + 2
    A, b = [], []
    for a, t in zip(rows, consts):
        A.append([-Fraction(v) for v in a] + [Fraction(v) for v in a] + [-Fraction(t), Fraction(1)])
        b.append(Fraction(0))
    A.append([Fraction(0)] * (2 * N) + [Fraction(-1), Fraction(1)])
    b.append(Fraction(0))
    A.append([Fraction(0)] * (2 * N) + [Fraction(0), Fraction(1)])
    b.append(Fraction(1))
    A.append([Fraction(0)] * (2 * N) + [Fraction(1), Fraction(0)])
    b.append(Fraction(1))
    c = [Fraction(0)] * (nv - 1) + [Fraction(1)]
    status, val, z = _simplex_max(c, A, b)
    if status != "optimal" or val <= 0:
        return None
    x0 = z[2 * N]
    return [(z[j] - z[N + j]) / x0 for j in range(N)]


def int_row(w, t) -> Tuple[int, ...]:
    """Integer row (a_1..a_N, t) with the same sign as <w, x> + t."""
    vals = [Fraction(v) for v in w] + [Fraction(t)]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return tuple(int(v * den) for v in vals)


def _witness_ok(rows, X, D) -> bool:
    for r in rows:
        acc = r[-1] * D
        for a, xi in zip(r, X):
            acc += a * xi
        if acc <= 0:
            return False
    return True


def _gordan_ok(rows, y) -> bool:
    """y >= 0, not all zero, y^T [rows ; (0..0, 1)] = 0."""
    if any(v < 0 for v in y) or not any(y):
        return False
    for j in range(len(rows[0])):
        acc = sum(yi * r[j] for yi, r in zip(y, rows))
        if j == len(rows[0]) - 1:
            acc += y[-1]
        if acc:
            return False
    return True


def _scaled(vec, den):
    """Integers proportional to rational roundings of vec with a shared denominator."""
    fr = [Fraction(float(v)).limit_denominator(den) for v in vec]
    L = 1
    for f in fr:
        L = L * f.denominator // math.gcd(L, f.denominator)
    return [int(f * L) for f in fr]


def feasible_int(rows: Sequence[Tuple[int, ...]], stats: LPStats = LP_STATS):
    """Integer witness (X, D) with a.X + t D > 0 for every row, or None."""
    from scipy.optimize import linprog

    stats.calls += 1
    if not rows:
        return None
    N = len(rows[0]) - 1
    A = np.array(rows, dtype=float)
    Ah = np.vstack([A, np.eye(N + 1)[-1:]])           # with x0 > 0
    # max eps: Ah z >= eps, |z| <= 1
    A_ub = np.hstack([-Ah, np.ones((len(Ah), 1))])
    res = linprog(np.r_[np.zeros(N + 1), -1.0], A_ub=A_ub, b_ub=np.zeros(len(Ah)),
                  bounds=[(-1, 1)] * (N + 1) + [(None, 1)], method="highs")
    if res.status == 0 and -res.fun > 1e-9:
        for den in (1 << 12, 1 << 20, 1 << 30):
            z = _scaled(res.x[:N + 1], den)
            if z[N] > 0 and _witness_ok(rows, z[:N], z[N]):
                stats.float_feasible += 1
                return z[:N], z[N]
    elif res.status == 0:
        # Gordan certificate: y >= 0, sum y = 1, y^T Ah = 0
        cert = linprog(np.zeros(len(Ah)), A_eq=np.vstack([Ah.T, np.ones((1, len(Ah)))]),
                       b_eq=np.r_[np.zeros(N + 1), 1.0], bounds=[(0, None)] * len(Ah), method="highs")
        if cert.status == 0:
            for den in (1 << 8, 1 << 16, 1 << 24):
                if _gordan_ok(rows, _scaled(cert.x, den)):
                    stats.float_infeasible += 1
                    return None
    stats.exact_fallbacks += 1
    x = exact_strict_feasible([r[:-1] for r in rows], [r[-1] for r in rows])
    if x is None:
        return None
    D = 1
    for v in x:
        D = D * v.denominator // math.gcd(D, v.denominator)
    return [int(v * D) for v in x], D


def strict_feasible(rows, consts, stats: LPStats = LP_STATS) -> Optional[List[Fraction]]:
    """Exact answer to "is {a_i . x + t_i > 0} nonempty?" as a witness point or None."""
    if not rows:
        return []
    got = feasible_int([int_row(a, t) for a, t in zip(rows, consts)], stats)
    if got is None:
        return None
    X, D = got
    return [Fraction(v, D) for v in X]


# ---------------------------------------------------------------------------
# cells


class ActiveCellSet:
    """Sign vectors of the active cells (True = positive side of the plane)."""

    def __init__(self, pset: PredicateSet, signs: np.ndarray, witnesses=None):
        self.pset = pset
        self.signs = signs
        self.witnesses = witnesses
        self.initial = len(signs)

    def __len__(self):
        return len(self.signs)

    @property
    def phi(self) -> float:
        return math.log2(len(self.signs)) if len(self.signs) else float("-inf")

    def satisfying(self, comp: Comparison) -> np.ndarray:
        mask = np.ones(len(self.signs), dtype=bool)
        for h, pos in comp:
            if h < 0:
                if not pos:
                    mask[:] = False
                continue
            col = self.signs[:, h]
            mask &= col if pos else ~col
        return mask

    def weight(self, comp: Comparison) -> int:
        return int(self.satisfying(comp).sum())

    def restrict(self, mask):
        self.signs = self.signs[mask]
        if self.witnesses is not None:
            self.witnesses = [w for w, k in zip(self.witnesses, mask) if k]

    def contains(self, sv) -> bool:
        return bool((self.signs == np.asarray(sv, dtype=bool)).all(axis=1).any())


def enumerate_cells(pset: PredicateSet, domain: Sequence[LinPredicate] = (), max_dim=MAX_DIM,
                    max_predicates=MAX_PREDICATES, max_cells=MAX_CELLS) -> ActiveCellSet:
    """All full-dimensional cells of the arrangement (inside the open domain cone).

    Hyperplanes are inserted one at a time.  A cell's witness point already
    certifies the side it lies on, so only the opposite side needs a
    feasibility test.
    """
    if pset.N > max_dim:
        raise GuardrailError(f"dimension {pset.N} exceeds guardrail {max_dim}")
    if len(pset) > max_predicates:
        raise GuardrailError(f"{len(pset)} hyperplanes exceed guardrail {max_predicates}")
    drows = [list(d.w) for d in domain]
    dconsts = [d.t for d in domain]
    w0 = strict_feasible(drows, dconsts) if domain else [Fraction(0)] * pset.N
    if w0 is None:
        raise ValueError("domain is empty")
    cells = [((), w0)]
    planes = pset.planes
    for h, P in enumerate(planes):
        nxt = []
        for sv, wit in cells:
            v = P.value(wit)
            if v == 0:
                # the plane passes through an interior point: both sides exist
                for pos in (True, False):
                    x = _solve_cell(planes, sv + (pos,), drows, dconsts)
                    nxt.append((sv + (pos,), x))
                continue
            here = v > 0
            nxt.append((sv + (here,), wit))
            x = _solve_cell(planes, sv + (not here,), drows, dconsts)
            if x is not None:
                nxt.append((sv + (not here,), x))
            if len(nxt) > max_cells:
                raise GuardrailError(f"more than {max_cells} cells")
        cells = nxt
    signs = np.array([sv for sv, _ in cells], dtype=bool).reshape(len(cells), len(planes))
    return ActiveCellSet(pset, signs, [w for _, w in cells])


def _solve_cell(planes, sv, drows, dconsts):
    rows, consts = list(drows), list(dconsts)
    for P, pos in zip(planes, sv):
        if pos:
            rows.append(list(P.w))
            consts.append(P.t)
        else:
            rows.append([-a for a in P.w])
            consts.append(-P.t)
    return strict_feasible(rows, consts)


def sampled_sign_vectors(pset: PredicateSet, samples=10_000, seed=0, bound=1000, domain=()):
    """Sign vectors seen at random rational points (points on a plane are skipped)."""
    rng = random.Random(seed)
    seen = set()
    for _ in range(samples):
        x = [Fraction(rng.randint(-bound, bound), rng.randint(1, 7)) for _ in range(pset.N)]
        if any(d.value(x) <= 0 for d in domain):
            continue
        vals = [P.value(x) for P in pset.planes]
        if any(v == 0 for v in vals):
            continue
        seen.add(tuple(v > 0 for v in vals))
    return seen


# ---------------------------------------------------------------------------
# hidden input, transcripts and the comparison tracker


class HiddenInput:
    """The secret point; nudged off every hyperplane if it lies on one."""

    def __init__(self, x, pset: PredicateSet, seed=0):
        x = [Fraction(v) for v in x]
        self.original = x
        self.perturbed = False
        vals = [P.value(x) for P in pset.planes]
        zero = [P for P, v in zip(pset.planes, vals) if v == 0]
        if zero:
            # direction d_i = K^i with K above twice every normalized
            # coefficient, so no zero plane is parallel to it; later
            # coordinates win ties, matching index order
            K = 2 * max(abs(c) for P in zero for c in P.key()[0][:-1]) + 1
            d = [Fraction(K) ** i for i in range(len(x))]
            nz = [abs(v) for v in vals if v != 0]
            slope = max(sum(abs(a * b) for a, b in zip(P.w, d)) for P in pset.planes)
            eps = (min(nz) / (2 * slope)) if nz else Fraction(1)
            x = [a + eps * b for a, b in zip(x, d)]
            self.perturbed = True
        self.x = x
        self.sign_vector = tuple(P.value(x) > 0 for P in pset.planes)

    def test(self, comp: Comparison) -> bool:
        return all((self.sign_vector[h] == pos) if h >= 0 else pos for h, pos in comp)


@dataclass
class Step:
    comparison: Comparison
    outcome: bool
    before: int
    after: int
    kind: str = ""

    @property
    def shrink(self) -> float:
        return self.after / self.before if self.before else 1.0


@dataclass
class Transcript:
    steps: List[Step] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.steps)

    def phis(self) -> List[float]:
        if not self.steps:
            return []
        return [math.log2(self.steps[0].before)] + [math.log2(s.after) for s in self.steps]

    def replay(self, hidden: HiddenInput) -> bool:
        return all(hidden.test(s.comparison) == s.outcome for s in self.steps)


class Tracker:
    """Active cells plus the transcript of comparisons against the hidden input."""

    def __init__(self, cells: ActiveCellSet, hidden: HiddenInput):
        self.cells = cells
        self.hidden = hidden
        self.transcript = Transcript()

    def compare(self, comp: Comparison, kind: str = "") -> bool:
        out = self.hidden.test(comp)
        before = len(self.cells)
        mask = self.cells.satisfying(comp)
        self.cells.restrict(mask if out else ~mask)
        self.transcript.steps.append(Step(comp, out, before, len(self.cells), kind))
        return out

    @property
    def phi(self):
        return self.cells.phi

    def sound(self) -> bool:
        return self.cells.contains(self.hidden.sign_vector)


# ---------------------------------------------------------------------------
# basic and DAG search


def basic_search(candidates: Sequence[Comparison], tr: Tracker) -> int:
    """Index k with candidates[k] true at the hidden input.

    Each round asks the candidate satisfied by the most active cells; the
    promise (some candidate holds on every active cell) guarantees it covers
    at least a 1/r fraction, so a false answer removes that fraction.
    """
    r = len(candidates)
    if r == 0:
        raise PromiseViolation("no candidates")
    while True:
        n = len(tr.cells)
        weights = [tr.cells.weight(c) for c in candidates]
        k = max(range(r), key=lambda i: (weights[i], -i))
        if weights[k] * r < n:
            raise PromiseViolation("no candidate holds on a 1/r fraction of the active cells")
        if tr.compare(candidates[k], kind="basic"):
            return k


@dataclass
class SearchDag:
    preds: List[Comparison]
    out: List[List[int]]
    source: int = 0

    @property
    def b(self) -> int:
        return max((len(o) for o in self.out), default=0)

    def topo(self) -> List[int]:
        indeg = [0] * len(self.preds)
        for o in self.out:
            for v in o:
                indeg[v] += 1
        order, stack = [], [v for v in range(len(self.preds)) if indeg[v] == 0]
        while stack:
            u = stack.pop()
            order.append(u)
            for v in self.out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
        if len(order) != len(self.preds):
            raise ValueError("graph has a cycle")
        return order


def check_dag_promise(G: SearchDag, cells: ActiveCellSet) -> None:
    n = len(cells)
    if cells.weight(G.preds[G.source]) != n:
        raise PromiseViolation("source predicate is not true on all active cells")
    for v, outs in enumerate(G.out):
        if not outs:
            continue
        here = cells.satisfying(G.preds[v])
        covered = np.zeros(n, dtype=bool)
        for u in outs:
            covered |= cells.satisfying(G.preds[u])
        if (here & ~covered).any():
            raise PromiseViolation(f"node {v} holds on a cell where no out-neighbour holds")


def dag_search(G: SearchDag, tr: Tracker, check: bool = True) -> int:
    """Sink t with G.preds[t] true at the hidden input (weighted centroid descent)."""
    if check:
        check_dag_promise(G, tr.cells)
    order = G.topo()
    b = max(G.b, 1)
    while True:
        n = len(tr.cells)
        sat = {v: tr.cells.satisfying(G.preds[v]) for v in order}
        w = {v: int(m.sum()) for v, m in sat.items()}
        v = next(u for u in reversed(order) if w[u] * (b + 1) >= n)
        sink = not G.out[v]
        out = tr.compare(G.preds[v], kind="dag")
        if out and sink:
            tr.transcript.steps[-1].kind = "dag:case0"
            return v
        tr.transcript.steps[-1].kind = "dag:case1" if out else "dag:case2"


# ---------------------------------------------------------------------------
# sorting linear forms


class SortProblem:
    """M linear forms over hidden x; hyperplanes p_i = p_j and optional domain constraints."""

    def __init__(self, values: Sequence[Tuple[Sequence, object]], N: int, domain: Sequence[LinPredicate] = ()):
        self.values = [(_frac_vec(w), Fraction(t)) for w, t in values]
        self.M = len(self.values)
        self.N = N
        self.domain = list(domain)
        self.pset = PredicateSet(N)
        self._lit: Dict[Tuple[int, int], Tuple[int, bool]] = {}
        for d in self.domain:
            self.pset.add(d)
        for i in range(self.M):
            for j in range(i + 1, self.M):
                self._register(i, j)

    def _register(self, i, j):
        wi, ti = self.values[i]
        wj, tj = self.values[j]
        dw = tuple(b - a for a, b in zip(wi, wj))
        if not any(dw):
            # same direction: the order is fixed by the constants, ties by index
            self._lit[(i, j)] = (-1, tj > ti or (tj == ti and i < j))
            return
        self._lit[(i, j)] = self.pset.add(less_than(self.values[i], self.values[j]))

    def lt(self, i, j) -> Tuple[int, bool]:
        """Literal for p_i < p_j."""
        if i < j:
            return self._lit[(i, j)]
        h, pos = self._lit[(j, i)]
        return (h, not pos)

    def slot(self, order: Sequence[int], k: int, a: int, b: int) -> Comparison:
        """Comparison "p_k lies in slots a..b" of the sorted list ``order``."""
        lits = []
        if a > 0:
            lits.append(self.lt(order[a - 1], k))
        if b < len(order):
            lits.append(self.lt(k, order[b]))
        return tuple(lits)

    # -- cells = feasible orderings ------------------------------------------

    def _int_setup(self):
        L = 1
        for w, t in self.values:
            for v in list(w) + [t]:
                L = L * v.denominator // math.gcd(L, v.denominator)
        self._ival = [tuple(int(v * L) for v in list(w) + [t]) for w, t in self.values]
        self._drows = [int_row(d.w, d.t) for d in self.domain]
        self._prow = [int_row(P.w, P.t) for P in self.pset.planes]
        self._pair_row = {}
        # p_a < p_b on the whole domain (so no cell needs testing against it)
        self.forced = set()
        for i in range(self.M):
            for j in range(self.M):
                if i != j and self.lt(i, j)[0] >= 0 and self.domain:
                    if feasible_int(self._drows + [self._row(j, i)]) is None:
                        self.forced.add((i, j))

    def _row(self, a, b):
        """Integer row of p_a < p_b."""
        key = (a, b)
        r = self._pair_row.get(key)
        if r is None:
            va, vb = self._ival[a], self._ival[b]
            r = self._pair_row[key] = tuple(y - x for x, y in zip(va, vb))
        return r

    def _ieval(self, i, X, D):
        r = self._ival[i]
        return sum(a * x for a, x in zip(r, X)) + r[-1] * D

    def enumerate_orderings(self, max_cells=MAX_CELLS) -> ActiveCellSet:
        """All orderings of the values realizable by an open set of inputs.

        Orderings grow by insertion; for a fixed ordering of the first k values
        the feasible positions of the next one form a contiguous range around
        the position seen at the witness point (the cell is convex), so the
        scan stops at the first infeasible position on each side.  Positions
        that contradict an order implied by the domain are never tested.
        """
        self._int_setup()
        if self.domain:
            start = feasible_int(self._drows)
            if start is None:
                raise ValueError("domain is empty")
            w0 = [Fraction(v, start[1]) for v in start[0]]
        else:
            w0 = [Fraction(0)] * self.N
        # move the start point off the value hyperplanes
        w0 = HiddenInput(w0, self.pset).x
        D0 = 1
        for v in w0:
            D0 = D0 * v.denominator // math.gcd(D0, v.denominator)
        out = []
        stack = [([], ([int(v * D0) for v in w0], D0))]
        while stack:
            order, wit = stack.pop()
            k = len(order)
            if k == self.M:
                out.append((order, wit))
                if len(out) > max_cells:
                    raise GuardrailError(f"more than {max_cells} orderings")
                continue
            X, D = wit
            vk = self._ieval(k, X, D)
            s0, tie = 0, False
            lo, hi = 0, k
            for pos, i in enumerate(order):
                h, fixed = self.lt(i, k)
                if h < 0:
                    before = fixed
                else:
                    vi = self._ieval(i, X, D)
                    before = vi < vk
                    tie = tie or vi == vk
                if before:
                    s0 += 1
                if (h < 0 and fixed) or (i, k) in self.forced:
                    lo = pos + 1
                if (h < 0 and not fixed) or ((k, i) in self.forced and hi == k):
                    hi = min(hi, pos)
            # a tie at the witness means it lies on a plane of the new value;
            # the position is still feasible but needs its own witness
            x0 = self._slot_witness(order, k, s0) if tie else wit
            stack.append((order[:s0] + [k] + order[s0:], x0))
            for step in (-1, 1):
                sp = s0 + step
                while lo <= sp <= hi:
                    x = self._slot_witness(order, k, sp)
                    if x is None:
                        break
                    stack.append((order[:sp] + [k] + order[sp:], x))
                    sp += step
        H = len(self.pset)
        signs = np.zeros((len(out), H), dtype=bool)
        for r, (_, (X, D)) in enumerate(out):
            signs[r] = [sum(a * x for a, x in zip(row, X)) + row[-1] * D > 0 for row in self._prow]
        wits = [[Fraction(v, D) for v in X] for _, (X, D) in out]
        return ActiveCellSet(self.pset, signs, wits)

    def _slot_witness(self, order, k, s):
        rows = list(self._drows)
        chain = order[:s] + [k] + order[s:]
        for a, b in zip(chain, chain[1:]):
            h, pos = self.lt(a, b)
            if h < 0:
                if not pos:
                    return None
                continue
            rows.append(self._row(a, b))
        return feasible_int(rows)


@dataclass
class SortResult:
    order: List[int]
    comparisons: int
    transcript: Transcript
    cells_initial: int
    phi_initial: float
    phi_final: float
    sound: bool
    perturbed: bool


def _tree_dag(problem: SortProblem, order, k) -> SearchDag:
    """Balanced binary tree over the len(order)+1 slots for value k."""
    preds, out = [], []

    def build(a, b):
        v = len(preds)
        preds.append(problem.slot(order, k, a, b))
        out.append([])
        if a < b:
            m = (a + b) // 2
            out[v] = [build(a, m), build(m + 1, b)]
        return v

    build(0, len(order))
    return SearchDag(preds, out, 0)


def fredman_sort(values, x, mode: str = "tree", N: Optional[int] = None, domain=(), r: Optional[int] = None,
                 max_cells=MAX_CELLS, seed=0, cells: Optional[ActiveCellSet] = None) -> SortResult:
    """Sort linear forms at the hidden input x by repeated insertion.

    ``tree``: each insertion is a weighted descent of a binary tree over the
    slots.  ``quantile``: each insertion narrows the slot range through r
    groups at a time with the basic search.
    """
    if mode not in ("tree", "quantile"):
        raise ValueError(f"unknown mode {mode!r}")
    N = len(x) if N is None else N
    prob = values if isinstance(values, SortProblem) else SortProblem(values, N, domain)
    if cells is None:
        cells = prob.enumerate_orderings(max_cells)
    else:
        cells = ActiveCellSet(cells.pset, cells.signs.copy(), None)
    n0 = len(cells)
    hidden = HiddenInput(x, prob.pset, seed)
    tr = Tracker(cells, hidden)
    if not tr.sound():
        raise ValueError("hidden input lies outside the domain")
    phi0 = tr.phi
    if r is None:
        r = max(2, math.ceil(math.sqrt(prob.M)))
    order: List[int] = []
    for k in range(prob.M):
        if not order:
            order.append(k)
            continue
        if mode == "tree":
            G = _tree_dag(prob, order, k)
            leaf = dag_search(G, tr, check=False)
            s = _leaf_slot(G, leaf, len(order))
        else:
            s = _quantile_insert(prob, order, k, r, tr)
        order.insert(s, k)
    return SortResult(order, tr.transcript.count, tr.transcript, n0, phi0, tr.phi, tr.sound(), hidden.perturbed)


def _leaf_slot(G: SearchDag, leaf: int, L: int) -> int:
    # leaves are created in slot order by the recursive build
    leaves = [v for v in range(len(G.preds)) if not G.out[v]]
    return leaves.index(leaf)


def _quantile_insert(prob, order, k, r, tr) -> int:
    a, b = 0, len(order)
    while a < b:
        width = b - a + 1
        if width <= r:
            bounds = [(s, s) for s in range(a, b + 1)]
        else:
            cuts = [a + (width * j) // r for j in range(r + 1)]
            bounds = [(cuts[j], cuts[j + 1] - 1) for j in range(r) if cuts[j] < cuts[j + 1]]
        cands = [prob.slot(order, k, lo, hi) for lo, hi in bounds]
        j = basic_search(cands, tr)
        a, b = bounds[j]
    return a


# ---------------------------------------------------------------------------
# instances


def x_plus_y(nx: int, ny: int, sorted_inputs: bool = True):
    """Values x_i + y_j over N = nx + ny variables, with the promise x and y increasing."""
    N = nx + ny
    values = []
    for i in range(nx):
        for j in range(ny):
            w = [0] * N
            w[i] = 1
            w[nx + j] = 1
            values.append((w, 0))
    domain = []
    if sorted_inputs:
        for base, n in ((0, nx), (nx, ny)):
            for i in range(n - 1):
                w = [0] * N
                w[base + i + 1] = 1
                w[base + i] = -1
                domain.append(LinPredicate(w, 0))
    return SortProblem(values, N, domain)


def random_xy_input(nx, ny, seed=0, bound=1000, sorted_inputs=True):
    rng = random.Random(seed)
    xs = [rng.randint(-bound, bound) for _ in range(nx)]
    ys = [rng.randint(-bound, bound) for _ in range(ny)]
    if sorted_inputs:
        xs.sort()
        ys.sort()
    return xs + ys


def arr_vertex_problem(slopes: Sequence) -> Tuple[SortProblem, List[Tuple[int, int]]]:
    """Vertices of lines y = s_i x + b_i with public slopes; the b_i are hidden.

    The abscissa of the vertex of lines i and j is (b_j - b_i) / (s_i - s_j),
    a linear form in the intercepts.
    """
    s = [Fraction(v) for v in slopes]
    if len(set(s)) != len(s):
        raise ValueError("slopes must be pairwise distinct")
    n = len(s)
    values, pairs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            w = [Fraction(0)] * n
            d = s[i] - s[j]
            w[j] = 1 / d
            w[i] = -1 / d
            values.append((w, 0))
            pairs.append((i, j))
    return SortProblem(values, n), pairs


def sort_arr_vertices(slopes, intercepts, seed=0):
    """(sorted vertex pairs, comparisons) for the arrangement with hidden intercepts."""
    prob, pairs = arr_vertex_problem(slopes)
    res = fredman_sort(prob, list(intercepts), mode="tree", seed=seed)
    return [pairs[k] for k in res.order], res
