"""Structural oracles shared by unit and acceptance tests."""
import random
import statistics

from hopcroft.cascade import CascadeInput, cascade_build, cascade_query, cascade_reset
from hopcroft.cutting import build_hier_cutting, locate_batch


def _side(p, l):
    X, Y, W = p
    A, B, D = l
    v = D * Y - A * X - B * W
    return (v > 0) - (v < 0)


def check_cutting(lines, r, seed, probes=200, probe_rng=None):
    """Build a cutting and verify its structure; returns a dict of measurements."""
    T = build_hier_cutting(lines, r, rng=seed)
    leaves = T.leaves()
    n = T.n
    out = {
        "n": n,
        "leaves": len(leaves),
        "C": len(leaves) / r ** 2,
        "max_conflict": max(len(v.conflict) for v in leaves),
        "conflict_bound": 2 * n / r,
        "violations": T.violations,
        "partition_ok": True,
        "below_ok": True,
    }
    rng = probe_rng or random.Random(seed)
    xs = [l[0] for l in lines] or [1]
    bs = [l[1] for l in lines] or [1]
    span = max(abs(v) for v in xs + bs) + 1
    pts = [(rng.randint(-span, span), rng.randint(-span * span, span * span), 1) for _ in range(probes)]
    # also probe line crossings and points on input lines
    for _ in range(probes // 4):
        A, B, D = rng.choice(lines)
        x = rng.randint(-span, span)
        pts.append((D * x, A * x + B, D))
    where = locate_batch(T, pts)
    for p, lid in zip(pts, where):
        hits = [v.id for v in leaves if v.cell.contains(p)]
        if hits != [lid]:
            out["partition_ok"] = False
        v = T.nodes[lid]
        below = sum(T.weights[i] for i in v.conflict.tolist() if _side(p, T.distinct[i]) > 0)
        truth = sum(1 for l in T.lines if _side(p, l) > 0)
        if v.below + below != truth:
            out["below_ok"] = False
    return out


def random_tree(rng, size, max_children=2):
    children = [[] for _ in range(size)]
    for v in range(1, size):
        while True:
            u = rng.randrange(v)
            if len(children[u]) < max_children:
                break
        children[u].append(v)
    return children


def own_face(lines, q):
    X, Y, W = q
    m = 0
    for i, (A, B, D) in enumerate(lines):
        if D * Y - A * X - B * W >= 0:
            m |= 1 << i
    return m


def check_cascade(seed, size=50, z=20, queries=10_000, c=8, coord=10**4, slope=100):
    """Random tree with z random lines per node, x-sorted queries on random parent-closed subtrees."""
    rng = random.Random(seed)
    children = random_tree(rng, size)
    lines = [[(rng.randint(-slope, slope), rng.randint(-coord, coord), 1) for _ in range(z)] for _ in range(size)]
    T = cascade_build(CascadeInput(children, lines), c, rng.randint(0, 10**9))
    qs = [(rng.randint(-coord, coord), rng.randint(-coord * slope, coord * slope), 1) for _ in range(queries)]
    qs.sort(key=lambda q: q[0])
    ok = True
    for q in qs:
        sub = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in children[u]:
                if rng.random() < 0.85:
                    sub.add(v)
                    stack.append(v)
        ans = cascade_query(T, q, sub)
        if set(ans) != sub or any(ans[u] != own_face(lines[u], q) for u in sub):
            ok = False
    walks = list(T.face_walks())
    cursor_ok = all(w.advances <= len(w.walls) for w in walks)
    mean_conf = T.conflict_scanned / max(1, T.visits)
    cascade_reset(T)
    return {"answers_ok": ok, "mean_conflict": mean_conf, "conflict_bound": 4 * c,
            "cursor_ok": cursor_ok, "max_plus": T.max_plus(), "size_bound": T.size_bound(),
            "max_advance_ratio": max((w.advances / len(w.walls) for w in walks if w.walls), default=0.0)}
