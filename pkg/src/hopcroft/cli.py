"""Command-line front end: generate instances, run algorithms, fit scaling exponents."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from fractions import Fraction
from typing import Dict, List, Optional

from . import __version__
from . import counting as cnt
from . import generators as gen
from .instances import (GEN_PARAMS, Instance, ParseError, generate, read_instance,
                        write_instance)

SCHEMA = "hopcroft.runreport/1"
BENCH_SCHEMA = "hopcroft.bench/1"
SEED_ENV = "HOPCROFT_SEED"

COUNT_ALGOS = {
    "brute": lambda P, L, seed: cnt.count_brute(P, L),
    "arrangement": lambda P, L, seed: cnt.count_arrangement(P, L),
    "recursive": lambda P, L, seed: cnt.count_recursive(P, L, seed=seed),
    "cascade": lambda P, L, seed: cnt.count_cascade(P, L, seed=seed),
    "asymmetric": lambda P, L, seed: cnt.count_asymmetric(P, L, seed=seed),
}
SEG_ALGOS = ("seg-count", "seg-components")
DIST_ALGOS = ("dist-count", "dist-select")
DECTREE_ALGOS = ("dectree-sort-tree", "dectree-sort-quantile", "dectree-vertices")
ALL_ALGOS = tuple(COUNT_ALGOS) + ("weighted",) + SEG_ALGOS + DIST_ALGOS + DECTREE_ALGOS


class CheckFailed(RuntimeError):
    pass


def default_seed() -> int:
    v = os.environ.get(SEED_ENV)
    return int(v) if v not in (None, "") else 0


# ---------------------------------------------------------------------------
# reports


def _report(algo, inst_desc, result, preds, comparisons, wall, seed, check) -> Dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "algorithm": algo,
        "instance": inst_desc,
        "result": result,
        "predicates": int(preds),
        "comparisons": int(comparisons),
        "wall_seconds": round(wall, 6),
        "seed": seed,
        "check": check,
    }


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v, default=str)
        else:
            out[key] = v
    return out


def emit(report: Dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    else:
        flat = _flatten(report)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        w.writeheader()
        w.writerow(flat)
        text = buf.getvalue()
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _persist_counterexample(inst: Instance, algo: str, seed: int, where: Optional[str]) -> List[str]:
    base = os.path.join(where or ".", f"counterexample-{algo}-seed{seed}")
    return write_instance(inst, base)


# ---------------------------------------------------------------------------
# run


def run_count(inst: Instance, algo: str, seed: int, check: bool):
    P, L = inst.payload["points"], inst.payload["lines"]
    t0 = time.perf_counter()
    if algo == "weighted":
        up = cnt.weighted_counts(P, L, seed=seed)
        down = cnt.weighted_counts([(X, -Y, W) for X, Y, W in P], [(-A, -B, D) for A, B, D in L], seed=seed)
        above = int(sum(up.per_line))
        below = int(sum(down.per_line))
        result = {"above": above, "incidences": len(P) * len(L) - above - below}
        preds = up.preds + down.preds
    else:
        r = COUNT_ALGOS[algo](P, L, seed)
        result = {"above": r.above, "incidences": r.incidences}
        preds = r.preds
    wall = time.perf_counter() - t0
    chk = {"requested": check, "oracle": "brute", "passed": None}
    if check:
        b = cnt.count_brute(P, L)
        chk["passed"] = (b.above, b.incidences) == (result["above"], result["incidences"])
        chk["expected"] = {"above": b.above, "incidences": b.incidences}
    return result, preds, 0, wall, chk


def run_segments(inst: Instance, algo: str, seed: int, check: bool):
    from .apps import segments as sg

    S = inst.payload["segments"]
    st = sg.SegStats()
    t0 = time.perf_counter()
    if algo == "seg-count":
        value = sg.seg_intersections(S, st)
        result = {"intersecting_pairs": value}
    else:
        graph = sg.component_graph(S, st)
        value = graph.labels
        result = {"components": len(set(value)), "labels": value, "witness_edges": len(graph.edges)}
    wall = time.perf_counter() - t0
    chk = {"requested": check, "oracle": "brute", "passed": None}
    if check:
        exp = sg.seg_intersections_brute(S) if algo == "seg-count" else sg.seg_components_brute(S)
        chk["passed"] = exp == value
    return result, st.tests + st.leaf_pairs, 0, wall, chk


def run_distance(inst: Instance, algo: str, seed: int, check: bool, radius, k):
    from .apps import circles, selection

    R, B = inst.payload["red"], inst.payload["blue"]
    t0 = time.perf_counter()
    chk = {"requested": check, "oracle": "brute", "passed": None}
    if algo == "dist-count":
        if radius is None:
            raise ValueError("dist-count needs --radius")
        st = circles.DiskStats()
        total, per = circles.unit_dist_count(R, B, Fraction(radius), seed=seed, stats=st)
        wall = time.perf_counter() - t0
        result = {"total": total, "per_red": per}
        preds = st.brute_pairs + st.bbox_tests
        if check:
            chk["passed"] = circles.unit_dist_brute(R, B, Fraction(radius)) == (total, per)
    else:
        if k is None:
            raise ValueError("dist-select needs --k")
        st = selection.SelectStats()
        v = selection.distance_select(R, B, k, seed=seed, stats=st)
        wall = time.perf_counter() - t0
        result = {"k": k, "squared_distance": str(v), "rounds": st.rounds, "failures": st.failures,
                  "fallback": st.fallback}
        preds = st.count_calls
        if check:
            chk["passed"] = selection.distance_select_brute(R, B, k) == v
    return result, preds, 0, wall, chk


def run_dectree(algo: str, n: int, seed: int, check: bool):
    import random

    from . import dectree as dt

    t0 = time.perf_counter()
    chk = {"requested": check, "oracle": "direct sort", "passed": None}
    if algo == "dectree-vertices":
        rng = random.Random(seed)
        slopes = rng.sample(range(-4 * n, 4 * n + 1), n)
        b = [rng.randint(-100, 100) for _ in range(n)]
        order, res = dt.sort_arr_vertices(slopes, b, seed=seed)
        xs = [Fraction(b[j] - b[i], slopes[i] - slopes[j]) for i, j in order]
        result = {"n": n, "order": order, "cells": res.cells_initial, "phi_initial": res.phi_initial}
        ok = xs == sorted(xs)
    else:
        mode = "tree" if algo.endswith("tree") else "quantile"
        prob = dt.x_plus_y(n, n)
        x = dt.random_xy_input(n, n, seed)
        res = dt.fredman_sort(prob, x, mode=mode, seed=seed)
        vals = [x[i] + x[n + j] for i in range(n) for j in range(n)]
        result = {"n": n, "order": res.order, "cells": res.cells_initial, "phi_initial": res.phi_initial}
        ok = all(vals[a] <= vals[c] for a, c in zip(res.order, res.order[1:]))
    wall = time.perf_counter() - t0
    if check:
        chk["passed"] = ok
    return result, 0, res.comparisons, wall, chk


def cmd_run(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    algo = args.algo
    inst = None
    if args.command == "dectree":
        if algo not in DECTREE_ALGOS:
            raise ValueError(f"algorithm {algo!r} does not apply to dectree runs")
        result, preds, comps, wall, chk = run_dectree(algo, args.n, seed, args.check)
        desc = {"kind": "dectree", "n": args.n}
    else:
        inst = read_instance(args.points, args.lines, args.segments, args.bichromatic)
        desc = inst.descriptor()
        if args.command == "count":
            if algo not in COUNT_ALGOS and algo != "weighted":
                raise ValueError(f"algorithm {algo!r} does not apply to count runs")
            if inst.kind != "points+lines":
                raise ValueError("count needs --points and --lines")
            result, preds, comps, wall, chk = run_count(inst, algo, seed, args.check)
        elif args.command == "segments":
            if algo not in SEG_ALGOS:
                raise ValueError(f"algorithm {algo!r} does not apply to segment runs")
            result, preds, comps, wall, chk = run_segments(inst, algo, seed, args.check)
        else:
            if algo not in DIST_ALGOS:
                raise ValueError(f"algorithm {algo!r} does not apply to distance runs")
            result, preds, comps, wall, chk = run_distance(inst, algo, seed, args.check, args.radius, args.k)
    report = _report(algo, desc, result, preds, comps, wall, seed, chk)
    if args.check and not chk["passed"]:
        if inst is not None:
            report["counterexample"] = _persist_counterexample(inst, algo, seed, os.path.dirname(args.out or ""))
        emit(report, args.format, args.out)
        print(f"check failed: {algo} disagrees with the {chk['oracle']} oracle", file=sys.stderr)
        return 1
    emit(report, args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise ValueError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    inst = generate(args.kind, params, seed)
    files = write_instance(inst, args.out)
    print(json.dumps({"files": files, **inst.descriptor()}, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# bench


def fit_slope(xs, ys, level=0.95):
    """Least-squares slope of ys on xs with a two-sided t confidence interval."""
    import numpy as np
    from scipy import stats

    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    n = len(x)
    A = np.vstack([x, np.ones(n)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + icpt)
    if n > 2:
        s2 = float(resid @ resid) / (n - 2)
        se = math.sqrt(s2 / float(((x - x.mean()) ** 2).sum()))
        h = float(stats.t.ppf(0.5 + level / 2, n - 2)) * se
    else:
        se, h = float("nan"), float("nan")
    return {"slope": float(slope), "intercept": float(icpt), "stderr": se,
            "ci": [float(slope - h), float(slope + h)], "level": level, "points": n}


def bench(algo: str, sizes: List[int], reps: int, seed: int) -> Dict:
    if len(sizes) < 3:
        raise ValueError("bench needs at least 3 sizes")
    if algo not in COUNT_ALGOS:
        raise ValueError(f"bench supports {sorted(COUNT_ALGOS)}")
    rows = []
    for n in sizes:
        for r in range(reps):
            s = seed + r
            P, L = gen.uniform(n, n, s)
            t0 = time.perf_counter()
            res = COUNT_ALGOS[algo](P, L, s)
            rows.append({"n": n, "seed": s, "predicates": int(res.preds), "above": res.above,
                         "incidences": res.incidences, "wall_seconds": round(time.perf_counter() - t0, 6)})
    fit = fit_slope([math.log2(r["n"]) for r in rows], [math.log2(max(r["predicates"], 1)) for r in rows])
    return {"schema": BENCH_SCHEMA, "version": __version__, "algorithm": algo, "sizes": sizes,
            "reps": reps, "seed": seed, "runs": rows, "fit": fit}


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    sizes = [int(v) for v in args.sizes.split(",") if v.strip()]
    rep = bench(args.algo, sizes, args.reps, seed)
    if args.format == "json":
        text = json.dumps(rep, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["n", "seed", "predicates", "above", "incidences", "wall_seconds"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(rep["runs"])
        f = rep["fit"]
        buf.write(f"# slope={f['slope']:.4f} ci=[{f['ci'][0]:.4f},{f['ci'][1]:.4f}]\n")
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopcroft", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="write a seeded instance")
    g.add_argument("kind", choices=sorted(GEN_PARAMS))
    g.add_argument("--param", "-p", action="append", help="generator parameter key=value")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True, help="output prefix; the suffix names the file type")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run one algorithm on one instance")
    r.add_argument("command", choices=["count", "segments", "distance", "dectree"])
    r.add_argument("--algo", required=True, choices=ALL_ALGOS)
    r.add_argument("--points")
    r.add_argument("--lines")
    r.add_argument("--segments")
    r.add_argument("--bichromatic")
    r.add_argument("--radius", help="distance threshold for dist-count (integer or num/den)")
    r.add_argument("--k", type=int, help="rank for dist-select")
    r.add_argument("--n", type=int, default=3, help="size for dectree runs")
    r.add_argument("--check", action="store_true", help="compare with the brute-force oracle")
    r.add_argument("--seed", type=int)
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="fit the scaling exponent of predicate counts")
    b.add_argument("--algo", default="cascade", choices=sorted(COUNT_ALGOS))
    b.add_argument("--sizes", default="256,512,1024,2048")
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--seed", type=int)
    b.add_argument("--format", choices=["json", "csv"], default="json")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
