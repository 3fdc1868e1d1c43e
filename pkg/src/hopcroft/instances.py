"""Reading and writing instance files.

Formats (blank lines and lines starting with '#' are ignored):

* points:      ``x y`` per line
* lines:       ``a b`` per line, meaning y = a*x + b; ``A B D`` means
               D*y = A*x + B, so D = 0 is a vertical line
* segments:    ``x1 y1 x2 y2`` per line
* bichromatic: ``R x y`` or ``B x y`` per line

Numbers are integers or ``num/den`` rationals.  Header comments of the form
``# key: value`` record the generator, seed and parameters.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import generators as gen
from .geom import Line, Point


class ParseError(ValueError):
    def __init__(self, path, line, col, msg):
        super().__init__(f"{path}:{line}:{col}: {msg}")
        self.path, self.line, self.col, self.msg = path, line, col, msg


@dataclass
class Instance:
    kind: str                       # points+lines | segments | bichromatic
    payload: Dict[str, list]
    generator: Optional[str] = None
    seed: Optional[int] = None
    params: Dict[str, object] = field(default_factory=dict)

    def descriptor(self) -> Dict:
        sizes = {k: len(v) for k, v in self.payload.items()}
        return {"kind": self.kind, "generator": self.generator, "seed": self.seed,
                "params": self.params, "sizes": sizes}


def _num(tok, path, ln, col):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(path, ln, col, f"not a number: {tok!r}") from None


def _tokens(text):
    """(line number, [(column, token)]) for every data line."""
    for ln, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in s.split():
            col = s.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield ln, toks


def _header(text) -> Dict[str, str]:
    meta = {}
    for raw in text.splitlines():
        if raw.startswith("#") and ":" in raw:
            k, v = raw[1:].split(":", 1)
            meta[k.strip()] = v.strip()
    return meta


def _exact(v: Fraction):
    return v.numerator if v.denominator == 1 else v


def parse_points(text, path="<points>") -> List[tuple]:
    out = []
    for ln, toks in _tokens(text):
        if len(toks) != 2:
            raise ParseError(path, ln, toks[0][0], f"expected 'x y', got {len(toks)} fields")
        x, y = (_num(t, path, ln, c) for c, t in toks)
        out.append(Point(_exact(x), _exact(y)).key)
    return out


def parse_lines(text, path="<lines>") -> List[tuple]:
    out = []
    for ln, toks in _tokens(text):
        vals = [_num(t, path, ln, c) for c, t in toks]
        if len(vals) == 2:
            out.append(Line(_exact(vals[0]), _exact(vals[1])).key)
        elif len(vals) == 3:
            A, B, D = vals
            if D == 0:
                raise ParseError(path, ln, toks[2][0], "vertical line (D = 0) cannot be used for above/below counting")
            out.append(Line(_exact(A / D), _exact(B / D)).key)
        else:
            raise ParseError(path, ln, toks[0][0], f"expected 'a b' or 'A B D', got {len(vals)} fields")
    return out


def parse_segments(text, path="<segments>") -> List[tuple]:
    out = []
    for ln, toks in _tokens(text):
        if len(toks) != 4:
            raise ParseError(path, ln, toks[0][0], f"expected 'x1 y1 x2 y2', got {len(toks)} fields")
        v = [_exact(_num(t, path, ln, c)) for c, t in toks]
        if (v[0], v[1]) == (v[2], v[3]):
            raise ParseError(path, ln, toks[0][0], "segment endpoints coincide")
        out.append(tuple(v))
    return out


def parse_bichromatic(text, path="<bichromatic>") -> Tuple[List[tuple], List[tuple]]:
    red, blue = [], []
    for ln, toks in _tokens(text):
        if len(toks) != 3 or toks[0][1] not in ("R", "B"):
            raise ParseError(path, ln, toks[0][0], "expected 'R x y' or 'B x y'")
        x, y = (_exact(_num(t, path, ln, c)) for c, t in toks[1:])
        (red if toks[0][1] == "R" else blue).append((x, y))
    return red, blue


def _fmt(v) -> str:
    return str(v)


def _meta_lines(inst: Instance) -> List[str]:
    out = []
    if inst.generator:
        out.append(f"# generator: {inst.generator}")
        out.append(f"# seed: {inst.seed}")
        out.append(f"# params: {json.dumps(inst.params, sort_keys=True)}")
    return out


def _point_text(X, Y, W):
    return f"{_fmt(_exact(Fraction(X, W)))} {_fmt(_exact(Fraction(Y, W)))}"


def _line_text(A, B, D):
    return f"{_fmt(_exact(Fraction(A, D)))} {_fmt(_exact(Fraction(B, D)))}"


def write_instance(inst: Instance, prefix: str) -> List[str]:
    """Write the instance next to ``prefix``; returns the file names."""
    head = _meta_lines(inst)
    files = []

    def dump(suffix, body):
        name = f"{prefix}.{suffix}"
        with open(name, "w") as f:
            f.write("\n".join(head + body) + "\n")
        files.append(name)

    if inst.kind == "points+lines":
        dump("points", [_point_text(*p) for p in inst.payload["points"]])
        dump("lines", [_line_text(*l) for l in inst.payload["lines"]])
    elif inst.kind == "segments":
        dump("segments", [" ".join(_fmt(v) for v in s) for s in inst.payload["segments"]])
    elif inst.kind == "bichromatic":
        body = [f"R {x} {y}" for x, y in inst.payload["red"]] + [f"B {x} {y}" for x, y in inst.payload["blue"]]
        dump("bichromatic", body)
    else:
        raise ValueError(f"unknown instance kind {inst.kind!r}")
    return files


def read_instance(points=None, lines=None, segments=None, bichromatic=None) -> Instance:
    def load(path):
        with open(path) as f:
            return f.read()

    if segments:
        t = load(segments)
        inst = Instance("segments", {"segments": parse_segments(t, segments)})
    elif bichromatic:
        t = load(bichromatic)
        r, b = parse_bichromatic(t, bichromatic)
        inst = Instance("bichromatic", {"red": r, "blue": b})
    else:
        if not points or not lines:
            raise ValueError("a points file and a lines file are required")
        t = load(points)
        inst = Instance("points+lines", {"points": parse_points(t, points),
                                         "lines": parse_lines(load(lines), lines)})
    meta = _header(t)
    if "generator" in meta:
        inst.generator = meta["generator"]
        inst.seed = int(meta["seed"]) if meta.get("seed", "None") != "None" else None
        inst.params = json.loads(meta.get("params", "{}"))
    return inst


# parameters accepted by each generator, with defaults
GEN_PARAMS = {
    "uniform": {"m": 100, "n": 100},
    "grid": {"k": 4},
    "clustered": {"m": 100, "n": 100},
    "degenerate": {"m": 50, "n": 50},
    "segments": {"n": 100, "bound": 4096, "shared": 0},
    "bichromatic": {"nr": 100, "nb": 100, "bound": 8},
}


def generate(kind: str, params: Dict[str, object], seed: int) -> Instance:
    if kind not in GEN_PARAMS:
        raise ValueError(f"unknown generator {kind!r}; choose from {sorted(GEN_PARAMS)}")
    full = dict(GEN_PARAMS[kind])
    for k, v in params.items():
        if k not in full:
            raise ValueError(f"generator {kind!r} has no parameter {k!r}")
        full[k] = int(v)
    for k, v in full.items():
        if v < 0 or (k in ("k",) and v < 1):
            raise ValueError(f"parameter {k}={v} out of range")
    if kind == "uniform":
        pts, lns = gen.uniform(full["m"], full["n"], seed)
    elif kind == "grid":
        pts, lns = gen.grid(full["k"])
    elif kind == "clustered":
        pts, lns = gen.clustered(full["m"], full["n"], seed)
    elif kind == "degenerate":
        pts, lns = gen.degenerate(full["m"], full["n"], seed)
    elif kind == "segments":
        segs = gen.segments(full["n"], seed, bound=full["bound"], shared=bool(full["shared"]))
        return Instance("segments", {"segments": segs}, kind, seed, full)
    else:
        r, b = gen.bichromatic(full["nr"], full["nb"], seed, bound=full["bound"])
        return Instance("bichromatic", {"red": r, "blue": b}, kind, seed, full)
    return Instance("points+lines", {"points": [Point.from_hom(*p).key for p in pts],
                                     "lines": [Line.from_coeffs(*l).key for l in lns]}, kind, seed, full)
