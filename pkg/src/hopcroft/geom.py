"""Exact planar primitives.

Coordinates are Python ints or ``fractions.Fraction`` values, so every
predicate below is decided exactly.  Lines are non-vertical and stored as an
integer triple ``(A, B, D)`` meaning ``y = (A*x + B) / D`` with ``D > 0`` and
``gcd(A, B, D) == 1``; points are stored homogeneously as ``(X, Y, W)`` with
``W > 0``.  The hot loops elsewhere in the package work on these raw tuples.

>>> side(Point(0, 1), Line(0, 0))
<SideSign.ABOVE: 1>
>>> meet_x(Line(2, 1), Line(-1, 4))
Fraction(1, 1)
"""
from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Union

Scalar = Union[int, Fraction]


def as_scalar(v) -> Scalar:
    """Coerce ints, Fractions and "num/den" strings to an exact scalar."""
    if isinstance(v, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, str):
        f = Fraction(v.strip())
        return f.numerator if f.denominator == 1 else f
    if isinstance(v, float):
        raise TypeError("floats are not exact; pass an int, Fraction or string")
    # numpy integers and friends
    return int(v)


def _num_den(v: Scalar):
    if isinstance(v, int):
        return v, 1
    return v.numerator, v.denominator


def sign(v) -> int:
    return (v > 0) - (v < 0)


class SideSign(enum.IntEnum):
    BELOW = -1
    ON = 0
    ABOVE = 1


def normalize_line(A: int, B: int, D: int):
    if D == 0:
        raise ValueError("vertical line")
    if D < 0:
        A, B, D = -A, -B, -D
    g = gcd(gcd(A, B), D)
    if g > 1:
        A, B, D = A // g, B // g, D // g
    return A, B, D


def normalize_point(X: int, Y: int, W: int):
    if W == 0:
        raise ValueError("point at infinity")
    if W < 0:
        X, Y, W = -X, -Y, -W
    g = gcd(gcd(X, Y), W)
    if g > 1:
        X, Y, W = X // g, Y // g, W // g
    return X, Y, W


class Point:
    """A point with exact coordinates."""

    __slots__ = ("X", "Y", "W")

    def __init__(self, x, y):
        xn, xd = _num_den(as_scalar(x))
        yn, yd = _num_den(as_scalar(y))
        self.X, self.Y, self.W = normalize_point(xn * yd, yn * xd, xd * yd)

    @classmethod
    def from_hom(cls, X: int, Y: int, W: int) -> "Point":
        p = cls.__new__(cls)
        p.X, p.Y, p.W = normalize_point(X, Y, W)
        return p

    @property
    def x(self) -> Scalar:
        return self.X if self.W == 1 else Fraction(self.X, self.W)

    @property
    def y(self) -> Scalar:
        return self.Y if self.W == 1 else Fraction(self.Y, self.W)

    @property
    def key(self):
        return (self.X, self.Y, self.W)

    def __eq__(self, other):
        return isinstance(other, Point) and self.key == other.key

    def __lt__(self, other):
        # lexicographic, x first
        return (self.x, self.y) < (other.x, other.y)

    def __hash__(self):
        return hash(("P",) + self.key)

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


class Line:
    """Non-vertical line ``y = a*x + b`` with rational slope and intercept."""

    __slots__ = ("A", "B", "D")

    def __init__(self, a, b):
        an, ad = _num_den(as_scalar(a))
        bn, bd = _num_den(as_scalar(b))
        self.A, self.B, self.D = normalize_line(an * bd, bn * ad, ad * bd)

    @classmethod
    def from_coeffs(cls, A: int, B: int, D: int) -> "Line":
        l = cls.__new__(cls)
        l.A, l.B, l.D = normalize_line(A, B, D)
        return l

    @classmethod
    def through(cls, p: "Point", q: "Point") -> "Line":
        """Line through two points with distinct x."""
        if p.X * q.W == q.X * p.W:
            raise ValueError("points are vertically aligned")
        return cls(Fraction(q.y - p.y) / (q.x - p.x),
                   p.y - Fraction(q.y - p.y) / (q.x - p.x) * p.x)

    @property
    def a(self) -> Scalar:
        return self.A if self.D == 1 else Fraction(self.A, self.D)

    @property
    def b(self) -> Scalar:
        return self.B if self.D == 1 else Fraction(self.B, self.D)

    @property
    def key(self):
        return (self.A, self.B, self.D)

    def at(self, x) -> Scalar:
        """y-value of the line at abscissa ``x``."""
        xn, xd = _num_den(as_scalar(x))
        v = Fraction(self.A * xn + self.B * xd, self.D * xd)
        return v.numerator if v.denominator == 1 else v

    def __eq__(self, other):
        return isinstance(other, Line) and self.key == other.key

    def __hash__(self):
        return hash(("L",) + self.key)

    def __repr__(self):
        return f"Line({self.a}, {self.b})"


class Segment:
    """Closed segment; endpoints are kept in lexicographic order."""

    __slots__ = ("p", "q")

    def __init__(self, p: Point, q: Point):
        if p == q:
            raise ValueError("degenerate segment")
        if q < p:
            p, q = q, p
        self.p, self.q = p, q

    def __eq__(self, other):
        return isinstance(other, Segment) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return f"Segment({self.p!r}, {self.q!r})"


# -- raw tuple predicates (used by the engines) --

def side_raw(X, Y, W, A, B, D) -> int:
    """Sign of y - (a*x + b) for hom. point (X, Y, W) and line (A, B, D)."""
    v = D * Y - A * X - B * W
    return (v > 0) - (v < 0)


def side(p: Point, l: Line) -> SideSign:
    return SideSign(side_raw(p.X, p.Y, p.W, l.A, l.B, l.D))


def dual_point(p: Point) -> Line:
    """(p1, p2) -> y = p1*x - p2."""
    return Line.from_coeffs(p.X, -p.Y, p.W)


def dual_line(l: Line) -> Point:
    """y = a*x + b -> (a, -b)."""
    return Point.from_hom(l.A, -l.B, l.D)


def meet_x_raw(l1, l2):
    """Exact x of the crossing as (num, den) with den > 0, or None if parallel."""
    A1, B1, D1 = l1
    A2, B2, D2 = l2
    den = A1 * D2 - A2 * D1
    if den == 0:
        return None
    num = B2 * D1 - B1 * D2
    if den < 0:
        num, den = -num, -den
    return num, den


def meet_x(l1: Line, l2: Line) -> Optional[Scalar]:
    r = meet_x_raw(l1.key, l2.key)
    if r is None:
        return None
    f = Fraction(*r)
    return f.numerator if f.denominator == 1 else f


def slope_cmp(l1, l2) -> int:
    """Compare slopes of raw lines."""
    return sign(l1[0] * l2[2] - l2[0] * l1[2])


def shear_point(p: Point, lam) -> Point:
    lam = as_scalar(lam)
    return Point(p.x + lam * p.y, p.y)


def shear_line(l: Line, lam) -> Line:
    lam = as_scalar(lam)
    den = 1 + l.a * lam
    if den == 0:
        raise ValueError("shear makes a line vertical")
    return Line(Fraction(l.a) / den, Fraction(l.b) / den)


def shear(objs: Iterable, lam):
    """Apply (x, y) -> (x + lam*y, y) to points, lines or segments.

    Incidences survive any admissible ``lam``.  Above/below survives for a
    line exactly when ``1 + a*lam > 0``; otherwise the sheared line's
    orientation flips.
    """
    out = []
    for o in objs:
        if isinstance(o, Point):
            out.append(shear_point(o, lam))
        elif isinstance(o, Line):
            out.append(shear_line(o, lam))
        elif isinstance(o, Segment):
            out.append(Segment(shear_point(o.p, lam), shear_point(o.q, lam)))
        else:
            raise TypeError(f"cannot shear {type(o).__name__}")
    return out


def shear_is_admissible(lines, lam) -> bool:
    """True when shearing by ``lam`` keeps every line non-vertical."""
    lam = as_scalar(lam)
    return all(1 + l.a * lam != 0 for l in lines)
