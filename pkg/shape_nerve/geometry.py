"""Exact planar predicates and measures.

Coordinates are ``fractions.Fraction`` values, so every sign computed here is
exact. The raw ``*_det`` helpers accept any exact numbers (ints or Fractions)
and are shared with the triangulation code, which runs them on integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from shape_nerve.errors import (
    DEGENERATE_TRIANGLE,
    NUMBER_PARSE_ERROR,
    POLYGON_INVALID,
    TOO_FEW_VERTICES,
    GeometryError,
    PolygonError,
    ShapeNerveError,
)

Number = Union[int, float, str, Decimal, Fraction]


class Orientation(Enum):
    CCW = 1
    CW = -1
    COLLINEAR = 0


class CirclePosition(Enum):
    INSIDE = 1
    ON = 0
    OUTSIDE = -1


class Location(Enum):
    INTERIOR = "INTERIOR"
    BOUNDARY = "BOUNDARY"
    EXTERIOR = "EXTERIOR"


def to_fraction(value: Number) -> Fraction:
    """Convert a coordinate to an exact Fraction.

    Strings and Decimals are read as exact decimals ("0.1" is 1/10); floats are
    taken at their exact binary value. NaN and infinities are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ShapeNerveError(f"not a coordinate: {value!r}", NUMBER_PARSE_ERROR)
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ShapeNerveError(f"non-finite coordinate: {value!r}", NUMBER_PARSE_ERROR)
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ShapeNerveError(f"non-finite coordinate: {value!r}", NUMBER_PARSE_ERROR)
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            result = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ShapeNerveError(f"cannot parse number: {value!r}", NUMBER_PARSE_ERROR)
        return result
    raise ShapeNerveError(f"not a coordinate: {value!r}", NUMBER_PARSE_ERROR)


@dataclass(frozen=True, order=True)
class Point2:
    """A planar point with exact rational coordinates (a 0-simplex)."""

    x: Fraction
    y: Fraction

    def __init__(self, x: Number, y: Number):
        object.__setattr__(self, "x", to_fraction(x))
        object.__setattr__(self, "y", to_fraction(y))

    def __iter__(self):
        yield self.x
        yield self.y

    def __repr__(self) -> str:
        return f"Point2({format_number(self.x)}, {format_number(self.y)})"


@dataclass(frozen=True)
class Triangle2:
    """A triangle given by three corners; filled triangles must not be collinear."""

    a: Point2
    b: Point2
    c: Point2

    @property
    def points(self) -> Tuple[Point2, Point2, Point2]:
        return (self.a, self.b, self.c)

    def is_degenerate(self) -> bool:
        return orientation(self.a, self.b, self.c) is Orientation.COLLINEAR

    def centroid(self) -> Point2:
        return Point2(
            (self.a.x + self.b.x + self.c.x) / 3,
            (self.a.y + self.b.y + self.c.y) / 3,
        )


@dataclass(frozen=True)
class SimplePolygon:
    """Outer ring plus optional hole rings.

    Holes are an extension beyond simply connected shapes; they exist so that
    an annulus can be described.
    """

    outer: Tuple[Point2, ...]
    holes: Tuple[Tuple[Point2, ...], ...] = field(default_factory=tuple)

    def __init__(
        self,
        outer: Iterable[Point2],
        holes: Iterable[Iterable[Point2]] = (),
        validate: bool = True,
    ):
        object.__setattr__(self, "outer", tuple(_as_point(p) for p in outer))
        object.__setattr__(
            self, "holes", tuple(tuple(_as_point(p) for p in ring) for ring in holes)
        )
        if validate:
            self.validate()

    @property
    def rings(self) -> Tuple[Tuple[Point2, ...], ...]:
        return (self.outer,) + self.holes

    def edges(self) -> List[Tuple[Point2, Point2]]:
        result = []
        for ring in self.rings:
            n = len(ring)
            for i in range(n):
                result.append((ring[i], ring[(i + 1) % n]))
        return result

    def bounding_box(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        return min(xs), min(ys), max(xs), max(ys)

    def area(self) -> Fraction:
        total = abs(ring_signed_area(self.outer))
        for hole in self.holes:
            total -= abs(ring_signed_area(hole))
        return total

    def validate(self) -> None:
        """Check the ring invariants; raise POLYGON_INVALID naming the problem."""
        for index, ring in enumerate(self.rings):
            if len(ring) < 3:
                raise PolygonError(
                    f"ring {index} has {len(ring)} vertices, at least 3 required",
                    TOO_FEW_VERTICES,
                    ring=index,
                )
            crossing = find_ring_defect(ring)
            if crossing is not None:
                i, j = crossing
                raise PolygonError(
                    f"ring {index} is not simple: edges {i} and {j} intersect",
                    POLYGON_INVALID,
                    ring=index,
                    edges=[i, j],
                )
            if ring_signed_area(ring) == 0:
                raise PolygonError(f"ring {index} has zero area", ring=index)
        for index, hole in enumerate(self.holes, start=1):
            for p in hole:
                if _ring_location(self.outer, p) is not Location.INTERIOR:
                    raise PolygonError(
                        f"hole ring {index} is not strictly inside the outer ring",
                        ring=index,
                    )
            crossing = _ring_crossing(hole, self.outer)
            if crossing is not None:
                i, j = crossing
                raise PolygonError(
                    f"hole ring {index} edge {i} meets outer ring edge {j}",
                    ring=index,
                    edges=[i, j],
                )
            for other_index, other in enumerate(self.holes, start=1):
                if other_index <= index:
                    continue
                if _rings_touch(hole, other):
                    raise PolygonError(
                        f"hole rings {index} and {other_index} are not disjoint",
                        ring=index,
                    )


def _as_point(p) -> Point2:
    if isinstance(p, Point2):
        return p
    x, y = p
    return Point2(x, y)


def format_number(value: Fraction) -> str:
    """Exact decimal text when the value has a terminating expansion, else p/q."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


# -- raw determinants -------------------------------------------------------


def orient_det(ax, ay, bx, by, cx, cy):
    """Twice the signed area of (a, b, c); positive when counter-clockwise."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def incircle_det(ax, ay, bx, by, cx, cy, dx, dy):
    """Positive iff d lies inside the circle through CCW-ordered a, b, c."""
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        - blift * (adx * cdy - cdx * ady)
        + clift * (adx * bdy - bdx * ady)
    )


def _sign(value) -> int:
    return (value > 0) - (value < 0)


# -- predicates -------------------------------------------------------------


def orientation(p: Point2, q: Point2, r: Point2) -> Orientation:
    return Orientation(_sign(orient_det(p.x, p.y, q.x, q.y, r.x, r.y)))


def in_circumcircle(t: Triangle2, p: Point2) -> CirclePosition:
    """Position of ``p`` relative to the circle through the corners of ``t``."""
    o = _sign(orient_det(t.a.x, t.a.y, t.b.x, t.b.y, t.c.x, t.c.y))
    if o == 0:
        raise GeometryError("triangle is degenerate", DEGENERATE_TRIANGLE)
    det = incircle_det(t.a.x, t.a.y, t.b.x, t.b.y, t.c.x, t.c.y, p.x, p.y)
    return CirclePosition(_sign(det) * o)


def on_segment(a: Point2, b: Point2, p: Point2) -> bool:
    """True iff p lies on the closed segment ab."""
    if orient_det(a.x, a.y, b.x, b.y, p.x, p.y) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    """Closed-segment intersection test, touching and collinear overlap included."""
    d1 = _sign(orient_det(c.x, c.y, d.x, d.y, a.x, a.y))
    d2 = _sign(orient_det(c.x, c.y, d.x, d.y, b.x, b.y))
    d3 = _sign(orient_det(a.x, a.y, b.x, b.y, c.x, c.y))
    d4 = _sign(orient_det(a.x, a.y, b.x, b.y, d.x, d.y))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and on_segment(c, d, a))
        or (d2 == 0 and on_segment(c, d, b))
        or (d3 == 0 and on_segment(a, b, c))
        or (d4 == 0 and on_segment(a, b, d))
    )


def find_ring_defect(ring: Sequence[Point2]):
    """First pair of ring edge indices violating simplicity, or None.

    Repeated vertices are reported as the pair of edges starting at them.
    Adjacent edges may only share their common endpoint.
    """
    n = len(ring)
    seen = {}
    for i, p in enumerate(ring):
        if p in seen:
            return (seen[p], i)
        seen[p] = i
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = ring[j], ring[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent: shared endpoint only, no folding back
                shared = b if j == i + 1 else a
                other_self = a if j == i + 1 else b
                other = d if j == i + 1 else c
                if orient_det(other_self.x, other_self.y, shared.x, shared.y, other.x, other.y) == 0:
                    if on_segment(shared, other, other_self) or on_segment(shared, other_self, other):
                        return (i, j)
                continue
            if segments_intersect(a, b, c, d):
                return (i, j)
    return None


def is_simple_polygon(ring: Sequence[Point2]) -> bool:
    ring = [_as_point(p) for p in ring]
    if len(ring) < 3:
        raise PolygonError(
            f"ring has {len(ring)} vertices, at least 3 required", TOO_FEW_VERTICES
        )
    return find_ring_defect(ring) is None


def ring_signed_area(ring: Sequence[Point2]) -> Fraction:
    total = Fraction(0)
    n = len(ring)
    for i in range(n):
        p, q = ring[i], ring[(i + 1) % n]
        total += p.x * q.y - q.x * p.y
    return total / 2


def _ring_location(ring: Sequence[Point2], p: Point2) -> Location:
    """Crossing-parity test on a single ring, with exact boundary detection."""
    n = len(ring)
    inside = False
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if on_segment(a, b, p):
            return Location.BOUNDARY
        # half-open rule on y avoids double counting at vertices
        if (a.y > p.y) != (b.y > p.y):
            o = orient_det(a.x, a.y, b.x, b.y, p.x, p.y)
            if (o > 0) == (b.y > a.y):
                inside = not inside
    return Location.INTERIOR if inside else Location.EXTERIOR


def _ring_crossing(r1: Sequence[Point2], r2: Sequence[Point2]) -> Optional[Tuple[int, int]]:
    """First pair (edge of r1, edge of r2) that touches or crosses, or None."""
    for i in range(len(r1)):
        a, b = r1[i], r1[(i + 1) % len(r1)]
        for j in range(len(r2)):
            if segments_intersect(a, b, r2[j], r2[(j + 1) % len(r2)]):
                return i, j
    return None


def _rings_touch(r1: Sequence[Point2], r2: Sequence[Point2]) -> bool:
    if _ring_crossing(r1, r2) is not None:
        return True
    if _ring_location(r2, r1[0]) is Location.INTERIOR:
        return True
    return _ring_location(r1, r2[0]) is Location.INTERIOR


def point_in_polygon(poly: SimplePolygon, p: Point2) -> Location:
    """Classify p against the region bounded by the outer ring minus the holes."""
    where = _ring_location(poly.outer, p)
    if where is not Location.INTERIOR:
        return where
    for hole in poly.holes:
        inside_hole = _ring_location(hole, p)
        if inside_hole is Location.BOUNDARY:
            return Location.BOUNDARY
        if inside_hole is Location.INTERIOR:
            return Location.EXTERIOR
    return Location.INTERIOR


# -- measures ---------------------------------------------------------------


def triangle_area(t: Triangle2) -> Fraction:
    return abs(orient_det(t.a.x, t.a.y, t.b.x, t.b.y, t.c.x, t.c.y)) / 2


def _length(p: Point2, q: Point2) -> float:
    return math.hypot(float(q.x - p.x), float(q.y - p.y))


def triangle_perimeter(t: Triangle2) -> float:
    return _length(t.a, t.b) + _length(t.b, t.c) + _length(t.c, t.a)


def triangle_min_angle(t: Triangle2) -> float:
    """Smallest interior angle in radians."""
    if t.is_degenerate():
        raise GeometryError("triangle is degenerate", DEGENERATE_TRIANGLE)
    angles = []
    pts = t.points
    for i in range(3):
        p, q, r = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        ux, uy = float(q.x - p.x), float(q.y - p.y)
        vx, vy = float(r.x - p.x), float(r.y - p.y)
        cross = float(orient_det(p.x, p.y, q.x, q.y, r.x, r.y))
        angles.append(math.atan2(abs(cross), ux * vx + uy * vy))
    return min(angles)


def convex_hull(points: Iterable[Point2]) -> List[Point2]:
    """Monotone-chain hull in CCW order, collinear boundary points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: List[Point2] = []
        for p in seq:
            while len(chain) >= 2 and orient_det(
                chain[-2].x, chain[-2].y, chain[-1].x, chain[-1].y, p.x, p.y
            ) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]
