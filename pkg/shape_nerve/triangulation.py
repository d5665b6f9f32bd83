"""Sampling, Delaunay triangulation and shape labelling of planar complexes."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from shape_nerve.errors import (
    INVALID_ARGUMENT,
    ComplexError,
    ShapeNerveError,
    TriangulationError,
)
from shape_nerve.geometry import (
    Location,
    Number,
    Point2,
    SimplePolygon,
    Triangle2,
    _as_point,
    _ring_location,
    incircle_det,
    orient_det,
    point_in_polygon,
    to_fraction,
)

logger = logging.getLogger(__name__)

Tri = Tuple[int, int, int]
Edge = Tuple[int, int]

# Index of the vertex at infinity while triangulating.
GHOST = -1


class Label(Enum):
    SHAPE_INTERIOR = "SHAPE_INTERIOR"
    SHAPE_BOUNDARY = "SHAPE_BOUNDARY"
    EXTERIOR = "EXTERIOR"

    @property
    def in_shape(self) -> bool:
        return self is not Label.EXTERIOR


_LOCATION_LABELS = {
    Location.INTERIOR: Label.SHAPE_INTERIOR,
    Location.BOUNDARY: Label.SHAPE_BOUNDARY,
    Location.EXTERIOR: Label.EXTERIOR,
}


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A planar 2-complex: indexed vertices and CCW vertex-index triangles.

    Edges and incidence maps are derived on first use. Labels are ``None``
    until the complex has been labelled against a shape. Instances compare
    by identity; use :meth:`same_as` to compare geometry.
    """

    vertices: Tuple[Point2, ...]
    triangles: Tuple[Tri, ...]
    vertex_labels: Optional[Tuple[Label, ...]] = None
    triangle_labels: Optional[Tuple[Label, ...]] = None

    @cached_property
    def edge_to_triangles(self) -> Dict[Edge, Tuple[int, ...]]:
        incident: Dict[Edge, List[int]] = {}
        for t_id, (a, b, c) in enumerate(self.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                incident.setdefault(_edge(u, v), []).append(t_id)
        return {e: tuple(ts) for e, ts in sorted(incident.items())}

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self.edge_to_triangles)

    @cached_property
    def vertex_to_triangles(self) -> Tuple[Tuple[int, ...], ...]:
        incident: List[List[int]] = [[] for _ in self.vertices]
        for t_id, tri in enumerate(self.triangles):
            for v in tri:
                incident[v].append(t_id)
        return tuple(tuple(ts) for ts in incident)

    def same_as(self, other: "SimplicialComplex") -> bool:
        """Same vertices and triangles in the same order (labels ignored)."""
        return self is other or (
            self.vertices == other.vertices and self.triangles == other.triangles
        )

    def triangle(self, t_id: int) -> Triangle2:
        a, b, c = self.triangles[t_id]
        return Triangle2(self.vertices[a], self.vertices[b], self.vertices[c])

    def boundary_edges(self) -> Tuple[Edge, ...]:
        return tuple(e for e, ts in self.edge_to_triangles.items() if len(ts) == 1)

    def euler_characteristic(self) -> int:
        used = {v for tri in self.triangles for v in tri}
        return len(used) - len(self.edges) + len(self.triangles)

    def with_labels(
        self, vertex_labels: Sequence[Label], triangle_labels: Sequence[Label]
    ) -> "SimplicialComplex":
        return replace(
            self,
            vertex_labels=tuple(vertex_labels),
            triangle_labels=tuple(triangle_labels),
        )

    def validate(self, check_overlap: bool = True) -> None:
        """Raise INVALID_COMPLEX if any structural invariant fails."""
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ComplexError("duplicate vertex coordinates")
        seen = set()
        for t_id, tri in enumerate(self.triangles):
            if len(set(tri)) != 3 or not all(0 <= v < n for v in tri):
                raise ComplexError(f"triangle {t_id} has invalid indices {tri}", triangle=t_id)
            a, b, c = (self.vertices[v] for v in tri)
            if orient_det(a.x, a.y, b.x, b.y, c.x, c.y) <= 0:
                raise ComplexError(f"triangle {t_id} is not counter-clockwise", triangle=t_id)
            key = frozenset(tri)
            if key in seen:
                raise ComplexError(f"triangle {t_id} is duplicated", triangle=t_id)
            seen.add(key)
        for e, ts in self.edge_to_triangles.items():
            if len(ts) > 2:
                raise ComplexError(f"edge {e} belongs to {len(ts)} triangles", edge=list(e))
        for v, ts in enumerate(self.vertex_to_triangles):
            for t_id in ts:
                if v not in self.triangles[t_id]:
                    raise ComplexError("vertex incidence is inconsistent", vertex=v)
        for t_id, tri in enumerate(self.triangles):
            for v in tri:
                if t_id not in self.vertex_to_triangles[v]:
                    raise ComplexError("vertex incidence is inconsistent", vertex=v)
        for labels, size, what in (
            (self.vertex_labels, n, "vertex"),
            (self.triangle_labels, len(self.triangles), "triangle"),
        ):
            if labels is not None and len(labels) != size:
                raise ComplexError(f"{what} label count does not match")
        if check_overlap:
            overlap = find_overlapping_triangles(self)
            if overlap is not None:
                raise ComplexError(
                    f"triangles {overlap[0]} and {overlap[1]} have overlapping interiors",
                    triangle=list(overlap),
                )


@dataclass(frozen=True)
class ShapeComplex:
    """A labelled complex together with the shape it was labelled against."""

    complex: SimplicialComplex
    shape: SimplePolygon
    shape_vertex_ids: FrozenSet[int]

    def shape_triangle_ids(self) -> FrozenSet[int]:
        labels = self.complex.triangle_labels or ()
        return frozenset(t for t, label in enumerate(labels) if label.in_shape)

    def exterior_vertex_ids(self) -> FrozenSet[int]:
        return frozenset(range(len(self.complex.vertices))) - self.shape_vertex_ids


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _separated(p: Sequence[Point2], q: Sequence[Point2]) -> bool:
    """True iff some edge line of p or q weakly separates the two triangles."""
    for first, second in ((p, q), (q, p)):
        for i in range(3):
            a, b = first[i], first[(i + 1) % 3]
            if all(orient_det(a.x, a.y, b.x, b.y, r.x, r.y) <= 0 for r in second):
                return True
    return False


def find_overlapping_triangles(cx: SimplicialComplex) -> Optional[Tuple[int, int]]:
    """First pair of triangles whose interiors intersect, or None."""
    boxes = []
    for tri in cx.triangles:
        pts = [cx.vertices[v] for v in tri]
        boxes.append(
            (min(p.x for p in pts), min(p.y for p in pts), max(p.x for p in pts), max(p.y for p in pts))
        )
    order = sorted(range(len(cx.triangles)), key=lambda t: boxes[t][0])
    for pos, i in enumerate(order):
        for j in order[pos + 1:]:
            if boxes[j][0] >= boxes[i][2]:
                break
            if boxes[j][1] >= boxes[i][3] or boxes[i][1] >= boxes[j][3]:
                continue
            p = [cx.vertices[v] for v in cx.triangles[i]]
            q = [cx.vertices[v] for v in cx.triangles[j]]
            if not _separated(p, q):
                return (min(i, j), max(i, j))
    return None


# -- sampling ---------------------------------------------------------------


def _segments_needed(a: Point2, b: Point2, step: Fraction) -> int:
    """Smallest k with |ab| / k <= step, decided exactly on squared lengths."""
    length_sq = (b.x - a.x) ** 2 + (b.y - a.y) ** 2
    k = max(1, math.ceil(math.sqrt(float(length_sq)) / float(step)) - 1)
    while length_sq > (k * step) ** 2:
        k += 1
    while k > 1 and length_sq <= ((k - 1) * step) ** 2:
        k -= 1
    return k


def _grid(x0: Fraction, y0: Fraction, x1: Fraction, y1: Fraction, pitch: Fraction):
    nx = math.floor((x1 - x0) / pitch)
    ny = math.floor((y1 - y0) / pitch)
    for i in range(nx + 1):
        for j in range(ny + 1):
            yield Point2(x0 + i * pitch, y0 + j * pitch)


def sample_shape(
    shape: SimplePolygon,
    boundary_step: Number,
    interior_spacing: Number,
    margin: Number = 0,
) -> List[Point2]:
    """Point sample of a shape: ring vertices, edge subdivisions, interior grid, margin band.

    The interior grid is anchored at the lower-left corner of the bounding box.
    The margin band uses pitch ``min(interior_spacing, margin)`` on the box
    grown by ``margin`` and keeps only points outside the outer ring.
    """
    step = to_fraction(boundary_step)
    spacing = to_fraction(interior_spacing)
    band = to_fraction(margin)
    if step <= 0 or spacing <= 0:
        raise ShapeNerveError("boundary_step and interior_spacing must be positive", INVALID_ARGUMENT)
    if band < 0:
        raise ShapeNerveError("margin must be non-negative", INVALID_ARGUMENT)
    shape.validate()

    samples: Dict[Point2, None] = {}
    for ring in shape.rings:
        for p in ring:
            samples.setdefault(p, None)
    for a, b in shape.edges():
        k = _segments_needed(a, b, step)
        for i in range(1, k):
            t = Fraction(i, k)
            samples.setdefault(Point2(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t), None)

    x0, y0, x1, y1 = shape.bounding_box()
    for p in _grid(x0, y0, x1, y1, spacing):
        if point_in_polygon(shape, p) is Location.INTERIOR:
            samples.setdefault(p, None)

    if band > 0:
        pitch = min(spacing, band)
        for p in _grid(x0 - band, y0 - band, x1 + band, y1 + band, pitch):
            if _ring_location(shape.outer, p) is Location.EXTERIOR:
                samples.setdefault(p, None)

    logger.debug("sampled %d points", len(samples))
    return list(samples)


# -- Delaunay -----------------------------------------------------------------


def _common_scale(points: Sequence[Point2]) -> int:
    scale = 1
    for p in points:
        for value in (p.x, p.y):
            scale = scale * value.denominator // math.gcd(scale, value.denominator)
    return scale


def _rotate_ghost_last(tri: Tri) -> Tri:
    a, b, c = tri
    if a == GHOST:
        return (b, c, a)
    if b == GHOST:
        return (c, a, b)
    return tri


def canonical_triangle(tri: Tri) -> Tri:
    """Rotate so the smallest index comes first, keeping orientation."""
    a, b, c = tri
    if a <= b and a <= c:
        return (a, b, c)
    if b <= a and b <= c:
        return (b, c, a)
    return (c, a, b)


def delaunay(points: Iterable[Point2]) -> SimplicialComplex:
    """Delaunay triangulation of the convex hull of ``points``.

    Bowyer-Watson insertion in lexicographic order, bounded by a single vertex
    at infinity whose triangles are dropped at the end. Cocircular quads are
    then flipped to the diagonal with the smaller (min, max) index pair.
    Vertex ``i`` of the result is the ``i``-th distinct input point in sorted
    order.
    """
    unique = sorted({_as_point(p) for p in points})
    n = len(unique)
    if n < 3:
        raise TriangulationError(f"need at least 3 distinct points, got {n}")

    scale = _common_scale(unique)
    xs = [int(p.x * scale) for p in unique]
    ys = [int(p.y * scale) for p in unique]

    def orient(i: int, j: int, k: int) -> int:
        return orient_det(xs[i], ys[i], xs[j], ys[j], xs[k], ys[k])

    third = next((k for k in range(2, n) if orient(0, 1, k) != 0), None)
    if third is None:
        raise TriangulationError("all points are collinear")

    def strictly_between(i: int, j: int, k: int) -> bool:
        lo_x, hi_x = sorted((xs[i], xs[j]))
        lo_y, hi_y = sorted((ys[i], ys[j]))
        inside = lo_x <= xs[k] <= hi_x and lo_y <= ys[k] <= hi_y
        return inside and (xs[k], ys[k]) not in ((xs[i], ys[i]), (xs[j], ys[j]))

    def conflicts(tri: Tri, p: int) -> bool:
        a, b, c = tri
        if c == GHOST:
            o = orient(a, b, p)
            return o > 0 or (o == 0 and strictly_between(a, b, p))
        return incircle_det(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], xs[p], ys[p]) > 0

    a, b, c = (0, 1, third) if orient(0, 1, third) > 0 else (0, third, 1)
    triangles = {(a, b, c), (b, a, GHOST), (c, b, GHOST), (a, c, GHOST)}

    for p in range(2, n):
        if p == third:
            continue
        bad = [tri for tri in triangles if conflicts(tri, p)]
        directed = set()
        for tri in bad:
            for k in range(3):
                directed.add((tri[k], tri[(k + 1) % 3]))
        for tri in bad:
            triangles.discard(tri)
        for u, v in directed:
            if (v, u) not in directed:
                triangles.add(_rotate_ghost_last((u, v, p)))

    real = {tri for tri in triangles if GHOST not in tri}
    flips = _apply_tie_rule(real, xs, ys)
    logger.debug("triangulated %d points into %d triangles (%d tie flips)", n, len(real), flips)

    result = tuple(sorted(canonical_triangle(tri) for tri in real))
    return SimplicialComplex(vertices=tuple(unique), triangles=result)


def _apply_tie_rule(triangles: set, xs: List[int], ys: List[int]) -> int:
    """Flip cocircular diagonals towards the lexicographically smaller index pair.

    Each flip replaces an edge by a strictly smaller one and keeps every
    circumcircle, so the loop terminates and the result stays Delaunay.
    """
    flips = 0
    changed = True
    while changed:
        changed = False
        owner: Dict[Edge, Tri] = {}
        for tri in triangles:
            for k in range(3):
                owner[(tri[k], tri[(k + 1) % 3])] = tri
        for (u, v), left in sorted(owner.items()):
            if u > v or (v, u) not in owner:
                continue
            if left not in triangles:
                continue
            right = owner[(v, u)]
            if right not in triangles:
                continue
            c = next(w for w in left if w not in (u, v))
            d = next(w for w in right if w not in (u, v))
            if (min(c, d), max(c, d)) >= (u, v):
                continue
            det = incircle_det(xs[u], ys[u], xs[v], ys[v], xs[c], ys[c], xs[d], ys[d])
            if det != 0:
                continue
            triangles.discard(left)
            triangles.discard(right)
            triangles.add((u, d, c))
            triangles.add((d, v, c))
            flips += 1
            changed = True
    return flips


def build_shape_complex(complex: SimplicialComplex, shape: SimplePolygon) -> ShapeComplex:
    """Label vertices by location and triangles by their centroid.

    A triangle whose centroid is interior to the shape is SHAPE_INTERIOR when all
    its corners are interior points, SHAPE_BOUNDARY otherwise.
    """
    vertex_labels = [_LOCATION_LABELS[point_in_polygon(shape, p)] for p in complex.vertices]
    triangle_labels = []
    for t_id, tri in enumerate(complex.triangles):
        centroid = complex.triangle(t_id).centroid()
        if point_in_polygon(shape, centroid) is not Location.INTERIOR:
            triangle_labels.append(Label.EXTERIOR)
        elif all(vertex_labels[v] is Label.SHAPE_INTERIOR for v in tri):
            triangle_labels.append(Label.SHAPE_INTERIOR)
        else:
            triangle_labels.append(Label.SHAPE_BOUNDARY)
    labelled = complex.with_labels(vertex_labels, triangle_labels)
    shape_ids = frozenset(v for v, label in enumerate(vertex_labels) if label.in_shape)
    return ShapeComplex(complex=labelled, shape=shape, shape_vertex_ids=shape_ids)


def triangulate_shape(
    shape: SimplePolygon,
    boundary_step: Number,
    interior_spacing: Number,
    margin: Number = 0,
) -> ShapeComplex:
    """Sample, triangulate and label a shape in one call."""
    points = sample_shape(shape, boundary_step, interior_spacing, margin)
    return build_shape_complex(delaunay(points), shape)
