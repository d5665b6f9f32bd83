"""Named fixtures and seeded random shapes.

Random fixtures draw from numpy's PCG64 bit generator (a 64-bit permuted
congruential generator) seeded with the given integer, and round every
coordinate to a fixed decimal grid so results are exact and reproducible.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from shape_nerve.errors import INVALID_ARGUMENT, ShapeNerveError
from shape_nerve.geometry import Point2, SimplePolygon, convex_hull, find_ring_defect, ring_signed_area
from shape_nerve.triangulation import (
    ShapeComplex,
    SimplicialComplex,
    build_shape_complex,
    delaunay,
    triangulate_shape,
)

# random coordinates are multiples of 1/GRID
GRID = 1000


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _snap(value: float) -> Fraction:
    return Fraction(int(round(value * GRID)), GRID)


# -- named fixtures -------------------------------------------------------------------


def square() -> SimplePolygon:
    return SimplePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def square_complex() -> ShapeComplex:
    """The unit square triangulated from its four corners."""
    shape = square()
    return build_shape_complex(delaunay(shape.outer), shape)


def hexagon() -> SimplePolygon:
    return SimplePolygon([(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)])


def hexagon_with_center() -> ShapeComplex:
    """Hexagon plus its center; the center's star holds all six triangles."""
    shape = hexagon()
    return build_shape_complex(delaunay(list(shape.outer) + [Point2(0, 0)]), shape)


def single_triangle() -> ShapeComplex:
    shape = SimplePolygon([(0, 0), (1, 0), (0, 1)])
    return build_shape_complex(delaunay(shape.outer), shape)


def annulus_shape() -> SimplePolygon:
    return SimplePolygon(
        [(0, 0), (3, 0), (3, 3), (0, 3)],
        holes=[[(1, 1), (2, 1), (2, 2), (1, 2)]],
    )


def annulus() -> ShapeComplex:
    """Square annulus: 8 vertices, 16 edges, 8 triangles around a square hole."""
    shape = annulus_shape()
    outer = list(shape.outer)
    inner = list(shape.holes[0])
    vertices = tuple(outer + inner)
    triangles = []
    for k in range(4):
        o, o_next = k, (k + 1) % 4
        i, i_next = 4 + k, 4 + (k + 1) % 4
        triangles.append((o, o_next, i))
        triangles.append((o_next, i_next, i))
    complex = SimplicialComplex(vertices=vertices, triangles=tuple(triangles))
    complex.validate()
    return build_shape_complex(complex, shape)


def two_islands() -> ShapeComplex:
    """Two shape triangles joined only through an exterior corridor of triangles."""
    shape = SimplePolygon([(0, 0), (1, 0), (0, 1)])
    far = SimplePolygon([(10, 0), (11, 0), (10, 1)])
    # every chord between the islands passes strictly between a corridor column pair
    corridor = [(x, y) for x in range(2, 10) for y in (0, 1)]
    points = list(shape.outer) + list(far.outer) + corridor
    cx = delaunay(points)
    labelled = build_shape_complex(cx, shape)
    other = build_shape_complex(cx, far)
    # vertices of both islands count as shape vertices
    return ShapeComplex(
        complex=_merge_labels(labelled.complex, other.complex),
        shape=shape,
        shape_vertex_ids=labelled.shape_vertex_ids | other.shape_vertex_ids,
    )


def _merge_labels(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    vertex_labels = [x if x.in_shape else y for x, y in zip(a.vertex_labels, b.vertex_labels)]
    triangle_labels = [x if x.in_shape else y for x, y in zip(a.triangle_labels, b.triangle_labels)]
    return a.with_labels(vertex_labels, triangle_labels)


# -- random fixtures -----------------------------------------------------------------


def random_points(rng: np.random.Generator, n: int, scale: float = 1.0) -> List[Point2]:
    """``n`` points uniform in ``[0, scale]^2`` on the coordinate grid (duplicates possible)."""
    raw = rng.random((n, 2)) * scale
    return [Point2(_snap(x), _snap(y)) for x, y in raw]


def random_convex_polygon(rng: np.random.Generator, n: int = 12, scale: float = 1.0) -> SimplePolygon:
    """Convex hull of random points, redrawn until it has at least 3 corners."""
    while True:
        hull = convex_hull(random_points(rng, max(n, 3), scale))
        if len(hull) >= 3:
            return SimplePolygon(hull)


def random_star_polygon(rng: np.random.Generator, n: int = 10, scale: float = 1.0) -> SimplePolygon:
    """Simple polygon star-shaped about its center: sorted angles, random radii."""
    if n < 3:
        raise ShapeNerveError("a polygon needs at least 3 vertices", INVALID_ARGUMENT)
    while True:
        angles = np.sort(rng.random(n)) * 2 * math.pi
        radii = (0.4 + 0.6 * rng.random(n)) * scale / 2
        ring = []
        for a, r in zip(angles, radii):
            p = Point2(_snap(scale / 2 + r * math.cos(a)), _snap(scale / 2 + r * math.sin(a)))
            if not ring or p != ring[-1]:
                ring.append(p)
        if len(ring) < 3 or find_ring_defect(ring) is not None or ring_signed_area(ring) == 0:
            continue
        if ring_signed_area(ring) < 0:
            ring.reverse()
        return SimplePolygon(ring)


def random_shape_complex(
    rng: np.random.Generator,
    n: int = 10,
    step: Fraction = Fraction(1, 5),
    spacing: Fraction = Fraction(1, 5),
    margin: Fraction = Fraction(0),
    convex: bool = False,
) -> ShapeComplex:
    shape = random_convex_polygon(rng, n) if convex else random_star_polygon(rng, n)
    return triangulate_shape(shape, step, spacing, margin)


FIXTURES: Dict[str, Callable[[], ShapeComplex]] = {
    "square": square_complex,
    "hexagon": hexagon_with_center,
    "triangle": single_triangle,
    "annulus": annulus,
    "islands": two_islands,
}


def named_fixture(name: str) -> ShapeComplex:
    try:
        return FIXTURES[name]()
    except KeyError:
        valid = ", ".join(sorted(FIXTURES))
        raise ShapeNerveError(f"unknown fixture {name!r}; expected one of {valid}", INVALID_ARGUMENT)


def random_fixture(kind: str, seed: int, n: int = 10) -> ShapeComplex:
    """Seeded random shape complexes: ``convex``, ``star`` or ``points`` (hull of random points)."""
    rng = rng_for(seed)
    if kind == "convex":
        return random_shape_complex(rng, n, convex=True)
    if kind == "star":
        return random_shape_complex(rng, n)
    if kind == "points":
        points = random_points(rng, max(n, 3))
        cx = delaunay(points)
        return build_shape_complex(cx, SimplePolygon(convex_hull(cx.vertices)))
    raise ShapeNerveError(f"unknown random fixture {kind!r}", INVALID_ARGUMENT)
