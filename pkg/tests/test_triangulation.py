#!/usr/bin/env python3
import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from shape_nerve.errors import INVALID_COMPLEX, TRIANGULATION_IMPOSSIBLE, ShapeNerveError
from shape_nerve.fixtures import GRID, random_points, rng_for, square, square_complex
from shape_nerve.geometry import (
    Orientation,
    Point2,
    SimplePolygon,
    convex_hull,
    incircle_det,
    orientation,
    ring_signed_area,
    triangle_area,
)
from shape_nerve.triangulation import (
    Label,
    SimplicialComplex,
    build_shape_complex,
    delaunay,
    sample_shape,
    triangulate_shape,
)


def empty_circle_violations(cx: SimplicialComplex, scale: int = GRID):
    """Brute force: every vertex against every circumcircle, on integer coordinates."""
    xs = [int(p.x * scale) for p in cx.vertices]
    ys = [int(p.y * scale) for p in cx.vertices]
    bad = []
    for t, (a, b, c) in enumerate(cx.triangles):
        for p in range(len(xs)):
            if p in (a, b, c):
                continue
            if incircle_det(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], xs[p], ys[p]) > 0:
                bad.append((t, p))
    return bad


def on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    return (
        orientation(a, b, p) is Orientation.COLLINEAR
        and min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


class TestDelaunay(unittest.TestCase):
    def test_unit_square_tie_rule(self):
        cx = delaunay([Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)])
        self.assertEqual(cx.vertices, (Point2(0, 0), Point2(0, 1), Point2(1, 0), Point2(1, 1)))
        self.assertEqual(cx.triangles, ((0, 2, 3), (0, 3, 1)))

    def test_input_order_does_not_matter(self):
        pts = [Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)]
        self.assertTrue(delaunay(pts).same_as(delaunay(list(reversed(pts)))))

    def test_too_few_points(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            delaunay([Point2(0, 0), Point2(1, 0), Point2(0, 0)])
        self.assertEqual(ctx.exception.code, TRIANGULATION_IMPOSSIBLE)

    def test_collinear_points(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            delaunay([Point2(i, 2 * i) for i in range(5)])
        self.assertEqual(ctx.exception.code, TRIANGULATION_IMPOSSIBLE)

    def test_collinear_run_on_hull(self):
        pts = [Point2(i, 0) for i in range(5)] + [Point2(2, 3)]
        cx = delaunay(pts)
        self.assertEqual(len(cx.triangles), 4)
        cx.validate()

    def test_cocircular_grid(self):
        pts = [Point2(x, y) for x in range(4) for y in range(4)]
        cx = delaunay(pts)
        cx.validate()
        self.assertEqual(len(cx.triangles), 18)
        self.assertEqual(empty_circle_violations(cx, 1), [])
        self.assertTrue(cx.same_as(delaunay(reversed(pts))))

    def test_random_point_sets(self):
        """Empty circles, Euler characteristic 1 and exact hull area over 100 seeded sets."""
        for seed in range(100):
            rng = rng_for(seed)
            n = int(rng.integers(4, 201))
            pts = random_points(rng, n)
            if len(set(pts)) < 3:
                continue
            cx = delaunay(pts)
            with self.subTest(seed=seed, n=n):
                self.assertEqual(empty_circle_violations(cx), [])
                self.assertEqual(cx.euler_characteristic(), 1)
                hull = convex_hull(cx.vertices)
                total = sum((triangle_area(cx.triangle(t)) for t in range(len(cx.triangles))), Fraction(0))
                self.assertEqual(total, ring_signed_area(hull))
                self.assertTrue(cx.same_as(delaunay(reversed(pts))))
                cx.validate(check_overlap=n <= 60)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=3, max_size=40, unique=True))
    def test_small_integer_sets(self, raw):
        pts = [Point2(x, y) for x, y in raw]
        try:
            cx = delaunay(pts)
        except ShapeNerveError as e:
            self.assertEqual(e.code, TRIANGULATION_IMPOSSIBLE)
            return
        self.assertEqual(empty_circle_violations(cx, 1), [])
        self.assertEqual(cx.euler_characteristic(), 1)
        cx.validate()

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=40, unique=True))
    def test_boundary_is_the_convex_hull(self, raw):
        pts = [Point2(x, y) for x, y in raw]
        try:
            cx = delaunay(pts)
        except ShapeNerveError:
            return
        hull = convex_hull(cx.vertices)
        sides = [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]
        on_hull = {v for v, p in enumerate(cx.vertices) if any(on_segment(p, a, b) for a, b in sides)}
        edges = cx.boundary_edges()
        self.assertEqual({v for e in edges for v in e}, on_hull)
        # collinear hull points split a hull side into several boundary edges
        self.assertEqual(len(edges), len(on_hull))
        for u, v in edges:
            p, q = cx.vertices[u], cx.vertices[v]
            self.assertTrue(any(on_segment(p, a, b) and on_segment(q, a, b) for a, b in sides))


class TestSampling(unittest.TestCase):
    def test_square_corners_only(self):
        pts = sample_shape(square(), 1, 1)
        self.assertEqual(sorted(pts), [Point2(0, 0), Point2(0, 1), Point2(1, 0), Point2(1, 1)])

    def test_boundary_step_and_interior_grid(self):
        pts = set(sample_shape(square(), "0.5", "0.5"))
        self.assertIn(Point2("0.5", 0), pts)
        self.assertIn(Point2("0.5", "0.5"), pts)
        self.assertEqual(len(pts), 9)

    def test_margin_band_is_outside(self):
        pts = sample_shape(square(), 1, 1, margin=1)
        outside = [p for p in pts if not (0 <= p.x <= 1 and 0 <= p.y <= 1)]
        self.assertEqual(len(outside), 12)

    def test_invalid_parameters(self):
        with self.assertRaises(ShapeNerveError):
            sample_shape(square(), 0, 1)
        with self.assertRaises(ShapeNerveError):
            sample_shape(square(), 1, 1, margin=-1)


class TestLabels(unittest.TestCase):
    def test_square_labels(self):
        sc = square_complex()
        self.assertEqual(set(sc.complex.vertex_labels), {Label.SHAPE_BOUNDARY})
        self.assertEqual(set(sc.complex.triangle_labels), {Label.SHAPE_BOUNDARY})
        self.assertEqual(sc.shape_vertex_ids, frozenset(range(4)))
        self.assertEqual(sc.shape_triangle_ids(), frozenset([0, 1]))

    def test_boundary_edges(self):
        cx = square_complex().complex
        self.assertEqual(set(cx.boundary_edges()), {(0, 1), (0, 2), (1, 3), (2, 3)})
        self.assertEqual(cx.euler_characteristic(), 1)

    def test_margin_produces_exterior(self):
        sc = triangulate_shape(square(), "0.5", "0.5", margin=1)
        labels = sc.complex.vertex_labels
        self.assertIn(Label.EXTERIOR, labels)
        self.assertIn(Label.SHAPE_INTERIOR, labels)
        self.assertEqual(sc.exterior_vertex_ids(), frozenset(v for v, l in enumerate(labels) if l is Label.EXTERIOR))
        for t in range(len(sc.complex.triangles)):
            if sc.complex.triangle_labels[t].in_shape:
                self.assertTrue(all(labels[v].in_shape for v in sc.complex.triangles[t]))

    def test_concave_hull_triangles_are_exterior(self):
        shape = SimplePolygon([(0, 0), (2, 0), (2, 2), (1, 1), (0, 2)])
        sc = build_shape_complex(delaunay(shape.outer), shape)
        self.assertIn(Label.EXTERIOR, sc.complex.triangle_labels)


class TestValidate(unittest.TestCase):
    def test_clockwise_triangle(self):
        cx = SimplicialComplex(vertices=(Point2(0, 0), Point2(1, 0), Point2(0, 1)), triangles=((0, 2, 1),))
        with self.assertRaises(ShapeNerveError) as ctx:
            cx.validate()
        self.assertEqual(ctx.exception.code, INVALID_COMPLEX)

    def test_overlapping_triangles(self):
        vertices = (Point2(0, 0), Point2(2, 0), Point2(0, 2), Point2(1, 0), Point2(3, 0), Point2(1, 2))
        cx = SimplicialComplex(vertices=vertices, triangles=((0, 1, 2), (3, 4, 5)))
        with self.assertRaises(ShapeNerveError) as ctx:
            cx.validate()
        self.assertEqual(ctx.exception.context["triangle"], [0, 1])
        cx.validate(check_overlap=False)


if __name__ == "__main__":
    unittest.main()
