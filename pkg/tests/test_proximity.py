#!/usr/bin/env python3
import unittest
from fractions import Fraction
from itertools import product

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from shape_nerve.axioms import random_family
from shape_nerve.errors import HOST_MISMATCH, INVALID_ARGUMENT, ShapeNerveError
from shape_nerve.fixtures import hexagon_with_center, random_fixture, rng_for, single_triangle, square_complex
from shape_nerve.geometry import Orientation, Point2, SimplePolygon, Triangle2, convex_hull, orientation
from shape_nerve.nerve import SubComplex, merge_complexes, shape_nerve_complex, star
from shape_nerve.proximity import (
    ProximityConfig,
    Relation,
    congruent_features,
    describe,
    describe_nerve,
    description_set,
    descriptive_intersection,
    descriptively_near,
    near,
    relate,
    shapes_descriptively_near,
    shapes_strongly_descriptively_near,
    shapes_strongly_near,
    strongly_descriptively_near,
    strongly_near,
    witness,
)
from shape_nerve.triangulation import build_shape_complex, delaunay

CENTER = 3


class TestRelations(unittest.TestCase):
    def setUp(self):
        self.cx = hexagon_with_center().complex
        self.cfg = ProximityConfig()

    def sub(self, *ids):
        return SubComplex(self.cx, frozenset(ids))

    def test_edge_neighbours_are_near_not_strongly(self):
        # all six fan triangles share the center, so any two are near
        a, b = self.sub(0), self.sub(1)
        self.assertTrue(near(a, b))
        self.assertFalse(strongly_near(a, b))

    def test_shared_triangle_is_strongly_near(self):
        a, b = self.sub(0, 1), self.sub(1, 2)
        self.assertTrue(strongly_near(a, b))
        self.assertEqual(witness(Relation.STRONGLY_NEAR, a, b, self.cfg).triangles, frozenset([1]))

    def test_points(self):
        p = SubComplex.point(self.cx, CENTER)
        whole = self.sub(*range(6))
        self.assertTrue(near(p, whole))
        self.assertTrue(strongly_near(p, whole))
        rim = SubComplex.point(self.cx, 0)
        self.assertTrue(near(rim, whole))
        self.assertFalse(strongly_near(rim, whole))
        self.assertTrue(strongly_near(rim, rim))
        self.assertFalse(strongly_near(rim, p))

    def test_points_are_described_by_identity(self):
        p = SubComplex.point(self.cx, CENTER)
        fan = star(self.cx, CENTER).as_subcomplex()
        self.assertTrue(strongly_near(p, fan))
        self.assertTrue(descriptively_near(p, fan, self.cfg))
        self.assertTrue(strongly_descriptively_near(p, fan, self.cfg))
        self.assertTrue(descriptively_near(p, p, self.cfg))
        self.assertEqual(witness(Relation.DESCRIPTIVELY_NEAR, p, fan, self.cfg).vertices, frozenset([CENTER]))
        rim = SubComplex.point(self.cx, 0)
        self.assertFalse(descriptively_near(rim, p, self.cfg))
        self.assertTrue(descriptively_near(rim, fan, self.cfg))
        self.assertFalse(strongly_descriptively_near(rim, fan, self.cfg))

    def test_shared_vertex_is_a_shared_description(self):
        a, b = self.sub(0), self.sub(3)
        self.assertIn(("vertex", CENTER), description_set(a, self.cfg) & description_set(b, self.cfg))
        meet = descriptive_intersection(a, b, self.cfg)
        self.assertEqual(meet.vertices, frozenset([CENTER]))
        # every fan triangle has area 2
        self.assertEqual(meet.triangles, frozenset([0, 3]))

    def test_empty_is_near_nothing(self):
        empty = SubComplex.empty(self.cx)
        for rel in Relation:
            self.assertFalse(relate(rel, empty, self.sub(0), self.cfg))

    def test_host_mismatch(self):
        other = single_triangle().complex
        with self.assertRaises(ShapeNerveError) as ctx:
            near(self.sub(0), SubComplex(other, frozenset([0])))
        self.assertEqual(ctx.exception.code, HOST_MISMATCH)

    def test_relation_parse(self):
        self.assertIs(Relation.parse("dsnear"), Relation.STRONGLY_DESCRIPTIVELY_NEAR)
        with self.assertRaises(ShapeNerveError) as ctx:
            Relation.parse("close")
        self.assertEqual(ctx.exception.code, INVALID_ARGUMENT)

    def test_inactive_relation(self):
        cfg = ProximityConfig(relations=[Relation.NEAR])
        self.assertTrue(relate(Relation.NEAR, self.sub(0), self.sub(1), cfg))
        with self.assertRaises(ShapeNerveError):
            relate(Relation.STRONGLY_NEAR, self.sub(0), self.sub(1), cfg)


class TestDescriptions(unittest.TestCase):
    def test_unknown_feature_and_bad_quantum(self):
        with self.assertRaises(ShapeNerveError):
            ProximityConfig(features=("colour",))
        with self.assertRaises(ShapeNerveError):
            ProximityConfig(quantum=0)

    def test_from_strings(self):
        cfg = ProximityConfig.from_strings("area, perimeter", "0.001")
        self.assertEqual(cfg.features, ("area", "perimeter"))
        self.assertEqual(cfg.quantum, Fraction(1, 1000))
        self.assertTrue(congruent_features(cfg))
        self.assertFalse(congruent_features(ProximityConfig(features=("centroid-x",))))

    def test_quantum_groups_close_values(self):
        cx = single_triangle().complex
        coarse = describe(cx.triangle(0), ProximityConfig(quantum=Fraction(1)))
        fine = describe(cx.triangle(0), ProximityConfig())
        self.assertEqual(coarse.key, (0,))
        self.assertEqual(fine.key, (500000000,))

    def test_scaled_quantum(self):
        cx = square_complex().complex
        cfg = ProximityConfig(quantum=Fraction(1, 100)).scaled(cx)
        self.assertEqual(cfg.quantum, Fraction(2, 100))

    def test_disjoint_congruent_triangles(self):
        a = delaunay([Point2(0, 0), Point2(1, 0), Point2(0, 1)])
        b = delaunay([Point2(5, 5), Point2(6, 5), Point2(5, 6)])
        _, sa, sb = merge_complexes(a, b)
        cfg = ProximityConfig()
        self.assertFalse(near(sa, sb))
        self.assertTrue(descriptively_near(sa, sb, cfg))
        self.assertTrue(strongly_descriptively_near(sa, sb, cfg))
        self.assertEqual(len(descriptive_intersection(sa, sb, cfg).triangles), 2)
        self.assertEqual(descriptive_intersection(sa, sb, cfg).vertices, frozenset())

    def test_different_areas(self):
        a = delaunay([Point2(0, 0), Point2(1, 0), Point2(0, 1)])
        b = delaunay([Point2(5, 5), Point2(7, 5), Point2(5, 7)])
        _, sa, sb = merge_complexes(a, b)
        self.assertFalse(descriptively_near(sa, sb, ProximityConfig()))
        self.assertTrue(descriptively_near(sa, sb, ProximityConfig(quantum=10)))

    def test_describe_nerve(self):
        sc = hexagon_with_center()
        snc = shape_nerve_complex(sc)
        fv = describe_nerve(snc.nerve_at(CENTER), snc, ProximityConfig())
        self.assertEqual(fv.values, (6, 6, 0))


coords = st.integers(min_value=-50, max_value=50)
corners = st.tuples(*[st.builds(Point2, coords, coords)] * 3)
# cos and sin as exact fractions
PYTHAGOREAN = [(Fraction(a, c), Fraction(b, c)) for a, b, c in ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25))]


def moved(t: Triangle2, turn, mirror: bool, shift) -> Triangle2:
    cos, sin = turn
    points = []
    for p in t.points:
        x, y = (-p.x if mirror else p.x), p.y
        points.append(Point2(cos * x - sin * y + shift[0], sin * x + cos * y + shift[1]))
    return Triangle2(*points)


class TestRigidMotions(unittest.TestCase):
    @given(corners, st.integers(0, 3), st.booleans(), st.tuples(coords, coords))
    def test_grid_symmetries_keep_every_key(self, pts, quarter, mirror, shift):
        assume(orientation(*pts) is not Orientation.COLLINEAR)
        t = Triangle2(*pts)
        turn = ((1, 0), (0, 1), (-1, 0), (0, -1))[quarter]
        cfg = ProximityConfig(features=("area", "min-angle"))
        self.assertTrue(congruent_features(cfg))
        self.assertEqual(describe(t, cfg).key, describe(moved(t, turn, mirror, shift), cfg).key)
        perimeter = ProximityConfig(features=("perimeter",))
        self.assertAlmostEqual(
            describe(t, perimeter).values[0], describe(moved(t, turn, mirror, shift), perimeter).values[0], places=9
        )

    @given(corners, st.sampled_from(PYTHAGOREAN), st.booleans(), st.fractions(-1000, 1000, max_denominator=97))
    def test_rational_rotations(self, pts, turn, mirror, offset):
        assume(orientation(*pts) is not Orientation.COLLINEAR)
        t = Triangle2(*pts)
        image = moved(t, turn, mirror, (offset, -offset))
        cfg = ProximityConfig(features=("area", "perimeter", "min-angle"))
        before, after = describe(t, cfg), describe(image, cfg)
        self.assertEqual(before.values[0], after.values[0])
        self.assertEqual(before.key[0], after.key[0])
        for x, y in zip(before.values[1:], after.values[1:]):
            self.assertAlmostEqual(x, y, places=9)

    @settings(max_examples=30, deadline=None)
    @given(corners, st.sampled_from(PYTHAGOREAN), st.booleans())
    def test_moved_copy_is_descriptively_near(self, pts, turn, mirror):
        assume(orientation(*pts) is not Orientation.COLLINEAR)
        image = moved(Triangle2(*pts), turn, mirror, (1000, 1000))
        _, sa, sb = merge_complexes(delaunay(list(pts)), delaunay(list(image.points)))
        cfg = ProximityConfig()
        self.assertFalse(near(sa, sb))
        self.assertTrue(descriptively_near(sa, sb, cfg))
        self.assertTrue(strongly_descriptively_near(sa, sb, cfg))


class TestImplications(unittest.TestCase):
    """strongly near => near, strongly near => descriptively near, shared triangle in the meet."""

    def test_chain_on_random_families(self):
        cfg = ProximityConfig(features=("area", "perimeter"))
        for seed in range(10):
            sc = random_fixture("convex", seed)
            family = random_family(sc.complex, 12, rng_for(seed))
            self.assertEqual(sum(s.is_point() for s in family), 4)
            for a, b in product(family, repeat=2):
                if strongly_near(a, b):
                    self.assertTrue(near(a, b))
                    self.assertTrue(descriptively_near(a, b, cfg))
                for t in a.triangle_ids & b.triangle_ids:
                    self.assertIn(t, descriptive_intersection(a, b, cfg).triangles)
                if strongly_descriptively_near(a, b, cfg):
                    self.assertTrue(descriptively_near(a, b, cfg))

    def test_shared_nerve_shapes(self):
        sc = hexagon_with_center()
        snc = shape_nerve_complex(sc)
        cfg = ProximityConfig()
        self.assertTrue(shapes_strongly_near(snc, snc))
        self.assertTrue(shapes_descriptively_near(snc, snc, cfg))
        self.assertTrue(shapes_strongly_descriptively_near(snc, snc, cfg))

    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=4, max_size=25, unique=True),
        st.integers(min_value=0),
    )
    def test_distinct_shapes_sharing_nerves(self, raw, pick):
        try:
            cx = delaunay([Point2(x, y) for x, y in raw])
        except ShapeNerveError:
            return
        t = pick % len(cx.triangles)
        whole = shape_nerve_complex(build_shape_complex(cx, SimplePolygon(convex_hull(cx.vertices))))
        piece = shape_nerve_complex(build_shape_complex(cx, SimplePolygon(cx.triangle(t).points)))
        self.assertIsNot(whole.nerves[0].host, piece.nerves[0].host)
        # the piece's shape vertices are the corners of triangle t
        self.assertEqual({n.nucleus for n in set(whole.nerves) & set(piece.nerves)}, set(cx.triangles[t]))
        cfg = ProximityConfig()
        self.assertTrue(shapes_strongly_near(whole, piece))
        self.assertTrue(shapes_descriptively_near(whole, piece, cfg))
        self.assertTrue(shapes_strongly_descriptively_near(whole, piece, cfg))


if __name__ == "__main__":
    unittest.main()
