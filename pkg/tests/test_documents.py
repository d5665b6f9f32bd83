#!/usr/bin/env python3
import json
import unittest
from fractions import Fraction

from shape_nerve.documents import (
    ShapeDocument,
    dump_complex,
    dump_nerves,
    dump_shape,
    extract_subcomplex,
    parse_complex,
    parse_shape,
)
from shape_nerve.errors import (
    INVALID_COMPLEX,
    NUMBER_PARSE_ERROR,
    POLYGON_INVALID,
    SCHEMA_ERROR,
    UNKNOWN_VERTEX,
    ShapeNerveError,
)
from shape_nerve.fixtures import FIXTURES, annulus_shape, hexagon_with_center, random_fixture
from shape_nerve.geometry import Point2
from shape_nerve.nerve import shape_nerve_complex, star

SQUARE = {"schema_version": 1, "outer": [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]}


def doc(**fields):
    data = dict(SQUARE)
    data.update(fields)
    return json.dumps(data)


class TestShapeDocuments(unittest.TestCase):
    def test_unit_square_defaults(self):
        d = parse_shape(doc())
        self.assertEqual(list(d.shape.outer), [Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)])
        self.assertEqual(d.boundary_step, 1)
        self.assertEqual(d.features, ("area",))
        self.assertEqual(d.quantum, Fraction(1, 10**9))

    def test_sampling_and_json_numbers(self):
        d = parse_shape(doc(outer=[[0, 0], [1, 0], [0.5, 1]], sampling={"boundary_step": "0.25"}, quantum="0.01"))
        self.assertEqual(d.shape.outer[2], Point2(Fraction(1, 2), 1))
        self.assertEqual(d.boundary_step, Fraction(1, 4))
        self.assertEqual(d.interior_spacing, 1)
        self.assertEqual(d.proximity_config().quantum, Fraction(1, 100))

    def test_bowtie(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_shape(doc(outer=[["0", "0"], ["1", "1"], ["1", "0"], ["0", "1"]]))
        self.assertEqual(ctx.exception.code, POLYGON_INVALID)
        self.assertEqual(ctx.exception.context["field"], "outer")
        self.assertEqual(ctx.exception.context["edges"], [0, 2])

    def test_bad_hole_names_the_hole(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_shape(doc(holes=[[["0.2", "0.2"], ["0.4", "0.4"], ["0.4", "0.2"], ["0.2", "0.4"]]]))
        self.assertEqual(ctx.exception.context["field"], "holes[0]")

    def test_missing_outer(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_shape(json.dumps({"schema_version": 1}))
        self.assertEqual(ctx.exception.code, SCHEMA_ERROR)
        self.assertEqual(ctx.exception.context["field"], "outer")

    def test_bad_number(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_shape(doc(outer=[["0", "0"], ["1", "0"], ["x", "1"]]))
        self.assertEqual(ctx.exception.code, NUMBER_PARSE_ERROR)
        self.assertEqual(ctx.exception.context["field"], "outer[2][0]")
        self.assertIn("field=outer[2][0]", ctx.exception.error_line())

    def test_malformed_json_reports_line(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_shape('{"schema_version": 1,\n "outer": [[0, 0],, ]}')
        self.assertEqual(ctx.exception.code, SCHEMA_ERROR)
        self.assertEqual(ctx.exception.context["line"], 2)

    def test_schema_version(self):
        for version in (None, 2, "1"):
            with self.assertRaises(ShapeNerveError) as ctx:
                parse_shape(doc(schema_version=version))
            self.assertEqual(ctx.exception.context["field"], "schema_version")

    def test_unknown_feature(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_shape(doc(features=["colour"]))
        self.assertEqual(ctx.exception.code, SCHEMA_ERROR)
        self.assertEqual(ctx.exception.context["field"], "features")

    def test_dump_reads_back(self):
        original = ShapeDocument(
            shape=annulus_shape(),
            boundary_step=Fraction(1, 2),
            margin=Fraction(1, 3),
            features=("area", "perimeter"),
        )
        text = dump_shape(original)
        again = parse_shape(text)
        self.assertEqual(list(again.shape.outer), list(original.shape.outer))
        self.assertEqual([list(h) for h in again.shape.holes], [list(h) for h in original.shape.holes])
        self.assertEqual(again.margin, Fraction(1, 3))
        self.assertEqual(again.features, ("area", "perimeter"))
        self.assertEqual(dump_shape(again), text)


class TestComplexDocuments(unittest.TestCase):
    def test_fixtures_read_back(self):
        complexes = [build() for build in FIXTURES.values()] + [random_fixture("star", 4)]
        for sc in complexes:
            text = dump_complex(sc.complex)
            cx = parse_complex(text).complex
            self.assertTrue(cx.same_as(sc.complex))
            self.assertEqual(cx.vertex_labels, sc.complex.vertex_labels)
            self.assertEqual(cx.triangle_labels, sc.complex.triangle_labels)
            self.assertEqual(dump_complex(cx), text)

    def test_unknown_vertex(self):
        text = json.dumps({"schema_version": 1, "vertices": [["0", "0"], ["1", "0"], ["0", "1"]], "triangles": [[0, 1, 5]]})
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_complex(text)
        self.assertEqual(ctx.exception.code, UNKNOWN_VERTEX)
        self.assertEqual(ctx.exception.context["field"], "triangles[0]")

    def test_clockwise_triangle_is_invalid(self):
        text = json.dumps({"schema_version": 1, "vertices": [["0", "0"], ["1", "0"], ["0", "1"]], "triangles": [[0, 2, 1]]})
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_complex(text)
        self.assertEqual(ctx.exception.code, INVALID_COMPLEX)

    def test_bad_labels(self):
        data = {
            "schema_version": 1,
            "vertices": [["0", "0"], ["1", "0"], ["0", "1"]],
            "triangles": [[0, 1, 2]],
            "labels": {"vertices": ["exterior"], "triangles": ["exterior"]},
        }
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_complex(json.dumps(data))
        self.assertEqual(ctx.exception.context["field"], "labels.vertices")

    def test_labels_come_in_pairs(self):
        data = {
            "schema_version": 1,
            "vertices": [["0", "0"], ["1", "0"], ["0", "1"]],
            "triangles": [[0, 1, 2]],
            "labels": {"vertices": ["EXTERIOR"] * 3},
        }
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_complex(json.dumps(data))
        self.assertEqual(ctx.exception.code, SCHEMA_ERROR)
        self.assertEqual(ctx.exception.context["field"], "labels.triangles")
        data["labels"] = {"triangles": ["EXTERIOR"]}
        with self.assertRaises(ShapeNerveError) as ctx:
            parse_complex(json.dumps(data))
        self.assertEqual(ctx.exception.context["field"], "labels.vertices")
        data["labels"] = {}
        self.assertIsNone(parse_complex(json.dumps(data)).complex.vertex_labels)

    def test_extract_star(self):
        sc = hexagon_with_center()
        cx = extract_subcomplex(star(sc.complex, 3).as_subcomplex())
        self.assertEqual(len(cx.vertices), 7)
        self.assertEqual(len(cx.triangles), 6)
        cx.validate()
        self.assertEqual(parse_complex(dump_complex(cx)).complex.triangles, cx.triangles)


class TestNerveDocuments(unittest.TestCase):
    def test_hexagon_nerves(self):
        snc = shape_nerve_complex(hexagon_with_center())
        data = json.loads(dump_nerves(snc))
        self.assertEqual(data["schema_version"], 1)
        self.assertEqual(len(data["nerves"]), 7)
        self.assertEqual(
            set(data["nerves"][0]),
            {"nucleus", "triangles", "shape", "wiring_degree", "nucleus_on_boundary"},
        )
        center = next(n for n in data["nerves"] if n["nucleus"] == 3)
        self.assertEqual(center["triangles"], [0, 1, 2, 3, 4, 5])
        self.assertEqual(center["shape"], [0, 1, 4, 6, 5, 2])
        self.assertFalse(center["nucleus_on_boundary"])
        self.assertTrue(data["overlap_connected"])
        self.assertEqual(data["global_intersection"], [])


if __name__ == "__main__":
    unittest.main()
