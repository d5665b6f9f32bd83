#!/usr/bin/env python3
import unittest
import xml.etree.ElementTree as ET

from shape_nerve.errors import UNKNOWN_VERTEX, ShapeNerveError
from shape_nerve.fixtures import annulus, hexagon_with_center, single_triangle
from shape_nerve.render import Overlays, nerve_fill, render_svg

SVG = "{http://www.w3.org/2000/svg}"


class TestRender(unittest.TestCase):
    def test_single_triangle(self):
        svg = render_svg(single_triangle().complex)
        self.assertEqual(svg.count('class="triangle"'), 1)
        self.assertEqual(svg.count('class="vertex"'), 3)
        self.assertNotIn('class="nucleus"', svg)
        # (0, 0) lands in the bottom-left padding corner
        self.assertIn('cx="20.000" cy="580.000"', svg)
        root = ET.fromstring(svg.encode("utf-8"))
        self.assertEqual(root.tag, SVG + "svg")

    def test_hexagon_center_nerve(self):
        sc = hexagon_with_center()
        svg = render_svg(sc.complex, Overlays(shape=sc.shape, nerves=(3,), mnc=(3,)))
        self.assertEqual(svg.count('class="nerve-triangle"'), 6)
        self.assertEqual(svg.count('class="nucleus"'), 1)
        self.assertEqual(svg.count('class="mnc"'), 1)
        self.assertEqual(svg.count('class="shape"'), 1)
        self.assertIn(f'fill="{nerve_fill(0)}"', svg)
        ET.fromstring(svg.encode("utf-8"))

    def test_holes_share_the_shape_path(self):
        sc = annulus()
        svg = render_svg(sc.complex, Overlays(shape=sc.shape))
        shape_line = next(line for line in svg.splitlines() if 'class="shape"' in line)
        self.assertEqual(shape_line.count("M "), 2)
        self.assertIn('fill-rule="evenodd"', shape_line)

    def test_deterministic(self):
        sc = hexagon_with_center()
        overlays = Overlays(shape=sc.shape, nerves=(3, 0, 6))
        self.assertEqual(render_svg(sc.complex, overlays), render_svg(sc.complex, overlays))

    def test_distinct_fills(self):
        fills = {nerve_fill(i) for i in range(12)}
        self.assertEqual(len(fills), 12)

    def test_unknown_nucleus(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            render_svg(single_triangle().complex, Overlays(nerves=(9,)))
        self.assertEqual(ctx.exception.code, UNKNOWN_VERTEX)
        self.assertEqual(ctx.exception.context["vertex"], 9)


if __name__ == "__main__":
    unittest.main()
