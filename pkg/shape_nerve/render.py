"""Deterministic SVG 1.1 drawings of complexes, shapes and nerves."""
from __future__ import annotations

import colorsys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from shape_nerve.errors import UNKNOWN_VERTEX, ShapeNerveError
from shape_nerve.geometry import Point2, SimplePolygon
from shape_nerve.nerve import nerve_shape, star
from shape_nerve.triangulation import SimplicialComplex

CANVAS = 600
PADDING = 20
TRIANGLE_STROKE = "#555555"
OUTLINE_STROKE = "#cc2222"
MNC_STROKE = "#111111"
GOLDEN_ANGLE = 137.508


@dataclass(frozen=True)
class Overlays:
    """What to draw on top of the triangulation."""

    shape: Optional[SimplePolygon] = None
    nerves: Tuple[int, ...] = ()
    mnc: Tuple[int, ...] = ()


def nerve_fill(index: int) -> str:
    """Distinct fill colour for the ``index``-th nerve, stepping the hue by the golden angle."""
    hue = (index * GOLDEN_ANGLE % 360) / 360
    r, g, b = colorsys.hls_to_rgb(hue, 0.55, 0.7)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


class _Frame:
    """Maps plane coordinates onto the canvas, y axis pointing up."""

    def __init__(self, points: Sequence[Point2]):
        xs = [p.x for p in points]
        ys = [p.y for p in points]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), Fraction(1, 10**9))
        self.scale = Fraction(CANVAS - 2 * PADDING) / span

    def xy(self, p: Point2) -> str:
        x = PADDING + (p.x - self.x0) * self.scale
        y = PADDING + (self.y1 - p.y) * self.scale
        return f"{float(x):.3f} {float(y):.3f}"

    def cxy(self, p: Point2) -> str:
        x, y = self.xy(p).split()
        return f'cx="{x}" cy="{y}"'


def _ring_path(frame: _Frame, ring: Sequence[Point2]) -> str:
    head, *rest = ring
    return "M " + frame.xy(head) + "".join(" L " + frame.xy(p) for p in rest) + " Z"


def _check_nuclei(complex: SimplicialComplex, nuclei: Sequence[int]) -> None:
    for v in nuclei:
        if not isinstance(v, int) or not 0 <= v < len(complex.vertices):
            raise ShapeNerveError(f"vertex {v} does not exist", UNKNOWN_VERTEX, vertex=v)


def render_svg(complex: SimplicialComplex, overlays: Overlays = Overlays()) -> str:
    """One stroked path per triangle and one dot per vertex, plus the requested overlays."""
    _check_nuclei(complex, overlays.nerves)
    _check_nuclei(complex, overlays.mnc)
    points = list(complex.vertices)
    if overlays.shape is not None:
        points += [p for ring in overlays.shape.rings for p in ring]
    frame = _Frame(points)

    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">',
        '<g class="triangles" fill="none" stroke="{}" stroke-width="1">'.format(TRIANGLE_STROKE),
    ]
    for t in range(len(complex.triangles)):
        tri = [complex.vertices[v] for v in complex.triangles[t]]
        out.append(f'<path class="triangle" data-id="{t}" d="{_ring_path(frame, tri)}"/>')
    out.append("</g>")

    for i, nucleus in enumerate(overlays.nerves):
        nerve = star(complex, nucleus)
        out.append(f'<g class="nerve" data-nucleus="{nucleus}" fill="{nerve_fill(i)}" fill-opacity="0.5" stroke="none">')
        for t in sorted(nerve.triangle_ids):
            tri = [complex.vertices[v] for v in complex.triangles[t]]
            out.append(f'<path class="nerve-triangle" d="{_ring_path(frame, tri)}"/>')
        out.append("</g>")

    for nucleus in overlays.mnc:
        outline = [complex.vertices[v] for v in nerve_shape(star(complex, nucleus))]
        out.append(
            f'<path class="mnc" data-nucleus="{nucleus}" fill="none" stroke="{MNC_STROKE}" '
            f'stroke-width="3" d="{_ring_path(frame, outline)}"/>'
        )

    if overlays.shape is not None:
        d = " ".join(_ring_path(frame, ring) for ring in overlays.shape.rings)
        out.append(
            f'<path class="shape" fill="none" fill-rule="evenodd" stroke="{OUTLINE_STROKE}" '
            f'stroke-width="2" d="{d}"/>'
        )

    out.append('<g class="vertices" fill="#000000">')
    for v, p in enumerate(complex.vertices):
        out.append(f'<circle class="vertex" data-id="{v}" {frame.cxy(p)} r="2"/>')
    out.append("</g>")

    nuclei = sorted(set(overlays.nerves) | set(overlays.mnc))
    if nuclei:
        out.append('<g class="nuclei" fill="none" stroke="#000000" stroke-width="1.5">')
        for v in nuclei:
            out.append(f'<circle class="nucleus" data-id="{v}" {frame.cxy(complex.vertices[v])} r="6"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
