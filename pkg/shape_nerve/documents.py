"""JSON documents for shapes, complexes and nerves (schema_version 1).

Coordinates travel as decimal strings and are read exactly. JSON numbers are
accepted too; they are parsed as decimals, never through binary floats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from shape_nerve.errors import (
    NUMBER_PARSE_ERROR,
    POLYGON_INVALID,
    SCHEMA_ERROR,
    UNKNOWN_VERTEX,
    DocumentError,
    PolygonError,
    ShapeNerveError,
)
from shape_nerve.geometry import Point2, SimplePolygon, format_number, to_fraction
from shape_nerve.nerve import ShapeNerveComplex, SubComplex, nerve_shape, wiring
from shape_nerve.proximity import DEFAULT_FEATURES, DEFAULT_QUANTUM, ProximityConfig
from shape_nerve.triangulation import Label, ShapeComplex, SimplicialComplex, build_shape_complex

SCHEMA_VERSION = 1

DEFAULT_BOUNDARY_STEP = Fraction(1)
DEFAULT_INTERIOR_SPACING = Fraction(1)
DEFAULT_MARGIN = Fraction(0)


@dataclass(frozen=True)
class ShapeDocument:
    shape: SimplePolygon
    boundary_step: Fraction = DEFAULT_BOUNDARY_STEP
    interior_spacing: Fraction = DEFAULT_INTERIOR_SPACING
    margin: Fraction = DEFAULT_MARGIN
    features: Tuple[str, ...] = DEFAULT_FEATURES
    quantum: Fraction = DEFAULT_QUANTUM

    def proximity_config(self) -> ProximityConfig:
        return ProximityConfig(features=self.features, quantum=self.quantum)


@dataclass(frozen=True)
class ComplexDocument:
    complex: SimplicialComplex

    def shape_complex(self, shape: SimplePolygon) -> ShapeComplex:
        """Relabel against ``shape``; stored labels are replaced."""
        return build_shape_complex(self.complex, shape)


# -- parsing helpers -------------------------------------------------------------


def _load(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise DocumentError(f"malformed document: {e.msg}", SCHEMA_ERROR, line=e.lineno, column=e.colno)
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object", SCHEMA_ERROR)
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(
            f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}",
            SCHEMA_ERROR,
            field="schema_version",
        )
    return data


def _require(data: Dict[str, Any], key: str, kind: type, where: str = "") -> Any:
    name = f"{where}.{key}" if where else key
    if key not in data:
        raise DocumentError(f"missing field {name!r}", SCHEMA_ERROR, field=name)
    value = data[key]
    if not isinstance(value, kind):
        raise DocumentError(f"field {name!r} has the wrong type", SCHEMA_ERROR, field=name)
    return value


def _number(value: Any, name: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int, Decimal)):
        raise ShapeNerveError(f"field {name!r} is not a decimal number", NUMBER_PARSE_ERROR, field=name)
    try:
        return to_fraction(value)
    except ShapeNerveError as e:
        raise ShapeNerveError(e.message, NUMBER_PARSE_ERROR, field=name)


def _ring(value: Any, name: str) -> List[Point2]:
    if not isinstance(value, list):
        raise DocumentError(f"field {name!r} must be a list of [x, y] pairs", SCHEMA_ERROR, field=name)
    points = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(f"field {name}[{i}] must be an [x, y] pair", SCHEMA_ERROR, field=f"{name}[{i}]")
        points.append(Point2(_number(pair[0], f"{name}[{i}][0]"), _number(pair[1], f"{name}[{i}][1]")))
    return points


def _int_list(value: Any, name: str, length: int) -> Tuple[int, ...]:
    if (
        not isinstance(value, list)
        or len(value) != length
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise DocumentError(f"field {name!r} must hold {length} integers", SCHEMA_ERROR, field=name)
    return tuple(value)


# -- shapes --------------------------------------------------------------------------


def parse_shape(text: str) -> ShapeDocument:
    data = _load(text)
    outer = _ring(_require(data, "outer", list), "outer")
    holes = [_ring(h, f"holes[{i}]") for i, h in enumerate(data.get("holes") or [])]
    try:
        shape = SimplePolygon(outer, holes)
    except ShapeNerveError as e:
        ring = e.context.get("ring", 0)
        context = dict(e.context, field="outer" if ring == 0 else f"holes[{ring - 1}]")
        raise PolygonError(e.message, POLYGON_INVALID, **context)

    sampling = data.get("sampling") or {}
    if not isinstance(sampling, dict):
        raise DocumentError("field 'sampling' must be an object", SCHEMA_ERROR, field="sampling")
    values = {}
    for key, default in (
        ("boundary_step", DEFAULT_BOUNDARY_STEP),
        ("interior_spacing", DEFAULT_INTERIOR_SPACING),
        ("margin", DEFAULT_MARGIN),
    ):
        values[key] = _number(sampling[key], f"sampling.{key}") if key in sampling else default

    features = data.get("features", list(DEFAULT_FEATURES))
    if not isinstance(features, list) or not all(isinstance(f, str) for f in features):
        raise DocumentError("field 'features' must be a list of names", SCHEMA_ERROR, field="features")
    quantum = _number(data["quantum"], "quantum") if "quantum" in data else DEFAULT_QUANTUM

    doc = ShapeDocument(shape=shape, features=tuple(features), quantum=quantum, **values)
    try:
        doc.proximity_config()
    except ShapeNerveError as e:
        raise DocumentError(e.message, SCHEMA_ERROR, field="features" if "feature" in e.message else "quantum")
    return doc


def _points(points: Sequence[Point2]) -> List[List[str]]:
    return [[format_number(p.x), format_number(p.y)] for p in points]


def dump_shape(doc: ShapeDocument) -> str:
    data: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "outer": _points(doc.shape.outer),
    }
    if doc.shape.holes:
        data["holes"] = [_points(h) for h in doc.shape.holes]
    data["sampling"] = {
        "boundary_step": format_number(doc.boundary_step),
        "interior_spacing": format_number(doc.interior_spacing),
        "margin": format_number(doc.margin),
    }
    data["features"] = list(doc.features)
    data["quantum"] = format_number(doc.quantum)
    return json.dumps(data, indent=2) + "\n"


# -- complexes ------------------------------------------------------------------------


def _labels(value: Any, name: str, size: int) -> Optional[Tuple[Label, ...]]:
    if value is None:
        return None
    if not isinstance(value, list) or len(value) != size:
        raise DocumentError(f"field {name!r} must hold {size} labels", SCHEMA_ERROR, field=name)
    try:
        return tuple(Label(v) for v in value)
    except ValueError:
        raise DocumentError(f"field {name!r} holds an unknown label", SCHEMA_ERROR, field=name)


def parse_complex(text: str, check_overlap: bool = True) -> ComplexDocument:
    data = _load(text)
    vertices = _ring(_require(data, "vertices", list), "vertices")
    raw = _require(data, "triangles", list)
    triangles = tuple(_int_list(t, f"triangles[{i}]", 3) for i, t in enumerate(raw))
    for i, tri in enumerate(triangles):
        bad = [v for v in tri if not 0 <= v < len(vertices)]
        if bad:
            raise ShapeNerveError(
                f"triangle {i} refers to missing vertex {bad[0]}",
                UNKNOWN_VERTEX,
                field=f"triangles[{i}]",
            )
    labels = data.get("labels") or {}
    if not isinstance(labels, dict):
        raise DocumentError("field 'labels' must be an object", SCHEMA_ERROR, field="labels")
    missing = [key for key in ("vertices", "triangles") if labels.get(key) is None]
    if len(missing) == 1:
        raise DocumentError(
            f"field 'labels' needs {missing[0]!r} alongside the other label list",
            SCHEMA_ERROR,
            field=f"labels.{missing[0]}",
        )
    complex = SimplicialComplex(
        vertices=tuple(vertices),
        triangles=triangles,
        vertex_labels=_labels(labels.get("vertices"), "labels.vertices", len(vertices)),
        triangle_labels=_labels(labels.get("triangles"), "labels.triangles", len(triangles)),
    )
    complex.validate(check_overlap=check_overlap)
    return ComplexDocument(complex)


def dump_complex(complex: SimplicialComplex) -> str:
    data: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "vertices": _points(complex.vertices),
        "triangles": [list(t) for t in complex.triangles],
    }
    if complex.vertex_labels is not None and complex.triangle_labels is not None:
        data["labels"] = {
            "vertices": [label.value for label in complex.vertex_labels],
            "triangles": [label.value for label in complex.triangle_labels],
        }
    return json.dumps(data, indent=2) + "\n"


def extract_subcomplex(s: SubComplex) -> SimplicialComplex:
    """The triangles of ``s`` as a standalone complex, vertices renumbered in host order."""
    used = sorted(s.closure_vertices())
    index = {v: i for i, v in enumerate(used)}
    tri_ids = sorted(s.triangle_ids)
    host = s.host
    vertex_labels = triangle_labels = None
    if host.vertex_labels is not None and host.triangle_labels is not None:
        vertex_labels = tuple(host.vertex_labels[v] for v in used)
        triangle_labels = tuple(host.triangle_labels[t] for t in tri_ids)
    return SimplicialComplex(
        vertices=tuple(host.vertices[v] for v in used),
        triangles=tuple(tuple(index[v] for v in host.triangles[t]) for t in tri_ids),
        vertex_labels=vertex_labels,
        triangle_labels=triangle_labels,
    )


def dump_nerves(snc: ShapeNerveComplex) -> str:
    wires = {w.nucleus: w for w in wiring(snc)}
    data = {
        "schema_version": SCHEMA_VERSION,
        "nerves": [
            {
                "nucleus": n.nucleus,
                "triangles": sorted(n.triangle_ids),
                "shape": list(nerve_shape(n)),
                "wiring_degree": wires[n.nucleus].degree,
                "nucleus_on_boundary": wires[n.nucleus].on_boundary,
            }
            for n in snc.nerves
        ],
        "overlap_edges": [[snc.nerves[i].nucleus, snc.nerves[j].nucleus] for i, j in sorted(snc.overlap_edges)],
        "overlap_components": [list(c) for c in snc.report.components],
        "overlap_connected": snc.report.connected,
        "global_intersection": sorted(snc.report.common_triangles),
    }
    return json.dumps(data, indent=2) + "\n"
