"""Tabular views of complexes, nerves and axiom reports, exported as parquet.

Files are named ``<dataset>__<table>.parquet``; the SQL layer exposes each
``<table>`` as a view over every dataset that has one.
"""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from shape_nerve.axioms import AxiomReport
from shape_nerve.errors import INVALID_ARGUMENT, ShapeNerveError
from shape_nerve.geometry import format_number, triangle_area, triangle_min_angle, triangle_perimeter
from shape_nerve.nerve import ShapeNerveComplex, wiring
from shape_nerve.triangulation import SimplicialComplex

logger = logging.getLogger(__name__)

TABLES = ("vertices", "triangles", "nerves", "axioms")
_DATASET_NAME = re.compile(r"^[A-Za-z0-9_\-]+$")


def _label(labels, i: int) -> Optional[str]:
    return labels[i].value if labels is not None else None


def vertices_frame(complex: SimplicialComplex) -> pd.DataFrame:
    rows = []
    for v, p in enumerate(complex.vertices):
        rows.append(
            {
                "vertex": v,
                "x": format_number(p.x),
                "y": format_number(p.y),
                "x_float": float(p.x),
                "y_float": float(p.y),
                "label": _label(complex.vertex_labels, v),
                "triangle_count": len(complex.vertex_to_triangles[v]),
            }
        )
    return pd.DataFrame(rows, columns=["vertex", "x", "y", "x_float", "y_float", "label", "triangle_count"])


def triangles_frame(complex: SimplicialComplex) -> pd.DataFrame:
    rows = []
    for t, (a, b, c) in enumerate(complex.triangles):
        tri = complex.triangle(t)
        centroid = tri.centroid()
        rows.append(
            {
                "triangle": t,
                "a": a,
                "b": b,
                "c": c,
                "label": _label(complex.triangle_labels, t),
                "area": float(triangle_area(tri)),
                "perimeter": triangle_perimeter(tri),
                "min_angle": triangle_min_angle(tri),
                "centroid_x": float(centroid.x),
                "centroid_y": float(centroid.y),
            }
        )
    columns = ["triangle", "a", "b", "c", "label", "area", "perimeter", "min_angle", "centroid_x", "centroid_y"]
    return pd.DataFrame(rows, columns=columns)


def nerves_frame(snc: ShapeNerveComplex) -> pd.DataFrame:
    component_of = {nucleus: i for i, comp in enumerate(snc.report.components) for nucleus in comp}
    rows = [
        {
            "nucleus": w.nucleus,
            "triangle_count": len(n),
            "wiring_degree": w.degree,
            "nucleus_on_boundary": w.on_boundary,
            "component": component_of[w.nucleus],
        }
        for n, w in zip(snc.nerves, wiring(snc))
    ]
    columns = ["nucleus", "triangle_count", "wiring_degree", "nucleus_on_boundary", "component"]
    return pd.DataFrame(rows, columns=columns)


def export_tables(
    data_dir: Path,
    dataset: str,
    complex: SimplicialComplex,
    snc: Optional[ShapeNerveComplex] = None,
    report: Optional[AxiomReport] = None,
) -> List[str]:
    """Write the available tables for ``dataset`` and return the file paths."""
    if not _DATASET_NAME.match(dataset):
        raise ShapeNerveError(f"invalid dataset name {dataset!r}", INVALID_ARGUMENT, dataset=dataset)
    frames: Dict[str, pd.DataFrame] = {
        "vertices": vertices_frame(complex),
        "triangles": triangles_frame(complex),
    }
    if snc is not None:
        frames["nerves"] = nerves_frame(snc)
    if report is not None:
        frames["axioms"] = report.to_frame()

    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, frame in frames.items():
        path = data_dir / f"{dataset}__{name}.parquet"
        pq.write_table(pa.Table.from_pandas(frame, preserve_index=False), path)
        logger.debug("wrote %d rows to %s", len(frame), path)
        paths.append(str(path))
    return paths
