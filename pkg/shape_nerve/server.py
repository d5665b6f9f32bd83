# shape_nerve/server.py
"""
Shape Nerve MCP - a Model Context Protocol server for planar shape nerves.

Exposes triangulation, nerve extraction, proximity comparison, axiom checking,
homology and SVG rendering as tools. Documents are passed as JSON text
(schema_version 1); every tool returns a dictionary with a ``success`` flag.
"""
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from mcp.server.fastmcp import FastMCP

from shape_nerve.axioms import AxiomSuite, check_axioms, random_family
from shape_nerve.documents import (
    ComplexDocument,
    ShapeDocument,
    dump_complex,
    dump_nerves,
    dump_shape,
    parse_complex,
    parse_shape,
)
from shape_nerve.errors import INVALID_ARGUMENT, ShapeNerveError
from shape_nerve.fixtures import FIXTURES, named_fixture, rng_for
from shape_nerve.geometry import format_number
from shape_nerve.homology import NerveMode, betti, nerve_theorem_check
from shape_nerve.nerve import (
    SubComplex,
    all_stars,
    maximal_nucleus_clusters,
    merge_complexes,
    nerve_shape,
    shape_nerve_complex,
)
from shape_nerve.proximity import DEFAULT_QUANTUM, ProximityConfig, Relation, relate, witness
from shape_nerve.render import Overlays, render_svg
from shape_nerve.tables import export_tables
from shape_nerve.triangulation import SimplicialComplex, triangulate_shape

logger = logging.getLogger(__name__)

# Default data directory for exported tables
DEFAULT_DATA_DIR = str(Path.home() / ".shape-nerve" / "data")
DEFAULT_FEATURES = "area"
DEFAULT_SEED = 0

# Create an MCP server
mcp = FastMCP("Shape Nerve Server")


def resolve_setting(cli_value: Optional[str], env_name: str, default: str) -> Tuple[str, str]:
    """Value and source with priority: command line > environment variable > default."""
    if cli_value is not None:
        return cli_value, "command line"
    if os.environ.get(env_name):
        return os.environ[env_name], "environment"
    return default, "default"


def default_config(
    features: Optional[str] = None, quantum: Optional[str] = None, host: Optional[SimplicialComplex] = None
) -> ProximityConfig:
    """Proximity settings from arguments, environment or defaults.

    When neither argument nor environment names a quantum, the default one is
    scaled by ``host``'s squared bounding-box diagonal.
    """
    features, _ = resolve_setting(features, "SHAPE_NERVE_FEATURES", DEFAULT_FEATURES)
    quantum, source = resolve_setting(quantum, "SHAPE_NERVE_QUANTUM", format_number(DEFAULT_QUANTUM))
    cfg = ProximityConfig.from_strings(features, quantum)
    if source == "default" and host is not None:
        cfg = cfg.scaled(host)
    return cfg


def _safely(action: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    try:
        result = action()
    except ShapeNerveError as e:
        logger.info("tool failed: %s", e.error_line())
        return e.to_dict()
    result.setdefault("success", True)
    return result


def _shape_complex(complex_doc: str, shape_doc: str):
    shape = parse_shape(shape_doc).shape
    return parse_complex(complex_doc).shape_complex(shape)


@mcp.tool()
def triangulate(shape_doc: str) -> Dict[str, Any]:
    """
    Sample a shape document, triangulate it (Delaunay) and label every simplex.

    Args:
        shape_doc: Shape document (JSON text) with outer ring, optional holes and sampling

    Returns:
        The labelled complex document and its vertex and triangle counts
    """

    def run():
        doc = parse_shape(shape_doc)
        sc = triangulate_shape(doc.shape, doc.boundary_step, doc.interior_spacing, doc.margin)
        return {
            "complex": dump_complex(sc.complex),
            "vertex_count": len(sc.complex.vertices),
            "triangle_count": len(sc.complex.triangles),
            "shape_vertex_count": len(sc.shape_vertex_ids),
        }

    return _safely(run)


@mcp.tool()
def shape_nerves(complex_doc: str, shape_doc: str) -> Dict[str, Any]:
    """
    Stars of all shape vertices with their overlap graph and connectivity report.

    Args:
        complex_doc: Complex document (JSON text)
        shape_doc: Shape document the complex is labelled against

    Returns:
        Nerves document (JSON text) plus the overlap summary
    """

    def run():
        snc = shape_nerve_complex(_shape_complex(complex_doc, shape_doc))
        return {
            "nerves": dump_nerves(snc),
            "nerve_count": len(snc.nerves),
            "overlap_connected": snc.report.connected,
            "overlap_components": len(snc.report.components),
        }

    return _safely(run)


@mcp.tool()
def mnc(complex_doc: str, shape_doc: str) -> Dict[str, Any]:
    """
    Shape-vertex stars with the largest triangle count; ties are all returned.

    Args:
        complex_doc: Complex document (JSON text)
        shape_doc: Shape document the complex is labelled against

    Returns:
        List of clusters with nucleus, triangle ids and nerve shape
    """

    def run():
        clusters = maximal_nucleus_clusters(_shape_complex(complex_doc, shape_doc))
        return {
            "clusters": [
                {"nucleus": n.nucleus, "triangles": sorted(n.triangle_ids), "shape": list(nerve_shape(n))}
                for n in clusters
            ]
        }

    return _safely(run)


@mcp.tool()
def compare(
    a_doc: str,
    b_doc: str,
    relation: str = "near",
    features: Optional[str] = None,
    quantum: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Evaluate a proximity relation between the triangles of two complex documents.

    Equal points and equal triangles of the two documents are identified.

    Args:
        a_doc: First complex document (JSON text)
        b_doc: Second complex document (JSON text)
        relation: One of near, snear, dnear, dsnear
        features: Comma-separated triangle features for descriptive relations
        quantum: Description resolution as a decimal string (default 1e-9 of the squared bounding-box diagonal)

    Returns:
        The relation value and the witness simplexes
    """

    def run():
        rel = Relation.parse(relation)
        a = parse_complex(a_doc, check_overlap=False).complex
        b = parse_complex(b_doc, check_overlap=False).complex
        host, sa, sb = merge_complexes(a, b)
        cfg = default_config(features, quantum, host)
        found = witness(rel, sa, sb, cfg)
        return {
            "relation": rel.value,
            "value": relate(rel, sa, sb, cfg),
            "witness": {
                "vertices": sorted(found.vertices),
                "edges": [list(e) for e in sorted(found.edges)],
                "triangles": sorted(found.triangles),
            },
        }

    return _safely(run)


@mcp.tool()
def axioms(
    complex_doc: str,
    suite: str = "cech",
    sets: int = 20,
    seed: Optional[int] = None,
    features: Optional[str] = None,
    quantum: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Check a proximity axiom suite exhaustively on a seeded random family of subcomplexes.

    Args:
        complex_doc: Complex document (JSON text)
        suite: One of cech, lodato, strong, desc, desc-strong
        sets: Number of random subcomplexes in the family
        seed: PRNG seed (defaults to SHAPE_NERVE_SEED or 0)
        features: Comma-separated triangle features for descriptive suites
        quantum: Description resolution as a decimal string (default 1e-9 of the squared bounding-box diagonal)

    Returns:
        Per-axiom instance and failure counts with minimal counterexamples
    """

    def run():
        chosen = AxiomSuite.parse(suite)
        seed_value = int(resolve_setting(None if seed is None else str(seed), "SHAPE_NERVE_SEED", str(DEFAULT_SEED))[0])
        complex = parse_complex(complex_doc).complex
        family = random_family(complex, sets, rng_for(seed_value))
        report = check_axioms(family, default_config(features, quantum, complex), chosen)
        return {
            "suite": chosen.value,
            "passed": report.passed,
            "summary": report.summary(),
            "results": report.to_frame().to_dict(orient="records"),
        }

    return _safely(run)


@mcp.tool()
def homology(complex_doc: str, cover: str = "stars", mode: str = "interior") -> Dict[str, Any]:
    """
    Betti numbers of the complex and, for a star cover, the nerve-theorem check.

    Args:
        complex_doc: Complex document (JSON text)
        cover: "stars" for the cover by all vertex stars, "none" to skip the check
        mode: Nerve intersections by shared triangle ("interior") or shared simplex ("closure")

    Returns:
        Betti report of the complex and the nerve-theorem comparison
    """

    def run():
        if cover not in ("stars", "none"):
            raise ShapeNerveError(f"unknown cover {cover!r}; expected stars or none", INVALID_ARGUMENT)
        complex = parse_complex(complex_doc).complex
        whole = SubComplex(complex, frozenset(range(len(complex.triangles))))
        result: Dict[str, Any] = {"complex": betti(whole).as_dict()}
        if cover == "stars":
            stars = [s.as_subcomplex() for s in all_stars(complex)]
            result["nerve_theorem"] = nerve_theorem_check(stars, NerveMode.parse(mode)).as_dict()
        return result

    return _safely(run)


@mcp.tool()
def render(
    complex_doc: str,
    shape_doc: Optional[str] = None,
    nerves: Optional[List[int]] = None,
    highlight_mnc: bool = False,
) -> Dict[str, Any]:
    """
    Draw a complex as SVG 1.1 with optional shape outline, nerves and MNC highlight.

    Args:
        complex_doc: Complex document (JSON text)
        shape_doc: Shape document whose outline is drawn
        nerves: Nuclei whose stars are filled at 50% opacity
        highlight_mnc: Outline the maximal nucleus clusters (needs shape_doc)

    Returns:
        The SVG text
    """

    def run():
        complex = parse_complex(complex_doc).complex
        shape = parse_shape(shape_doc).shape if shape_doc else None
        mnc: Tuple[int, ...] = ()
        if highlight_mnc:
            if shape is None:
                raise ShapeNerveError("highlight_mnc needs shape_doc", INVALID_ARGUMENT)
            mnc = tuple(n.nucleus for n in maximal_nucleus_clusters(ComplexDocument(complex).shape_complex(shape)))
        overlays = Overlays(shape=shape, nerves=tuple(nerves or ()), mnc=mnc)
        return {"svg": render_svg(complex, overlays)}

    return _safely(run)


@mcp.tool()
def export_shape_tables(complex_doc: str, shape_doc: str, dataset: str) -> Dict[str, Any]:
    """
    Export vertices, triangles and nerves of a labelled complex as parquet tables.

    Files land in the data directory as <dataset>__<table>.parquet and can be
    queried with query_sql using the bare table names.

    Args:
        complex_doc: Complex document (JSON text)
        shape_doc: Shape document the complex is labelled against
        dataset: Name prefix for the exported files

    Returns:
        The written file paths
    """

    def run():
        sc = _shape_complex(complex_doc, shape_doc)
        data_dir = Path(resolve_setting(None, "SHAPE_NERVE_DATA_DIR", DEFAULT_DATA_DIR)[0])
        files = export_tables(data_dir, dataset, sc.complex, snc=shape_nerve_complex(sc))
        return {"files": files, "count": len(files)}

    return _safely(run)


@mcp.resource("fixture://{name}")
def get_fixture(name: str) -> Dict[str, Any]:
    """Complex and shape documents of a named fixture"""

    def run():
        sc = named_fixture(name)
        return {
            "name": name,
            "complex": dump_complex(sc.complex),
            "shape": dump_shape(ShapeDocument(shape=sc.shape)),
            "available": sorted(FIXTURES),
        }

    return _safely(run)


@mcp.tool()
def query_sql(query: str, files: Optional[List[str]] = None, include_schema: bool = True) -> Dict[str, Any]:
    """
    Run a SQL query against exported shape tables

    Bare table names (vertices, triangles, nerves, axioms) are mapped onto the
    exported parquet files; read_parquet('/path/to/file.parquet') also works.

    Args:
        query: SQL query to execute
        files: Parquet files to query (defaults to all files in the data directory)
        include_schema: Whether to include schema information in the result

    Returns:
        Query results and metadata
    """
    from shape_nerve.sql import execute_sql_query

    return execute_sql_query(query, files, include_schema)


@mcp.tool()
def list_available_sql_tables() -> List[Dict[str, Any]]:
    """
    List all exported parquet files that can be queried with SQL

    Returns:
        List of files with dataset and table names
    """
    from shape_nerve.sql import list_available_tables

    return list_available_tables()


@mcp.tool()
def get_sql_table_schema(file_path: str) -> Dict[str, Any]:
    """
    Get the schema and sample data for a specific parquet file

    Args:
        file_path: Path to the parquet file (from list_available_sql_tables)

    Returns:
        Table schema information including columns, data types, and sample data
    """
    from shape_nerve.sql import get_table_schema

    return get_table_schema(file_path)


def serve(data_dir: Optional[str] = None) -> int:
    """Resolve the data directory and run the server on stdio."""
    data_dir, source = resolve_setting(data_dir, "SHAPE_NERVE_DATA_DIR", DEFAULT_DATA_DIR)
    os.environ["SHAPE_NERVE_DATA_DIR"] = data_dir
    logger.info("Using data directory from %s: %s", source, data_dir)
    Path(data_dir).mkdir(parents=True, exist_ok=True)
    mcp.run()
    return 0
