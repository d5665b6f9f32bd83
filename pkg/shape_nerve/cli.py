"""Command-line surface: ``shape-nerve <command> ...``.

Exit codes: 0 success, 1 invalid input or argument, 2 a checked property failed
(axiom suites, nerve-theorem consistency, nerve lemmas).
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, NoReturn, Optional

from shape_nerve.axioms import AxiomSuite, check_axioms, random_family
from shape_nerve.documents import (
    ShapeDocument,
    dump_complex,
    dump_nerves,
    dump_shape,
    extract_subcomplex,
    parse_complex,
    parse_shape,
)
from shape_nerve.errors import INVALID_ARGUMENT, IO_ERROR, ShapeNerveError
from shape_nerve.fixtures import FIXTURES, named_fixture, random_fixture, rng_for
from shape_nerve.geometry import Point2, format_number, to_fraction
from shape_nerve.homology import NerveMode, betti, nerve_theorem_check
from shape_nerve.nerve import (
    SubComplex,
    all_stars,
    lemma_report,
    maximal_nucleus_clusters,
    merge_complexes,
    nerve_shape,
    shape_nerve_complex,
    star,
)
from shape_nerve.proximity import Relation, relate, witness
from shape_nerve.render import Overlays, render_svg
from shape_nerve.server import DEFAULT_DATA_DIR, DEFAULT_SEED, default_config, resolve_setting, serve
from shape_nerve.tables import export_tables
from shape_nerve.triangulation import triangulate_shape

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2

RANDOM_PREFIX = "random-"
QUANTUM_HELP = (
    "Description resolution (env SHAPE_NERVE_QUANTUM, default 1e-9 of the squared bounding-box diagonal)"
)


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise INVALID_ARGUMENT instead of exiting with argparse's status 2."""

    def error(self, message: str) -> NoReturn:
        raise ShapeNerveError(f"{self.prog}: {message}", INVALID_ARGUMENT)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ShapeNerveError(f"cannot read {path}: {e.strerror}", IO_ERROR, path=path)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise ShapeNerveError(f"cannot write {path}: {e.strerror}", IO_ERROR, path=path)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _int_list(value: Optional[str]) -> List[int]:
    if not value:
        return []
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise ShapeNerveError(f"expected comma-separated vertex ids, got {value!r}", INVALID_ARGUMENT)


def _seed(value: Optional[int]) -> int:
    raw, _ = resolve_setting(None if value is None else str(value), "SHAPE_NERVE_SEED", str(DEFAULT_SEED))
    try:
        return int(raw)
    except ValueError:
        raise ShapeNerveError(f"seed must be an integer, got {raw!r}", INVALID_ARGUMENT)


def _shape_complex(args):
    shape = parse_shape(_read(args.shape)).shape
    return parse_complex(_read(args.complex)).shape_complex(shape)


def _point(p: Point2) -> str:
    return f"({format_number(p.x)}, {format_number(p.y)})"


# -- commands ---------------------------------------------------------------------


def cmd_triangulate(args) -> int:
    doc = parse_shape(_read(args.shape))
    step = to_fraction(args.boundary_step) if args.boundary_step else doc.boundary_step
    spacing = to_fraction(args.interior_spacing) if args.interior_spacing else doc.interior_spacing
    margin = to_fraction(args.margin) if args.margin else doc.margin
    sc = triangulate_shape(doc.shape, step, spacing, margin)
    _emit(dump_complex(sc.complex), args.output)
    if args.output:
        print(
            f"vertices={len(sc.complex.vertices)} triangles={len(sc.complex.triangles)} "
            f"shape_vertices={len(sc.shape_vertex_ids)}"
        )
    return EXIT_OK


def cmd_nerves(args) -> int:
    sc = _shape_complex(args)
    if args.nucleus is not None:
        nerve = star(sc.complex, args.nucleus)
        _emit(dump_complex(extract_subcomplex(nerve.as_subcomplex())), args.output)
        return EXIT_OK
    snc = shape_nerve_complex(sc)
    _emit(dump_nerves(snc), args.output)
    if args.output:
        print(
            f"nerves={len(snc.nerves)} overlap_edges={len(snc.overlap_edges)} "
            f"connected={str(snc.report.connected).lower()}"
        )
    return EXIT_OK


def cmd_mnc(args) -> int:
    for nerve in maximal_nucleus_clusters(_shape_complex(args)):
        shape = ",".join(str(v) for v in nerve_shape(nerve))
        print(f"nucleus={nerve.nucleus} triangles={len(nerve)} shape={shape}")
    return EXIT_OK


def cmd_compare(args) -> int:
    relation = Relation.parse(args.relation)
    a = parse_complex(_read(args.a), check_overlap=False).complex
    b = parse_complex(_read(args.b), check_overlap=False).complex
    host, sa, sb = merge_complexes(a, b)
    cfg = default_config(args.features, args.quantum, host)
    print("true" if relate(relation, sa, sb, cfg) else "false")
    found = witness(relation, sa, sb, cfg)
    for v in sorted(found.vertices, key=lambda v: host.vertices[v]):
        print(f"vertex {_point(host.vertices[v])}")
    for u, v in sorted(found.edges, key=lambda e: (host.vertices[e[0]], host.vertices[e[1]])):
        print(f"edge {_point(host.vertices[u])} {_point(host.vertices[v])}")
    for t in sorted(found.triangles, key=lambda t: host.triangles[t]):
        print("triangle " + " ".join(_point(host.vertices[v]) for v in host.triangles[t]))
    return EXIT_OK


def cmd_axioms(args) -> int:
    suite = AxiomSuite.parse(args.suite)
    complex = parse_complex(_read(args.complex)).complex
    family = random_family(complex, args.sets, rng_for(_seed(args.seed)))
    report = check_axioms(family, default_config(args.features, args.quantum, complex), suite)
    for r in report.results:
        line = f"{r.axiom} checked={r.checked} failures={r.failures}"
        if r.counterexample:
            line += " counterexample=" + ";".join(r.counterexample)
        print(line)
    print(report.summary())
    if args.export:
        data_dir = _data_dir(args.data_dir)
        for path in export_tables(data_dir, args.export, complex, report=report):
            print(path)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_homology(args) -> int:
    complex = parse_complex(_read(args.complex)).complex
    whole = SubComplex(complex, frozenset(range(len(complex.triangles))))
    print(betti(whole))
    if args.cover != "stars":
        return EXIT_OK
    check = nerve_theorem_check([s.as_subcomplex() for s in all_stars(complex)], NerveMode.parse(args.mode))
    print(f"nerve {check.nerve}")
    print(f"mode={check.mode.value} good_cover={str(check.good_cover).lower()} consistent={str(check.consistent).lower()}")
    return EXIT_OK if check.consistent else EXIT_CHECK_FAILED


def cmd_lemmas(args) -> int:
    report = lemma_report(_shape_complex(args))
    for key, value in report.items():
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = str(value).lower()
        print(f"{key}={value}")
    return EXIT_OK if report["nucleus_ok"] and report["covering_ok"] else EXIT_CHECK_FAILED


def cmd_render(args) -> int:
    complex_doc = parse_complex(_read(args.complex))
    shape = parse_shape(_read(args.shape)).shape if args.shape else None
    mnc = ()
    if args.mnc:
        if shape is None:
            raise ShapeNerveError("--mnc needs --shape", INVALID_ARGUMENT)
        mnc = tuple(n.nucleus for n in maximal_nucleus_clusters(complex_doc.shape_complex(shape)))
    overlays = Overlays(shape=shape, nerves=tuple(_int_list(args.nerves)), mnc=mnc)
    _emit(render_svg(complex_doc.complex, overlays), args.output)
    return EXIT_OK


def cmd_fixture(args) -> int:
    if args.name.startswith(RANDOM_PREFIX):
        sc = random_fixture(args.name[len(RANDOM_PREFIX):], _seed(args.seed), args.n)
    else:
        sc = named_fixture(args.name)
    _emit(dump_complex(sc.complex), args.output)
    if args.shape_output:
        _write(args.shape_output, dump_shape(ShapeDocument(shape=sc.shape)))
    return EXIT_OK


def _data_dir(cli_value: Optional[str]) -> Path:
    data_dir, source = resolve_setting(cli_value, "SHAPE_NERVE_DATA_DIR", DEFAULT_DATA_DIR)
    if source == "default":
        print(f"Using default data directory: {data_dir}")
    else:
        print(f"Using data directory from {source}: {data_dir}")
    os.environ["SHAPE_NERVE_DATA_DIR"] = data_dir
    return Path(data_dir)


def cmd_export(args) -> int:
    sc = _shape_complex(args)
    data_dir = _data_dir(args.data_dir)
    for path in export_tables(data_dir, args.dataset, sc.complex, snc=shape_nerve_complex(sc)):
        print(path)
    return EXIT_OK


def cmd_query(args) -> int:
    from shape_nerve.sql import execute_sql_query

    _data_dir(args.data_dir)
    result = execute_sql_query(args.sql, include_schema=False)
    if not result["success"]:
        raise ShapeNerveError(result["error"], result.get("code", INVALID_ARGUMENT))
    print(json.dumps(result["result"], indent=2, default=str))
    return EXIT_OK


def cmd_serve(args) -> int:
    return serve(args.data_dir)


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="shape-nerve", description="Shape nerve complexes of planar shapes")
    parser.add_argument("--version", action="store_true", help="Show version information and exit")
    parser.add_argument("--verbose", action="store_true", help="Log debug output to stderr")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("triangulate", help="Sample a shape document and write its labelled Delaunay complex")
    p.add_argument("shape", help="Shape document")
    p.add_argument("-o", "--output", help="Complex document to write (stdout if omitted)")
    p.add_argument("--boundary-step", help="Override the document's boundary sampling step")
    p.add_argument("--interior-spacing", help="Override the document's interior grid spacing")
    p.add_argument("--margin", help="Override the document's exterior margin")
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("nerves", help="Stars of all shape vertices and their overlap graph")
    p.add_argument("complex", help="Complex document")
    p.add_argument("--shape", required=True, help="Shape document the complex is labelled against")
    p.add_argument("-o", "--output", help="Document to write (stdout if omitted)")
    p.add_argument("--nucleus", type=int, help="Write only the star of this vertex, as a complex document")
    p.set_defaults(func=cmd_nerves)

    p = sub.add_parser("mnc", help="Maximal nucleus clusters")
    p.add_argument("complex", help="Complex document")
    p.add_argument("--shape", required=True, help="Shape document the complex is labelled against")
    p.set_defaults(func=cmd_mnc)

    p = sub.add_parser("compare", help="Evaluate a proximity relation between two complex documents")
    p.add_argument("a", help="First complex document")
    p.add_argument("b", help="Second complex document")
    p.add_argument("--relation", default="near", help="near, snear, dnear or dsnear")
    p.add_argument("--features", help="Comma-separated triangle features (env SHAPE_NERVE_FEATURES)")
    p.add_argument("--quantum", help=QUANTUM_HELP)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("axioms", help="Exhaustive axiom check on a seeded random family of subcomplexes")
    p.add_argument("complex", help="Complex document")
    p.add_argument("--suite", default="cech", help="cech, lodato, strong, desc or desc-strong")
    p.add_argument("--sets", type=int, default=20, help="Number of subcomplexes in the family")
    p.add_argument("--seed", type=int, help="PRNG seed (env SHAPE_NERVE_SEED)")
    p.add_argument("--features", help="Comma-separated triangle features (env SHAPE_NERVE_FEATURES)")
    p.add_argument("--quantum", help=QUANTUM_HELP)
    p.add_argument("--export", metavar="DATASET", help="Also export the report as <DATASET>__axioms.parquet")
    p.add_argument("--data-dir", help="Directory for exported tables")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("homology", help="Betti numbers and the nerve-theorem check of the star cover")
    p.add_argument("complex", help="Complex document")
    p.add_argument("--cover", choices=["stars", "none"], default="stars", help="Cover to check")
    p.add_argument("--mode", default=NerveMode.INTERIOR.value, help="interior or closure intersections")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("lemmas", help="Nucleus, covering and overlap checks of a labelled complex")
    p.add_argument("complex", help="Complex document")
    p.add_argument("--shape", required=True, help="Shape document the complex is labelled against")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("render", help="Draw a complex as SVG")
    p.add_argument("complex", help="Complex document")
    p.add_argument("-o", "--output", help="SVG file to write (stdout if omitted)")
    p.add_argument("--shape", help="Shape document whose outline is drawn")
    p.add_argument("--nerves", help="Comma-separated nuclei whose stars are filled")
    p.add_argument("--mnc", action="store_true", help="Outline the maximal nucleus clusters (needs --shape)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("fixture", help="Write a fixture complex document")
    valid = ", ".join(sorted(FIXTURES))
    p.add_argument("name", help=f"{valid}, or random-convex, random-star, random-points")
    p.add_argument("-o", "--output", help="Complex document to write (stdout if omitted)")
    p.add_argument("--shape-output", help="Also write the fixture's shape document here")
    p.add_argument("--seed", type=int, help="PRNG seed for random fixtures (env SHAPE_NERVE_SEED)")
    p.add_argument("--n", type=int, default=10, help="Polygon corners or point count for random fixtures")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("export", help="Export vertices, triangles and nerves as parquet tables")
    p.add_argument("complex", help="Complex document")
    p.add_argument("--shape", required=True, help="Shape document the complex is labelled against")
    p.add_argument("--dataset", required=True, help="Name prefix of the exported files")
    p.add_argument("--data-dir", help="Directory for exported tables (env SHAPE_NERVE_DATA_DIR)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("query", help="Run SQL over exported tables")
    p.add_argument("sql", help="SQL query; bare table names map onto exported files")
    p.add_argument("--data-dir", help="Directory for exported tables (env SHAPE_NERVE_DATA_DIR)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="Run the MCP server on stdio")
    p.add_argument("--data-dir", help="Directory for exported tables (env SHAPE_NERVE_DATA_DIR)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the command-line script"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ShapeNerveError as e:
        print(e.error_line(), file=sys.stderr)
        return EXIT_INVALID

    if args.version:
        from shape_nerve import __version__

        print(f"shape-nerve version {__version__}")
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ShapeNerveError as e:
        print(e.error_line(), file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        error = ShapeNerveError(e.strerror or str(e), IO_ERROR, path=e.filename)
        print(error.error_line(), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
