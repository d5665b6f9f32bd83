"""Vertex-star nerves, shape nerve complexes and subcomplex topology."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from shape_nerve.errors import (
    EMPTY_COVER,
    INVALID_ARGUMENT,
    ISOLATED_VERTEX,
    UNKNOWN_VERTEX,
    ComplexError,
    HostMismatchError,
    ShapeNerveError,
)
from shape_nerve.triangulation import (
    Edge,
    Label,
    ShapeComplex,
    SimplicialComplex,
    canonical_triangle,
    find_overlapping_triangles,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubComplex:
    """A set of triangles of a host complex, plus optional loose vertices.

    Loose vertices model points taken as singleton sets; a vertex-only
    subcomplex has no boundary, so each of its vertices is interior.
    """

    host: SimplicialComplex
    triangle_ids: FrozenSet[int] = frozenset()
    vertex_ids: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "triangle_ids", frozenset(self.triangle_ids))
        object.__setattr__(self, "vertex_ids", frozenset(self.vertex_ids))
        n_tri = len(self.host.triangles)
        n_vert = len(self.host.vertices)
        bad = [t for t in self.triangle_ids if not 0 <= t < n_tri]
        if bad:
            raise ShapeNerveError(f"unknown triangle ids {sorted(bad)}", INVALID_ARGUMENT, triangle=sorted(bad))
        bad = [v for v in self.vertex_ids if not 0 <= v < n_vert]
        if bad:
            raise ShapeNerveError(f"unknown vertex ids {sorted(bad)}", UNKNOWN_VERTEX)

    @classmethod
    def point(cls, host: SimplicialComplex, v: int) -> "SubComplex":
        return cls(host, frozenset(), frozenset([v]))

    @classmethod
    def empty(cls, host: SimplicialComplex) -> "SubComplex":
        return cls(host)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubComplex):
            return NotImplemented
        return (
            self.triangle_ids == other.triangle_ids
            and self.vertex_ids == other.vertex_ids
            and self.host.same_as(other.host)
        )

    def __hash__(self) -> int:
        return hash((self.triangle_ids, self.vertex_ids))

    def __repr__(self) -> str:
        return f"SubComplex(triangles={sorted(self.triangle_ids)}, vertices={sorted(self.vertex_ids)})"

    def is_empty(self) -> bool:
        return not self.triangle_ids and not self.vertex_ids

    def is_point(self) -> bool:
        return not self.triangle_ids and len(self.vertex_ids) == 1

    def size(self) -> int:
        return len(self.triangle_ids) + len(self.vertex_ids)

    def union(self, other: "SubComplex") -> "SubComplex":
        check_same_host([self, other])
        return SubComplex(
            self.host,
            self.triangle_ids | other.triangle_ids,
            self.vertex_ids | other.vertex_ids,
        )

    def closure_vertices(self) -> FrozenSet[int]:
        vertices = set(self.vertex_ids)
        for t in self.triangle_ids:
            vertices.update(self.host.triangles[t])
        return frozenset(vertices)


@dataclass(frozen=True)
class SimplexSet:
    """Vertices, edges and triangles, as returned by closure/boundary/interior."""

    vertices: FrozenSet[int] = frozenset()
    edges: FrozenSet[Edge] = frozenset()
    triangles: FrozenSet[int] = frozenset()

    def __or__(self, other: "SimplexSet") -> "SimplexSet":
        return SimplexSet(
            self.vertices | other.vertices,
            self.edges | other.edges,
            self.triangles | other.triangles,
        )

    def __and__(self, other: "SimplexSet") -> "SimplexSet":
        return SimplexSet(
            self.vertices & other.vertices,
            self.edges & other.edges,
            self.triangles & other.triangles,
        )

    def __sub__(self, other: "SimplexSet") -> "SimplexSet":
        return SimplexSet(
            self.vertices - other.vertices,
            self.edges - other.edges,
            self.triangles - other.triangles,
        )

    def __bool__(self) -> bool:
        return bool(self.vertices or self.edges or self.triangles)

    def counts(self) -> Tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.triangles)


@dataclass(frozen=True, eq=False)
class NerveComplex:
    """Triangles sharing the nucleus vertex of a host complex."""

    host: SimplicialComplex
    nucleus: int
    triangle_ids: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "triangle_ids", frozenset(self.triangle_ids))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NerveComplex):
            return NotImplemented
        return (
            self.nucleus == other.nucleus
            and self.triangle_ids == other.triangle_ids
            and self.host.same_as(other.host)
        )

    def __hash__(self) -> int:
        return hash((self.nucleus, self.triangle_ids))

    def __repr__(self) -> str:
        return f"NerveComplex(nucleus={self.nucleus}, triangles={sorted(self.triangle_ids)})"

    def __len__(self) -> int:
        return len(self.triangle_ids)

    def as_subcomplex(self) -> SubComplex:
        return SubComplex(self.host, self.triangle_ids)

    def common_vertices(self) -> FrozenSet[int]:
        common: Optional[set] = None
        for t in self.triangle_ids:
            corners = set(self.host.triangles[t])
            common = corners if common is None else common & corners
        return frozenset(common or ())

    def is_valid(self) -> bool:
        """Nonempty, and every triangle has the nucleus as a corner."""
        return bool(self.triangle_ids) and all(
            self.nucleus in self.host.triangles[t] for t in self.triangle_ids
        )

    def is_pinned(self) -> bool:
        """True when the triangles meet in the nucleus alone."""
        return self.common_vertices() == frozenset([self.nucleus])


@dataclass(frozen=True)
class OverlapReport:
    """Connectivity of the overlap graph of a family of nerves."""

    components: Tuple[Tuple[int, ...], ...]
    common_triangles: FrozenSet[int]

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1

    @property
    def globally_intersecting(self) -> bool:
        return bool(self.common_triangles)


@dataclass(frozen=True)
class ShapeNerveComplex:
    """Stars of every shape vertex and the graph of which ones share a triangle.

    ``overlap_edges`` holds position pairs ``(i, j)``, ``i < j``, into ``nerves``.
    """

    nerves: Tuple[NerveComplex, ...]
    overlap_edges: FrozenSet[Tuple[int, int]]
    report: OverlapReport = field(compare=False)

    def adjacency(self) -> Dict[int, FrozenSet[int]]:
        neighbours: Dict[int, set] = {i: set() for i in range(len(self.nerves))}
        for i, j in self.overlap_edges:
            neighbours[i].add(j)
            neighbours[j].add(i)
        return {i: frozenset(js) for i, js in neighbours.items()}

    def nuclei(self) -> Tuple[int, ...]:
        return tuple(n.nucleus for n in self.nerves)

    def nerve_at(self, nucleus: int) -> NerveComplex:
        for n in self.nerves:
            if n.nucleus == nucleus:
                return n
        raise ShapeNerveError(f"vertex {nucleus} is not a shape nucleus", UNKNOWN_VERTEX)


def check_same_host(items: Sequence) -> SimplicialComplex:
    """Return the shared host of subcomplexes or nerves; raise HOST_MISMATCH otherwise."""
    host = items[0].host
    for item in items[1:]:
        if not host.same_as(item.host):
            raise HostMismatchError("operands belong to different complexes")
    return host


# -- nerves -------------------------------------------------------------------


def star(complex: SimplicialComplex, v: int) -> NerveComplex:
    """The nerve with nucleus ``v``: every triangle having ``v`` as a corner."""
    if not 0 <= v < len(complex.vertices):
        raise ShapeNerveError(f"vertex {v} does not exist", UNKNOWN_VERTEX, vertex=v)
    incident = complex.vertex_to_triangles[v]
    if not incident:
        raise ShapeNerveError(f"vertex {v} has no incident triangle", ISOLATED_VERTEX, vertex=v)
    return NerveComplex(complex, v, frozenset(incident))


def all_stars(complex: SimplicialComplex, vertices: Optional[Iterable[int]] = None) -> List[NerveComplex]:
    """Stars of the given vertices (default all), skipping isolated ones."""
    ids = range(len(complex.vertices)) if vertices is None else sorted(vertices)
    return [star(complex, v) for v in ids if complex.vertex_to_triangles[v]]


def maximal_nucleus_clusters(shape_complex: ShapeComplex) -> List[NerveComplex]:
    """Shape-vertex stars with the largest triangle count, ordered by nucleus."""
    stars = all_stars(shape_complex.complex, shape_complex.shape_vertex_ids)
    if not stars:
        return []
    best = max(len(s) for s in stars)
    return [s for s in stars if len(s) == best]


def overlap_report(nerves: Sequence[NerveComplex], edges: Iterable[Tuple[int, int]]) -> OverlapReport:
    parent = list(range(len(nerves)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: Dict[int, List[int]] = {}
    for i, n in enumerate(nerves):
        groups.setdefault(find(i), []).append(n.nucleus)
    components = tuple(tuple(g) for _, g in sorted(groups.items()))
    common: Optional[FrozenSet[int]] = None
    for n in nerves:
        common = n.triangle_ids if common is None else common & n.triangle_ids
    return OverlapReport(components=components, common_triangles=common or frozenset())


def shape_nerve_complex(shape_complex: ShapeComplex) -> ShapeNerveComplex:
    """Stars of all shape vertices, with their triangle-sharing overlap graph.

    A nonempty common intersection over the whole family only holds for
    small shapes, so the report records pairwise-overlap connectivity along
    with the (usually empty) global intersection.
    """
    nerves = tuple(all_stars(shape_complex.complex, shape_complex.shape_vertex_ids))
    by_triangle: Dict[int, List[int]] = {}
    for i, n in enumerate(nerves):
        for t in n.triangle_ids:
            by_triangle.setdefault(t, []).append(i)
    edges = set()
    for members in by_triangle.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                edges.add((members[a], members[b]))
    report = overlap_report(nerves, edges)
    if not report.connected:
        logger.debug("shape nerve overlap graph has %d components", len(report.components))
    return ShapeNerveComplex(nerves=nerves, overlap_edges=frozenset(edges), report=report)


def union_of_nerves(nerves: Sequence[NerveComplex]) -> SubComplex:
    if not nerves:
        raise ShapeNerveError("no nerves to unite", EMPTY_COVER)
    host = check_same_host(nerves)
    triangles = frozenset().union(*(n.triangle_ids for n in nerves))
    return SubComplex(host, triangles)


def nerve_shape(nerve: NerveComplex) -> Tuple[int, ...]:
    """Closed polygonal curve through the corners opposite the nucleus, CCW.

    For a nucleus inside its star the curve is the link cycle; otherwise each
    fan of the star is closed through the nucleus itself.
    """
    successor: Dict[int, int] = {}
    for t in nerve.triangle_ids:
        a, b, c = nerve.host.triangles[t]
        if a == nerve.nucleus:
            successor[b] = c
        elif b == nerve.nucleus:
            successor[c] = a
        else:
            successor[a] = b
    targets = set(successor.values())
    starts = sorted(v for v in successor if v not in targets)
    curve: List[int] = []
    if not starts:
        remaining = set(successor)
        while remaining:
            v = min(remaining)
            while v in remaining:
                curve.append(v)
                remaining.discard(v)
                v = successor[v]
        return tuple(curve)
    for s in starts:
        v = s
        curve.append(v)
        while v in successor:
            v = successor[v]
            curve.append(v)
        curve.append(nerve.nucleus)
    return tuple(curve)


# -- subcomplex topology --------------------------------------------------------


def sub_closure(s: SubComplex) -> SimplexSet:
    edges = set()
    for t in s.triangle_ids:
        a, b, c = s.host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add((u, v) if u < v else (v, u))
    return SimplexSet(s.closure_vertices(), frozenset(edges), s.triangle_ids)


def sub_boundary(s: SubComplex) -> SimplexSet:
    """Edges with exactly one incident triangle of ``s``, with their endpoints."""
    count: Dict[Edge, int] = {}
    for t in s.triangle_ids:
        a, b, c = s.host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            e = (u, v) if u < v else (v, u)
            count[e] = count.get(e, 0) + 1
    edges = frozenset(e for e, k in count.items() if k == 1)
    vertices = frozenset(v for e in edges for v in e)
    return SimplexSet(vertices, edges, frozenset())


def sub_interior(s: SubComplex) -> SimplexSet:
    return sub_closure(s) - sub_boundary(s)


def merge_complexes(
    a: SimplicialComplex, b: SimplicialComplex
) -> Tuple[SimplicialComplex, SubComplex, SubComplex]:
    """Place two complexes on one host, identifying equal points and triangles.

    The host carries no labels. Triangles of the two operands must be equal or
    have disjoint interiors; INVALID_COMPLEX names the first overlapping pair.
    """
    points = sorted(set(a.vertices) | set(b.vertices))
    index = {p: i for i, p in enumerate(points)}
    triangles: Dict[Tuple[int, int, int], int] = {}
    ids = []
    for cx in (a, b):
        own = set()
        for tri in cx.triangles:
            key = canonical_triangle(tuple(index[cx.vertices[v]] for v in tri))
            own.add(triangles.setdefault(key, len(triangles)))
        ids.append(frozenset(own))
    host = SimplicialComplex(vertices=tuple(points), triangles=tuple(triangles))
    overlap = find_overlapping_triangles(host)
    if overlap is not None:
        i, j = overlap
        raise ComplexError(f"triangles {i} and {j} of the merged complexes overlap", triangle=[i, j])
    return host, SubComplex(host, ids[0]), SubComplex(host, ids[1])


def shape_subcomplex(shape_complex: ShapeComplex) -> SubComplex:
    """The SHAPE-labelled triangles of a shape complex."""
    return SubComplex(shape_complex.complex, shape_complex.shape_triangle_ids())


# -- wiring and lemma checks ---------------------------------------------------


@dataclass(frozen=True)
class Wiring:
    nucleus: int
    degree: int
    on_boundary: bool


def wiring(snc: ShapeNerveComplex) -> Tuple[Wiring, ...]:
    """Overlap degree and boundary-nucleus flag of each shape nerve."""
    adjacency = snc.adjacency()
    result = []
    for i, n in enumerate(snc.nerves):
        labels = n.host.vertex_labels
        on_boundary = labels is not None and labels[n.nucleus] is Label.SHAPE_BOUNDARY
        result.append(Wiring(n.nucleus, len(adjacency[i]), on_boundary))
    return tuple(result)


def lemma_report(shape_complex: ShapeComplex) -> Dict[str, object]:
    """Structural checks of a shape complex against the nerve lemmas.

    * every vertex with an incident triangle is the nucleus of a valid star
    * every SHAPE triangle lies in the star of some shape vertex (covering)
    * every SHAPE_INTERIOR nucleus shares a triangle with the SHAPE triangles
    * overlap connectivity of the shape nerves
    """
    cx = shape_complex.complex
    invalid_nuclei = [
        v for v in range(len(cx.vertices)) if cx.vertex_to_triangles[v] and not star(cx, v).is_valid()
    ]
    stars = all_stars(cx, shape_complex.shape_vertex_ids)
    covered = union_of_nerves(stars).triangle_ids if stars else frozenset()
    uncovered = sorted(shape_complex.shape_triangle_ids() - covered)
    shape_tris = shape_complex.shape_triangle_ids()
    labels = cx.vertex_labels or ()
    no_contact = [
        s.nucleus
        for s in stars
        if labels and labels[s.nucleus] is Label.SHAPE_INTERIOR and not (s.triangle_ids & shape_tris)
    ]
    snc = shape_nerve_complex(shape_complex)
    return {
        "nucleus_ok": not invalid_nuclei,
        "invalid_nuclei": invalid_nuclei,
        "covering_ok": not uncovered,
        "uncovered_triangles": uncovered,
        "interior_contact_ok": not no_contact,
        "interior_without_contact": no_contact,
        "overlap_connected": snc.report.connected,
        "overlap_components": len(snc.report.components),
        "global_intersection": sorted(snc.report.common_triangles),
    }
