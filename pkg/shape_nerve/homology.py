"""Euler characteristic, GF(2) Betti numbers and abstract nerves of covers.

Homotopy type is compared only through (b0, b1). Ranks are computed over the
two-element field with numpy ``uint8`` row reduction.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from shape_nerve.errors import EMPTY_COVER, INVALID_ARGUMENT, ComplexError, ShapeNerveError
from shape_nerve.nerve import SimplexSet, SubComplex, check_same_host, sub_closure

logger = logging.getLogger(__name__)


class NerveMode(Enum):
    """What counts as a nonempty intersection of cover elements.

    CLOSURE: the closed simplex sets share a simplex (a vertex suffices).
    INTERIOR: the elements share a filled triangle.
    """

    CLOSURE = "closure"
    INTERIOR = "interior"

    @classmethod
    def parse(cls, name: str) -> "NerveMode":
        try:
            return cls(name)
        except ValueError:
            raise ShapeNerveError(f"unknown nerve mode {name!r}; expected closure or interior", INVALID_ARGUMENT)


@dataclass(frozen=True)
class AbstractComplex:
    """Vertices ``0..n_vertices-1`` with sorted edge pairs and triangle triples."""

    n_vertices: int
    edges: Tuple[Tuple[int, int], ...] = ()
    triangles: Tuple[Tuple[int, int, int], ...] = ()

    def __post_init__(self):
        edges = tuple(sorted({tuple(sorted(e)) for e in self.edges}))
        triangles = tuple(sorted({tuple(sorted(t)) for t in self.triangles}))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "triangles", triangles)

    def validate(self) -> None:
        edge_set = set(self.edges)
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ComplexError(f"edge ({u}, {v}) is invalid", edge=[u, v])
        for tri in self.triangles:
            if len(set(tri)) != 3:
                raise ComplexError(f"triangle {tri} is degenerate", triangle=list(tri))
            for e in combinations(tri, 2):
                if e not in edge_set:
                    raise ComplexError(f"triangle {tri} is missing edge {e}", triangle=list(tri))

    @classmethod
    def from_simplices(cls, simplices: SimplexSet, triangle_corners: Dict[int, Tuple[int, int, int]]) -> "AbstractComplex":
        """Relabel a closed simplex set onto consecutive vertex numbers."""
        order = {v: i for i, v in enumerate(sorted(simplices.vertices))}
        edges = [(order[u], order[v]) for u, v in simplices.edges]
        triangles = [tuple(order[v] for v in triangle_corners[t]) for t in simplices.triangles]
        return cls(len(order), tuple(edges), tuple(triangles))

    @classmethod
    def from_subcomplex(cls, s: SubComplex) -> "AbstractComplex":
        closure = sub_closure(s)
        corners = {t: s.host.triangles[t] for t in closure.triangles}
        return cls.from_simplices(closure, corners)


@dataclass(frozen=True)
class BettiReport:
    b0: int
    b1: int
    b2: int
    euler: int
    v: int
    e: int
    t: int

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.b0, self.b1)

    def as_dict(self) -> Dict[str, int]:
        return {
            "b0": self.b0,
            "b1": self.b1,
            "b2": self.b2,
            "euler": self.euler,
            "vertices": self.v,
            "edges": self.e,
            "triangles": self.t,
        }

    def __str__(self) -> str:
        return f"b0={self.b0} b1={self.b1} χ={self.euler}"


Complexish = Union[SubComplex, AbstractComplex]


def _abstract(x: Complexish) -> AbstractComplex:
    return x if isinstance(x, AbstractComplex) else AbstractComplex.from_subcomplex(x)


def euler_characteristic(x: Complexish) -> int:
    ac = _abstract(x)
    return ac.n_vertices - len(ac.edges) + len(ac.triangles)


# -- GF(2) linear algebra ---------------------------------------------------------


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank over GF(2) by Gaussian elimination with XOR row operations."""
    r = (np.asarray(matrix, dtype=np.uint8) % 2).copy()
    if r.size == 0:
        return 0
    m, n = r.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        rows = np.nonzero(r[rank:, col])[0]
        if rows.size == 0:
            continue
        pivot = rank + int(rows[0])
        if pivot != rank:
            r[[rank, pivot]] = r[[pivot, rank]]
        below = rank + 1 + np.nonzero(r[rank + 1:, col])[0]
        if below.size:
            r[below] ^= r[rank]
        rank += 1
    return rank


def boundary_matrices(ac: AbstractComplex) -> Tuple[np.ndarray, np.ndarray]:
    """Vertex-by-edge and edge-by-triangle incidence matrices over GF(2)."""
    d1 = np.zeros((ac.n_vertices, len(ac.edges)), dtype=np.uint8)
    for j, (u, v) in enumerate(ac.edges):
        d1[u, j] = 1
        d1[v, j] = 1
    edge_index = {e: i for i, e in enumerate(ac.edges)}
    d2 = np.zeros((len(ac.edges), len(ac.triangles)), dtype=np.uint8)
    for j, (a, b, c) in enumerate(ac.triangles):
        for e in ((a, b), (a, c), (b, c)):
            d2[edge_index[e], j] = 1
    return d1, d2


def connected_components(ac: AbstractComplex) -> List[List[int]]:
    """Components of the 1-skeleton by traversal, each sorted."""
    neighbours: List[List[int]] = [[] for _ in range(ac.n_vertices)]
    for u, v in ac.edges:
        neighbours[u].append(v)
        neighbours[v].append(u)
    seen = [False] * ac.n_vertices
    components = []
    for start in range(ac.n_vertices):
        if seen[start]:
            continue
        seen[start] = True
        stack, members = [start], []
        while stack:
            u = stack.pop()
            members.append(u)
            for w in neighbours[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        components.append(sorted(members))
    return components


def betti(x: Complexish) -> BettiReport:
    ac = _abstract(x)
    ac.validate()
    d1, d2 = boundary_matrices(ac)
    rank1 = gf2_rank(d1)
    rank2 = gf2_rank(d2)
    v, e, t = ac.n_vertices, len(ac.edges), len(ac.triangles)
    b0 = len(connected_components(ac))
    if b0 != v - rank1:
        raise ComplexError("component count disagrees with boundary rank")
    b1 = e - v + b0 - rank2
    b2 = t - rank2
    return BettiReport(b0=b0, b1=b1, b2=b2, euler=v - e + t, v=v, e=e, t=t)


# -- nerves of covers -----------------------------------------------------------------


def _intersection(parts: Sequence[SubComplex], closures: Sequence[SimplexSet], mode: NerveMode, idx) -> SimplexSet:
    if mode is NerveMode.CLOSURE:
        result = closures[idx[0]]
        for i in idx[1:]:
            result = result & closures[i]
        return result
    common = parts[idx[0]].triangle_ids
    for i in idx[1:]:
        common = common & parts[i].triangle_ids
    return sub_closure(SubComplex(parts[idx[0]].host, common))


def _check_cover(cover: Sequence[SubComplex]) -> None:
    if not cover:
        raise ShapeNerveError("the cover has no elements", EMPTY_COVER)
    check_same_host(list(cover))


def abstract_nerve(cover: Sequence[SubComplex], mode: NerveMode = NerveMode.CLOSURE) -> AbstractComplex:
    """One vertex per element; edges and triangles for nonempty pair and triple intersections."""
    _check_cover(cover)
    closures = [sub_closure(s) for s in cover]
    n = len(cover)

    if mode is NerveMode.CLOSURE:
        keys = [c.vertices for c in closures]
    else:
        keys = [s.triangle_ids for s in cover]

    # elements sharing a key can only meet through it
    holders: Dict[int, List[int]] = {}
    for i, ks in enumerate(keys):
        for k in ks:
            holders.setdefault(k, []).append(i)
    edges = set()
    for members in holders.values():
        for i, j in combinations(members, 2):
            edges.add((i, j))

    neighbours: List[set] = [set() for _ in range(n)]
    for i, j in edges:
        neighbours[i].add(j)
        neighbours[j].add(i)
    triangles = []
    for i, j in sorted(edges):
        for k in sorted(neighbours[i] & neighbours[j]):
            if k > j and keys[i] & keys[j] & keys[k]:
                triangles.append((i, j, k))
    nerve = AbstractComplex(n, tuple(edges), tuple(triangles))
    logger.debug("nerve of %d elements: %d edges, %d triangles", n, len(nerve.edges), len(nerve.triangles))
    return nerve


@dataclass(frozen=True)
class NerveTheoremReport:
    consistent: bool
    nerve: BettiReport
    union: BettiReport
    mode: NerveMode
    element_violations: Tuple[int, ...] = ()
    intersection_violations: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    @property
    def hypothesis_holds(self) -> bool:
        """Every element passes the contractibility proxy b0=1, b1=0."""
        return not self.element_violations

    @property
    def good_cover(self) -> bool:
        return not self.element_violations and not self.intersection_violations

    def as_dict(self) -> Dict[str, object]:
        return {
            "consistent": self.consistent,
            "mode": self.mode.value,
            "nerve": self.nerve.as_dict(),
            "union": self.union.as_dict(),
            "hypothesis_holds": self.hypothesis_holds,
            "good_cover": self.good_cover,
            "element_violations": list(self.element_violations),
            "intersection_violations": [list(x) for x in self.intersection_violations],
        }


def _contractible(report: BettiReport) -> bool:
    return report.pair == (1, 0)


def nerve_theorem_check(cover: Sequence[SubComplex], mode: NerveMode = NerveMode.INTERIOR) -> NerveTheoremReport:
    """Compare (b0, b1) of the cover's nerve with those of the cover's union.

    Elements and nonempty pairwise or triple intersections failing the
    contractibility proxy are reported; the comparison runs regardless.
    """
    _check_cover(cover)
    host = cover[0].host
    nerve = abstract_nerve(cover, mode)
    union = cover[0]
    for s in cover[1:]:
        union = union.union(s)
    nerve_report = betti(nerve)
    union_report = betti(union)

    element_violations = tuple(i for i, s in enumerate(cover) if not _contractible(betti(s)))

    closures = [sub_closure(s) for s in cover]
    corners = {t: host.triangles[t] for t in range(len(host.triangles))}
    violations = []
    for idx in list(nerve.edges) + list(nerve.triangles):
        meet = _intersection(cover, closures, mode, idx)
        if not _contractible(betti(AbstractComplex.from_simplices(meet, corners))):
            violations.append(tuple(idx))

    report = NerveTheoremReport(
        consistent=nerve_report.pair == union_report.pair,
        nerve=nerve_report,
        union=union_report,
        mode=mode,
        element_violations=element_violations,
        intersection_violations=tuple(violations),
    )
    if not report.consistent:
        logger.info("nerve %s differs from union %s", nerve_report, union_report)
    return report
