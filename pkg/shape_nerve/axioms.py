"""Exhaustive axiom checking of the proximity relations over finite families."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from shape_nerve.errors import INVALID_ARGUMENT, ShapeNerveError
from shape_nerve.nerve import SubComplex, check_same_host, sub_closure, sub_interior
from shape_nerve.proximity import (
    ProximityConfig,
    description_set,
    descriptive_intersection,
    descriptively_near,
    interior_descriptive_witness,
    near,
    strongly_descriptively_near,
    strongly_near,
)
from shape_nerve.triangulation import SimplicialComplex

logger = logging.getLogger(__name__)


class AxiomSuite(Enum):
    CECH = "cech"
    LODATO = "lodato"
    STRONG = "strong"
    DESC_LODATO = "desc"
    DESC_STRONG = "desc-strong"

    @classmethod
    def parse(cls, name: str) -> "AxiomSuite":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ShapeNerveError(f"unknown axiom suite {name!r}; expected one of {valid}", INVALID_ARGUMENT)


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    checked: int
    failures: int
    counterexample: Optional[Tuple[str, ...]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class AxiomReport:
    suite: AxiomSuite
    family_size: int
    results: Tuple[AxiomResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> List[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "suite": self.suite.value,
                    "axiom": r.axiom,
                    "checked": r.checked,
                    "failures": r.failures,
                    "counterexample": "; ".join(r.counterexample) if r.counterexample else "",
                }
                for r in self.results
            ],
            columns=["suite", "axiom", "checked", "failures", "counterexample"],
        )

    def summary(self) -> str:
        if self.passed:
            return "all axioms hold"
        names = ", ".join(r.axiom for r in self.failed())
        return f"axioms failed: {names}"


# An operand is a label plus the subcomplex it names; the instance size used to
# pick the minimal counterexample is the total simplex count of its operands.
Operand = Tuple[str, SubComplex]


class _Tally:
    def __init__(self, axiom: str):
        self.axiom = axiom
        self.checked = 0
        self.failures = 0
        self.best: Optional[Tuple[int, Tuple[str, ...]]] = None

    def record(self, ok: bool, operands: Sequence[Operand]) -> None:
        self.checked += 1
        if ok:
            return
        self.failures += 1
        size = sum(s.size() for _, s in operands)
        candidate = (size, tuple(label for label, _ in operands))
        if self.best is None or candidate < self.best:
            self.best = candidate

    def result(self) -> AxiomResult:
        return AxiomResult(self.axiom, self.checked, self.failures, self.best[1] if self.best else None)


class _Family:
    """Labelled operands and memoized per-set data shared by all axioms."""

    def __init__(self, space: Sequence[SubComplex]):
        self.host: SimplicialComplex = check_same_host(list(space))
        self.sets: List[Operand] = [(f"set {i}", s) for i, s in enumerate(space)]
        self.empty: Operand = ("empty", SubComplex.empty(self.host))
        self.vertices = sorted(frozenset().union(*(s.closure_vertices() for _, s in self.sets)))

    def point(self, v: int) -> Operand:
        return (f"vertex {v}", SubComplex.point(self.host, v))

    def pairs(self) -> Iterable[Tuple[Operand, Operand]]:
        return product(self.sets, repeat=2)

    def union_triples(self) -> Iterable[Tuple[Operand, Operand, Operand]]:
        """(A, B, C) with B, C an unordered pair, B == C included."""
        for a in self.sets:
            for i, b in enumerate(self.sets):
                for c in self.sets[i:]:
                    yield a, b, c


def _union(b: Operand, c: Operand) -> Operand:
    return (f"{b[0]} | {c[0]}", b[1].union(c[1]))


def _meets(a: SubComplex, b: SubComplex) -> bool:
    return bool(sub_closure(a) & sub_closure(b))


# -- suites -------------------------------------------------------------------


def _symmetry(tally: _Tally, fam: _Family, rel: Callable[[SubComplex, SubComplex], bool]) -> None:
    for a, b in combinations(fam.sets, 2):
        tally.record(rel(a[1], b[1]) == rel(b[1], a[1]), [a, b])


def _union_axiom(tally: _Tally, fam: _Family, rel: Callable[[SubComplex, SubComplex], bool]) -> None:
    for a, b, c in fam.union_triples():
        bc = _union(b, c)
        tally.record(rel(a[1], bc[1]) == (rel(a[1], b[1]) or rel(a[1], c[1])), [a, b, c])


def _cech(fam: _Family) -> List[_Tally]:
    p1, p2, p3, p4 = (_Tally(n) for n in ("P1", "P2", "P3", "P4"))
    for a in fam.sets:
        ok = not near(fam.empty[1], a[1]) and not near(a[1], fam.empty[1])
        p1.record(ok, [fam.empty, a])
    _symmetry(p2, fam, near)
    for a, b in fam.pairs():
        p3.record(not _meets(a[1], b[1]) or near(a[1], b[1]), [a, b])
    _union_axiom(p4, fam, near)
    return [p1, p2, p3, p4]


def _lodato(fam: _Family) -> List[_Tally]:
    tallies = _cech(fam)
    p5 = _Tally("P5")
    # vertices b whose singleton {b} is near each set
    near_points: Dict[int, FrozenSet[int]] = {
        i: frozenset(v for v in fam.vertices if near(fam.point(v)[1], c[1])) for i, c in enumerate(fam.sets)
    }
    for (ia, a), (ib, b), (ic, c) in product(enumerate(fam.sets), repeat=3):
        if near(a[1], b[1]) and b[1].closure_vertices() <= near_points[ic]:
            p5.record(near(a[1], c[1]), [a, b, c])
        else:
            p5.record(True, [a, b, c])
    return tallies + [p5]


def _has_interior(s: SubComplex) -> bool:
    return bool(s.triangle_ids)


def _strong(fam: _Family) -> List[_Tally]:
    names = ("snN1", "snN2", "snN3", "snN4", "snN5", "snN6")
    n1, n2, n3, n4, n5, n6 = (_Tally(n) for n in names)
    _symmetry(n1, fam, strongly_near)
    for a, b in fam.pairs():
        sn = strongly_near(a[1], b[1])
        n2.record(not sn or _meets(a[1], b[1]), [a, b])
        interiors_meet = bool(sub_interior(a[1]) & sub_interior(b[1]))
        n4.record(not interiors_meet or sn, [a, b])
    for a, b, c in fam.union_triples():
        for member in (b, c):
            if _has_interior(member[1]) and strongly_near(a[1], member[1]):
                bc = _union(b, c)
                n3.record(strongly_near(a[1], bc[1]), [a, b, c])
                break
        else:
            n3.record(True, [a, b, c])
    _whole_family_union(n3, fam, strongly_near)
    for a in fam.sets:
        interior = sub_interior(a[1]).vertices
        for v in sorted(a[1].closure_vertices()):
            x = fam.point(v)
            n5.record(v not in interior or strongly_near(x[1], a[1]), [x, a])
    singles = [fam.point(v) for v in range(len(fam.host.vertices))]
    for i, x in enumerate(singles):
        for y in singles[i:]:
            n6.record(strongly_near(x[1], y[1]) == (x[0] == y[0]), [x, y])
    return [n1, n2, n3, n4, n5, n6]


def _whole_family_union(tally: _Tally, fam: _Family, rel) -> None:
    """The union axiom over the whole family at once."""
    if not fam.sets:
        return
    whole = fam.sets[0][1]
    for _, s in fam.sets[1:]:
        whole = whole.union(s)
    everything = ("all sets", whole)
    for a in fam.sets:
        if any(_has_interior(b[1]) and rel(a[1], b[1]) for b in fam.sets):
            tally.record(rel(a[1], whole), [a, everything])


def _desc_lodato(fam: _Family, cfg: ProximityConfig) -> List[_Tally]:
    d0, d1, d2, d3, d4 = (_Tally(n) for n in ("dP0", "dP1", "dP2", "dP3", "dP4"))

    def dnear(a: SubComplex, b: SubComplex) -> bool:
        return descriptively_near(a, b, cfg)

    for a in fam.sets:
        d0.record(not dnear(fam.empty[1], a[1]) and not dnear(a[1], fam.empty[1]), [fam.empty, a])
    _symmetry(d1, fam, dnear)
    for a, b in fam.pairs():
        d2.record(not descriptive_intersection(a[1], b[1], cfg) or dnear(a[1], b[1]), [a, b])
    _union_axiom(d3, fam, dnear)
    # every element of B is described among C's elements
    described: Dict[int, FrozenSet] = {i: description_set(s, cfg) for i, (_, s) in enumerate(fam.sets)}
    for (ia, a), (ib, b), (ic, c) in product(enumerate(fam.sets), repeat=3):
        if dnear(a[1], b[1]) and described[ib] <= described[ic]:
            d4.record(dnear(a[1], c[1]), [a, b, c])
        else:
            d4.record(True, [a, b, c])
    return [d0, d1, d2, d3, d4]


def _desc_strong(fam: _Family, cfg: ProximityConfig) -> List[_Tally]:
    names = ("dsnN1", "dsnN2", "dsnN3", "dsnN4", "dsnN5")
    n1, n2, n3, n4, n5 = (_Tally(n) for n in names)

    def dsn(a: SubComplex, b: SubComplex) -> bool:
        return strongly_descriptively_near(a, b, cfg)

    _symmetry(n1, fam, dsn)
    for a, b in fam.pairs():
        related = dsn(a[1], b[1])
        n2.record(not related or bool(descriptive_intersection(a[1], b[1], cfg)), [a, b])
        interiors = interior_descriptive_witness(a[1], b[1], cfg).triangles
        n4.record(not interiors or related, [a, b])
    for a, b, c in fam.union_triples():
        for member in (b, c):
            if _has_interior(member[1]) and dsn(a[1], member[1]):
                bc = _union(b, c)
                n3.record(dsn(a[1], bc[1]), [a, b, c])
                break
        else:
            n3.record(True, [a, b, c])
    _whole_family_union(n3, fam, dsn)
    for a in fam.sets:
        interior = sub_interior(a[1]).vertices
        for v in sorted(a[1].closure_vertices()):
            x = fam.point(v)
            n5.record(v not in interior or dsn(x[1], a[1]), [x, a])
    return [n1, n2, n3, n4, n5]


def check_axioms(
    space: Sequence[SubComplex],
    cfg: ProximityConfig,
    suite: AxiomSuite,
) -> AxiomReport:
    """Evaluate every axiom of ``suite`` on all pairs and triples drawn from ``space``."""
    if not space:
        raise ShapeNerveError("axiom checks need a nonempty family", INVALID_ARGUMENT)
    fam = _Family(space)
    if suite is AxiomSuite.CECH:
        tallies = _cech(fam)
    elif suite is AxiomSuite.LODATO:
        tallies = _lodato(fam)
    elif suite is AxiomSuite.STRONG:
        tallies = _strong(fam)
    elif suite is AxiomSuite.DESC_LODATO:
        tallies = _desc_lodato(fam, cfg)
    else:
        tallies = _desc_strong(fam, cfg)
    results = tuple(sorted((t.result() for t in tallies), key=lambda r: r.axiom))
    report = AxiomReport(suite=suite, family_size=len(space), results=results)
    logger.debug(
        "%s: %d instances, %d failures",
        suite.value,
        sum(r.checked for r in results),
        sum(r.failures for r in results),
    )
    return report


# -- random families ------------------------------------------------------------


def _grow_region(host: SimplicialComplex, seed: int, size: int, rng: np.random.Generator) -> FrozenSet[int]:
    """Edge-connected triangle region grown from ``seed`` in random frontier order."""
    region = {seed}
    frontier = [seed]
    while frontier and len(region) < size:
        t = frontier.pop(int(rng.integers(len(frontier))))
        a, b, c = host.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            for other in host.edge_to_triangles[(min(u, v), max(u, v))]:
                if other not in region and len(region) < size:
                    region.add(other)
                    frontier.append(other)
    return frozenset(region)


def random_family(host: SimplicialComplex, n_sets: int, rng: np.random.Generator) -> List[SubComplex]:
    """``n_sets`` nonempty subcomplexes cycling through grown regions, scattered picks and points.

    Points are single vertices of the host's triangles.
    """
    if n_sets < 1:
        raise ShapeNerveError("n_sets must be at least 1", INVALID_ARGUMENT)
    n_tri = len(host.triangles)
    if n_tri == 0:
        raise ShapeNerveError("the host complex has no triangles", INVALID_ARGUMENT)
    cap = max(1, min(n_tri, 12))
    family = []
    for i in range(n_sets):
        if i % 3 == 2:
            corner = host.triangles[int(rng.integers(n_tri))][int(rng.integers(3))]
            family.append(SubComplex.point(host, corner))
            continue
        size = int(rng.integers(1, cap + 1))
        if i % 3 == 0:
            ids = _grow_region(host, int(rng.integers(n_tri)), size, rng)
        else:
            ids = frozenset(int(t) for t in rng.choice(n_tri, size=size, replace=False))
        family.append(SubComplex(host, ids))
    return family
