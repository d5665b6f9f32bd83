"""Spatial, strong and descriptive proximity between subcomplexes.

Descriptions are feature vectors rounded onto a grid of pitch ``quantum``;
two descriptions are equal when their grid keys are equal, which keeps
description equality transitive.
"""
from __future__ import annotations

import logging
import weakref
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Tuple

from shape_nerve.errors import DEGENERATE_TRIANGLE, INVALID_ARGUMENT, GeometryError, ShapeNerveError
from shape_nerve.geometry import (
    Number,
    Triangle2,
    to_fraction,
    triangle_area,
    triangle_min_angle,
    triangle_perimeter,
)
from shape_nerve.nerve import (
    NerveComplex,
    ShapeNerveComplex,
    SimplexSet,
    SubComplex,
    check_same_host,
    sub_closure,
    sub_interior,
    wiring,
)
from shape_nerve.triangulation import SimplicialComplex

logger = logging.getLogger(__name__)

DEFAULT_QUANTUM = Fraction(1, 10**9)
DEFAULT_FEATURES = ("area",)

TRIANGLE_FEATURES: Dict[str, Callable[[Triangle2], object]] = {
    "area": triangle_area,
    "perimeter": triangle_perimeter,
    "centroid-x": lambda t: t.centroid().x,
    "centroid-y": lambda t: t.centroid().y,
    "min-angle": triangle_min_angle,
}
NERVE_FEATURES = ("triangle-count", "wiring-degree", "wiring-boundary")
# features unchanged by rotations, reflections and translations
CONGRUENCE_INVARIANT = frozenset(["area", "perimeter", "min-angle"])


class Relation(Enum):
    NEAR = "near"
    STRONGLY_NEAR = "snear"
    DESCRIPTIVELY_NEAR = "dnear"
    STRONGLY_DESCRIPTIVELY_NEAR = "dsnear"

    @classmethod
    def parse(cls, name: str) -> "Relation":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(r.value for r in cls)
            raise ShapeNerveError(f"unknown relation {name!r}; expected one of {valid}", INVALID_ARGUMENT)


@dataclass(frozen=True)
class FeatureVector:
    names: Tuple[str, ...]
    values: Tuple[object, ...]
    quantum: Fraction

    @property
    def key(self) -> Tuple[int, ...]:
        """Grid cell of each component; equal keys mean equal descriptions."""
        return tuple(round(Fraction(v) / self.quantum) for v in self.values)

    def matches(self, other: "FeatureVector") -> bool:
        return self.names == other.names and self.key == other.key


@dataclass(frozen=True)
class ProximityConfig:
    """Feature selection, description resolution and the active relations."""

    features: Tuple[str, ...] = DEFAULT_FEATURES
    quantum: Fraction = DEFAULT_QUANTUM
    relations: FrozenSet[Relation] = field(default_factory=lambda: frozenset(Relation))

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "quantum", to_fraction(self.quantum))
        object.__setattr__(self, "relations", frozenset(self.relations))
        if self.quantum <= 0:
            raise ShapeNerveError("quantum must be positive", INVALID_ARGUMENT, quantum=str(self.quantum))
        if not self.features:
            raise ShapeNerveError("at least one feature is required", INVALID_ARGUMENT)
        unknown = [f for f in self.features if f not in TRIANGLE_FEATURES]
        if unknown:
            raise ShapeNerveError(
                f"unknown triangle features: {', '.join(unknown)}",
                INVALID_ARGUMENT,
                features=unknown,
            )

    @classmethod
    def from_strings(cls, features: str, quantum: Number) -> "ProximityConfig":
        names = tuple(f.strip() for f in features.split(",") if f.strip())
        return cls(features=names, quantum=to_fraction(quantum))

    def scaled(self, complex: SimplicialComplex) -> "ProximityConfig":
        """Quantum taken relative to the squared bounding-box diagonal of ``complex``."""
        xs = [p.x for p in complex.vertices]
        ys = [p.y for p in complex.vertices]
        diag_sq = (max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2
        if diag_sq == 0:
            return self
        return replace(self, quantum=self.quantum * diag_sq)

    def require(self, relation: Relation) -> None:
        if relation not in self.relations:
            raise ShapeNerveError(f"relation {relation.value} is not active", INVALID_ARGUMENT)


# -- descriptions -------------------------------------------------------------


def describe(t: Triangle2, cfg: ProximityConfig) -> FeatureVector:
    if t.is_degenerate():
        raise GeometryError("cannot describe a degenerate triangle", DEGENERATE_TRIANGLE)
    values = tuple(TRIANGLE_FEATURES[name](t) for name in cfg.features)
    return FeatureVector(cfg.features, values, cfg.quantum)


_KEY_CACHE: "weakref.WeakKeyDictionary[SimplicialComplex, Dict[ProximityConfig, Tuple]]" = (
    weakref.WeakKeyDictionary()
)


def triangle_keys(host: SimplicialComplex, cfg: ProximityConfig) -> Tuple[Tuple[int, ...], ...]:
    """Description keys of every triangle of ``host``, memoized per host and config."""
    per_host = _KEY_CACHE.setdefault(host, {})
    keys = per_host.get(cfg)
    if keys is None:
        keys = tuple(describe(host.triangle(t), cfg).key for t in range(len(host.triangles)))
        per_host[cfg] = keys
    return keys


def describe_nerve(nerve: NerveComplex, snc: ShapeNerveComplex, cfg: ProximityConfig) -> FeatureVector:
    """Nerve-level description: triangle count, overlap degree, boundary nucleus."""
    for w in wiring(snc):
        if w.nucleus == nerve.nucleus:
            values = (len(nerve), w.degree, int(w.on_boundary))
            return FeatureVector(NERVE_FEATURES, values, Fraction(1))
    raise ShapeNerveError(f"nerve {nerve.nucleus} is not part of the shape nerve complex", INVALID_ARGUMENT)


# -- relations ----------------------------------------------------------------


def near(a: SubComplex, b: SubComplex) -> bool:
    """Closures share a simplex; a shared edge or triangle implies a shared vertex."""
    check_same_host([a, b])
    return not a.closure_vertices().isdisjoint(b.closure_vertices())


def strongly_near(a: SubComplex, b: SubComplex) -> bool:
    """Interiors intersect; for triangle sets this is a shared triangle."""
    check_same_host([a, b])
    if not a.triangle_ids.isdisjoint(b.triangle_ids):
        return True
    return bool(sub_interior(a) & sub_interior(b))


def _descriptions(host: SimplicialComplex, simplexes: SimplexSet, cfg: ProximityConfig) -> FrozenSet:
    keys = triangle_keys(host, cfg)
    return frozenset(("vertex", v) for v in simplexes.vertices) | frozenset(
        ("triangle", keys[t]) for t in simplexes.triangles
    )


def description_set(s: SubComplex, cfg: ProximityConfig) -> FrozenSet:
    """Descriptions of every triangle and closure vertex of ``s``.

    Triangles are described by their feature keys. A vertex carries no
    triangle features, so it is described by identity and matches only itself.
    """
    return _descriptions(s.host, sub_closure(s), cfg)


def _descriptive_meet(host: SimplicialComplex, a: SimplexSet, b: SimplexSet, cfg: ProximityConfig) -> SimplexSet:
    keys = triangle_keys(host, cfg)
    common = _descriptions(host, a, cfg) & _descriptions(host, b, cfg)
    triangles = frozenset(t for t in a.triangles | b.triangles if ("triangle", keys[t]) in common)
    return SimplexSet(vertices=a.vertices & b.vertices, triangles=triangles)


def descriptive_intersection(a: SubComplex, b: SubComplex, cfg: ProximityConfig) -> SimplexSet:
    """Triangles and vertices of A ∪ B whose description occurs among A's and among B's."""
    host = check_same_host([a, b])
    return _descriptive_meet(host, sub_closure(a), sub_closure(b), cfg)


def descriptively_near(a: SubComplex, b: SubComplex, cfg: ProximityConfig) -> bool:
    return bool(descriptive_intersection(a, b, cfg))


def interior_descriptive_witness(a: SubComplex, b: SubComplex, cfg: ProximityConfig) -> SimplexSet:
    """Descriptive intersection of the interiors of A and B."""
    host = check_same_host([a, b])
    return _descriptive_meet(host, sub_interior(a), sub_interior(b), cfg)


def strongly_descriptively_near(a: SubComplex, b: SubComplex, cfg: ProximityConfig) -> bool:
    return bool(interior_descriptive_witness(a, b, cfg))


def relate(relation: Relation, a: SubComplex, b: SubComplex, cfg: ProximityConfig) -> bool:
    cfg.require(relation)
    if relation is Relation.NEAR:
        return near(a, b)
    if relation is Relation.STRONGLY_NEAR:
        return strongly_near(a, b)
    if relation is Relation.DESCRIPTIVELY_NEAR:
        return descriptively_near(a, b, cfg)
    return strongly_descriptively_near(a, b, cfg)


def witness(relation: Relation, a: SubComplex, b: SubComplex, cfg: ProximityConfig) -> SimplexSet:
    """Simplexes that make the relation hold; empty when it does not."""
    check_same_host([a, b])
    if relation is Relation.NEAR:
        return sub_closure(a) & sub_closure(b)
    if relation is Relation.STRONGLY_NEAR:
        return sub_interior(a) & sub_interior(b)
    if relation is Relation.DESCRIPTIVELY_NEAR:
        return descriptive_intersection(a, b, cfg)
    return interior_descriptive_witness(a, b, cfg)


# -- shape-level relations -------------------------------------------------------


def _nerve_pairs(a: ShapeNerveComplex, b: ShapeNerveComplex):
    check_same_host(list(a.nerves) + list(b.nerves))
    for na in a.nerves:
        for nb in b.nerves:
            yield na, nb


def shapes_strongly_near(a: ShapeNerveComplex, b: ShapeNerveComplex) -> bool:
    """A common nerve or a common triangle between the two families."""
    if not a.nerves or not b.nerves:
        return False
    if set(a.nerves) & set(b.nerves):
        return True
    return any(strongly_near(na.as_subcomplex(), nb.as_subcomplex()) for na, nb in _nerve_pairs(a, b))


def shapes_descriptively_near(a: ShapeNerveComplex, b: ShapeNerveComplex, cfg: ProximityConfig) -> bool:
    return any(
        descriptively_near(na.as_subcomplex(), nb.as_subcomplex(), cfg) for na, nb in _nerve_pairs(a, b)
    )


def shapes_strongly_descriptively_near(
    a: ShapeNerveComplex, b: ShapeNerveComplex, cfg: ProximityConfig
) -> bool:
    return any(
        strongly_descriptively_near(na.as_subcomplex(), nb.as_subcomplex(), cfg)
        for na, nb in _nerve_pairs(a, b)
    )


def congruent_features(cfg: ProximityConfig) -> bool:
    return all(name in CONGRUENCE_INVARIANT for name in cfg.features)
