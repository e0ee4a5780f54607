"""Constraint checks over a (saturated) graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..ontology import vocab as V
from ..rdf import Graph, Literal, Triple

DISJOINT = "DisjointViolation"
FUNCTIONAL = "FunctionalKeyViolation"
RANGE = "RangeViolation"
CARDINALITY = "CardinalityViolation"


@dataclass(frozen=True)
class Inconsistency:
    kind: str
    offending: tuple[Triple, ...]
    message: str

    def __post_init__(self):
        if not self.offending:
            raise ValueError("an inconsistency needs at least one offending triple")

    def key(self):
        return (self.kind, tuple(t.sort_key() for t in self.offending))


@dataclass
class Constraints:
    """Declarations the checker enforces.

    ``disjoint``: pairs of classes with no common instance.
    ``functional``: properties with at most one value per subject.
    ``allowed``: property -> closed set of admissible objects.
    ``required``: class -> properties each instance must carry.
    ``min_value``: datatype property -> minimum integer value.
    """

    disjoint: set = field(default_factory=set)
    functional: set = field(default_factory=set)
    allowed: dict = field(default_factory=dict)
    required: dict = field(default_factory=dict)
    min_value: dict = field(default_factory=dict)

    @classmethod
    def from_graph(cls, graph: Graph) -> "Constraints":
        c = cls()
        for t in graph.iter_match(p=V.disjointWith):
            c.disjoint.add(tuple(sorted((t.subject, t.object), key=str)))
        c.functional = set(graph.subjects(V.type_, V.FunctionalProperty))
        for t in graph.iter_match(p=V.allowedValue):
            c.allowed.setdefault(t.subject, set()).add(t.object)
        for t in graph.iter_match(p=V.requiresProperty):
            c.required.setdefault(t.subject, set()).add(t.object)
        for t in graph.iter_match(p=V.minValue):
            if isinstance(t.object, Literal):
                c.min_value[t.subject] = int(t.object.lexical)
        return c

    def is_empty(self) -> bool:
        return not (self.disjoint or self.functional or self.allowed or self.required or self.min_value)


def check_consistency(graph: Graph, constraints: Optional[Constraints] = None) -> list[Inconsistency]:
    """Report every violation of ``constraints`` (default: those declared in the graph).

    The graph should be saturated so that inherited types are visible.
    """
    c = constraints if constraints is not None else Constraints.from_graph(graph)
    n = graph.compact
    found: list[Inconsistency] = []

    for a, b in sorted(c.disjoint, key=lambda pair: (str(pair[0]), str(pair[1]))):
        both = graph.subjects(V.type_, a) & graph.subjects(V.type_, b)
        for x in sorted(both, key=str):
            found.append(
                Inconsistency(
                    DISJOINT,
                    (Triple(x, V.type_, a), Triple(x, V.type_, b)),
                    f"{n(x)} is typed by disjoint classes {n(a)} and {n(b)}",
                )
            )

    for prop in sorted(c.functional, key=str):
        by_subject: dict = {}
        for t in graph.iter_match(p=prop):
            by_subject.setdefault(t.subject, []).append(t)
        for subject in sorted(by_subject, key=str):
            ts = sorted(by_subject[subject], key=Triple.sort_key)
            if len(ts) > 1:
                values = ", ".join(n(t.object) for t in ts)
                found.append(Inconsistency(FUNCTIONAL, tuple(ts), f"{n(subject)} has {len(ts)} values for {n(prop)}: {values}"))

    for prop in sorted(c.allowed, key=str):
        allowed = c.allowed[prop]
        for t in graph.match(p=prop):
            if t.object not in allowed:
                found.append(Inconsistency(RANGE, (t,), f"{n(t.object)} is not an allowed value of {n(prop)}"))

    found.extend(_cardinality(graph, c))
    return sorted(found, key=Inconsistency.key)


def _cardinality(graph: Graph, c: Constraints) -> list[Inconsistency]:
    n = graph.compact
    found = []
    for cls in sorted(c.required, key=str):
        for x in sorted(graph.subjects(V.type_, cls), key=str):
            type_triple = Triple(x, V.type_, cls)
            for prop in sorted(c.required[cls], key=str):
                values = graph.match(s=x, p=prop)
                if not values:
                    found.append(Inconsistency(CARDINALITY, (type_triple,), f"{n(x)} has no {n(prop)}"))
    for prop in sorted(c.min_value, key=str):
        minimum = c.min_value[prop]
        for t in graph.match(p=prop):
            o = t.object
            try:
                ok = isinstance(o, Literal) and int(o.lexical) >= minimum
            except ValueError:
                ok = False
            if not ok:
                found.append(Inconsistency(CARDINALITY, (t,), f"{n(t.subject)} {n(prop)} is {n(o)}, minimum {minimum}"))
    return found


def new_violations(before: list[Inconsistency], after: list[Inconsistency]) -> list[Inconsistency]:
    seen = {i.key() for i in before}
    return [i for i in after if i.key() not in seen]


__all__ = [
    "CARDINALITY",
    "DISJOINT",
    "FUNCTIONAL",
    "RANGE",
    "Constraints",
    "Inconsistency",
    "check_consistency",
    "new_violations",
]
