"""Indexed in-memory triple set with per-triple provenance."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator, Optional

from .terms import (
    IRI,
    ONO,
    OWL,
    RDF,
    RDFS,
    SKOS,
    XSD,
    BNode,
    Literal,
    Term,
    Triple,
    check_triple,
)

DEFAULT_PREFIXES = {
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "owl": OWL,
    "skos": SKOS,
    "ono": ONO,
}

# External vocabularies the seed links to. Registered read-only: they can be
# used for prefix expansion but ``Graph.bind`` refuses to rebind them.
EXTERNAL_PREFIXES = {
    "obo": "http://purl.obolibrary.org/obo/",
    "ncbigene": "http://identifiers.org/ncbigene/",
    "mesh": "http://id.nlm.nih.gov/mesh/",
    "pubmed": "http://identifiers.org/pubmed/",
}

READ_ONLY_PREFIXES = frozenset(EXTERNAL_PREFIXES)


def utcnow() -> datetime:
    """Current UTC time, pinned by SOURCE_DATE_EPOCH when set."""
    import os

    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class Provenance:
    source: str
    extractor: str
    confidence: float = 1.0
    timestamp: datetime = field(default_factory=utcnow)

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "extractor": self.extractor,
            "confidence": self.confidence,
            "timestamp": self.timestamp.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Provenance":
        return cls(
            source=data["source"],
            extractor=data["extractor"],
            confidence=float(data.get("confidence", 1.0)),
            timestamp=datetime.fromisoformat(data["timestamp"]),
        )


@dataclass
class IngestStats:
    """Counters filled in by the parsers; ``assess`` reads them for conciseness."""

    statements: int = 0
    duplicates: int = 0
    errors: list = field(default_factory=list)


class Graph:
    """A set of triples with subject/predicate/object indexes.

    Single-writer contract: any number of threads may read concurrently, but
    mutation must be serialized by the caller.
    """

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Optional[dict] = None):
        self._triples: set[Triple] = set()
        self._spo: dict = defaultdict(lambda: defaultdict(set))
        self._pos: dict = defaultdict(lambda: defaultdict(set))
        self._osp: dict = defaultdict(lambda: defaultdict(set))
        self._provenance: dict[Triple, Provenance] = {}
        self.prefixes: dict[str, str] = dict(DEFAULT_PREFIXES)
        self.prefixes.update(EXTERNAL_PREFIXES)
        if prefixes:
            for label, ns in prefixes.items():
                self.bind(label, ns)
        self.ingest = IngestStats()
        for t in triples:
            self.insert(t)

    # -- mutation -------------------------------------------------------

    def bind(self, label: str, namespace: str) -> None:
        current = self.prefixes.get(label)
        if current == namespace:
            return
        if label in READ_ONLY_PREFIXES:
            raise ValueError(f"prefix {label!r} is read-only")
        self.prefixes[label] = namespace

    def insert(self, triple: Triple, provenance: Optional[Provenance] = None) -> bool:
        triple = check_triple(Triple(*triple))
        if triple in self._triples:
            return False
        s, p, o = triple
        self._triples.add(triple)
        self._spo[s][p].add(o)
        self._pos[p][o].add(s)
        self._osp[o][s].add(p)
        if provenance is not None:
            self._provenance[triple] = provenance
        return True

    def _insert_trusted(self, triples: Iterable[Triple], provenance: Optional[Provenance] = None) -> None:
        """Bulk insert of triples already known to be well formed and absent."""
        spo, pos, osp, store = self._spo, self._pos, self._osp, self._triples
        for triple in triples:
            s, p, o = triple
            store.add(triple)
            spo[s][p].add(o)
            pos[p][o].add(s)
            osp[o][s].add(p)
            if provenance is not None:
                self._provenance[triple] = provenance

    def add(self, s, p, o, provenance: Optional[Provenance] = None) -> bool:
        return self.insert(Triple(s, p, o), provenance)

    def update(self, triples: Iterable[Triple], provenance: Optional[Provenance] = None) -> int:
        return sum(self.insert(t, provenance) for t in triples)

    def remove(self, triple: Triple) -> bool:
        triple = Triple(*triple)
        if triple not in self._triples:
            return False
        s, p, o = triple
        self._triples.discard(triple)
        for index, a, b, c in ((self._spo, s, p, o), (self._pos, p, o, s), (self._osp, o, s, p)):
            inner = index[a]
            inner[b].discard(c)
            if not inner[b]:
                del inner[b]
            if not inner:
                del index[a]
        self._provenance.pop(triple, None)
        return True

    def set_provenance(self, triple: Triple, provenance: Provenance) -> None:
        """Attach provenance to a present triple that has none yet."""
        if triple in self._triples and triple not in self._provenance:
            self._provenance[triple] = provenance

    # -- reading --------------------------------------------------------

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple) -> bool:
        return Triple(*triple) in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"<Graph with {len(self)} triples>"

    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def provenance(self, triple: Triple) -> Optional[Provenance]:
        return self._provenance.get(Triple(*triple))

    def provenance_items(self):
        return self._provenance.items()

    def _candidates(self, s, p, o) -> Iterable[Triple]:
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return ()
            if p is not None:
                objs = by_p.get(p, ())
                if o is not None:
                    return [Triple(s, p, o)] if o in objs else []
                return [Triple(s, p, x) for x in objs]
            if o is not None:
                return [Triple(s, q, o) for q in self._osp.get(o, {}).get(s, ())]
            return [Triple(s, q, x) for q, xs in by_p.items() for x in xs]
        if p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return ()
            if o is not None:
                return [Triple(x, p, o) for x in by_o.get(o, ())]
            return [Triple(x, p, y) for y, xs in by_o.items() for x in xs]
        if o is not None:
            return [Triple(x, q, o) for x, qs in self._osp.get(o, {}).items() for q in qs]
        return self._triples

    def match(self, s: Optional[Term] = None, p: Optional[IRI] = None, o: Optional[Term] = None) -> list[Triple]:
        """Triples matching every bound position, in canonical order."""
        return sorted(self._candidates(s, p, o), key=Triple.sort_key)

    def iter_match(self, s=None, p=None, o=None) -> Iterable[Triple]:
        """Unordered variant of :meth:`match` for hot paths."""
        return self._candidates(s, p, o)

    def objects(self, s, p) -> set:
        return set(self._spo.get(s, {}).get(p, ()))

    def subjects(self, p, o) -> set:
        return set(self._pos.get(p, {}).get(o, ()))

    def value(self, s, p):
        """One object of (s, p, ?) in canonical order, or None."""
        objs = self._spo.get(s, {}).get(p)
        if not objs:
            return None
        return min(objs, key=lambda t: t.n3())

    def predicates(self) -> set[IRI]:
        return set(self._pos)

    def nodes(self) -> set:
        """Every subject and object term."""
        return set(self._spo) | set(self._osp)

    def copy(self) -> "Graph":
        g = Graph()
        g.prefixes = dict(self.prefixes)
        g._insert_trusted(self._triples)
        g._provenance = dict(self._provenance)
        g.ingest = IngestStats(self.ingest.statements, self.ingest.duplicates, list(self.ingest.errors))
        return g

    # -- names ----------------------------------------------------------

    def expand(self, pname: str) -> IRI:
        """Expand ``prefix:local`` using the graph's prefix map."""
        label, sep, local = pname.partition(":")
        if not sep or label not in self.prefixes:
            raise KeyError(f"undefined prefix {label!r} in {pname!r}")
        return IRI(self.prefixes[label] + local)

    def compact(self, term: Term) -> str:
        """Shortest ``prefix:local`` form of an IRI, else its N-Triples form."""
        if isinstance(term, IRI):
            best = None
            for label, ns in self.prefixes.items():
                if term.value.startswith(ns) and len(term.value) > len(ns):
                    if best is None or len(ns) > len(best[1]):
                        best = (label, ns)
            if best:
                return f"{best[0]}:{term.value[len(best[1]):]}"
        return term.n3()


def local_name(iri: IRI) -> str:
    value = iri.value
    for sep in ("#", "/", ":"):
        if sep in value:
            value = value.rsplit(sep, 1)[1] if sep != "#" else value.split("#", 1)[1]
            break
    return value


__all__ = [
    "BNode",
    "Graph",
    "IngestStats",
    "Literal",
    "Provenance",
    "local_name",
    "utcnow",
]
