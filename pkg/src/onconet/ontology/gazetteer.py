"""Surface-form lexicon built from an ONO graph plus an optional alias file."""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from ..rdf import IRI, Graph, Literal, local_name
from . import vocab as V

log = logging.getLogger(__name__)

CATEGORIES = ("Gene", "Disease", "BiomarkerType", "EvidenceSource")
# Categories matched case-sensitively; everything else is case-folded.
CASE_SENSITIVE = frozenset({"Gene"})


@dataclass(frozen=True)
class Entry:
    surface: str
    iri: IRI
    category: str
    prior: float


def subclasses(graph: Graph, cls: IRI) -> set[IRI]:
    """``cls`` and every class reachable below it via asserted subClassOf."""
    seen = {cls}
    stack = [cls]
    while stack:
        c = stack.pop()
        for sub in graph.subjects(V.subClassOf, c):
            if sub not in seen:
                seen.add(sub)
                stack.append(sub)
    return seen


def instances_of(graph: Graph, cls: IRI) -> set:
    out = set()
    for c in subclasses(graph, cls):
        out |= graph.subjects(V.type_, c)
    return out


def is_class(graph: Graph, term) -> bool:
    """Whether ``term`` is used as a class in ``graph``."""
    return bool(
        graph.subjects(V.type_, term)
        or graph.objects(term, V.subClassOf)
        or graph.subjects(V.subClassOf, term)
        or V.Class in graph.objects(term, V.type_)
    )


def labels(graph: Graph, node: IRI) -> list[str]:
    out = [local_name(node)]
    for p in (V.label, V.altLabel):
        out += [o.lexical for o in graph.objects(node, p) if isinstance(o, Literal)]
    return out


class Gazetteer:
    """Map surface forms to candidate (IRI, category, prior) entries.

    Lookups are keyed on the case-folded surface; Gene entries additionally
    require an exact-case match.
    """

    def __init__(self, entries: Iterable[Entry] = ()):
        self._by_key: dict[str, list[Entry]] = defaultdict(list)
        for e in entries:
            self.add(e)

    def add(self, entry: Entry) -> None:
        if entry.category not in CATEGORIES:
            raise ValueError(f"unknown category {entry.category!r}")
        bucket = self._by_key[entry.surface.casefold()]
        for i, old in enumerate(bucket):
            if old.iri == entry.iri and old.category == entry.category and old.surface == entry.surface:
                bucket[i] = entry
                return
        bucket.append(entry)

    def __len__(self) -> int:
        return len(self._by_key)

    def __contains__(self, surface: str) -> bool:
        return bool(self.lookup(surface))

    def surfaces(self) -> list[str]:
        return sorted({e.surface for bucket in self._by_key.values() for e in bucket})

    def lookup(self, surface: str) -> list[Entry]:
        """Entries whose surface matches, honouring per-category case rules."""
        out = []
        for e in self._by_key.get(surface.casefold(), ()):
            if e.category in CASE_SENSITIVE and e.surface != surface:
                continue
            out.append(e)
        return sorted(out, key=lambda e: (CATEGORIES.index(e.category), e.iri.value))

    def iris_for(self, surface: str) -> set[IRI]:
        return {e.iri for e in self.lookup(surface)}

    def normalize_priors(self) -> None:
        """Default priors to 1/|IRIs| per surface and cap each surface's total at 1."""
        for key, bucket in self._by_key.items():
            unset = [e for e in bucket if e.prior < 0]
            if unset:
                iris = {e.iri for e in bucket}
                share = 1.0 / len(iris)
                bucket[:] = [Entry(e.surface, e.iri, e.category, share) if e.prior < 0 else e for e in bucket]
            total = _total_prior(bucket)
            if total > 1.0 + 1e-9:
                log.warning("priors for %r sum to %.3f; rescaling", key, total)
                bucket[:] = [Entry(e.surface, e.iri, e.category, e.prior / total) for e in bucket]

    def max_key_tokens(self, tokenize) -> int:
        return max((len(tokenize(k)) for k in self._by_key), default=0)

    def keys(self) -> list[str]:
        return list(self._by_key)


def _total_prior(bucket: list[Entry]) -> float:
    best: dict[IRI, float] = {}
    for e in bucket:
        best[e.iri] = max(best.get(e.iri, 0.0), e.prior)
    return sum(best.values())


def load_aliases(path, graph: Optional[Graph] = None) -> list[Entry]:
    """Read ``surface<TAB>iri<TAB>category<TAB>prior`` rows; IRIs may be prefixed names."""
    entries = []
    g = graph if graph is not None else Graph()
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 tab-separated columns")
            surface, iri, category, prior = row
            if iri.startswith("<") and iri.endswith(">"):
                resolved = IRI(iri[1:-1])
            elif "://" in iri:
                resolved = IRI(iri)
            else:
                resolved = g.expand(iri)
            p = float(prior)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{path}:{lineno}: prior must be in [0, 1]")
            entries.append(Entry(surface, resolved, category, p))
    return entries


def gazetteer(graph: Graph, alias_path=None) -> Gazetteer:
    """Build the lexicon for ``graph``.

    Surfaces: biomarker symbols (Gene); cancer codes, labels and alternative
    labels plus the Disease/Cancer class labels (Disease); biomarker type
    names (BiomarkerType); evidence source names (EvidenceSource).
    Priors default to 1/|candidate IRIs| per surface form.
    """
    unset = -1.0
    gz = Gazetteer()
    for gene in sorted(instances_of(graph, V.Biomarker), key=str):
        if isinstance(gene, IRI):
            gz.add(Entry(local_name(gene), gene, "Gene", unset))
    disease_nodes = instances_of(graph, V.Cancer) | subclasses(graph, V.Disease)
    for node in sorted(disease_nodes, key=str):
        if isinstance(node, IRI):
            for s in labels(graph, node):
                gz.add(Entry(s, node, "Disease", unset))
    for t in sorted(subclasses(graph, V.BiomarkerType) - {V.BiomarkerType}, key=str):
        for s in labels(graph, t):
            gz.add(Entry(s, t, "BiomarkerType", unset))
    for src in sorted(instances_of(graph, V.EvidenceSource), key=str):
        if isinstance(src, IRI):
            for s in labels(graph, src):
                gz.add(Entry(s, src, "EvidenceSource", unset))
    if alias_path is not None:
        for e in load_aliases(alias_path, graph):
            gz.add(e)
    gz.normalize_priors()
    return gz
