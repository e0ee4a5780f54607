"""Corpus-level orchestration of recognition, linking, relation extraction and emission."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..ontology.gazetteer import Gazetteer, gazetteer
from ..rdf import Graph
from .external import ProtocolError, build_request, parse_wire_response
from .linking import THETA_LINK, LinkedEntity, link, normalize
from .ner import Mention, recognize, resolve_types
from .relations import EmitReport, RelationCandidate, emit_triples, extract_relations
from .text import Document, Sentence, segment

log = logging.getLogger(__name__)


@dataclass
class DocumentResult:
    doc_id: str
    sentences: list[Sentence]
    mentions: list[Mention]
    entities: list[LinkedEntity]
    candidates: list[RelationCandidate]
    extractor: str
    missing_mappings: list[str] = field(default_factory=list)
    protocol_errors: list[str] = field(default_factory=list)

    @property
    def unlinked(self) -> list[LinkedEntity]:
        return [e for e in self.entities if e.iri is None]


@dataclass
class ExtractionReport:
    documents: list[DocumentResult] = field(default_factory=list)
    emit: EmitReport = field(default_factory=EmitReport)

    @property
    def inserted(self) -> int:
        return self.emit.inserted

    def summary(self) -> dict:
        return {
            "documents": len(self.documents),
            "mentions": sum(len(d.mentions) for d in self.documents),
            "relations": sum(len(d.candidates) for d in self.documents),
            "inserted": self.emit.inserted,
            "duplicates": self.emit.duplicates,
            "skipped": len(self.emit.skipped),
            "unlinked": sum(len(d.unlinked) for d in self.documents),
            "missing_mappings": sum(len(d.missing_mappings) for d in self.documents),
            "protocol_errors": sum(len(d.protocol_errors) for d in self.documents),
        }


def _builtin(sentences, gz) -> list[Mention]:
    return recognize(sentences, gz)


def _external_relations(wire, entities, sentences, graph) -> list[RelationCandidate]:
    by_span = {e.mention.span: e for e in entities if e.iri is not None}
    anon_text = {s.index: s for s in sentences}
    out = []
    from .relations import anonymize

    for r in wire:
        subj, obj = by_span.get(r.subj_span), by_span.get(r.obj_span)
        if subj is None or obj is None:
            raise ProtocolError(f"relation {r.relation} refers to a span with no linked mention")
        first, second = sorted((subj, obj), key=lambda e: e.mention.span)
        text = anonymize(anon_text[r.sentence_index], first, second, graph)
        out.append(RelationCandidate(subj.mention.doc_id, r.sentence_index, subj, obj, r.relation, r.score, text, "external"))
    return out


def process_document(
    doc: Document,
    graph: Graph,
    gz: Gazetteer,
    *,
    theta: float = THETA_LINK,
    extractor=None,
) -> DocumentResult:
    """Run one document through the pipeline without touching ``graph``."""
    sentences = segment(doc)
    context = {(s.doc_id, s.index): s.text for s in sentences}
    errors: list[str] = []
    wire_relations = None
    used = "builtin"
    mentions = None
    if extractor is not None:
        try:
            mentions, wire_relations = parse_wire_response(extractor.request(build_request(doc.id, sentences)), doc.id, sentences)
            used = extractor.name
        except ProtocolError as exc:
            log.warning("%s: external extractor failed (%s); using the built-in extractor", doc.id, exc)
            errors.append(str(exc))
            mentions = None
    if mentions is None:
        mentions = _builtin(sentences, gz)
    resolved = [resolve_types(m) for m in mentions]
    entities = link(resolved, gz, context, graph, theta)
    entities, missing = normalize(entities, graph)

    candidates: list[RelationCandidate] = []
    if wire_relations is not None:
        try:
            candidates = _external_relations(wire_relations, entities, sentences, graph)
        except (ProtocolError, ValueError) as exc:
            errors.append(str(exc))
            wire_relations = None
    if wire_relations is None:
        for s in sentences:
            ents = [e for e in entities if e.mention.sentence_index == s.index]
            candidates += extract_relations(s, ents, graph)
    return DocumentResult(doc.id, sentences, resolved, entities, candidates, used, missing, errors)


def run(
    documents: Iterable[Document],
    graph: Graph,
    gz: Optional[Gazetteer] = None,
    *,
    theta: float = THETA_LINK,
    extractor=None,
    alias_path=None,
    emit: bool = True,
) -> ExtractionReport:
    """Extract from every document and insert the resulting triples into ``graph``.

    Documents are handled in id order, so the outcome (including which
    document's provenance wins for a repeated triple) does not depend on the
    order they are supplied in.
    """
    gz = gz if gz is not None else gazetteer(graph, alias_path)
    report = ExtractionReport()
    docs = sorted(documents, key=lambda d: d.id)
    ids = [d.id for d in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("document ids must be unique")
    for doc in docs:
        result = process_document(doc, graph, gz, theta=theta, extractor=extractor)
        report.documents.append(result)
    if emit:
        for result in report.documents:
            emit_triples(result.candidates, graph, report=report.emit)
    return report
