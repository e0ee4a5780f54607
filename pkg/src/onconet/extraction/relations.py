"""Anonymized-sentence relation patterns and triple emission."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..ontology import vocab as V
from ..ontology.gazetteer import is_class
from ..rdf import Graph, Provenance, Triple
from .linking import LinkedEntity
from .ner import ContractError
from .text import Sentence

RELATIONS = {"causes": V.causes, "hasType": V.hasType, "hasEvidence": V.hasEvidence, "isA": V.isA}

PLACEHOLDERS = {
    "Gene": "@GENE$",
    "Disease": "@DISEASE$",
    "BiomarkerType": "@TYPE$",
    "EvidenceSource": "@EVIDENCE$",
}
CLASS_PLACEHOLDER = "@CLASS$"


class OverlapError(ValueError):
    pass


def placeholder(entity: LinkedEntity, graph: Optional[Graph] = None) -> str:
    """``@CLASS$`` for a disease mention that names a class, else the category's placeholder."""
    if entity.category == "Disease" and graph is not None and entity.iri is not None and is_class(graph, entity.iri):
        return CLASS_PLACEHOLDER
    return PLACEHOLDERS[entity.category]


def anonymize(sentence: Sentence, first: LinkedEntity, second: LinkedEntity, graph: Optional[Graph] = None) -> str:
    """Replace the two entities' exact spans by placeholders; all other text is kept."""
    spans = []
    for ent in (first, second):
        b, e = ent.mention.span
        if b < sentence.begin or e > sentence.end:
            raise ContractError(f"entity {ent.mention.surface!r} lies outside the sentence")
        spans.append((b - sentence.begin, e - sentence.begin, placeholder(ent, graph)))
    spans.sort()
    if spans[0][1] > spans[1][0]:
        raise OverlapError("entity spans overlap")
    text = sentence.text
    for b, e, ph in reversed(spans):
        text = text[:b] + ph + text[e:]
    return text


@dataclass(frozen=True)
class RelationCandidate:
    doc_id: str
    sentence_index: int
    subject: LinkedEntity
    object: LinkedEntity
    relation: str
    score: float
    anonymized_sentence: str
    extractor: str = "builtin"

    def __post_init__(self):
        if self.subject.iri is None or self.object.iri is None:
            raise ContractError("relation endpoints must be linked")
        if self.relation not in RELATIONS:
            raise ContractError(f"unknown relation {self.relation!r}")
        if not 0.0 <= self.score <= 1.0:
            raise ContractError(f"relation score {self.score} outside [0, 1]")

    def triple(self) -> Triple:
        return Triple(self.subject.iri, RELATIONS[self.relation], self.object.iri)


# Each pattern: (relation, first placeholder, second placeholder, regex over
# the anonymized sentence, which of the pair is the triple subject, the
# placeholders that count as a competing subject between the pair).
_W = r"(?:\s+[\w'-]+,?){0,6}?"
_PATTERNS = [
    ("causes", "@GENE$", "@DISEASE$",
     re.compile(r"@GENE\$.*?\b(?:responsible\s+for|causes?|caused)\b.*?@DISEASE\$", re.I), 0, {"Gene"}),
    ("hasType", "@GENE$", "@TYPE$",
     re.compile(r"@GENE\$\s+has" + _W + r"\s+@TYPE\$\s+functionality", re.I), 0, {"Gene"}),
    ("hasType", "@GENE$", "@TYPE$",
     re.compile(r"@GENE\$\s+(?:is|are)(?:\s+(?:a|an|the))?" + _W + r"\s+@TYPE\$", re.I), 0, {"Gene"}),
    ("hasEvidence", "@GENE$", "@EVIDENCE$",
     re.compile(r"@GENE\$.*?\b(?:mentioned\s+in|evidence|indexed\s+in|reported\s+in)\b.*?@EVIDENCE\$", re.I), 0,
     {"Gene", "BiomarkerType"}),
    ("hasEvidence", "@TYPE$", "@EVIDENCE$",
     re.compile(r"@TYPE\$.*?\b(?:mentioned\s+in|evidence|indexed\s+in|reported\s+in)\b.*?@EVIDENCE\$", re.I), 0,
     {"Gene", "BiomarkerType"}),
    ("isA", "@CLASS$", "@DISEASE$",
     re.compile(r"@CLASS\$\s+called(?:\s+(?:a|an))?\s+@DISEASE\$", re.I), 1, set()),
    ("isA", "@DISEASE$", "@CLASS$",
     re.compile(r"@DISEASE\$\s+(?:is|are)(?:\s+(?:a|an))?\s+@CLASS\$", re.I), 0, set()),
]


def extract_relations(
    sentence: Sentence, entities: Sequence[LinkedEntity], graph: Optional[Graph] = None
) -> list[RelationCandidate]:
    """Apply the pattern classifier to every ordered pair of linked entities.

    Pairs are taken in textual order. A mention of a competing subject
    category between the two blocks the pair (nearest-subject rule).
    """
    ents = sorted((e for e in entities if e.iri is not None), key=lambda e: e.mention.span)
    out = []
    for a in range(len(ents)):
        for b in range(a + 1, len(ents)):
            first, second = ents[a], ents[b]
            if first.mention.span[1] > second.mention.span[0]:
                continue
            pair = (placeholder(first, graph), placeholder(second, graph))
            between = ents[a + 1 : b]
            text = None
            for rel, ph1, ph2, rx, subj_idx, blockers in _PATTERNS:
                if pair != (ph1, ph2):
                    continue
                if any(e.category in blockers and placeholder(e, graph) != CLASS_PLACEHOLDER for e in between):
                    continue
                if text is None:
                    text = anonymize(sentence, first, second, graph)
                if not rx.search(text):
                    continue
                subj, obj = (first, second) if subj_idx == 0 else (second, first)
                score = min(subj.link_score, obj.link_score)
                out.append(RelationCandidate(sentence.doc_id, sentence.index, subj, obj, rel, score, text))
                break
    return out


@dataclass
class EmitReport:
    inserted: int = 0
    duplicates: int = 0
    skipped: list = field(default_factory=list)
    triples: list = field(default_factory=list)  # newly inserted, in emission order


def emit_triples(
    candidates: Sequence[RelationCandidate], graph: Graph, extractor: str = "lexicon", report: Optional[EmitReport] = None
) -> EmitReport:
    """Insert one triple per candidate with document provenance."""
    report = report or EmitReport()
    nodes = None
    for c in candidates:
        t = c.triple()
        if nodes is None:
            nodes = graph.nodes()
        missing = [x for x in (t.subject, t.object) if x not in nodes]
        if missing:
            report.skipped.append(f"{c.doc_id}: {graph.compact(missing[0])} is not in the graph")
            continue
        prov = Provenance(source=c.doc_id, extractor=c.extractor if c.extractor != "builtin" else extractor, confidence=c.score)
        if graph.insert(t, prov):
            report.inserted += 1
            report.triples.append(t)
        else:
            report.duplicates += 1
    return report


__all__ = [
    "CLASS_PLACEHOLDER",
    "EmitReport",
    "OverlapError",
    "PLACEHOLDERS",
    "RELATIONS",
    "RelationCandidate",
    "anonymize",
    "emit_triples",
    "extract_relations",
    "placeholder",
]
