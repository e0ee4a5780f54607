"""Entity linking against the KG and normalization to external identifiers."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from ..ontology import vocab as V
from ..ontology.gazetteer import Gazetteer, labels
from ..rdf import IRI, Graph, Literal
from .ner import ContractError, Mention
from .text import TOKEN

THETA_LINK = 0.5

# External namespaces used for normalization, by category.
NORMALIZATION_NAMESPACES = {
    "Gene": ("http://identifiers.org/ncbigene/",),
    "Disease": ("http://purl.obolibrary.org/obo/DOID_",),
}


@dataclass(frozen=True)
class LinkedEntity:
    mention: Mention
    iri: Optional[IRI]
    normalized_id: Optional[IRI]
    category: str
    link_score: float

    def __post_init__(self):
        if self.iri is None and self.normalized_id is not None:
            raise ContractError("an unlinked entity cannot carry a normalized id")
        if not 0.0 <= self.link_score <= 1.0:
            raise ContractError(f"link score {self.link_score} outside [0, 1]")


def words(text: str) -> set[str]:
    return {t.casefold() for t in TOKEN.findall(text) if t[0].isalnum() or t[0] == "_"}


def neighbor_words(graph: Graph, iri: IRI) -> set[str]:
    """Label words of every node adjacent to ``iri`` (either direction)."""
    out: set[str] = set()
    adjacent = {t.object for t in graph.iter_match(s=iri)} | {t.subject for t in graph.iter_match(o=iri)}
    for node in adjacent:
        if isinstance(node, IRI):
            for label in labels(graph, node):
                out |= words(label)
        elif isinstance(node, Literal):
            out |= words(node.lexical)
    return out


def context_overlap(graph: Graph, iri: IRI, context: set[str]) -> float:
    return (1 + len(context & neighbor_words(graph, iri))) / (1 + len(context))


def link(
    mentions: Sequence[Mention],
    gz: Gazetteer,
    sentence_context: dict,
    graph: Graph,
    theta: float = THETA_LINK,
) -> list[LinkedEntity]:
    """Resolve each type-resolved mention to one IRI.

    ``sentence_context`` maps ``(doc_id, sentence_index)`` to the sentence
    text. A single candidate IRI links with score equal to its prior; several
    are scored ``prior * context_overlap`` with the mention's own words left
    out of the context. Scores below ``theta`` leave the entity unlinked.
    """
    out = []
    for m in mentions:
        cat = m.category
        entries = [e for e in gz.lookup(_key(m.surface)) if e.category == cat]
        priors: dict[IRI, float] = {}
        for e in entries:
            priors[e.iri] = max(priors.get(e.iri, 0.0), e.prior)
        if not priors:
            out.append(LinkedEntity(m, None, None, cat, 0.0))
            continue
        if len(priors) == 1:
            ((iri, score),) = priors.items()
        else:
            text = sentence_context.get((m.doc_id, m.sentence_index), "")
            ctx = words(text) - words(m.surface)
            scored = sorted(((p * context_overlap(graph, i, ctx), i) for i, p in priors.items()), key=lambda x: (-x[0], x[1].value))
            score, iri = scored[0]
        if score < theta:
            out.append(LinkedEntity(m, None, None, cat, score))
        else:
            out.append(LinkedEntity(m, iri, None, cat, score))
    return out


def _key(surface: str) -> str:
    return " ".join(surface.split())


def normalize(linked: Sequence[LinkedEntity], graph: Graph) -> tuple[list[LinkedEntity], list[str]]:
    """Attach Entrez (genes) or DOID (diseases) identifiers from external refs.

    Returns the updated entities and a report of missing mappings.
    """
    out, report = [], []
    for le in linked:
        if le.iri is None:
            out.append(le)
            continue
        namespaces = NORMALIZATION_NAMESPACES.get(le.category)
        if namespaces is None:
            out.append(le)
            continue
        refs = sorted(
            (o for o in graph.objects(le.iri, V.externalRef) if isinstance(o, IRI) and o.value.startswith(namespaces)),
            key=lambda o: o.value,
        )
        if refs:
            out.append(replace(le, normalized_id=refs[0]))
        else:
            report.append(f"missing mapping: {graph.compact(le.iri)} ({le.category})")
            out.append(le)
    return out, report
