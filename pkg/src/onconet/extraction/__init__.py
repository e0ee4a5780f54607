"""Text to triples: segmentation, recognition, linking, relations, scoring."""

from .external import HttpExtractor, ProtocolError, SubprocessExtractor, make_extractor, parse_wire_response
from .linking import THETA_LINK, LinkedEntity, context_overlap, link, normalize
from .ner import TAGS, ContractError, Mention, recognize, resolve_types, sentence_tags
from .pipeline import DocumentResult, ExtractionReport, process_document, run
from .relations import (
    CLASS_PLACEHOLDER,
    PLACEHOLDERS,
    RELATIONS,
    EmitReport,
    OverlapError,
    RelationCandidate,
    anonymize,
    emit_triples,
    extract_relations,
)
from .scoring import DocumentMismatch, GoldSpan, Score, evaluate_exact_match, read_gold
from .text import Document, Sentence, read_corpus, segment, tokenize

WORKED_EXAMPLE = (
    "TP53 is responsible for a disease called Breast Cancer. "
    "TP53 has POTSF functionality, which is mentioned in numerous PubMed articles."
)

__all__ = [
    "CLASS_PLACEHOLDER",
    "ContractError",
    "Document",
    "DocumentMismatch",
    "DocumentResult",
    "EmitReport",
    "ExtractionReport",
    "GoldSpan",
    "HttpExtractor",
    "LinkedEntity",
    "Mention",
    "OverlapError",
    "PLACEHOLDERS",
    "ProtocolError",
    "RELATIONS",
    "RelationCandidate",
    "Score",
    "Sentence",
    "SubprocessExtractor",
    "TAGS",
    "THETA_LINK",
    "WORKED_EXAMPLE",
    "anonymize",
    "context_overlap",
    "emit_triples",
    "evaluate_exact_match",
    "extract_relations",
    "link",
    "make_extractor",
    "normalize",
    "parse_wire_response",
    "process_document",
    "read_corpus",
    "read_gold",
    "recognize",
    "resolve_types",
    "run",
    "segment",
    "sentence_tags",
    "tokenize",
]
