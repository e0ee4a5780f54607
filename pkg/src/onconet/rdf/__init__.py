"""RDF data model, indexed graph, and N-Triples / Turtle-subset I/O."""

from .graph import EXTERNAL_PREFIXES, Graph, IngestStats, Provenance, local_name, utcnow
from .ntriples import LineError, ParseError, parse_ntriples, serialize_ntriples
from .terms import (
    IRI,
    ONO,
    ONO_NS,
    OWL_NS,
    RDF_NS,
    RDF_TYPE,
    RDFS_NS,
    SKOS_NS,
    BNode,
    Literal,
    Namespace,
    StructuralError,
    Term,
    Triple,
    literal,
)
from .turtle import UnsupportedConstruct, parse_turtle_subset


def load_file(path, *, strict: bool = True) -> Graph:
    """Parse a ``.ttl`` or ``.nt`` file by extension."""
    from pathlib import Path

    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".ttl":
        return parse_turtle_subset(text)
    return parse_ntriples(text, strict=strict)


__all__ = [
    "BNode",
    "EXTERNAL_PREFIXES",
    "Graph",
    "IRI",
    "IngestStats",
    "LineError",
    "Literal",
    "Namespace",
    "ONO",
    "ONO_NS",
    "OWL_NS",
    "ParseError",
    "Provenance",
    "RDFS_NS",
    "RDF_NS",
    "RDF_TYPE",
    "SKOS_NS",
    "StructuralError",
    "Term",
    "Triple",
    "UnsupportedConstruct",
    "literal",
    "load_file",
    "local_name",
    "parse_ntriples",
    "parse_turtle_subset",
    "serialize_ntriples",
    "utcnow",
]
