"""RDF terms and triples.

Terms are small immutable values; every term has a canonical N-Triples text
form (``n3()``) which is also the sort key used for deterministic output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
OWL = "http://www.w3.org/2002/07/owl#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
ONO = "http://onconet.example/ono#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
RDF_LANGSTRING = RDF + "langString"

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_BAD_IRI_CHARS = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_BNODE_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-.]*$")
_LANG = re.compile(r"^[a-zA-Z]+(-[a-zA-Z0-9]+)*$")


class StructuralError(ValueError):
    """A term or triple violates the RDF data model."""


def _escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not _SCHEME.match(self.value):
            raise StructuralError(f"IRI is not absolute: {self.value!r}")
        if _BAD_IRI_CHARS.search(self.value):
            raise StructuralError(f"IRI contains forbidden characters: {self.value!r}")

    def __hash__(self) -> int:
        # str hashes are cached, so this is cheaper than the generated tuple hash
        return hash(self.value)

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.lexical, str):
            raise StructuralError("literal lexical form must be text")
        if self.language is not None:
            if not _LANG.match(self.language):
                raise StructuralError(f"bad language tag: {self.language!r}")
            if self.datatype not in (None, RDF_LANGSTRING):
                raise StructuralError("language-tagged literal must be rdf:langString")
            object.__setattr__(self, "language", self.language.lower())
            object.__setattr__(self, "datatype", RDF_LANGSTRING)
        else:
            if self.datatype is None:
                object.__setattr__(self, "datatype", XSD_STRING)
            elif self.datatype == RDF_LANGSTRING:
                raise StructuralError("rdf:langString literal needs a language tag")
            IRI(self.datatype)

    def n3(self) -> str:
        body = f'"{_escape_string(self.lexical)}"'
        if self.language:
            return f"{body}@{self.language}"
        if self.datatype == XSD_STRING:
            return body
        return f"{body}^^<{self.datatype}>"

    def to_python(self):
        """Best-effort native value for numeric and boolean literals."""
        if self.datatype == XSD_INTEGER:
            return int(self.lexical)
        if self.datatype in (XSD_DECIMAL, XSD_DOUBLE):
            return float(self.lexical)
        if self.datatype == XSD_BOOLEAN:
            return self.lexical in ("true", "1")
        return self.lexical

    def __str__(self) -> str:
        return self.lexical


@dataclass(frozen=True, slots=True)
class BNode:
    label: str

    def __post_init__(self):
        if not _BNODE_LABEL.match(self.label) or self.label.endswith("."):
            raise StructuralError(f"bad blank node label: {self.label!r}")

    def __hash__(self) -> int:
        return hash(self.label) ^ 0x5BD1E995

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self) -> str:
        return self.n3()


Term = Union[IRI, Literal, BNode]


class Triple(NamedTuple):
    subject: Union[IRI, BNode]
    predicate: IRI
    object: Term

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject.n3(), self.predicate.n3(), self.object.n3())


def check_triple(triple: Triple) -> Triple:
    """Raise StructuralError unless ``triple`` is a well-formed RDF statement."""
    s, p, o = triple
    if not isinstance(s, (IRI, BNode)):
        raise StructuralError(f"subject must be an IRI or blank node, got {s!r}")
    if not isinstance(p, IRI):
        raise StructuralError(f"predicate must be an IRI, got {p!r}")
    if not isinstance(o, (IRI, BNode, Literal)):
        raise StructuralError(f"object must be an RDF term, got {o!r}")
    return triple


def literal(value) -> Literal:
    """Typed literal for a Python scalar."""
    if isinstance(value, bool):
        return Literal("true" if value else "false", XSD_BOOLEAN)
    if isinstance(value, int):
        return Literal(str(value), XSD_INTEGER)
    if isinstance(value, float):
        return Literal(repr(value), XSD_DOUBLE)
    return Literal(str(value))


class Namespace(str):
    """``Namespace(ONO).TP53`` or ``ONO_NS["feature/TP53_BRCA"]`` build IRIs."""

    def __getattr__(self, name: str) -> IRI:
        if name.startswith("__"):
            raise AttributeError(name)
        return IRI(str(self) + name)

    def __getitem__(self, name) -> IRI:  # type: ignore[override]
        return IRI(str(self) + name)


RDF_NS = Namespace(RDF)
RDFS_NS = Namespace(RDFS)
OWL_NS = Namespace(OWL)
XSD_NS = Namespace(XSD)
SKOS_NS = Namespace(SKOS)
ONO_NS = Namespace(ONO)

RDF_TYPE = RDF_NS.type
RDFS_SUBCLASSOF = RDFS_NS.subClassOf
RDFS_SUBPROPERTYOF = RDFS_NS.subPropertyOf
RDFS_DOMAIN = RDFS_NS.domain
RDFS_RANGE = RDFS_NS.range
RDFS_LABEL = RDFS_NS.label
