"""Line-oriented N-Triples reader and canonical writer."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .graph import Graph
from .terms import IRI, BNode, Literal, StructuralError, Triple

_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}

_IRIREF = r"<((?:[^\x00-\x20<>\"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>"
_BNODE = r"_:([A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)"
_STRING = r'"((?:[^"\\\n\r]|\\[tbnrf"\'\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)"'
_LANGTAG = r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)"

_LINE = re.compile(
    rf"""^[ \t]*
    (?:{_IRIREF}|{_BNODE})[ \t]*
    {_IRIREF}[ \t]*
    (?:{_IRIREF}|{_BNODE}|{_STRING}(?:\^\^{_IRIREF}|{_LANGTAG})?)[ \t]*
    \.[ \t]*(?:\#.*)?$""",
    re.VERBOSE,
)
_UESCAPE = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")
_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")


class ParseError(ValueError):
    def __init__(self, reason: str, line: Optional[int] = None, column: Optional[int] = None):
        self.reason = reason
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + reason)


@dataclass(frozen=True)
class LineError:
    line: int
    reason: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.reason}"


def _unescape_iri(text: str) -> str:
    return _UESCAPE.sub(lambda m: chr(int(m.group(1) or m.group(2), 16)), text)


def unescape_string(text: str) -> str:
    def repl(m):
        if m.group(3) is not None:
            return _ECHAR[m.group(3)]
        return chr(int(m.group(1) or m.group(2), 16))

    return _ESCAPE.sub(repl, text)


def parse_line(line: str) -> Optional[Triple]:
    """Parse one N-Triples line; None for blank/comment lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    m = _LINE.match(line)
    if not m:
        raise ParseError(_diagnose(stripped))
    (s_iri, s_bn, p_iri, o_iri, o_bn, o_str, o_dt, o_lang) = m.groups()
    try:
        subject = IRI(_unescape_iri(s_iri)) if s_iri is not None else BNode(s_bn)
        predicate = IRI(_unescape_iri(p_iri))
        if o_iri is not None:
            obj = IRI(_unescape_iri(o_iri))
        elif o_bn is not None:
            obj = BNode(o_bn)
        else:
            dt = _unescape_iri(o_dt) if o_dt is not None else None
            obj = Literal(unescape_string(o_str), dt, o_lang)
    except StructuralError as exc:
        raise ParseError(str(exc)) from None
    return Triple(subject, predicate, obj)


def _diagnose(line: str) -> str:
    if not line.rstrip().endswith("."):
        return "statement does not end with '.'"
    if line.startswith('"'):
        return "literal in subject position"
    if line.startswith("@") or re.match(r"^[A-Za-z_][\w-]*:", line):
        return "prefixed names are not valid N-Triples"
    return "malformed statement"


def parse_ntriples(text: str, *, strict: bool = True, graph: Optional[Graph] = None) -> Graph:
    """Parse N-Triples text into a graph.

    In strict mode the first malformed line raises :class:`ParseError`.
    Lenient mode skips bad lines and records them in ``graph.ingest.errors``.
    """
    g = graph if graph is not None else Graph()
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        try:
            triple = parse_line(line)
        except ParseError as exc:
            if strict:
                raise ParseError(exc.reason, lineno) from None
            g.ingest.errors.append(LineError(lineno, exc.reason))
            continue
        if triple is None:
            continue
        g.ingest.statements += 1
        if not g.insert(triple):
            g.ingest.duplicates += 1
    return g


def serialize_ntriples(graph: Graph) -> str:
    """Canonical N-Triples: one triple per line, sorted, LF-terminated."""
    lines = [t.n3() for t in sorted(graph, key=Triple.sort_key)]
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
