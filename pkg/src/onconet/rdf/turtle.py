"""Reader for the Turtle subset used by seed files.

Supported: ``@prefix``/``PREFIX`` directives, IRIs, prefixed names, ``a``,
predicate lists (``;``), object lists (``,``), blank node labels, string
literals with ``^^datatype`` or ``@lang``, bare integers/decimals/booleans.
Collections, blank node property lists and ``@base`` raise
:class:`UnsupportedConstruct`.
"""

from __future__ import annotations

import re
from typing import Optional

from .graph import Graph
from .ntriples import ParseError, unescape_string, _unescape_iri
from .terms import (
    IRI,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BNode,
    Literal,
    StructuralError,
    Triple,
)


class UnsupportedConstruct(ParseError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<long>\"\"\"|''')
  | (?P<string>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
  | (?P<directive>@prefix\b|@base\b|PREFIX\b|BASE\b)
  | (?P<lang>@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)
  | (?P<dtmark>\^\^)
  | (?P<bnode>_:[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)
  | (?P<number>[+-]?(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+))
  | (?P<pname>(?:[A-Za-z][\w\-.]*)?:(?:[\w\-/%]+(?:[\w\-./%]*[\w\-/%])?)?)
  | (?P<keyword>a\b|true\b|false\b)
  | (?P<punct>[.;,\[\]()])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "long":
            raise UnsupportedConstruct("unsupported construct: long string literal", line, col)
        if kind != "ws":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, graph: Graph):
        self.tokens = _tokenize(text)
        self.i = 0
        self.graph = graph
        self.prefixes: dict[str, str] = {}

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, what: str) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(
                f"unexpected end of input, expected {what}",
                last.line if last else 1,
                last.column if last else 1,
            )
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.next(repr(text))
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.column)

    def run(self) -> None:
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind == "directive":
                self.directive()
            else:
                self.statement()

    def directive(self) -> None:
        tok = self.next("directive")
        word = tok.text.lstrip("@").lower()
        if word == "base":
            raise UnsupportedConstruct("unsupported construct: base directive", tok.line, tok.column)
        label_tok = self.next("prefix label")
        if label_tok.kind != "pname" or not label_tok.text.endswith(":"):
            raise ParseError(f"bad prefix label {label_tok.text!r}", label_tok.line, label_tok.column)
        iri_tok = self.next("namespace IRI")
        if iri_tok.kind != "iri":
            raise ParseError("prefix namespace must be an IRI", iri_tok.line, iri_tok.column)
        label = label_tok.text[:-1]
        namespace = _unescape_iri(iri_tok.text[1:-1])
        self.prefixes[label] = namespace
        if tok.text.startswith("@"):
            self.expect(".")
        try:
            self.graph.bind(label, namespace)
        except ValueError:
            pass

    def statement(self) -> None:
        subject = self.term("subject")
        if isinstance(subject, Literal):
            tok = self.tokens[self.i - 1]
            raise ParseError("literal in subject position", tok.line, tok.column)
        self.predicate_object_list(subject)
        self.expect(".")

    def predicate_object_list(self, subject) -> None:
        while True:
            ptok = self.peek()
            predicate = self.term("predicate")
            if not isinstance(predicate, IRI):
                raise ParseError("predicate must be an IRI", ptok.line, ptok.column)
            while True:
                obj = self.term("object")
                self.emit(Triple(subject, predicate, obj), ptok)
                tok = self.peek()
                if tok is not None and tok.text == ",":
                    self.i += 1
                    continue
                break
            tok = self.peek()
            if tok is not None and tok.text == ";":
                while tok is not None and tok.text == ";":
                    self.i += 1
                    tok = self.peek()
                if tok is None or tok.text == ".":
                    return
                continue
            return

    def emit(self, triple: Triple, tok: _Token) -> None:
        g = self.graph
        g.ingest.statements += 1
        try:
            if not g.insert(triple):
                g.ingest.duplicates += 1
        except StructuralError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from None

    def term(self, role: str):
        tok = self.next(role)
        kind = tok.kind
        try:
            if kind == "iri":
                return IRI(_unescape_iri(tok.text[1:-1]))
            if kind == "pname":
                label, _, local = tok.text.partition(":")
                if label not in self.prefixes:
                    raise ParseError(f"undefined prefix {label!r}", tok.line, tok.column)
                return IRI(self.prefixes[label] + local)
            if kind == "keyword" and tok.text == "a":
                if role != "predicate":
                    raise ParseError("'a' is only valid as a predicate", tok.line, tok.column)
                return RDF_TYPE
            if kind == "bnode":
                return BNode(tok.text[2:])
            if kind == "string":
                lexical = unescape_string(tok.text[1:-1])
                nxt = self.peek()
                if nxt is not None and nxt.kind == "lang":
                    self.i += 1
                    return Literal(lexical, language=nxt.text[1:])
                if nxt is not None and nxt.kind == "dtmark":
                    self.i += 1
                    dt = self.term("datatype")
                    if not isinstance(dt, IRI):
                        raise ParseError("datatype must be an IRI", nxt.line, nxt.column)
                    return Literal(lexical, dt.value)
                return Literal(lexical)
            if kind == "number":
                text = tok.text
                if re.fullmatch(r"[+-]?\d+", text):
                    return Literal(text, XSD_INTEGER)
                if "e" in text.lower():
                    return Literal(text, XSD_DOUBLE)
                return Literal(text, XSD_DECIMAL)
            if kind == "keyword":
                return Literal(tok.text, XSD_BOOLEAN)
        except StructuralError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from None
        if tok.text in ("[", "("):
            what = "blank node property list" if tok.text == "[" else "collection"
            raise UnsupportedConstruct(f"unsupported construct: {what}", tok.line, tok.column)
        raise ParseError(f"expected {role}, found {tok.text!r}", tok.line, tok.column)


def parse_turtle_subset(text: str, *, graph: Optional[Graph] = None) -> Graph:
    """Parse the supported Turtle subset into a graph (new or given)."""
    g = graph if graph is not None else Graph()
    _Parser(text, g).run()
    return g
