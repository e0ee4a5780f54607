"""Description-logic class-expression queries: parser, closed-world evaluator, REPL.

Grammar (keywords case-insensitive)::

    expr   := term ("and" term)*
    term   := NAME | NAME ("some" | "only" | "value") filler
    filler := NAME | "(" expr ")"

Names are prefixed (``obo:DOID_1612``), bracketed IRIs, or bare words that
resolve under ``ono:``.
"""

from __future__ import annotations

import logging
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .rdf import IRI, Graph, Literal, Triple
from .rdf.terms import RDF_TYPE

log = logging.getLogger(__name__)

KEYWORDS = ("and", "some", "only", "value")


class DLQError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.reason = message
        self.position = position


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    cls: IRI


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Some:
    role: IRI
    filler: Union["ClassExpression", IRI]


@dataclass(frozen=True)
class Only:
    role: IRI
    filler: Union["ClassExpression", IRI]


@dataclass(frozen=True)
class Value:
    role: IRI
    individual: IRI


ClassExpression = Union[Atom, And, Some, Only, Value]


def to_text(expr, graph: Optional[Graph] = None) -> str:
    """Render an expression back to query syntax."""
    name = (lambda i: graph.compact(i)) if graph is not None else (lambda i: i.n3())

    def filler(f):
        return name(f) if isinstance(f, IRI) else f"({to_text(f, graph)})"

    if isinstance(expr, Atom):
        return name(expr.cls)
    if isinstance(expr, And):
        return " and ".join(to_text(c, graph) for c in expr.children)
    if isinstance(expr, Some):
        return f"{name(expr.role)} some {filler(expr.filler)}"
    if isinstance(expr, Only):
        return f"{name(expr.role)} only {filler(expr.filler)}"
    if isinstance(expr, Value):
        return f"{name(expr.role)} value {name(expr.individual)}"
    raise TypeError(expr)


# -- parser ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<[^>\s]*>)|([()])|([A-Za-z_][\w\-.]*(?::[\w\-./%]*)?))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return tokens
        m = _TOKEN.match(text, pos)
        if not m:
            raise DLQError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        value = m.group(m.lastindex)
        if m.lastindex == 1:
            kind = "iri"
        elif m.lastindex == 2:
            kind = value
        elif value.lower() in KEYWORDS:
            kind = "kw"
            value = value.lower()
        else:
            kind = "name"
        tokens.append((kind, value, start))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, prefixes: dict):
        self.text = text
        self.prefixes = prefixes
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def end_pos(self) -> int:
        return len(self.text)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def name(self, what: str) -> IRI:
        tok = self.take()
        if tok is None:
            raise DLQError(f"expected {what}, found end of input", self.end_pos())
        kind, value, pos = tok
        if kind == "kw":
            raise DLQError(f"expected {what}, found keyword {value!r}", pos)
        if kind == "iri":
            try:
                return IRI(value[1:-1])
            except ValueError as exc:
                raise DLQError(str(exc), pos) from None
        if kind != "name":
            raise DLQError(f"expected {what}, found {value!r}", pos)
        return self.resolve(value, pos)

    def resolve(self, value: str, pos: int) -> IRI:
        if ":" in value:
            prefix, local = value.split(":", 1)
            if prefix not in self.prefixes:
                raise DLQError(f"unknown prefix {prefix!r}", pos)
            return IRI(self.prefixes[prefix] + local)
        return IRI(self.prefixes["ono"] + value)

    def expr(self):
        terms = [self.term()]
        while True:
            tok = self.peek()
            if tok is None or tok[0] == ")":
                break
            if tok[0] == "kw" and tok[1] == "and":
                self.take()
                if self.peek() is None:
                    raise DLQError("dangling keyword 'and'", tok[2])
                terms.append(self.term())
            else:
                raise DLQError(f"expected 'and', found {tok[1]!r}", tok[2])
        return terms[0] if len(terms) == 1 else And(tuple(terms))

    def term(self):
        tok = self.peek()
        if tok is not None and tok[0] == "(":
            self.take()
            inner = self.expr()
            self.close(tok[2])
            return inner
        head = self.name("a class or role name")
        nxt = self.peek()
        if nxt is None or nxt[0] != "kw" or nxt[1] == "and":
            return Atom(head)
        kw_tok = self.take()
        if self.peek() is None:
            raise DLQError(f"dangling keyword {kw_tok[1]!r}", kw_tok[2])
        if kw_tok[1] == "value":
            return Value(head, self.name("an individual"))
        filler = self.filler()
        return Some(head, filler) if kw_tok[1] == "some" else Only(head, filler)

    def filler(self):
        tok = self.peek()
        if tok is not None and tok[0] == "(":
            self.take()
            inner = self.expr()
            self.close(tok[2])
            return inner
        return self.name("a filler name")

    def close(self, opened_at: int) -> None:
        tok = self.take()
        if tok is None or tok[0] != ")":
            raise DLQError("unbalanced '('", opened_at)


def parse(text: str, prefixes: Optional[dict] = None) -> ClassExpression:
    """Parse ``text`` into a class expression; errors carry a character offset."""
    if prefixes is None:
        prefixes = Graph().prefixes
    if "ono" not in prefixes:
        raise ValueError("prefix map must define 'ono'")
    if not text.strip():
        raise DLQError("empty query", 0)
    p = _Parser(text, prefixes)
    expr = p.expr()
    tok = p.peek()
    if tok is not None:
        raise DLQError(f"unexpected {tok[1]!r}", tok[2])
    return expr


# -- evaluation ------------------------------------------------------------


@dataclass
class QueryResult:
    individuals: tuple
    bindings_count: int
    elapsed: float  # seconds
    vacuous_only: int = 0
    warnings: list = field(default_factory=list)

    def format(self, graph: Optional[Graph] = None) -> str:
        show = graph.compact if graph is not None else (lambda t: t.n3())
        lines = [show(x) for x in self.individuals]
        lines.append(f"count={len(self.individuals)} elapsed_ms={self.elapsed * 1000:.3f} vacuous_only={self.vacuous_only}")
        return "\n".join(lines)


def individuals(graph: Graph) -> set:
    """The closed-world universe: every non-literal subject or object."""
    out = set()
    for t in graph:
        out.add(t.subject)
        if not isinstance(t.object, Literal):
            out.add(t.object)
    return out


class _Evaluator:
    def __init__(self, graph: Graph):
        self.g = graph
        self.warnings: list[str] = []
        self._universe: Optional[set] = None
        self._nodes: Optional[set] = None
        self._preds: Optional[set] = None

    @property
    def universe(self) -> set:
        if self._universe is None:
            self._universe = individuals(self.g)
        return self._universe

    def known_node(self, iri: IRI) -> bool:
        if self._nodes is None:
            self._nodes = self.universe | self.g.predicates()
        return iri in self._nodes

    def known_role(self, iri: IRI) -> bool:
        """Used as a predicate, or at least declared somewhere in the graph."""
        if self._preds is None:
            self._preds = self.g.predicates()
        return iri in self._preds or self.known_node(iri)

    def warn(self, msg: str) -> None:
        if msg not in self.warnings:
            self.warnings.append(msg)
            log.warning(msg)

    def name(self, iri: IRI) -> set:
        """A filler name denotes itself plus anything typed by it."""
        if not self.known_node(iri):
            self.warn(f"unknown name {iri.n3()}")
            return set()
        return {iri} | self.g.subjects(RDF_TYPE, iri)

    def filler(self, f) -> set:
        return self.name(f) if isinstance(f, IRI) else self.eval(f)

    def role(self, iri: IRI) -> bool:
        if not self.known_role(iri):
            self.warn(f"unknown role {iri.n3()}")
            return False
        return True

    def eval(self, e) -> set:
        if isinstance(e, Atom):
            if not self.known_node(e.cls):
                self.warn(f"unknown class {e.cls.n3()}")
                return set()
            return set(self.g.subjects(RDF_TYPE, e.cls))
        if isinstance(e, And):
            sets = sorted((self.eval(c) for c in e.children), key=len)
            out = set(sets[0])
            for s in sets[1:]:
                out &= s
            return out
        if isinstance(e, Some):
            if not self.role(e.role):
                return set()
            target = self.filler(e.filler)
            return {t.subject for t in self.g.iter_match(p=e.role) if t.object in target}
        if isinstance(e, Only):
            return self.universe - self._only_violators(e)
        if isinstance(e, Value):
            if not self.role(e.role):
                return set()
            return self.g.subjects(e.role, e.individual)
        raise TypeError(f"not a class expression: {e!r}")

    def _only_violators(self, e: Only) -> set:
        if not self.role(e.role):
            return set()
        target = self.filler(e.filler)
        return {t.subject for t in self.g.iter_match(p=e.role) if t.object not in target}

    def vacuous(self, e, result: set) -> set:
        """Result members admitted by a top-level ``only`` with zero successors."""
        conjuncts = e.children if isinstance(e, And) else (e,)
        out = set()
        for c in conjuncts:
            if isinstance(c, Only):
                with_successors = {t.subject for t in self.g.iter_match(p=c.role)}
                out |= result - with_successors
        return out


def evaluate(expr: ClassExpression, graph: Graph) -> QueryResult:
    """Evaluate ``expr`` under closed-world semantics over a saturated graph."""
    start = time.perf_counter()
    ev = _Evaluator(graph)
    found = ev.eval(expr)
    vacuous = ev.vacuous(expr, found)
    ordered = tuple(sorted(found, key=lambda x: x.n3()))
    elapsed = time.perf_counter() - start
    return QueryResult(ordered, len(ordered), elapsed, len(vacuous), ev.warnings)


def query(text: str, graph: Graph) -> QueryResult:
    return evaluate(parse(text, graph.prefixes), graph)


def atoms(expr) -> list[IRI]:
    """Classes named by top-level atoms of ``expr``."""
    conjuncts = expr.children if isinstance(expr, And) else (expr,)
    return [c.cls for c in conjuncts if isinstance(c, Atom)]


# -- REPL ------------------------------------------------------------------


def repl(saturation, stdin=None, stdout=None, prompt: str = "dlq> ") -> int:
    """Read queries line by line; ``:explain <name>`` and ``:quit`` are commands.

    ``saturation`` is a :class:`onconet.reasoner.Saturation` (a plain graph is
    saturated first).
    """
    from .reasoner import Saturation, explain, saturate

    if not isinstance(saturation, Saturation):
        saturation = saturate(saturation)
    graph = saturation.graph
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    interactive = hasattr(stdin, "isatty") and stdin.isatty()
    last = None

    def out(text: str) -> None:
        stdout.write(text + "\n")
        stdout.flush()

    while True:
        if interactive:
            stdout.write(prompt)
            stdout.flush()
        line = stdin.readline()
        if not line:
            return 0
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in (":quit", ":q", ":exit"):
            return 0
        if line.startswith(":explain"):
            arg = line[len(":explain") :].strip()
            if not arg:
                out("error: usage :explain <name>")
                continue
            try:
                who = _Parser(arg, graph.prefixes).name("a name")
            except DLQError as exc:
                out(f"error: {exc}")
                continue
            classes = atoms(last) if last is not None else sorted(graph.objects(who, RDF_TYPE), key=str)
            shown = 0
            for cls in classes:
                t = Triple(who, RDF_TYPE, cls)
                if t in graph:
                    out(explain(saturation, t).render(graph))
                    shown += 1
            if not shown:
                out(f"no type triples to explain for {graph.compact(who)}")
            continue
        if line.startswith(":"):
            out(f"error: unknown command {line.split()[0]}")
            continue
        try:
            expr = parse(line, graph.prefixes)
        except DLQError as exc:
            out(f"error: {exc}")
            continue
        result = evaluate(expr, graph)
        last = expr
        for w in result.warnings:
            out(f"warning: {w}")
        out(result.format(graph))


__all__ = [
    "And",
    "Atom",
    "ClassExpression",
    "DLQError",
    "Only",
    "QueryResult",
    "Some",
    "Value",
    "atoms",
    "evaluate",
    "individuals",
    "parse",
    "query",
    "repl",
    "to_text",
]
