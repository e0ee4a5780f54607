"""IF-THEN rules over triple patterns and the rule-file reader."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..rdf import IRI, Graph, Literal, Term
from ..rdf.ntriples import ParseError, unescape_string


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


Slot = Union[Var, Term]


@dataclass(frozen=True)
class Pattern:
    s: Slot
    p: Slot
    o: Slot

    def vars(self) -> set[Var]:
        return {x for x in (self.s, self.p, self.o) if isinstance(x, Var)}

    def __iter__(self):
        return iter((self.s, self.p, self.o))


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    name: str
    body: tuple[Pattern, ...]
    head: Pattern

    def __post_init__(self):
        if not self.body:
            raise RuleError(f"rule {self.name!r} has an empty body")
        bound = set().union(*(b.vars() for b in self.body))
        unbound = self.head.vars() - bound
        if unbound:
            names = ", ".join(sorted(str(v) for v in unbound))
            raise RuleError(f"rule {self.name!r}: head variable(s) {names} not bound in body")
        if isinstance(self.head.s, Literal) or isinstance(self.head.p, Literal):
            raise RuleError(f"rule {self.name!r}: literal in head subject/predicate")


_RULE_LINE = re.compile(r"^\s*([\w\-.]+)\s*:\s*(.+?)\s*=>\s*(.+?)\s*$")
_SLOT = re.compile(
    r"""\s*(
        \?[A-Za-z_]\w*
      | <[^>\s]*>
      | "(?:[^"\\]|\\.)*"(?:@[A-Za-z\-]+)?
      | [A-Za-z][\w\-.]*:[\w\-./%]*
      | \d+
    )\s*""",
    re.VERBOSE,
)


def _parse_slot(text: str, graph: Graph, lineno: int) -> Slot:
    if text.startswith("?"):
        return Var(text[1:])
    if text.startswith("<"):
        return IRI(text[1:-1])
    if text.startswith('"'):
        m = re.match(r'^"((?:[^"\\]|\\.)*)"(?:@([A-Za-z\-]+))?$', text)
        return Literal(unescape_string(m.group(1)), language=m.group(2))
    if text.isdigit():
        from ..rdf import literal

        return literal(int(text))
    try:
        return graph.expand(text)
    except KeyError as exc:
        raise ParseError(str(exc.args[0]), lineno) from None


def _parse_patterns(text: str, graph: Graph, lineno: int) -> list[Pattern]:
    patterns = []
    rest = text.strip()
    while rest:
        if not rest.startswith("("):
            raise ParseError(f"expected '(' at {rest[:20]!r}", lineno)
        pos = 1
        slots = []
        for _ in range(3):
            m = _SLOT.match(rest, pos)
            if not m:
                raise ParseError(f"bad pattern term near {rest[pos:pos + 20]!r}", lineno)
            slots.append(_parse_slot(m.group(1), graph, lineno))
            pos = m.end()
        if pos >= len(rest) or rest[pos] != ")":
            raise ParseError("pattern must have exactly three terms", lineno)
        patterns.append(Pattern(*slots))
        rest = rest[pos + 1 :].strip()
        if rest.startswith(","):
            rest = rest[1:].strip()
    return patterns


def parse_rules(text: str, graph: Optional[Graph] = None) -> list[Rule]:
    """Read rules written as ``name: (?x p ?y), (?y q ?z) => (?x r ?z)``."""
    g = graph if graph is not None else Graph()
    rules = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(line)
        if not stripped.strip():
            continue
        m = _RULE_LINE.match(stripped)
        if not m:
            raise ParseError("expected 'name: body => head'", lineno)
        name, body, head = m.groups()
        head_patterns = _parse_patterns(head, g, lineno)
        if len(head_patterns) != 1:
            raise ParseError("rule head must be a single pattern", lineno)
        try:
            rules.append(Rule(name, tuple(_parse_patterns(body, g, lineno)), head_patterns[0]))
        except RuleError as exc:
            raise ParseError(str(exc), lineno) from None
    return rules


def _strip_comment(line: str) -> str:
    depth = 0
    in_str = False
    for i, ch in enumerate(line):
        if ch == '"' and (i == 0 or line[i - 1] != "\\"):
            in_str = not in_str
        elif not in_str and ch == "<":
            depth += 1
        elif not in_str and ch == ">":
            depth = max(depth - 1, 0)
        elif ch == "#" and depth == 0 and not in_str:
            return line[:i]
    return line


def load_rules(path, graph: Optional[Graph] = None) -> list[Rule]:
    return parse_rules(Path(path).read_text(encoding="utf-8"), graph)
