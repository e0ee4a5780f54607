"""Derivation trees for saturated graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..rdf import Graph, Provenance, Triple
from .engine import Saturation


class NotFound(KeyError):
    """The triple is not in the saturated graph."""


@dataclass(frozen=True)
class Explanation:
    triple: Triple
    rule: Optional[str]  # None for asserted leaves
    provenance: Optional[Provenance] = None
    children: tuple["Explanation", ...] = ()

    @property
    def asserted(self) -> bool:
        return self.rule is None

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def leaves(self) -> list[Triple]:
        if self.asserted:
            return [self.triple]
        out = []
        for c in self.children:
            out += c.leaves()
        return out

    def render(self, graph: Optional[Graph] = None, indent: int = 0) -> str:
        show = graph.compact if graph is not None else (lambda t: t.n3())
        text = " ".join(show(x) for x in self.triple)
        pad = "  " * indent
        if self.asserted:
            src = self.provenance.source if self.provenance else "unknown"
            lines = [f"{pad}{text}  asserted({src})"]
        else:
            lines = [f"{pad}{text}  [{self.rule}]"]
            lines += [c.render(graph, indent + 1) for c in self.children]
        return "\n".join(lines)


def explain(sat: Saturation, triple: Triple) -> Explanation:
    """Explain ``triple``: asserted leaves carry provenance, inferred nodes
    name the rule and explain each body triple.

    Derivations are recorded in the round a head was first produced, so the
    body triples are strictly older and the tree is acyclic.
    """
    triple = Triple(*triple)
    if triple not in sat.graph:
        raise NotFound(f"triple not in graph: {triple.n3()}")
    return _explain(sat, triple)


def _explain(sat: Saturation, triple: Triple) -> Explanation:
    d = sat.derivations.get(triple)
    if d is None:
        return Explanation(triple, None, sat.graph.provenance(triple))
    return Explanation(triple, d.rule, None, tuple(_explain(sat, b) for b in d.body))


__all__ = ["Explanation", "NotFound", "explain"]
