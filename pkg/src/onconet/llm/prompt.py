"""Ontology-guided prompt construction."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ontology import vocab as V
from ..rdf import IRI, Graph, local_name

INSTRUCTION = (
    "Extract triples from the target text using only the relations listed below. "
    "Use entity names as they appear in the text or the class roster. "
    "Output one triple per line as subject|relation|object and nothing else."
)
TRUNCATED = "[... roster truncated ...]"

# The four relations text extraction targets come first, in this order.
CORE_RELATIONS = (V.causes, V.hasType, V.hasEvidence, V.isA)

WORKED_TEXT = (
    "TP53 is responsible for a disease called Breast Cancer. "
    "TP53 has POTSF functionality, which is mentioned in numerous PubMed articles."
)
WORKED_TRIPLES = (
    "TP53|causes|Breast Cancer",
    "TP53|hasType|POTSF",
    "Breast Cancer|isA|Disease",
    "POTSF|hasEvidence|PubMed",
)


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class PromptOptions:
    max_chars: int = 12000
    include_example: bool = True
    examples: tuple = ()  # extra (sentence, (line, ...)) pairs


@dataclass(frozen=True)
class PromptInstance:
    instruction: str
    ontology_block: str
    context_examples: tuple = field(default_factory=tuple)
    target_text: str = ""

    def render(self) -> str:
        parts = [self.instruction, "", self.ontology_block]
        for sentence, lines in self.context_examples:
            parts += ["", "Example text:", sentence, "Example triples:", *lines]
        parts += ["", "Target text:", self.target_text, "", "Triples:"]
        return "\n".join(parts) + "\n"

    def __len__(self) -> int:
        return len(self.render())


def relations(graph: Graph) -> list[IRI]:
    """Every declared object or datatype property, core relations first."""
    declared = set(graph.subjects(V.type_, V.ObjectProperty)) | set(graph.subjects(V.type_, V.DatatypeProperty))
    declared = {p for p in declared if isinstance(p, IRI)}
    rest = sorted(declared - set(CORE_RELATIONS), key=lambda p: p.value)
    return [p for p in CORE_RELATIONS if p in declared] + rest


def _relation_lines(graph: Graph) -> list[str]:
    out = []
    for p in relations(graph):
        dom = ", ".join(sorted(local_name(d) for d in graph.objects(p, V.domain))) or "any"
        rng = ", ".join(sorted(local_name(r) for r in graph.objects(p, V.range_))) or "any"
        out.append(f"- {local_name(p)} (domain: {dom}; range: {rng})")
    return out


def _roster_lines(graph: Graph) -> list[str]:
    classes = sorted(
        {c for c in graph.subjects(V.type_, V.Class) if isinstance(c, IRI)},
        key=lambda c: local_name(c),
    )
    out = []
    for c in classes:
        members = sorted(local_name(x) for x in graph.subjects(V.type_, c) if isinstance(x, IRI))
        label = graph.value(c, V.label)
        label = label.lexical if label is not None and label.lexical != local_name(c) else ""
        head = f"- {local_name(c)}" + (f" ({label})" if label else "")
        out.append(head + (": " + ", ".join(members) if members else ""))
    return out


def render_prompt(graph: Graph, text: str, options: PromptOptions = PromptOptions()) -> PromptInstance:
    """Build the prompt; examples are dropped first, then the roster is truncated."""
    if not text.strip():
        raise PromptError("target text is empty")
    rel_block = "Relations:\n" + "\n".join(_relation_lines(graph))
    roster = _roster_lines(graph)
    examples = list(options.examples)
    if options.include_example:
        examples.insert(0, (WORKED_TEXT, WORKED_TRIPLES))

    def build(roster_lines, exs):
        block = rel_block + "\nClasses:\n" + "\n".join(roster_lines)
        return PromptInstance(INSTRUCTION, block, tuple((s, tuple(ls)) for s, ls in exs), text)

    prompt = build(roster, examples)
    while len(prompt) > options.max_chars and examples:
        examples.pop()
        prompt = build(roster, examples)
    kept = list(roster)
    while len(prompt) > options.max_chars and kept:
        kept.pop()
        prompt = build(kept + [TRUNCATED], examples)
    if len(prompt) > options.max_chars:
        raise PromptError(f"instruction, relations and target text alone exceed max_chars={options.max_chars}")
    return prompt
