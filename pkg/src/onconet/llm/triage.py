"""Response parsing, triage against the KG, and policy-controlled application."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from ..ontology import vocab as V
from ..ontology.gazetteer import Gazetteer
from ..rdf import IRI, Graph, Literal, Provenance, Triple, literal, local_name, utcnow
from ..rdf.ntriples import ParseError, parse_line
from ..reasoner import Constraints, Saturation, check_consistency, new_violations, saturate
from .prompt import relations

POLICIES = ("accept_new", "accept_new_and_queue_conflicts", "dry_run")

_NUMBER = re.compile(r"^-?\d+$")


@dataclass(frozen=True)
class Reject:
    lineno: int
    line: str
    reason: str


@dataclass
class ParsedResponse:
    triples: list = field(default_factory=list)  # [(lineno, Triple)]
    rejects: list = field(default_factory=list)  # [Reject]


class _Resolver:
    def __init__(self, graph: Graph, gz: Gazetteer):
        self.graph = graph
        self.gz = gz
        self.nodes = graph.nodes()
        self.relations = {local_name(p): p for p in relations(graph)}
        self.relations_folded = {k.casefold(): v for k, v in self.relations.items()}
        self.datatype = set(graph.subjects(V.type_, V.DatatypeProperty))

    def relation(self, text: str) -> Optional[IRI]:
        text = text.strip()
        if text.startswith("<") and text.endswith(">"):
            iri = IRI(text[1:-1])
            return iri if iri in self.relations.values() else None
        if ":" in text:
            try:
                iri = self.graph.expand(text)
            except KeyError:
                return None
            return iri if iri in self.relations.values() else None
        return self.relations.get(text) or self.relations_folded.get(text.casefold())

    def term(self, text: str, predicate: IRI, position: str):
        text = " ".join(text.split())
        if not text:
            return None
        if position == "object" and predicate in self.datatype and _NUMBER.match(text):
            return literal(int(text))
        if text.startswith("<") and text.endswith(">"):
            try:
                iri = IRI(text[1:-1])
            except ValueError:
                return None
            return iri if iri in self.nodes else None
        if ":" in text and " " not in text:
            try:
                iri = self.graph.expand(text)
            except (KeyError, ValueError):
                iri = None
            if iri is not None and iri in self.nodes:
                return iri
        entries = self.gz.lookup(text)
        if entries:
            best = max(entries, key=lambda e: e.prior)  # lookup order breaks ties
            return best.iri
        try:
            iri = V.ONO[text]
        except ValueError:
            return None
        return iri if iri in self.nodes else None


def parse_response(text: str, graph: Graph, gz: Gazetteer) -> ParsedResponse:
    """Read ``subject|relation|object`` and N-Triples lines; never raises on bad input."""
    res = _Resolver(graph, gz)
    out = ParsedResponse()
    seen: dict[Triple, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("```"):
            continue
        line = re.sub(r"^(?:[-*]\s+|\d+[.)]\s+)", "", line)
        triple, reason = None, None
        if line.startswith(("<", "_:")) and line.endswith("."):
            try:
                triple = parse_line(line)
            except ParseError as exc:
                reason = f"bad N-Triples: {exc.reason}"
            else:
                if triple.predicate not in res.relations.values():
                    triple, reason = None, f"unknown relation {graph.compact(triple.predicate)}"
                elif triple.subject not in res.nodes or (not isinstance(triple.object, Literal) and triple.object not in res.nodes):
                    triple, reason = None, "unknown entity"
        else:
            parts = line.split("|")
            if len(parts) != 3:
                reason = f"expected 3 fields separated by '|', found {len(parts)}"
            else:
                s_text, p_text, o_text = (x.strip() for x in parts)
                p = res.relation(p_text)
                if p is None:
                    reason = f"unknown relation {p_text!r}"
                else:
                    s = res.term(s_text, p, "subject")
                    o = res.term(o_text, p, "object")
                    if s is None or isinstance(s, Literal):
                        reason = f"unresolvable subject {s_text!r}"
                    elif o is None:
                        reason = f"unresolvable object {o_text!r}"
                    else:
                        triple = Triple(s, p, o)
        if triple is None:
            out.rejects.append(Reject(lineno, raw, reason))
        elif triple in seen:
            out.rejects.append(Reject(lineno, raw, f"duplicate of line {seen[triple]}"))
        else:
            seen[triple] = lineno
            out.triples.append((lineno, triple))
    return out


@dataclass(frozen=True)
class Verdict:
    triple: Triple
    verdict: str  # new | confirmed | conflicting | invalid
    reason: str


@dataclass
class DiffReport:
    new: list = field(default_factory=list)
    confirmed: list = field(default_factory=list)
    conflicting: list = field(default_factory=list)
    invalid: list = field(default_factory=list)
    rejected: list = field(default_factory=list)  # parse-level rejects, outside the partition

    def sizes(self) -> tuple[int, int, int, int]:
        return (len(self.new), len(self.confirmed), len(self.conflicting), len(self.invalid))

    def verdicts(self) -> list[Verdict]:
        return sorted(self.new + self.confirmed + self.conflicting + self.invalid, key=lambda v: v.triple.sort_key())


def _supers(graph: Graph, cls) -> set:
    return {cls} | graph.objects(cls, V.subClassOf)


def _disjoint(constraints: Constraints, left: set, right: set):
    for a, b in sorted(constraints.disjoint, key=lambda pair: (str(pair[0]), str(pair[1]))):
        if (a in left and b in right) or (b in left and a in right):
            return a, b
    return None


def _domain_range_problem(sat: Graph, constraints: Constraints, t: Triple) -> Optional[str]:
    p = t.predicate
    props = {p} | sat.objects(p, V.subPropertyOf)
    datatype = set(sat.subjects(V.type_, V.DatatypeProperty))
    if p in datatype and not isinstance(t.object, Literal):
        return f"{local_name(p)} expects a literal value"
    if p not in datatype and isinstance(t.object, Literal):
        return f"{local_name(p)} expects a resource, not a literal"
    s_types = sat.objects(t.subject, V.type_)
    for q in sorted(props, key=str):
        for d in sorted(sat.objects(q, V.domain), key=str):
            clash = _disjoint(constraints, s_types, _supers(sat, d))
            if clash:
                return f"domain violation: {sat.compact(t.subject)} cannot be a {local_name(d)} ({local_name(clash[0])} and {local_name(clash[1])} are disjoint)"
        if isinstance(t.object, Literal):
            continue
        o_types = sat.objects(t.object, V.type_)
        for r in sorted(sat.objects(q, V.range_), key=str):
            clash = _disjoint(constraints, o_types, _supers(sat, r))
            if clash:
                return f"range violation: {sat.compact(t.object)} cannot be a {local_name(r)} ({local_name(clash[0])} and {local_name(clash[1])} are disjoint)"
        allowed = constraints.allowed.get(q)
        if allowed is not None and t.object not in allowed:
            return f"range violation: {sat.compact(t.object)} is not an allowed value of {local_name(q)}"
    return None


def triage(parsed: Sequence, kg, *, rules: Sequence = ()) -> DiffReport:
    """Sort parsed triples into new / confirmed / conflicting / invalid.

    ``parsed`` is a :class:`ParsedResponse` or a sequence of triples; ``kg``
    is an asserted graph or a :class:`Saturation` of it. Each triple is judged
    on its own against the KG: invalid if it breaks a domain, range or value
    restriction; confirmed if already present (asserted or inferred);
    conflicting if adding it and re-saturating raises a new functional-key or
    disjointness violation; new otherwise.
    """
    if isinstance(parsed, ParsedResponse):
        rejects = list(parsed.rejects)
        triples = [t for _, t in parsed.triples]
    else:
        rejects = []
        triples = [t[1] if isinstance(t, tuple) and len(t) == 2 and isinstance(t[1], Triple) else t for t in parsed]
    sat = kg if isinstance(kg, Saturation) else saturate(kg, rules)
    closed = sat.graph
    constraints = Constraints.from_graph(closed)
    baseline = check_consistency(closed, constraints)
    asserted = Graph(sat.asserted, prefixes=closed.prefixes)

    report = DiffReport(rejected=rejects)
    for t in triples:
        problem = _domain_range_problem(closed, constraints, t)
        if problem:
            report.invalid.append(Verdict(t, "invalid", problem))
            continue
        if t in closed:
            how = "inferred" if sat.is_inferred(t) else "asserted"
            report.confirmed.append(Verdict(t, "confirmed", f"already {how}"))
            continue
        trial = asserted.copy()
        trial.insert(t)
        after = check_consistency(saturate(trial, rules).graph, constraints)
        fresh = [i for i in new_violations(baseline, after) if i.kind in ("FunctionalKeyViolation", "DisjointViolation")]
        if fresh:
            report.conflicting.append(Verdict(t, "conflicting", "; ".join(i.message for i in fresh)))
        else:
            report.new.append(Verdict(t, "new", "not in KG"))
    return report


@dataclass
class ApplyResult:
    graph: Graph
    inserted: list = field(default_factory=list)
    queued: list = field(default_factory=list)
    audit: list = field(default_factory=list)


def _audit_line(v: Verdict, action: str, timestamp: str) -> str:
    return json.dumps(
        {
            "triple": v.triple.n3(),
            "verdict": v.verdict,
            "action": action,
            "reason": v.reason,
            "timestamp": timestamp,
        },
        sort_keys=True,
        ensure_ascii=False,
    )


def render_queue(verdicts: Sequence[Verdict]) -> str:
    """Review queue: canonical N-Triples, each preceded by ``# reason:`` lines."""
    lines = []
    for v in sorted(verdicts, key=lambda v: v.triple.sort_key()):
        lines.append(f"# reason: {v.verdict}: {v.reason}")
        lines.append(v.triple.n3())
    return "".join(line + "\n" for line in lines)


def apply(
    diff: DiffReport,
    kg: Graph,
    policy: str,
    *,
    source: str = "llm",
    confidence: float = 1.0,
    queue_path=None,
    audit_path=None,
) -> ApplyResult:
    """Apply ``diff`` to ``kg`` in place under ``policy``.

    Conflicts are never inserted; under every policy they go to the review
    queue. ``accept_new_and_queue_conflicts`` also queues invalid triples so
    a curator sees every rejected claim. ``dry_run`` leaves the KG untouched.
    The audit log gets one JSON line per judged triple.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {', '.join(POLICIES)}")
    stamp = utcnow()
    timestamp = stamp.isoformat()
    result = ApplyResult(kg)
    to_queue = list(diff.conflicting)
    if policy == "accept_new_and_queue_conflicts":
        to_queue += diff.invalid
    for v in diff.verdicts():
        if v.verdict == "new":
            if policy == "dry_run":
                action = "skipped (dry run)"
            else:
                if kg.insert(v.triple, Provenance(source=source, extractor="llm", confidence=confidence, timestamp=stamp)):
                    result.inserted.append(v.triple)
                action = "inserted"
        elif v in to_queue:
            action = "queued"
        else:
            action = "ignored"
        result.audit.append(_audit_line(v, action, timestamp))
    result.queued = sorted(to_queue, key=lambda v: v.triple.sort_key())
    if queue_path is not None and result.queued:
        with open(queue_path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(render_queue(result.queued))
    if audit_path is not None and result.audit:
        Path(audit_path).parent.mkdir(parents=True, exist_ok=True)
        with open(audit_path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(line + "\n" for line in result.audit))
    return result
