"""Six-dimension quality assessment of the KG.

The formulas are this toolkit's own definitions; the report header says so.
"""

from __future__ import annotations

import json
import math
import re
import time
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Sequence

from .ontology import vocab as V
from .ontology.gazetteer import instances_of
from .rdf import EXTERNAL_PREFIXES, IRI, Graph, Literal, utcnow

DIMENSIONS = ("availability", "completeness", "conciseness", "interlinking", "performance", "relevancy")

DEFINITIONS = {
    "availability": "well-formed IRIs in a registered namespace / distinct IRIs",
    "completeness": "Biomarker instances with every required property / Biomarker instances",
    "conciseness": "1 - duplicate statements seen at ingestion / statements ingested",
    "interlinking": "instances linking to an external namespace / instances",
    "performance": "min(1, latency budget / p95 latency of the benchmark queries)",
    "relevancy": "asserted triples from a trusted source / asserted triples with provenance",
}
HEADER = "Quality scores (toolkit-defined formulas; see definitions)"

BENCHMARK_QUERIES = (
    "Biomarker and causes some BRCA and isA only POTSF",
    "Biomarker",
    "Cancer",
    "Feature",
    "POTSF",
)
REQUIRED_PROPERTIES = ("type", "crossResponsibility", "significance", "evidenceType", "hasCitations")

_WELL_FORMED = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+$")
_SCHEMA_CLASSES = {V.Class, V.ObjectProperty, V.DatatypeProperty, V.FunctionalProperty}


@dataclass(frozen=True)
class QualityConfig:
    latency_budget_ms: float = 50.0
    trusted_sources: tuple = ("PubMed", "MeSH", "CancerIndex", "seed")
    required_properties: tuple = REQUIRED_PROPERTIES
    queries: tuple = BENCHMARK_QUERIES
    repeats: int = 20
    saturate: bool = True
    dereference: bool = False
    dereference_timeout: float = 5.0


@dataclass
class QualityReport:
    scores: dict
    details: dict
    generated_at: datetime
    definitions: dict = field(default_factory=lambda: dict(DEFINITIONS))

    def __post_init__(self):
        missing = set(DIMENSIONS) - set(self.scores)
        if missing:
            raise ValueError(f"missing dimensions: {sorted(missing)}")
        for k, v in self.scores.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{k} score {v} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "header": HEADER,
            "generated_at": self.generated_at.isoformat(),
            "scores": {k: self.scores[k] for k in DIMENSIONS},
            "definitions": self.definitions,
            "details": {k: self.details.get(k, []) for k in DIMENSIONS},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, ensure_ascii=False) + "\n"

    def table(self) -> str:
        width = max(len(d) for d in DIMENSIONS)
        lines = [HEADER, f"{'dimension':<{width}}  score   definition"]
        for d in DIMENSIONS:
            lines.append(f"{d:<{width}}  {self.scores[d]:.4f}  {self.definitions[d]}")
        for d in DIMENSIONS:
            for item in self.details.get(d, [])[:10]:
                lines.append(f"  [{d}] {item}")
            extra = len(self.details.get(d, [])) - 10
            if extra > 0:
                lines.append(f"  [{d}] ... {extra} more")
        return "\n".join(lines) + "\n"


def _iris(graph: Graph) -> set[IRI]:
    out = set()
    for t in graph:
        for x in t:
            if isinstance(x, IRI):
                out.add(x)
    return out


def _head_ok(iri: IRI, timeout: float) -> bool:
    if not iri.value.startswith(("http://", "https://")):
        return False
    req = urllib.request.Request(iri.value, method="HEAD")
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.status < 400
    except Exception:
        return False


def availability(graph: Graph, config: QualityConfig) -> tuple[float, list]:
    iris = _iris(graph)
    namespaces = tuple(graph.prefixes.values())
    bad = []
    for iri in sorted(iris, key=lambda i: i.value):
        if not _WELL_FORMED.match(iri.value):
            bad.append(f"malformed IRI {iri.value}")
        elif not iri.value.startswith(namespaces):
            bad.append(f"unregistered namespace: {iri.value}")
        elif config.dereference and not _head_ok(iri, config.dereference_timeout):
            bad.append(f"not dereferenceable: {iri.value}")
    return (1 - len(bad) / len(iris)) if iris else 0.0, bad


def _has_citations(graph: Graph, gene) -> bool:
    for o in graph.objects(gene, V.hasCitations):
        if isinstance(o, Literal):
            try:
                if int(o.lexical) >= 1:
                    return True
            except ValueError:
                pass
    return False


def missing_properties(graph: Graph, gene, required: Sequence[str] = REQUIRED_PROPERTIES) -> list[str]:
    """Which required properties ``gene`` lacks."""
    missing = []
    codes = graph.objects(gene, V.crossResponsibility)
    for prop in required:
        if prop == "type":
            ok = bool(graph.objects(gene, V.type_))
        elif prop == "crossResponsibility":
            ok = bool(codes)
        elif prop == "significance":
            covered = set()
            for f in graph.subjects(V.hasGene, gene):
                if graph.objects(f, V.hasSignificance):
                    covered |= graph.objects(f, V.hasCancer)
            ok = bool(codes) and codes <= covered
        elif prop == "evidenceType":
            ok = bool(graph.objects(gene, V.evidenceType))
        elif prop == "hasCitations":
            ok = _has_citations(graph, gene)
        else:
            ok = bool(graph.objects(gene, V.ONO[prop]))
        if not ok:
            missing.append(prop)
    return missing


def completeness(graph: Graph, config: QualityConfig) -> tuple[float, list]:
    genes = sorted(instances_of(graph, V.Biomarker), key=str)
    if not genes:
        return 0.0, ["no Biomarker instances"]
    details = []
    for g in genes:
        miss = missing_properties(graph, g, config.required_properties)
        if miss:
            details.append(f"{graph.compact(g)} lacks {', '.join(miss)}")
    return (len(genes) - len(details)) / len(genes), details


def conciseness(graph: Graph) -> tuple[float, list]:
    stats = graph.ingest
    if stats.statements == 0:
        return 1.0, []
    details = [f"{stats.duplicates} duplicate statements out of {stats.statements} ingested"] if stats.duplicates else []
    return 1.0 - stats.duplicates / stats.statements, details


def instances(graph: Graph) -> set:
    """Subjects typed by a domain class (schema-level declarations excluded)."""
    out = set()
    for t in graph.iter_match(p=V.type_):
        if t.object not in _SCHEMA_CLASSES:
            out.add(t.subject)
    return out


def interlinking(graph: Graph) -> tuple[float, list]:
    external = tuple(EXTERNAL_PREFIXES.values())
    nodes = sorted(instances(graph), key=str)
    if not nodes:
        return 0.0, ["no instances"]
    unlinked = []
    for x in nodes:
        if not any(isinstance(t.object, IRI) and t.object.value.startswith(external) for t in graph.iter_match(s=x)):
            unlinked.append(f"{graph.compact(x)} has no external link")
    return (len(nodes) - len(unlinked)) / len(nodes), unlinked


def _p95(samples: list[float]) -> float:
    ordered = sorted(samples)
    k = max(0, math.ceil(0.95 * len(ordered)) - 1)
    return ordered[k]


def performance(graph: Graph, config: QualityConfig) -> tuple[float, list, dict]:
    from . import dlq

    if not config.queries:
        return 0.0, ["no benchmark queries"], {}
    samples = []
    per_query = {}
    for q in config.queries:
        times = []
        for _ in range(max(1, config.repeats)):
            start = time.perf_counter()
            dlq.evaluate(dlq.parse(q, graph.prefixes), graph)
            times.append((time.perf_counter() - start) * 1000)
        samples += times
        per_query[q] = sorted(times)[len(times) // 2]
    p95 = _p95(samples)
    score = 1.0 if p95 <= 0 else min(1.0, config.latency_budget_ms / p95)
    details = [f"p95 {p95:.3f} ms against a {config.latency_budget_ms:g} ms budget"]
    details += [f"median {ms:.3f} ms: {q}" for q, ms in per_query.items()]
    return score, details, {"p95_ms": p95}


def relevancy(graph: Graph, config: QualityConfig) -> tuple[float, list]:
    trusted = set(config.trusted_sources)
    total = 0
    untrusted: dict[str, int] = {}
    for t, prov in graph.provenance_items():
        if prov.extractor == "inferred":
            continue
        total += 1
        if prov.source not in trusted:
            untrusted[prov.source] = untrusted.get(prov.source, 0) + 1
    if total == 0:
        return 0.0, ["no triples carry provenance"]
    details = [f"{n} triple(s) from untrusted source {s!r}" for s, n in sorted(untrusted.items())]
    return (total - sum(untrusted.values())) / total, details


def assess(graph: Graph, config: QualityConfig = QualityConfig()) -> QualityReport:
    """Score ``graph`` (the asserted KG) on all six dimensions."""
    now = utcnow()
    if len(graph) == 0:
        scores = {d: 0.0 for d in DIMENSIONS}
        scores["conciseness"] = 1.0
        return QualityReport(scores, {d: ["empty graph"] for d in DIMENSIONS if d != "conciseness"}, now)
    view = graph
    if config.saturate:
        from .reasoner import saturate

        view = saturate(graph).graph
    scores, details = {}, {}
    scores["availability"], details["availability"] = availability(graph, config)
    scores["completeness"], details["completeness"] = completeness(view, config)
    scores["conciseness"], details["conciseness"] = conciseness(graph)
    scores["interlinking"], details["interlinking"] = interlinking(graph)
    scores["performance"], details["performance"], _ = performance(view, config)
    scores["relevancy"], details["relevancy"] = relevancy(graph, config)
    return QualityReport(scores, details, now)


def load_config(values: Optional[dict] = None) -> QualityConfig:
    """Build a config from ``key=value`` style settings (strings accepted)."""
    values = values or {}
    kw = {}
    if "latency_budget_ms" in values:
        kw["latency_budget_ms"] = float(values["latency_budget_ms"])
    if "trusted_sources" in values:
        kw["trusted_sources"] = _as_tuple(values["trusted_sources"])
    if "required_properties" in values:
        kw["required_properties"] = _as_tuple(values["required_properties"])
    if "repeats" in values:
        kw["repeats"] = int(values["repeats"])
    if "saturate" in values:
        kw["saturate"] = _as_bool(values["saturate"])
    if "dereference" in values:
        kw["dereference"] = _as_bool(values["dereference"])
    return QualityConfig(**kw)


def _as_tuple(v) -> tuple:
    if isinstance(v, str):
        return tuple(x.strip() for x in v.split(",") if x.strip())
    return tuple(v)


def _as_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")
