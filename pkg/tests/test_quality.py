import json
import random

import pytest

from onconet.ontology import instances_of
from onconet.ontology import vocab as V
from onconet.quality import (
    DIMENSIONS,
    QualityConfig,
    QualityReport,
    assess,
    completeness,
    conciseness,
    interlinking,
    load_config,
    missing_properties,
    performance,
    relevancy,
)
from onconet.rdf import IRI, Graph, Provenance, Triple, literal, parse_ntriples, serialize_ntriples
from oracles import random_small_graph

ONO = V.ONO
FAST = QualityConfig(repeats=2)
OGG = "http://purl.obolibrary.org/obo/OGG_"


def test_doubled_ingestion_halves_conciseness(seed_graph):
    text = serialize_ntriples(seed_graph)
    g = parse_ntriples(text + text)
    assert g.ingest.duplicates == g.ingest.statements // 2
    assert conciseness(g)[0] == 0.5
    assert conciseness(parse_ntriples(text))[0] == 1.0


def test_seed_is_complete(seed_graph):
    score, details = completeness(seed_graph, FAST)
    assert score == 1.0
    assert details == []


def test_dropping_one_property_from_one_gene(seed):
    genes = sorted(instances_of(seed, V.Biomarker), key=str)
    n = len(genes)
    for o in list(seed.objects(ONO.FAS, V.evidenceType)):
        seed.remove(Triple(ONO.FAS, V.evidenceType, o))
    score, details = completeness(seed, FAST)
    assert score == pytest.approx((n - 1) / n)
    assert details == ["ono:FAS lacks evidenceType"]


def test_zero_citations_count_as_missing():
    g = Graph()
    gene = ONO.G
    g.add(gene, V.type_, V.Biomarker)
    g.add(gene, V.hasCitations, literal(0))
    assert "hasCitations" in missing_properties(g, gene)


def _genes(n, linked):
    g = Graph()
    for i in range(n):
        gene = ONO[f"G{i}"]
        g.add(gene, V.type_, V.Biomarker)
        if i < linked:
            g.add(gene, V.externalRef, IRI(f"{OGG}{3000000000 + i}"))
    return g


def test_half_the_genes_interlinked():
    score, details = interlinking(_genes(6, 3))
    assert score == 0.5
    assert len(details) == 3


def test_interlinking_ignores_schema_declarations():
    g = _genes(2, 2)
    g.add(V.Biomarker, V.type_, V.Class)
    g.add(V.causes, V.type_, V.ObjectProperty)
    assert interlinking(g)[0] == 1.0


def test_relevancy_counts_trusted_asserted_triples():
    g = Graph()
    g.insert(Triple(ONO.A, V.causes, ONO.B), Provenance(source="PubMed", extractor="lexicon"))
    g.insert(Triple(ONO.C, V.causes, ONO.B), Provenance(source="blog", extractor="llm"))
    g.insert(Triple(ONO.D, V.causes, ONO.B), Provenance(source="blog", extractor="inferred"))
    score, details = relevancy(g, FAST)
    assert score == 0.5
    assert details == ["1 triple(s) from untrusted source 'blog'"]


def test_performance_budget_formula(seed_graph):
    score, _, extra = performance(seed_graph, FAST)
    assert score == min(1.0, 50.0 / extra["p95_ms"])
    tight = QualityConfig(repeats=2, latency_budget_ms=1e-6)
    score, _, extra = performance(seed_graph, tight)
    assert score == pytest.approx(1e-6 / extra["p95_ms"])


def test_empty_graph(fixed_clock):
    report = assess(Graph(), FAST)
    assert {d: report.scores[d] for d in DIMENSIONS} == {
        "availability": 0.0,
        "completeness": 0.0,
        "conciseness": 1.0,
        "interlinking": 0.0,
        "performance": 0.0,
        "relevancy": 0.0,
    }


def test_seed_report(seed_graph, fixed_clock):
    report = assess(seed_graph, FAST)
    assert report.scores["availability"] == 1.0
    assert report.scores["completeness"] == 1.0
    assert report.scores["relevancy"] == 1.0
    data = json.loads(report.to_json())
    assert list(data["scores"]) == list(DIMENSIONS)
    assert data["generated_at"] == "2023-11-14T22:13:20+00:00"
    table = report.table()
    assert table.splitlines()[0].startswith("Quality scores")
    assert "interlinking" in table


def test_unregistered_namespace_lowers_availability():
    g = Graph()
    g.add(ONO.A, V.causes, IRI("http://elsewhere.example/x"))
    assert assess(g, FAST).scores["availability"] == pytest.approx(2 / 3)


@pytest.mark.parametrize("seed", range(20))
def test_scores_in_unit_interval(seed):
    g = random_small_graph(random.Random(seed))
    report = assess(g, QualityConfig(repeats=1, queries=("C1", "R1 some C2")))
    assert all(0.0 <= report.scores[d] <= 1.0 for d in DIMENSIONS)


def test_report_rejects_out_of_range(fixed_clock):
    scores = {d: 0.5 for d in DIMENSIONS}
    scores["relevancy"] = 1.5
    with pytest.raises(ValueError):
        QualityReport(scores, {}, None)


def test_load_config_from_strings():
    cfg = load_config({"latency_budget_ms": "10", "trusted_sources": "PubMed, seed", "saturate": "no", "repeats": "4"})
    assert cfg.latency_budget_ms == 10.0
    assert cfg.trusted_sources == ("PubMed", "seed")
    assert cfg.saturate is False
    assert cfg.repeats == 4
