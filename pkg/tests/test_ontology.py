from pathlib import Path

import pytest

from onconet.ontology import (
    DEFAULT_ALIASES,
    DEFAULT_SEED,
    GeneRecord,
    Minter,
    RecordError,
    cancer_types,
    expand_record,
    feature_iri,
    gazetteer,
    gene_record,
    instance_axioms,
    instances_of,
    load_seed,
    significance_from_phrase,
)
from onconet.ontology import vocab as V
from onconet.rdf import IRI, Triple, literal
from oracles import POTSF_ENUMERATION

ONO = V.ONO
TP53 = ONO.TP53


# -- seed ----------------------------------------------------------------------


def test_seed_has_33_cancers_plus_extension(seed_graph):
    assert len(cancer_types(seed_graph)) == 33
    assert {c.code for c in cancer_types(seed_graph)} == set(V.TCGA_CODES)
    assert len(cancer_types(seed_graph, include_extensions=True)) == 34


def test_tp53_responsibilities(seed_graph):
    codes = {ONO[c] for c in ("BRCA", "OV", "MED", "PRAD")}
    assert seed_graph.objects(TP53, V.crossResponsibility) == codes


def test_tp53_significance(seed_graph):
    expected = {"BRCA": V.HIGH, "OV": V.HIGH, "PRAD": V.MEDIUM, "MED": V.LOW}
    for code, level in expected.items():
        assert seed_graph.objects(feature_iri("TP53", code), V.hasSignificance) == {level}


def test_potsf_typing(seed_graph):
    typed = seed_graph.subjects(V.type_, V.POTSF)
    assert {TP53, ONO.FAS} <= typed
    genes = {g for g in instances_of(seed_graph, V.Biomarker)}
    for symbol in POTSF_ENUMERATION:
        if ONO[symbol] in genes:
            assert ONO[symbol] in typed, symbol


def test_seed_genes_round_trip_through_records(seed_graph):
    for gene in instances_of(seed_graph, V.Biomarker):
        rec = gene_record(seed_graph, gene)
        assert set(expand_record(rec)) <= seed_graph.triples()


def _write_seed(tmp_path: Path, citations: str) -> Path:
    (tmp_path / "schema.ttl").write_text((DEFAULT_SEED / "schema.ttl").read_text(encoding="utf-8"), encoding="utf-8")
    (tmp_path / "cancers.ttl").write_text((DEFAULT_SEED / "cancers.ttl").read_text(encoding="utf-8"), encoding="utf-8")
    (tmp_path / "genes.ttl").write_text(
        "@prefix ono: <http://onconet.example/ono#> .\n"
        "ono:ZZZ1 a ono:Biomarker ; ono:geneType ono:Oncogene ; ono:crossResponsibility ono:BRCA ;\n"
        f"    ono:highIn ono:BRCA ; ono:evidenceType ono:PubMed ; ono:hasCitations {citations} .\n",
        encoding="utf-8",
    )
    return tmp_path


def test_seed_with_zero_citations_is_rejected(tmp_path):
    with pytest.raises(RecordError) as err:
        load_seed(_write_seed(tmp_path, "0"))
    assert "citations" in str(err.value)
    assert err.value.issues[0].subject == ONO.ZZZ1.value


def test_lenient_seed_load_skips_bad_record(tmp_path):
    g = load_seed(_write_seed(tmp_path, "0"), strict=False)
    assert not g.match(s=ONO.ZZZ1)
    assert g.ingest.errors


# -- records -------------------------------------------------------------------


def test_tp53_record_has_feature_significance():
    rec = GeneRecord("TP53", {"POTSF"}, {"BRCA"}, {"BRCA": "HIGH"}, {"PubMed"})
    assert Triple(feature_iri("TP53", "BRCA"), V.hasSignificance, V.HIGH) in expand_record(rec)
    assert feature_iri("TP53", "BRCA").value == "http://onconet.example/ono#feature/TP53_BRCA"


def test_record_without_responsibility_has_no_features():
    triples = expand_record(GeneRecord("ABC1", {"Oncogene"}, evidence_type={"PubMed"}))
    assert not [t for t in triples if t.object == V.Feature]
    assert {t.predicate for t in triples} == {V.type_, V.hasCitations, V.evidenceType}


def test_expansion_matches_hand_expanded_fixture():
    rec = GeneRecord(
        "ABC1",
        {"Oncogene", "POTSF"},
        {"BRCA", "OV"},
        {"BRCA": "HIGH", "OV": "LOW"},
        {"PubMed"},
        3,
        {"http://identifiers.org/ncbigene/1"},
    )
    g, fb, fo = ONO.ABC1, feature_iri("ABC1", "BRCA"), feature_iri("ABC1", "OV")
    expected = {
        Triple(g, V.type_, V.Biomarker),
        Triple(g, V.hasCitations, literal(3)),
        Triple(g, V.type_, V.Oncogene),
        Triple(g, V.type_, V.POTSF),
        Triple(g, V.crossResponsibility, ONO.BRCA),
        Triple(g, V.crossResponsibility, ONO.OV),
        Triple(fb, V.type_, V.Feature),
        Triple(fb, V.hasGene, g),
        Triple(fb, V.hasCancer, ONO.BRCA),
        Triple(fb, V.hasSignificance, V.HIGH),
        Triple(fb, V.hasBiomarkerType, V.Oncogene),
        Triple(fb, V.hasBiomarkerType, V.POTSF),
        Triple(fo, V.type_, V.Feature),
        Triple(fo, V.hasGene, g),
        Triple(fo, V.hasCancer, ONO.OV),
        Triple(fo, V.hasSignificance, V.LOW),
        Triple(fo, V.hasBiomarkerType, V.Oncogene),
        Triple(fo, V.hasBiomarkerType, V.POTSF),
        Triple(g, V.evidenceType, V.PubMed),
        Triple(g, V.externalRef, IRI("http://identifiers.org/ncbigene/1")),
    }
    triples = expand_record(rec)
    assert len(triples) == len(set(triples)) == 20
    assert set(triples) == expected
    t, c = len(rec.gene_type), len(rec.cross_responsibility)
    assert len(triples) == 2 + t + c + c * (4 + t) + len(rec.evidence_type) + len(rec.external_refs)


def test_potfs_spelling_is_accepted():
    (typed,) = [t for t in expand_record(GeneRecord("X1", {"POTFS"}, evidence_type={"PubMed"})) if t.object == V.POTSF]
    assert typed.subject == ONO.X1


@pytest.mark.parametrize(
    "rec, needle",
    [
        (GeneRecord("X1", set(), evidence_type={"PubMed"}), "gene_type"),
        (GeneRecord("X1", {"Oncogene"}, {"NOPE"}, evidence_type={"PubMed"}), "cancer code"),
        (GeneRecord("X1", {"Oncogene"}, {"BRCA"}, {"OV": "HIGH"}, {"PubMed"}), "without responsibility"),
        (GeneRecord("X1", {"Oncogene"}, {"BRCA"}, {"BRCA": "SEVERE"}, {"PubMed"}), "significance level"),
        (GeneRecord("X1", {"Oncogene"}), "evidence_type"),
        (GeneRecord("X1", {"Oncogene"}, evidence_type={"PubMed"}, citations=0), "citations"),
        (GeneRecord("bad symbol", {"Oncogene"}, evidence_type={"PubMed"}), "symbol"),
    ],
)
def test_record_invariants(rec, needle):
    with pytest.raises(RecordError) as err:
        expand_record(rec)
    assert needle in str(err.value)


@pytest.mark.parametrize(
    "phrase, level",
    [
        ("highly significantly mutated", "HIGH"),
        ("significantly mutated", "MEDIUM"),
        ("nearly significantly mutated", "LOW"),
        ("mutated", None),
    ],
)
def test_significance_from_prose(phrase, level):
    assert significance_from_phrase(phrase) == level


# -- instance axioms -------------------------------------------------------------


def test_go_association_pattern():
    go = IRI("http://purl.obolibrary.org/obo/GO_0000060")
    mint = Minter()
    first = instance_axioms(ONO.AKT1, go, mint)
    f = first[0].object
    assert first == [Triple(ONO.AKT1, V.hasGOAssociation, f), Triple(f, V.type_, go)]
    second = instance_axioms(ONO.AKT1, go, mint)
    assert second[0].object != f


def test_minter_avoids_existing_nodes(seed_graph):
    g = seed_graph.copy()
    g.add(ONO.f1, V.label, literal("taken"))
    assert Minter(g)() == ONO.f2


# -- gazetteer -------------------------------------------------------------------


def test_gazetteer_symbols_and_labels(seed_graph):
    gz = gazetteer(seed_graph, DEFAULT_ALIASES)
    (tp53,) = gz.lookup("TP53")
    assert (tp53.iri, tp53.category) == (TP53, "Gene")
    assert gz.iris_for("breast cancer") == {ONO.BRCA}
    assert gz.iris_for("BRCA") == {ONO.BRCA}
    assert gz.iris_for("tp53") == set()  # gene symbols are case-sensitive


def test_alias_file_entries(seed_graph):
    gz = gazetteer(seed_graph, DEFAULT_ALIASES)
    entries = {(e.iri, e.category, e.prior) for e in gz.lookup("Li-Fraumeni syndrome")}
    assert entries == {(TP53, "Gene", 0.6), (ONO.LiFraumeniSyndrome, "Disease", 0.4)}
    assert gz.iris_for("p53") == {TP53}


def test_default_priors_split_evenly(seed_graph):
    gz = gazetteer(seed_graph)
    for surface in gz.surfaces():
        entries = gz.lookup(surface)
        iris = {e.iri for e in entries}
        assert sum(max(e.prior for e in entries if e.iri == i) for i in iris) == pytest.approx(1.0)
