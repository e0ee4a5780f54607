import io
import random
from pathlib import Path

import pytest

from onconet import dlq
from onconet.dlq import And, Atom, DLQError, Only, Some, Value
from onconet.ontology import vocab as V
from onconet.rdf import IRI, Graph, load_file
from onconet.rdf.terms import RDF_TYPE
from onconet.reasoner import saturate
from oracles import EX, brute_force_query, random_expression, random_small_graph

ONO = V.ONO
FIXTURE = Path(__file__).parent / "fixtures" / "dlq_fixture.ttl"
POTSF_QUERY = "Biomarker and causes some BRCA and isA only POTSF"


@pytest.fixture(scope="module")
def fixture_graph():
    return saturate(load_file(FIXTURE)).graph


# -- parsing -------------------------------------------------------------------


def test_parse_potsf_query():
    assert dlq.parse(POTSF_QUERY) == And((Atom(V.Biomarker), Some(V.causes, ONO.BRCA), Only(V.isA, V.POTSF)))


def test_parse_single_atom():
    assert dlq.parse("Biomarker") == Atom(V.Biomarker)


def test_parse_prefixed_bracketed_and_nested():
    e = dlq.parse("obo:DOID_1612 and <http://x.example/r> value ono:TP53 and causes some (Cancer and hasGene some Biomarker)")
    assert e.children[0] == Atom(IRI("http://purl.obolibrary.org/obo/DOID_1612"))
    assert e.children[1] == Value(IRI("http://x.example/r"), ONO.TP53)
    assert e.children[2] == Some(V.causes, And((Atom(V.Cancer), Some(V.hasGene, V.Biomarker))))


def test_keywords_are_case_insensitive():
    assert dlq.parse("Biomarker AND causes SOME BRCA") == dlq.parse("Biomarker and causes some BRCA")


@pytest.mark.parametrize(
    "text, position, needle",
    [
        ("causes some", 7, "dangling keyword 'some'"),
        ("", 0, "empty query"),
        ("Biomarker Cancer", 10, "expected 'and'"),
        ("zz:Thing", 0, "unknown prefix"),
        ("causes some (Cancer", 12, "unbalanced"),
        ("Biomarker and", 10, "dangling keyword 'and'"),
        ("some BRCA", 0, "keyword 'some'"),
    ],
)
def test_parse_errors_report_position(text, position, needle):
    with pytest.raises(DLQError) as err:
        dlq.parse(text)
    assert err.value.position == position
    assert needle in str(err.value)


def test_to_text_round_trips():
    e = dlq.parse(POTSF_QUERY)
    assert dlq.parse(dlq.to_text(e, Graph())) == e


# -- evaluation ----------------------------------------------------------------


def test_potsf_query_on_fixture(fixture_graph):
    result = dlq.query(POTSF_QUERY, fixture_graph)
    assert result.individuals == (ONO.TP53,)
    assert result.bindings_count == 1
    assert result.vacuous_only == 0


def test_atom_on_seed_returns_all_genes(seed_graph):
    sat = saturate(seed_graph).graph
    assert set(dlq.query("Biomarker", sat).individuals) == sat.subjects(RDF_TYPE, V.Biomarker)


def test_some_on_toy_graph_matches_scan():
    g = Graph()
    genes = [ONO.g1, ONO.g2, ONO.g3]
    for gene in genes:
        g.add(gene, RDF_TYPE, V.Biomarker)
    g.add(ONO.g1, V.causes, ONO.BRCA)
    g.add(ONO.g2, V.causes, ONO.BRCA)
    g.add(ONO.g3, V.causes, ONO.OV)
    expr = Some(V.causes, ONO.BRCA)
    assert set(dlq.evaluate(expr, g).individuals) == {ONO.g1, ONO.g2} == brute_force_query(g, expr)


def test_vacuous_only_is_counted():
    g = Graph()
    for gene in (ONO.g1, ONO.g2):
        g.add(gene, RDF_TYPE, V.Biomarker)
        g.add(gene, V.causes, ONO.BRCA)
    g.add(ONO.g1, V.isA, V.POTSF)  # g2 has no isA successor at all
    result = dlq.query(POTSF_QUERY, g)
    assert set(result.individuals) == {ONO.g1, ONO.g2}
    assert result.vacuous_only == 1


def test_unknown_names_warn_and_yield_empty(fixture_graph):
    result = dlq.query("Biomarker and causes some Nonexistent", fixture_graph)
    assert result.individuals == ()
    assert any("Nonexistent" in w for w in result.warnings)
    result = dlq.query("Biomarker and madeUpRole some BRCA", fixture_graph)
    assert result.individuals == () and any("madeUpRole" in w for w in result.warnings)


def test_value_restriction(fixture_graph):
    assert dlq.query("causes value BRCA", fixture_graph).individuals == (ONO.G3, ONO.TP53)


def test_result_format(fixture_graph):
    text = dlq.query(POTSF_QUERY, fixture_graph).format(fixture_graph)
    first, last = text.splitlines()
    assert first == "ono:TP53"
    assert last.startswith("count=1 elapsed_ms=") and last.endswith("vacuous_only=0")


@pytest.mark.parametrize("seed", range(20))
def test_evaluate_matches_brute_force(seed):
    rng = random.Random(seed)
    g = random_small_graph(rng)
    for _ in range(5):
        expr = random_expression(rng)
        assert set(dlq.evaluate(expr, g).individuals) == brute_force_query(g, expr), dlq.to_text(expr)


def test_brute_force_oracle_vacuous_member():
    g = Graph()
    g.add(IRI(f"{EX}i0"), RDF_TYPE, IRI(f"{EX}C0"))
    assert brute_force_query(g, Only(IRI(f"{EX}r0"), IRI(f"{EX}C1"))) == {IRI(f"{EX}i0"), IRI(f"{EX}C0")}


# -- REPL ----------------------------------------------------------------------


def run_repl(graph, text: str):
    out = io.StringIO()
    code = dlq.repl(graph, io.StringIO(text), out)
    return code, out.getvalue()


def test_repl_answers_potsf_query(fixture_graph):
    code, out = run_repl(fixture_graph, POTSF_QUERY + "\n:quit\n")
    assert code == 0
    assert out.splitlines()[0] == "ono:TP53"


def test_repl_quit_exits_zero(fixture_graph):
    assert run_repl(fixture_graph, ":quit\n") == (0, "")


def test_repl_survives_malformed_query(fixture_graph):
    code, out = run_repl(fixture_graph, "causes some\n" + POTSF_QUERY + "\n")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("error: dangling keyword 'some' at position 7")
    assert "ono:TP53" in lines


def test_repl_explain(seed_graph):
    code, out = run_repl(seed_graph, "Cancer\n:explain MED\n:bogus\n")
    assert code == 0
    assert "ono:MED rdf:type ono:Cancer  [rdfs-type-propagation]" in out
    assert "asserted(seed)" in out
    assert "error: unknown command :bogus" in out
