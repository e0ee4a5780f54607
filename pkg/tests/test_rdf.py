import random
from pathlib import Path

import pytest
import rdflib
from hypothesis import given, settings
from hypothesis import strategies as st
from rdflib.compare import isomorphic

from onconet.ontology import DEFAULT_SEED
from onconet.ontology import vocab as V
from onconet.rdf import (
    IRI,
    BNode,
    Graph,
    Literal,
    ParseError,
    Provenance,
    StructuralError,
    Triple,
    UnsupportedConstruct,
    literal,
    parse_ntriples,
    parse_turtle_subset,
    serialize_ntriples,
)
from onconet.rdf.terms import XSD_INTEGER, XSD_STRING

FIXTURES = Path(__file__).parent / "fixtures"
TP53, BRCA = V.ONO.TP53, V.ONO.BRCA


rdflib.NORMALIZE_LITERALS = False  # keep lexical forms such as "+3" as written
XSD_STRING_REF = rdflib.URIRef(XSD_STRING)


def _norm(term):
    """Term-level normal form: lowercase language tags, plain strings typed xsd:string."""
    if isinstance(term, rdflib.Literal):
        if term.language:
            return rdflib.Literal(str(term), lang=term.language.lower())
        return rdflib.Literal(str(term), datatype=term.datatype or XSD_STRING_REF)
    return term


def normalized(g: rdflib.Graph) -> rdflib.Graph:
    out = rdflib.Graph()
    for t in g:
        out.add(tuple(_norm(x) for x in t))
    return out


def as_rdflib(graph: Graph) -> rdflib.Graph:
    """Our graph, read back by the independent parser, in normal form."""
    return normalized(rdflib.Graph().parse(data=serialize_ntriples(graph), format="nt"))


def oracle_parse(text: str, fmt: str) -> rdflib.Graph:
    return normalized(rdflib.Graph().parse(data=text, format=fmt))


# -- terms and graph -----------------------------------------------------------


def test_insert_is_set_semantics():
    g = Graph()
    assert g.insert(Triple(TP53, V.causes, BRCA)) is True
    assert len(g) == 1
    assert g.insert(Triple(TP53, V.causes, BRCA)) is False
    assert len(g) == 1


def test_literal_subject_is_structural_error():
    with pytest.raises(StructuralError):
        Graph().insert(Triple(Literal("x"), V.causes, BRCA))


@pytest.mark.parametrize("bad", ["relative/iri", "", "http://a b", "no-scheme"])
def test_relative_or_malformed_iri_rejected(bad):
    with pytest.raises(StructuralError):
        IRI(bad)


def test_literal_defaults_and_language_normalization():
    assert Literal("x").datatype == XSD_STRING
    tagged = Literal("x", language="EN-gb")
    assert tagged.language == "en-gb"
    assert literal(3) == Literal("3", XSD_INTEGER)
    with pytest.raises(StructuralError):
        Literal("x", language="not a tag")


def test_first_provenance_wins():
    g = Graph()
    t = Triple(TP53, V.causes, BRCA)
    g.insert(t, Provenance("doc1", "lexicon"))
    g.insert(t, Provenance("doc2", "lexicon"))
    assert g.provenance(t).source == "doc1"


def test_match_all_tp53_triples(seed_graph):
    found = seed_graph.match(s=TP53)
    assert Triple(TP53, V.crossResponsibility, BRCA) in found
    assert found and all(t.subject == TP53 for t in found)
    assert set(found) == {t for t in seed_graph if t.subject == TP53}


def test_match_on_empty_graph():
    assert Graph().match() == []


def test_pattern_matching_agrees_with_linear_scan(seed_graph):
    rng = random.Random(3)
    triples = list(seed_graph)
    for _ in range(200):
        t = rng.choice(triples)
        s, p, o = (x if rng.random() < 0.5 else None for x in t)
        expected = {x for x in triples if (s is None or x.subject == s) and (p is None or x.predicate == p) and (o is None or x.object == o)}
        assert set(seed_graph.match(s, p, o)) == expected


def test_brca_causing_genes_match_scan(seed_graph):
    scan = {t.subject for t in seed_graph if t.predicate == V.crossResponsibility and t.object == BRCA}
    assert seed_graph.subjects(V.crossResponsibility, BRCA) == scan
    assert TP53 in scan


def test_remove_keeps_indexes_consistent():
    g = Graph([Triple(TP53, V.causes, BRCA), Triple(TP53, V.causes, V.ONO.OV)])
    assert g.remove(Triple(TP53, V.causes, BRCA))
    assert g.match(o=BRCA) == []
    assert g.objects(TP53, V.causes) == {V.ONO.OV}
    assert not g.remove(Triple(TP53, V.causes, BRCA))


def test_read_only_prefixes_cannot_be_rebound():
    g = Graph()
    with pytest.raises(ValueError):
        g.bind("obo", "http://elsewhere.example/")
    g.bind("ex", "http://example.org/")
    assert g.expand("ex:a") == IRI("http://example.org/a")
    assert g.compact(IRI("http://example.org/a")) == "ex:a"


# -- N-Triples -----------------------------------------------------------------


def test_parse_single_literal_line():
    g = parse_ntriples('<http://a> <http://b> "x" .')
    (t,) = g
    assert t.object == Literal("x") and t.object.datatype == XSD_STRING


def test_empty_input_and_empty_graph():
    assert len(parse_ntriples("")) == 0
    assert serialize_ntriples(Graph()) == ""


def test_fifty_line_fixture_matches_independent_parser():
    text = (FIXTURES / "sample50.nt").read_text(encoding="utf-8")
    assert len(text.splitlines()) == 50
    ours = parse_ntriples(text)
    oracle = oracle_parse(text, "nt")
    assert len(ours) == len(oracle) == 45
    assert isomorphic(as_rdflib(ours), oracle)
    assert ours.ingest.statements == 46 and ours.ingest.duplicates == 1


def test_fifty_line_fixture_hand_checked_terms():
    g = parse_ntriples((FIXTURES / "sample50.nt").read_text(encoding="utf-8"))
    notes = {t.object for t in g.match(s=TP53, p=V.ONO.note)}
    assert Literal("spaced\ttab") in notes
    assert Literal("esc é\U0001F9EC") in notes
    assert Literal('"quoted"\r\n') in notes
    assert Literal("x", language="en-gb") in notes
    assert Literal("x") in notes
    assert Literal("x", "http://www.w3.org/2001/XMLSchema#token") in notes
    assert Triple(BNode("b0"), V.hasGene, TP53) in g


def test_fifty_line_fixture_round_trip():
    g = parse_ntriples((FIXTURES / "sample50.nt").read_text(encoding="utf-8"))
    again = parse_ntriples(serialize_ntriples(g))
    assert again.triples() == g.triples()


def test_serialization_ignores_insertion_order(seed_graph):
    triples = list(seed_graph)
    a, b = Graph(), Graph()
    for t in triples:
        a.insert(t)
    for t in reversed(triples):
        b.insert(t)
    assert serialize_ntriples(a) == serialize_ntriples(b)


def test_serialized_escapes_are_readable_by_rdflib():
    g = Graph([Triple(TP53, V.label, Literal('line\nbreak "q" \\ tab\t é'))])
    oracle = rdflib.Graph().parse(data=serialize_ntriples(g), format="nt")
    (o,) = list(oracle.objects())
    assert str(o) == 'line\nbreak "q" \\ tab\t é'


@pytest.mark.parametrize(
    "line",
    [
        "<http://a> <http://b> <http://c>",  # no dot
        '"x" <http://b> <http://c> .',  # literal subject
        "<http://a> _:b <http://c> .",  # blank predicate
        "<rel> <http://b> <http://c> .",  # relative IRI
        '<http://a> <http://b> "unterminated .',
    ],
)
def test_strict_mode_rejects_bad_lines_with_line_number(line):
    with pytest.raises(ParseError) as err:
        parse_ntriples("<http://a> <http://b> <http://c> .\n" + line)
    assert err.value.line == 2


def test_lenient_mode_collects_errors():
    g = parse_ntriples("<http://a> <http://b> <http://c> .\nnonsense\n", strict=False)
    assert len(g) == 1
    assert [e.line for e in g.ingest.errors] == [2]


# -- Turtle subset ---------------------------------------------------------------


def test_turtle_a_expansion():
    g = parse_turtle_subset("@prefix ono: <http://onconet.example/ono#> . ono:TP53 a ono:Biomarker .")
    assert g.triples() == {Triple(TP53, V.type_, V.Biomarker)}


def test_turtle_undefined_prefix_named_in_error():
    with pytest.raises(ParseError) as err:
        parse_turtle_subset("zz:TP53 a zz:Biomarker .")
    assert "zz" in str(err.value)
    assert err.value.line == 1


@pytest.mark.parametrize("text", ["<http://a> <http://b> ( 1 2 ) .", "<http://a> <http://b> [ <http://c> 1 ] .", "@base <http://a/> ."])
def test_turtle_unsupported_constructs(text):
    with pytest.raises(UnsupportedConstruct) as err:
        parse_turtle_subset(text)
    assert "unsupported construct" in str(err.value)


def test_turtle_twin_matches_independent_parser():
    ttl = (FIXTURES / "twin.ttl").read_text(encoding="utf-8")
    nt = (FIXTURES / "twin.nt").read_text(encoding="utf-8")
    ours = parse_turtle_subset(ttl)
    assert isomorphic(as_rdflib(ours), oracle_parse(ttl, "turtle"))
    assert isomorphic(as_rdflib(ours), oracle_parse(nt, "nt"))
    assert isomorphic(as_rdflib(ours), as_rdflib(parse_ntriples(nt)))


def test_seed_schema_equals_its_ntriples_twin():
    ours = parse_turtle_subset((DEFAULT_SEED / "schema.ttl").read_text(encoding="utf-8"))
    twin = parse_ntriples((FIXTURES / "schema.nt").read_text(encoding="utf-8"))
    assert ours.triples() == twin.triples()


@pytest.mark.parametrize("name", ["schema.ttl", "cancers.ttl", "biomarkers.ttl"])
def test_seed_files_agree_with_rdflib(name):
    text = (DEFAULT_SEED / name).read_text(encoding="utf-8")
    ours = parse_turtle_subset(text)
    oracle = oracle_parse(text, "turtle")
    assert isomorphic(as_rdflib(ours), oracle)


def test_turtle_numbers_keep_their_lexical_form():
    g = parse_turtle_subset("<http://a> <http://b> +3 , 1.5e3 , 2.50 , true .")
    objs = {t.object for t in g}
    assert Literal("+3", XSD_INTEGER) in objs
    assert Literal("1.5e3", "http://www.w3.org/2001/XMLSchema#double") in objs
    assert Literal("2.50", "http://www.w3.org/2001/XMLSchema#decimal") in objs
    assert Literal("true", "http://www.w3.org/2001/XMLSchema#boolean") in objs


# -- property-based ---------------------------------------------------------------------

_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=40)
_lang = st.from_regex(r"[a-zA-Z]{1,8}(-[a-zA-Z0-9]{1,8}){0,2}", fullmatch=True)


@settings(max_examples=200, deadline=None)
@given(lexical=_text, lang=st.one_of(st.none(), _lang))
def test_any_literal_round_trips(lexical, lang):
    lit = Literal(lexical, language=lang)
    g = Graph([Triple(IRI("http://example.org/s"), IRI("http://example.org/p"), lit)])
    text = serialize_ntriples(g)
    assert text.count("\n") == 1
    assert parse_ntriples(text).triples() == g.triples()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 3), st.integers(0, 5)), max_size=30))
def test_serialization_ignores_insertion_order(edges):
    node = [IRI(f"http://example.org/n{i}") for i in range(6)]
    pred = [IRI(f"http://example.org/p{i}") for i in range(4)]
    triples = [Triple(node[s], pred[p], node[o]) for s, p, o in edges]
    assert serialize_ntriples(Graph(triples)) == serialize_ntriples(Graph(list(reversed(triples))))
