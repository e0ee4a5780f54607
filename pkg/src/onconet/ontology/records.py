"""Gene records, their triple expansion, and seed loading."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from ..rdf import IRI, Graph, Literal, Provenance, Triple, literal, load_file, local_name
from ..rdf.terms import ONO, XSD_INTEGER
from . import vocab as V

DEFAULT_SEED = Path(__file__).resolve().parent.parent / "data" / "seed"
DEFAULT_ALIASES = Path(__file__).resolve().parent.parent / "data" / "aliases.tsv"

_SYMBOL = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_\-.]*$")


@dataclass(frozen=True)
class Issue:
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.message}"


class RecordError(ValueError):
    """One or more GeneRecord / seed invariants are violated."""

    def __init__(self, issues: list[Issue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class CancerType:
    code: str
    label: str
    external_refs: frozenset = frozenset()
    tcga: bool = True

    @property
    def iri(self) -> IRI:
        return V.ONO[self.code]


@dataclass
class GeneRecord:
    symbol: str
    gene_type: set[str]
    cross_responsibility: set[str] = field(default_factory=set)
    significance: dict[str, str] = field(default_factory=dict)
    evidence_type: set[str] = field(default_factory=set)
    citations: int = 1
    external_refs: set[str] = field(default_factory=set)

    @property
    def iri(self) -> IRI:
        return IRI(ONO + self.symbol)

    def issues(self, known_codes: Optional[Iterable[str]] = None) -> list[Issue]:
        subject = self.iri.value if _SYMBOL.match(self.symbol) else self.symbol
        found = []
        if not _SYMBOL.match(self.symbol):
            found.append(Issue(subject, f"bad gene symbol {self.symbol!r}"))
        if not self.gene_type:
            found.append(Issue(subject, "gene_type is empty"))
        for t in sorted(self.gene_type):
            if t not in V.GENE_TYPES:
                found.append(Issue(subject, f"unknown gene type {t!r}"))
        codes = set(known_codes) if known_codes is not None else set(V.TCGA_CODES) | set(V.EXTENSION_CODES)
        for code in sorted(self.cross_responsibility):
            if code not in codes:
                found.append(Issue(subject, f"unknown cancer code {code!r}"))
        for code, level in sorted(self.significance.items()):
            if code not in self.cross_responsibility:
                found.append(Issue(subject, f"significance for {code} without responsibility"))
            if level not in V.SIGNIFICANCE_LEVELS:
                found.append(Issue(subject, f"unknown significance level {level!r}"))
        if not self.evidence_type:
            found.append(Issue(subject, "evidence_type is empty"))
        for e in sorted(self.evidence_type):
            if e not in V.EVIDENCE_SOURCES:
                found.append(Issue(subject, f"unknown evidence source {e!r}"))
        if not isinstance(self.citations, int) or self.citations < 1:
            found.append(Issue(subject, f"citations must be >= 1, got {self.citations!r}"))
        return found


def feature_iri(symbol: str, code: str) -> IRI:
    return IRI(f"{ONO}feature/{symbol}_{code}")


def _canonical_types(gene_type) -> list[IRI]:
    return sorted({V.GENE_TYPES[t] for t in gene_type}, key=lambda i: i.value)


def expand_record(record: GeneRecord) -> list[Triple]:
    """Expand a gene record into ONO triples.

    Gene level: ``rdf:type Biomarker``, the citation count, one ``rdf:type``
    per gene type, one ``crossResponsibility`` per cancer code, one
    ``evidenceType`` per source and one ``externalRef`` per link. Each
    (gene, cancer) pair gets a Feature node carrying type, gene, cancer,
    significance and one ``hasBiomarkerType`` per gene type, so a record with
    T types and C codes (all with significance) yields
    ``2 + T + C + C*(4 + T) + |evidence| + |refs|`` triples.
    """
    issues = record.issues()
    if issues:
        raise RecordError(issues)
    g = record.iri
    types = _canonical_types(record.gene_type)
    out = [
        Triple(g, V.type_, V.Biomarker),
        Triple(g, V.hasCitations, literal(int(record.citations))),
    ]
    out += [Triple(g, V.type_, t) for t in types]
    for code in sorted(record.cross_responsibility):
        cancer = IRI(ONO + code)
        f = feature_iri(record.symbol, code)
        out.append(Triple(g, V.crossResponsibility, cancer))
        out += [
            Triple(f, V.type_, V.Feature),
            Triple(f, V.hasGene, g),
            Triple(f, V.hasCancer, cancer),
        ]
        level = record.significance.get(code)
        if level is not None:
            out.append(Triple(f, V.hasSignificance, V.SIGNIFICANCE_LEVELS[level]))
        out += [Triple(f, V.hasBiomarkerType, t) for t in types]
    out += [Triple(g, V.evidenceType, V.EVIDENCE_SOURCES[e]) for e in sorted(record.evidence_type)]
    out += [Triple(g, V.externalRef, IRI(r)) for r in sorted(record.external_refs)]
    return out


_SIGNIFICANCE_PHRASES = (
    ("nearly significantly", "LOW"),
    ("highly significantly", "HIGH"),
    ("significantly", "MEDIUM"),
)


def significance_from_phrase(phrase: str) -> Optional[str]:
    """Map prose such as "highly significantly mutated" to a level."""
    text = " ".join(phrase.lower().split())
    for key, level in _SIGNIFICANCE_PHRASES:
        if key in text:
            return level
    return None


class Minter:
    """Fresh ``ono:`` instance IRIs that do not collide with a graph."""

    def __init__(self, graph: Optional[Graph] = None, stem: str = "f"):
        self.graph = graph
        self.stem = stem
        self._counter = itertools.count(1)

    def __call__(self) -> IRI:
        while True:
            iri = IRI(f"{ONO}{self.stem}{next(self._counter)}")
            if self.graph is None or not (self.graph.match(s=iri) or self.graph.match(o=iri)):
                return iri


def instance_axioms(gene: IRI, cls: IRI, mint: Minter, prop: IRI = V.hasGOAssociation) -> list[Triple]:
    """Annotate ``gene`` with an instance of an external class.

    ``hasGOAssociation(gene, f)`` plus ``rdf:type(f, cls)`` for a freshly
    minted ``f``; the external class itself is only referenced.
    """
    f = mint()
    return [Triple(gene, prop, f), Triple(f, V.type_, cls)]


# -- seed loading ----------------------------------------------------------

_ROSTER_PREDICATES = {V.geneType, V.highIn, V.mediumIn, V.lowIn}


def _code(iri) -> str:
    return local_name(iri) if isinstance(iri, IRI) else str(iri)


def records_from_roster(graph: Graph) -> tuple[list[GeneRecord], list[Triple]]:
    """Split roster triples into GeneRecords; return records and the triples they consumed."""
    records = []
    consumed = []
    for t in graph.match(p=V.type_, o=V.Biomarker):
        gene = t.subject
        own = graph.match(s=gene)
        if not any(x.predicate in _ROSTER_PREDICATES for x in own):
            continue
        rec = GeneRecord(symbol=local_name(gene), gene_type=set())
        for x in own:
            p, o = x.predicate, x.object
            if p == V.geneType:
                rec.gene_type.add("POTSF" if _code(o) == "POTFS" else _code(o))
            elif p == V.crossResponsibility:
                rec.cross_responsibility.add(_code(o))
            elif p in (V.highIn, V.mediumIn, V.lowIn):
                rec.significance[_code(o)] = local_name(p)[: -len("In")].upper()
            elif p == V.evidenceType:
                rec.evidence_type.add(_code(o))
            elif p == V.hasCitations:
                try:
                    rec.citations = int(o.lexical) if isinstance(o, Literal) else -1
                except ValueError:
                    rec.citations = -1
            elif p == V.externalRef:
                rec.external_refs.add(o.value)
            else:
                continue
            consumed.append(x)
        consumed.append(t)
        records.append(rec)
    return records, consumed


def _seed_files(path: Path) -> list[Path]:
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix in (".ttl", ".nt"))
        if not files:
            raise FileNotFoundError(f"no .ttl or .nt files in {path}")
        return files
    return [path]


def load_seed(
    path=DEFAULT_SEED,
    *,
    graph: Optional[Graph] = None,
    strict: bool = True,
    provenance: Optional[Provenance] = None,
) -> Graph:
    """Load seed files (a file or a directory of them) into an expanded ONO graph.

    Roster records are validated and expanded with :func:`expand_record`.
    With ``strict`` any invariant violation raises :class:`RecordError`;
    otherwise offending records are skipped and their issues appended to
    ``graph.ingest.errors``.
    """
    target = graph if graph is not None else Graph()
    prov = provenance or Provenance(source="seed", extractor="seed")
    raw = Graph()
    for f in _seed_files(Path(path)):
        part = load_file(f)
        for label, ns in part.prefixes.items():
            try:
                target.bind(label, ns)
            except ValueError:
                pass
        raw.update(part)
        raw.ingest.statements += part.ingest.statements
        raw.ingest.duplicates += part.ingest.duplicates

    records, consumed = records_from_roster(raw)
    known_codes = {
        local_name(t.subject)
        for t in raw
        if t.predicate == V.type_ and t.object in (V.Cancer, V.CancerExtension)
    }
    issues: list[Issue] = []
    expanded: list[Triple] = []
    for rec in records:
        found = rec.issues(known_codes or None)
        if found:
            issues.extend(found)
            continue
        expanded.extend(expand_record(rec))
    issues.extend(_cancer_issues(raw))
    if issues and strict:
        raise RecordError(issues)

    consumed_set = set(consumed)
    for t in sorted(raw, key=Triple.sort_key):
        if t not in consumed_set:
            target.insert(t, prov)
    for t in expanded:
        target.insert(t, prov)
    target.ingest.statements += raw.ingest.statements
    target.ingest.duplicates += raw.ingest.duplicates
    target.ingest.errors.extend(issues)
    return target


def _cancer_issues(graph: Graph) -> list[Issue]:
    found = []
    allowed = set(V.TCGA_CODES)
    for t in graph.match(p=V.type_, o=V.Cancer):
        code = local_name(t.subject)
        if code not in allowed:
            found.append(Issue(t.subject.value, f"{code!r} is not one of the 33 cancer codes"))
    for t in graph.match(p=V.type_, o=V.CancerExtension):
        code = local_name(t.subject)
        if code != code.upper():
            found.append(Issue(t.subject.value, "cancer codes are uppercase"))
    return found


def cancer_types(graph: Graph, include_extensions: bool = False) -> list[CancerType]:
    """Cancer instances of a loaded graph, TCGA codes first."""
    out = []
    classes = [(V.Cancer, True)] + ([(V.CancerExtension, False)] if include_extensions else [])
    for cls, tcga in classes:
        for t in graph.match(p=V.type_, o=cls):
            lbl = graph.value(t.subject, V.label)
            refs = frozenset(o.value for o in graph.objects(t.subject, V.externalRef) if isinstance(o, IRI))
            out.append(CancerType(local_name(t.subject), str(lbl) if lbl else "", refs, tcga))
    return out


def gene_record(graph: Graph, gene: IRI) -> GeneRecord:
    """Reassemble the GeneRecord of an expanded gene."""
    rec = GeneRecord(symbol=local_name(gene), gene_type=set())
    inverse_types = {v: k for k, v in V.GENE_TYPES.items() if k not in ("POTFS", "ProteinCoding")}
    inverse_sig = {v: k for k, v in V.SIGNIFICANCE_LEVELS.items()}
    inverse_ev = {v: k for k, v in V.EVIDENCE_SOURCES.items()}
    for t in graph.objects(gene, V.type_):
        if t in inverse_types:
            rec.gene_type.add(inverse_types[t])
    rec.cross_responsibility = {local_name(c) for c in graph.objects(gene, V.crossResponsibility)}
    for code in rec.cross_responsibility:
        level = graph.value(feature_iri(rec.symbol, code), V.hasSignificance)
        if level in inverse_sig:
            rec.significance[code] = inverse_sig[level]
    rec.evidence_type = {inverse_ev[e] for e in graph.objects(gene, V.evidenceType) if e in inverse_ev}
    cit = graph.value(gene, V.hasCitations)
    rec.citations = int(cit.lexical) if isinstance(cit, Literal) and cit.datatype == XSD_INTEGER else 0
    rec.external_refs = {r.value for r in graph.objects(gene, V.externalRef) if isinstance(r, IRI)}
    return rec
