"""ONO schema, seed loading, record expansion and gazetteer export."""

from . import vocab
from .gazetteer import CATEGORIES, Entry, Gazetteer, gazetteer, instances_of, is_class, load_aliases, subclasses
from .records import (
    DEFAULT_ALIASES,
    DEFAULT_SEED,
    CancerType,
    GeneRecord,
    Issue,
    Minter,
    RecordError,
    cancer_types,
    expand_record,
    feature_iri,
    gene_record,
    instance_axioms,
    load_seed,
    records_from_roster,
    significance_from_phrase,
)

__all__ = [
    "CATEGORIES",
    "CancerType",
    "DEFAULT_ALIASES",
    "DEFAULT_SEED",
    "Entry",
    "Gazetteer",
    "GeneRecord",
    "Issue",
    "Minter",
    "RecordError",
    "cancer_types",
    "expand_record",
    "feature_iri",
    "gazetteer",
    "gene_record",
    "instance_axioms",
    "instances_of",
    "is_class",
    "load_aliases",
    "load_seed",
    "records_from_roster",
    "significance_from_phrase",
    "subclasses",
    "vocab",
]
