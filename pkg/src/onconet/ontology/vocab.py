"""ONO vocabulary terms."""

from ..rdf.terms import ONO_NS as ONO
from ..rdf.terms import OWL_NS as OWL
from ..rdf.terms import RDF_NS as RDF
from ..rdf.terms import RDFS_NS as RDFS
from ..rdf.terms import SKOS_NS as SKOS

# classes
Disease = ONO.Disease
Cancer = ONO.Cancer
CancerExtension = ONO.CancerExtension
Biomarker = ONO.Biomarker
Feature = ONO.Feature
BiomarkerType = ONO.BiomarkerType
Oncogene = ONO.Oncogene
ProteinCoding = ONO.ProteinCoding
POTSF = ONO.POTSF
Significance = ONO.Significance
HIGH = ONO.HIGH
MEDIUM = ONO.MEDIUM
LOW = ONO.LOW
EvidenceSource = ONO.EvidenceSource
PubMed = ONO.PubMed
MeSH = ONO.MeSH
CancerIndex = ONO.CancerIndex

# relations
causes = ONO.causes
hasType = ONO.hasType
hasEvidence = ONO.hasEvidence
isA = ONO.isA
crossResponsibility = ONO.crossResponsibility
hasSignificance = ONO.hasSignificance
hasGene = ONO.hasGene
hasCancer = ONO.hasCancer
hasBiomarkerType = ONO.hasBiomarkerType
evidenceType = ONO.evidenceType
hasCitations = ONO.hasCitations
externalRef = ONO.externalRef
hasGOAssociation = ONO.hasGOAssociation

# roster-only predicates, consumed by load_seed
geneType = ONO.geneType
highIn = ONO.highIn
mediumIn = ONO.mediumIn
lowIn = ONO.lowIn

# constraint declarations
allowedValue = ONO.allowedValue
requiresProperty = ONO.requiresProperty
minValue = ONO.minValue

type_ = RDF.type
subClassOf = RDFS.subClassOf
subPropertyOf = RDFS.subPropertyOf
domain = RDFS.domain
range_ = RDFS.range
label = RDFS.label
altLabel = SKOS.altLabel
disjointWith = OWL.disjointWith
FunctionalProperty = OWL.FunctionalProperty
ObjectProperty = OWL.ObjectProperty
DatatypeProperty = OWL.DatatypeProperty
Class = OWL.Class

TCGA_CODES = (
    "ACC", "BLCA", "BRCA", "CESC", "CHOL", "COAD", "DLBC", "ESCA", "GBM", "HNSC", "KICH",
    "KIRC", "KIRP", "LAML", "LGG", "LIHC", "LUAD", "LUSC", "MESO", "OV", "PAAD", "PCPG",
    "PRAD", "READ", "SARC", "SKCM", "STAD", "TGCT", "THCA", "THYM", "UCEC", "UCS", "UVM",
)
# Named for TP53 but outside the 33-code vocabulary; typed CancerExtension.
EXTENSION_CODES = ("MED",)

SIGNIFICANCE_LEVELS = {"HIGH": HIGH, "MEDIUM": MEDIUM, "LOW": LOW}
GENE_TYPES = {
    "Oncogene": Oncogene,
    "Protein-coding": ProteinCoding,
    "ProteinCoding": ProteinCoding,
    "POTSF": POTSF,
    "POTFS": POTSF,
}
EVIDENCE_SOURCES = {"PubMed": PubMed, "MeSH": MeSH, "CancerIndex": CancerIndex}
