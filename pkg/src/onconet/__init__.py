"""Cancer-biomarker knowledge graph toolkit."""

__version__ = "0.1.0"
