"""Semantic structural graph summaries of RDF graphs."""

from .definition import SummaryDefinition, format_definition, parse_definition, validate_definition
from .engine import Engine, Partition, evaluate
from .graph import IndexedGraph, Quad, Term, iri, literal
from .ingest import load_graph, load_text
from .oracle import naive_partition
from .presets import catalog, preset
from .rdfs import inference_stats, materialize
from .summarizer import SummaryGraph, summarize

__version__ = "0.1.0"

__all__ = [
    "Engine",
    "IndexedGraph",
    "Partition",
    "Quad",
    "SummaryDefinition",
    "SummaryGraph",
    "Term",
    "catalog",
    "evaluate",
    "format_definition",
    "inference_stats",
    "iri",
    "literal",
    "load_graph",
    "load_text",
    "materialize",
    "naive_partition",
    "parse_definition",
    "preset",
    "summarize",
    "validate_definition",
]
