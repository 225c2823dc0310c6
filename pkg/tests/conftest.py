import pytest

from fluid.definition import parse_expression
from fluid.engine import Engine
from fluid.graph import RDF_TYPE, IndexedGraph, iri, literal
from fluid.ingest import load_text

EX = "http://ex.org/"

PUBLICATION_NT = f"""\
<{EX}v1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <{EX}Proceedings> .
<{EX}v1> <{EX}author> <{EX}v2> .
<{EX}v1> <{EX}title> "Graph Database" .
<{EX}v2> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <{EX}Person> .
<{EX}v2> <{EX}name> "Max Power" .
"""


def ex(name: str):
    return iri(EX + name)


def graph_of(*triples) -> IndexedGraph:
    """Build a graph from (s, p, o) tuples; plain strings become ex: IRIs, 'a' is rdf:type."""
    g = IndexedGraph()
    for s, p, o in triples:
        conv = lambda x: ex(x) if isinstance(x, str) else x
        g.add(conv(s), RDF_TYPE if p == "a" else conv(p), conv(o))
    return g


def publication_graph() -> IndexedGraph:
    return load_text(PUBLICATION_NT)


def sameas_graph() -> IndexedGraph:
    return graph_of(
        ("v1", "a", "Book"),
        ("v2", "a", "Proceedings"),
        ("v3", "a", "Book"),
        ("v3", "a", "Proceedings"),
        ("v1", iri("http://www.w3.org/2002/07/owl#sameAs"), "v2"),
    )


def copperfield_graph() -> IndexedGraph:
    dc, cd = literal("David Copperfield"), literal("Charles Dickens")
    return graph_of(
        ("novel", "author", cd),
        ("novel", "title", dc),
        ("biography", "author", dc),
        ("biography", "title", cd),
    )


def partition(g, text: str):
    return Engine(g).evaluate(parse_expression(text), with_structures=False)


def blocks(g, text: str) -> set:
    return partition(g, text).blocks()


@pytest.fixture
def pub():
    return publication_graph()


@pytest.fixture
def sameas_fixture():
    return sameas_graph()
