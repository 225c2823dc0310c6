import pytest

from fluid.graph import RDF_TYPE, GraphError, IndexedGraph, Quad, blank, iri, literal, term_digest

from conftest import ex, publication_graph


class TestIndexes:
    def test_publication_graph_sizes(self):
        g = publication_graph()
        assert len(g) == 5
        assert set(g.out_index) == {ex("v1"), ex("v2")}

    def test_type_sets(self):
        g = publication_graph()
        assert g.type_set(ex("v1")) == {ex("Proceedings")}
        assert g.type_set(ex("v2")) == {ex("Person")}

    def test_property_sets(self):
        g = publication_graph()
        assert g.property_set(ex("v1")) == {ex("author"), ex("title")}
        assert g.property_set(ex("v2"), "in") == {ex("author")}

    def test_neighbors(self):
        g = publication_graph()
        assert g.neighbors(ex("v1")) == {ex("Proceedings"), ex("v2"), literal("Graph Database")}
        assert g.neighbors(ex("v2"), "in") == {ex("v1")}

    def test_duplicates_collapse(self):
        g = IndexedGraph()
        g.add(ex("a"), ex("p"), ex("b"))
        g.add(ex("a"), ex("p"), ex("b"))
        assert len(g) == 1

    def test_same_triple_in_two_contexts(self):
        g = IndexedGraph()
        g.add(ex("a"), ex("p"), ex("b"), ex("d1"))
        g.add(ex("a"), ex("p"), ex("b"), ex("d2"))
        assert len(g) == 2
        assert len(g.triples()) == 1
        assert g.contexts() == {ex("d1"), ex("d2")}

    def test_literal_subject_rejected(self):
        with pytest.raises(GraphError):
            IndexedGraph().add_quad(Quad(literal("x"), ex("p"), ex("o"), None))

    def test_blank_predicate_rejected(self):
        with pytest.raises(GraphError):
            IndexedGraph().add(ex("s"), blank("b"), ex("o"))

    def test_vertices_exclude_predicates_only(self):
        g = publication_graph()
        assert ex("author") not in g.vertices()
        assert RDF_TYPE in g.predicates()
        assert literal("Max Power") in g.vertices()


class TestTerms:
    def test_digest_distinguishes_kinds(self):
        assert term_digest(iri("x")) != term_digest(literal("x"))
        assert term_digest(blank("x")) != term_digest(iri("x"))

    def test_digest_distinguishes_datatype_and_lang(self):
        a = literal("1", datatype="http://www.w3.org/2001/XMLSchema#integer")
        b = literal("1")
        c = literal("1", lang="en")
        assert len({term_digest(a), term_digest(b), term_digest(c)}) == 3

    def test_n3(self):
        assert ex("v1").n3() == "<http://ex.org/v1>"
        assert literal('a"b').n3() == '"a\\"b"'
