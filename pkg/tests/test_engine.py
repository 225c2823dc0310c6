import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluid.definition import Complex, ExtUnion, Ident, Intersect, Simple, Taut, parse_expression
from fluid.engine import Engine, Partition
from fluid.graph import RDF_TYPE, literal
from fluid.oracle import candidate_domain
from fluid.synthetic import random_ast, random_graph

from conftest import blocks, copperfield_graph, ex, publication_graph, graph_of, partition

SEEDS = st.integers(0, 10**6)


def structures(g, text):
    p = Engine(g).evaluate(parse_expression(text))
    return {v: p.classes[c] for v, c in p.assignment.items()}


class TestPublicationGraph:
    @pytest.mark.parametrize("text", ["POC", "PC", "OC"])
    def test_two_classes(self, pub, text):
        assert blocks(pub, text) == {frozenset({ex("v1")}), frozenset({ex("v2")})}

    def test_pc_structures(self, pub):
        st_ = structures(pub, "PC")
        assert {p for _, p, _ in st_[ex("v1")].items} == {RDF_TYPE, ex("author"), ex("title")}
        assert {p for _, p, _ in st_[ex("v2")].items} == {RDF_TYPE, ex("name")}
        assert all(o is None for _, _, o in st_[ex("v1")].items)

    def test_oc_structures(self, pub):
        st_ = structures(pub, "OC")
        assert {o for _, _, o in st_[ex("v1")].items} == {ex("Proceedings"), ex("v2"), literal("Graph Database")}

    def test_poc_structures(self, pub):
        st_ = structures(pub, "POC")
        assert set(st_[ex("v2")].items) == {("out", RDF_TYPE, ex("Person")), ("out", ex("name"), literal("Max Power"))}

    def test_octype_groups_by_type_set(self, pub):
        st_ = structures(pub, "OCtype")
        assert {o for _, _, o in st_[ex("v1")].items} == {ex("Proceedings")}
        assert {o for _, _, o in st_[ex("v2")].items} == {ex("Person")}

    def test_taut_single_class(self, pub):
        assert blocks(pub, "cse(top, top, top)") == {frozenset({ex("v1"), ex("v2")})}

    def test_bidirectional_pc(self, pub):
        p = partition(pub, "dp(PC, both)")
        assert p.assignment[ex("v1")] != p.assignment[ex("v2")]
        assert p.domain == candidate_domain(pub, Simple("PC", direction="both"))

    def test_nested_cse_links_to_pc_class(self, pub):
        e = Engine(pub)
        node = parse_expression("cse(top, id, PC)")
        p = e.evaluate(node)
        assert len(p.blocks()) == 2
        pc = e.keys(Simple("PC"), "V")
        v1 = p.classes[p.assignment[ex("v1")]]
        assert v1.kind == "CSE"
        author = [it for it in v1.items if it[1] == ex("author")]
        assert author == [("out", ex("author"), pc[pub.id_of(ex("v2"))])]
        # literal and type objects share the empty-PC secondary structure
        empty = {it[2] for it in v1.items if it[1] != ex("author")}
        assert len(empty) == 1

    def test_chained_cse_equals_nested(self, pub):
        a = partition(pub, "cse(top, id, PC)^2")
        b = partition(pub, "cse(top, id, cse(top, id, PC))")
        assert a.blocks() == b.blocks()
        assert set(a.assignment.values()) == set(b.assignment.values())

    def test_schemex_two_classes(self, pub):
        assert len(blocks(pub, "cse(OCtype, id_rel, OCtype)")) == 2


class TestCombinators:
    def test_copperfield(self):
        g = copperfield_graph()
        assert len(blocks(g, "PC & OC")) == 1
        assert len(blocks(g, "POC")) == 2

    def test_ext_union_closure(self):
        # 1,2 share types; 2,3 share properties; 1 and 3 share neither
        g = graph_of(("n1", "a", "T"), ("n2", "a", "T"), ("n2", "p", "x"), ("n3", "p", "x"), ("n3", "a", "U"))
        assert len(blocks(g, "OCtype")) == 2
        assert len(blocks(g, "PCrel")) == 2
        assert blocks(g, "OCtype |ex| PCrel") == {frozenset({ex("n1"), ex("n2"), ex("n3")})}

    @settings(max_examples=60, deadline=None)
    @given(SEEDS)
    def test_taut_is_intersect_identity(self, seed):
        g = random_graph(seed)
        assert blocks(g, "PC & cse(top, top, top)") == blocks(g, "PC")

    @settings(max_examples=60, deadline=None)
    @given(SEEDS)
    def test_ext_union_idempotent_and_id_neutral(self, seed):
        g = random_graph(seed)
        assert blocks(g, "POC |ex| POC") == blocks(g, "POC")
        assert blocks(g, "OC |ex| cse(id, id, id)") == blocks(g, "OC")


def check_laws(p: Partition):
    members = [v for b in p.blocks() for v in b]
    assert len(members) == len(set(members))
    assert set(members) == set(p.domain) == set(p.assignment)
    assert set(p.assignment.values()) <= set(p.classes)


class TestLaws:
    @settings(max_examples=150, deadline=None)
    @given(SEEDS, SEEDS)
    def test_partition_laws(self, gseed, aseed):
        g = random_graph(gseed)
        check_laws(Engine(g).evaluate(random_ast(aseed)))

    @settings(max_examples=100, deadline=None)
    @given(SEEDS, SEEDS, SEEDS)
    def test_intersect_refines_operands(self, gseed, a, b):
        g = random_graph(gseed)
        x, y = random_ast(a), random_ast(b)
        if x == y:
            return
        e = Engine(g)
        both = e.evaluate(Intersect((x, y)))
        union = e.evaluate(ExtUnion((x, y)))
        for side in (x, y):
            assert both.refines(over(e, side, both.domain))
            assert over(e, side, union.domain).refines(union)

    @settings(max_examples=100, deadline=None)
    @given(SEEDS)
    def test_cse_simple_identities(self, seed):
        g = random_graph(seed)
        assert blocks(g, "cse(top, id, id)") == blocks(g, "POC")
        assert blocks(g, "cse(top, id, top)") == blocks(g, "PC")
        assert blocks(g, "cse(top, top, id)") == blocks(g, "OC")

    @settings(max_examples=60, deadline=None)
    @given(SEEDS, st.sampled_from(["PC", "OCtype", "dp(PC, both)", "POC"]), st.integers(1, 3))
    def test_chaining_refines(self, seed, sub, k):
        g = random_graph(seed)
        assert partition(g, f"cse({sub}, id, top)^{k + 1}").refines(partition(g, f"cse({sub}, id, top)^{k}"))

    @settings(max_examples=60, deadline=None)
    @given(SEEDS)
    def test_all_labels_equal_unparameterized(self, seed):
        g = random_graph(seed)
        assert blocks(g, "lp(POC, !{})") == blocks(g, "POC")

    @settings(max_examples=40, deadline=None)
    @given(SEEDS, SEEDS)
    def test_input_order_independent(self, gseed, aseed):
        g = random_graph(gseed)
        rev = type(g).from_quads(sorted(g.quads(), reverse=True))
        node = random_ast(aseed)
        assert Engine(g).evaluate(node).assignment == Engine(rev).evaluate(node).assignment


def over(e: Engine, node, domain) -> Partition:
    """Classes of ``node`` on ``domain``, which may exceed the node's own candidate domain."""
    keys = e.keys(node, "V")
    assignment = {v: keys[e.g.id_of(v)] for v in domain}
    return Partition(assignment, {}, frozenset(domain))


class TestSetParameter:
    def test_empty_set_splits_typed(self, pub):
        g = graph_of(("a", "a", "T"), ("b", "p", "x"), ("c", "p", "y"))
        assert blocks(g, "sp(OCtype, {})") == {frozenset({ex("a")}), frozenset({ex("b"), ex("c")})}

    def test_vc_catch_all_holds_untyped(self):
        g = graph_of(("a", "a", "T"), ("b", "a", "T"), ("c", "a", "U"), ("d", "p", "x"), ("e", "q", "x"))
        assert blocks(g, "sp(OCtype, VC)") == {
            frozenset({ex("a"), ex("b")}),
            frozenset({ex("c")}),
            frozenset({ex("d"), ex("e")}),
        }

    def test_four_classes_over_two_predicates(self):
        g = graph_of(
            ("a", "p1", "x"),
            ("b", "p2", "x"),
            ("c", "p1", "x"),
            ("c", "p2", "x"),
            ("d", "p3", "x"),
            ("e", "p1", "x"),
            ("e", "p3", "x"),
            ("f", "a", "T"),
        )
        node = "sp(PCrel, {<http://ex.org/p1>, <http://ex.org/p2>})"
        bl = blocks(g, node)
        assert len(bl) == 4
        assert frozenset({ex("d"), ex("e"), ex("f")}) in bl

    def test_catch_all_structure_marked(self):
        g = graph_of(("a", "p3", "x"))
        st_ = structures(g, "sp(PC, {<http://ex.org/p1>})")
        assert st_[ex("a")].other == ("out",) and st_[ex("a")].items == ()


class TestDomain:
    def test_out_domain_is_subjects(self, pub):
        assert partition(pub, "PC").domain == {ex("v1"), ex("v2")}

    def test_in_domain_is_objects(self, pub):
        assert ex("v1") not in partition(pub, "dp(PC, in)").domain
        assert literal("Max Power") in partition(pub, "dp(PC, in)").domain

    def test_ident_label_filter(self):
        g = graph_of(("a", "p", "x"), ("a", "q", "y"), ("b", "p", "x"), ("b", "q", "z"))
        assert len(blocks(g, "cse(top, id, id)")) == 2
        assert len(blocks(g, "cse(top, id({<http://ex.org/p>}), id)")) == 1


def test_complex_node_memoized(pub):
    e = Engine(pub)
    node = Complex(Taut(), Ident(), Simple("PC"))
    first = e.keys(node, "V")
    assert e.keys(node, "V") is first
