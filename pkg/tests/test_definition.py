import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fluid.definition import (
    BOTH,
    DSP,
    IN,
    NOT_TYPE,
    OC,
    OCTYPE,
    PC,
    PCREL,
    POC,
    RDFS_INSIDE,
    TYPE_ONLY,
    VIP,
    Complex,
    DefinitionSyntaxError,
    ExtUnion,
    Ident,
    InstanceParam,
    Intersect,
    LabelSet,
    SetParam,
    Simple,
    SummaryDefinition,
    Taut,
    direction_of,
    format_definition,
    format_node,
    is_valid,
    parse_definition,
    parse_expression,
    validate_definition,
)
from fluid.graph import RDF_TYPE
from fluid.synthetic import random_ast

SCHEMEX = Complex(OCTYPE, Ident(NOT_TYPE), OCTYPE)


class TestParse:
    def test_single_keyword(self):
        d = parse_definition("summary POC payload [vip]")
        assert d.root == Simple(POC)
        assert d.payloads == (VIP,)

    def test_schemex(self):
        d = parse_definition("summary cse(OCtype, id_rel, OCtype) payload [dsp]")
        assert d.root == SCHEMEX
        assert d.payloads == (DSP,)

    def test_abbreviations(self):
        assert parse_expression("OCtype") == Simple(OC, TYPE_ONLY)
        assert parse_expression("PCrel") == Simple(PC, NOT_TYPE)
        assert TYPE_ONLY.admits(RDF_TYPE) and not NOT_TYPE.admits(RDF_TYPE)

    def test_label_and_set_params(self):
        node = parse_expression("sp(lp(PC, {<http://ex.org/p1>}), {<http://ex.org/p1>, <http://ex.org/p2>})")
        assert node.labels == LabelSet(frozenset({"http://ex.org/p1"}))
        assert node.set_param == SetParam(frozenset({"http://ex.org/p1", "http://ex.org/p2"}))

    def test_excluded_labels(self):
        node = parse_expression("lp(PC, !{rdf:type})")
        assert node == PCREL

    def test_vc_and_empty_set(self):
        assert parse_expression("sp(OCtype, VC)").set_param == SetParam(all_types=True)
        assert parse_expression("sp(OCtype, {})").set_param == SetParam()

    def test_direction(self):
        assert parse_expression("dp(PC, both)").direction == BOTH
        assert parse_expression("dp(cse(PC, top, top), in)").direction == IN

    def test_chaining_forms_agree(self):
        a = parse_expression("cse(OC, id, OC)^3")
        b = parse_expression("cp(cse(OC, id, OC), 3)")
        assert a == b and a.k == 3

    def test_combinators_precedence(self):
        node = parse_expression("PC & OC |ex| POC")
        assert isinstance(node, ExtUnion)
        assert node.parts[0] == Intersect((Simple(PC), Simple(OC)))

    def test_instance_param(self):
        node = parse_expression("ip(OC, sameas)")
        assert node == InstanceParam(Simple(OC), "sameas")

    def test_inference_clause(self):
        d = parse_definition("summary PC payload [vip, vcp] infer rdfs")
        assert d.inference == RDFS_INSIDE
        assert d.payloads == ("vip", "vcp")

    def test_missing_payload_clause(self):
        with pytest.raises(DefinitionSyntaxError, match="payload"):
            parse_definition("summary sp(PC, {})")

    @pytest.mark.parametrize(
        "text",
        [
            "summary cse(PC, top) payload [vip]",
            "summary frob payload [vip]",
            "summary PC payload [vip",
            "summary lp(cse(PC, top, top), {rdf:type}) payload [vip]",
            "summary dp(PC, sideways) payload [vip]",
            "summary PC payload [vip] trailing",
            "summary sp(PC, {ex:p}) payload [vip]",
            "summary lp(PC, {p1}) payload [vip]",
        ],
    )
    def test_errors_carry_position(self, text):
        with pytest.raises(DefinitionSyntaxError) as info:
            parse_definition(text)
        assert info.value.line == 1 and info.value.col >= 1

    def test_error_line_number(self):
        with pytest.raises(DefinitionSyntaxError) as info:
            parse_definition("summary\n  cse(PC,\n  ) payload [vip]")
        assert info.value.line == 3


class TestRoundTrip:
    @pytest.mark.parametrize(
        "text",
        [
            "summary cse(OCtype, id_rel, OCtype) payload [dsp]",
            "summary sp(OCtype, VC) payload [vip]",
            "summary (sp(OCtype, {}) & (ip(dp(PCrel, in), related) |ex| ip(PCrel, related))) |ex| sp(OCtype, VC) payload [vip] infer rdfs",
            "summary cse(top, id({rdf:type}), top)^2 payload [vip]",
            "summary dp(cse(dp(PC, both), top, top)^3, both) payload [vcp]",
            "summary lp(POC, !{<http://ex.org/p>}) payload [vip, vcp, dsp]",
        ],
    )
    def test_print_is_canonical(self, text):
        d = parse_definition(text)
        assert parse_definition(format_definition(d)) == d
        assert format_definition(parse_definition(format_definition(d))) == format_definition(d)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10**6))
    def test_random_asts(self, seed):
        node = random_ast(seed)
        assert parse_expression(format_node(node)) == node


class TestValidate:
    def test_schemex_ok(self):
        assert validate_definition(SummaryDefinition(SCHEMEX, (DSP,))) == []

    def test_sp_on_complex(self):
        bad = SummaryDefinition(Complex(Taut(), Taut(), Taut(), set_param=SetParam()))
        msgs = [v.message for v in validate_definition(bad)]
        assert "set parameterization requires SSE" in msgs

    def test_k_zero(self):
        bad = SummaryDefinition(Complex(Taut(), Taut(), Taut(), k=0))
        vs = validate_definition(bad)
        assert not is_valid(vs)
        assert any("k" in v.message or "depth" in v.message for v in vs)

    def test_k_on_simple(self):
        vs = validate_definition(SummaryDefinition(Simple(PC, k=2)))
        assert [v.message for v in vs] == ["chaining parameterization requires a CSE"]

    def test_empty_union(self):
        assert not is_valid(validate_definition(SummaryDefinition(ExtUnion(()))))

    def test_no_payload(self):
        assert not is_valid(validate_definition(SummaryDefinition(Simple(PC), ())))

    def test_bare_tautology_root(self):
        assert not is_valid(validate_definition(SummaryDefinition(Taut())))

    def test_dsp_without_contexts_is_warning(self):
        vs = validate_definition(SummaryDefinition(SCHEMEX, (DSP,)), has_contexts=False)
        assert len(vs) == 1 and vs[0].severity == "warning"
        assert is_valid(vs)

    def test_collects_every_violation(self):
        node = Intersect((Complex(Taut(), Taut(), Taut(), k=0, set_param=SetParam()), ExtUnion(())))
        assert len(validate_definition(SummaryDefinition(node, ()))) == 4


def test_direction_of():
    assert direction_of(Simple(PC, direction=IN)) == IN
    assert direction_of(Intersect((Simple(PC), Simple(PC, direction=IN)))) == BOTH
    assert direction_of(InstanceParam(Simple(OC, direction=IN), "related")) == IN
