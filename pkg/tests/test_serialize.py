import io
import json

from fluid.definition import parse_definition
from fluid.graph import IndexedGraph, RDF_TYPE
from fluid.ingest import load_graph
from fluid.presets import preset
from fluid.rdfs import chain_graph, inference_stats
from fluid.serialize import VERTEX_SUMMARY, SUMMARIZES, class_iri, stats_json, to_json, to_ntriples, write_summary
from fluid.summarizer import summarize
from fluid.synthetic import random_graph

from conftest import ex, publication_graph


def reparse(text: str) -> IndexedGraph:
    g, rep = load_graph([(io.BytesIO(text.encode()), "urn:out")])
    assert rep.lines_skipped == 0
    return g


class TestNTriples:
    def test_pc_summary_edges(self):
        sg = summarize(publication_graph(), parse_definition("summary PC payload [vip]"))
        g = reparse(to_ntriples(sg))
        primaries = {s for s, p, o in g.triples() if p == RDF_TYPE and o == VERTEX_SUMMARY}
        assert len(primaries) == 2
        labels = {
            frozenset(p for s2, p, o in g.triples() if s2 == s and p.lexical.startswith("http://"))
            for s in primaries
        }
        assert labels == {
            frozenset({RDF_TYPE, ex("author"), ex("title")}),
            frozenset({RDF_TYPE, ex("name")}),
        }

    def test_ids_are_lowercase_hex(self):
        sg = summarize(publication_graph(), preset("semsets"))
        for cid in sg.summaries:
            name = class_iri(cid).lexical.rsplit("/", 1)[1]
            assert len(name) == 32 and name == name.lower()

    def test_empty(self):
        sg = summarize(IndexedGraph(), preset("semsets"))
        assert to_ntriples(sg) == ""
        assert to_json(sg) == '{"summaries": []}\n'

    def test_class_count_recoverable(self):
        for seed in range(20):
            sg = summarize(random_graph(seed), preset("schemex"))
            g = reparse(to_ntriples(sg))
            assert sum(1 for t in g.triples() if t[2] == VERTEX_SUMMARY) == len(sg)

    def test_vip_round_trip(self):
        g0 = random_graph(3)
        sg = summarize(g0, preset("semsets"))
        g = reparse(to_ntriples(sg))
        members = {o for s, p, o in g.triples() if p == SUMMARIZES}
        assert members == set(sg.partition.domain)

    def test_deterministic(self):
        g = random_graph(11)
        a = to_ntriples(summarize(g, preset("schemex-u-i")))
        b = to_ntriples(summarize(random_graph(11), preset("schemex-u-i")))
        assert a == b

    def test_write_summary_sink(self, tmp_path):
        sg = summarize(publication_graph(), preset("semsets"))
        buf = io.BytesIO()
        write_summary(sg, buf, "json")
        write_summary(sg, tmp_path / "o.json", "json")
        assert buf.getvalue() == (tmp_path / "o.json").read_bytes()


class TestJson:
    def test_structure(self):
        sg = summarize(publication_graph(), parse_definition("summary cse(top, id, PC) payload [vcp]"))
        doc = json.loads(to_json(sg))
        assert len(doc["summaries"]) == 2
        assert doc["provenance"]["classes"] == 2
        ids = {s["id"] for s in doc["summaries"]} | {s["id"] for s in doc.get("secondary", [])}
        for s in doc["summaries"]:
            for e in s["structure"]["edges"]:
                if isinstance(e["object"], dict):
                    assert e["object"]["class"] in ids

    def test_no_scientific_notation(self):
        text = to_json(summarize(random_graph(5), parse_definition("summary PC payload [vcp]")))
        assert "e+" not in text and "E+" not in text


class TestStats:
    def test_chain(self):
        text = stats_json(inference_stats(chain_graph(8)))
        assert '"increase_factor_properties": 4.0' in text
        assert json.loads(text)["properties_added"] == 12

    def test_empty(self):
        doc = json.loads(stats_json(inference_stats(IndexedGraph())))
        assert all(v == 0 for k, v in doc.items() if not k.startswith("increase"))
        assert all(v == 1.0 for k, v in doc.items() if k.startswith("increase"))

    def test_key_order_fixed(self):
        text = stats_json(inference_stats(chain_graph(4)))
        keys = list(json.loads(text))
        assert keys[0] == "property_vertices" and keys[-1] == "dropped_literal_types"
