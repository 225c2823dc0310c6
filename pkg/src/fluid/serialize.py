"""Deterministic N-Triples and JSON encodings of summaries and statistics.

Summary vocabulary (all under ``urn:fluid:``):

=====================  =====================================================
``VertexSummary``      class of primary vertices ``urn:fluid:cs/<hex>``
``hasSecondary``       primary/secondary vertex -> nested class it references
``onPredicateClass``   predicate-class IRI ``urn:fluid:pc/<hex>`` -> its class
``subjectClass``       CSE vertex -> class of the subject relation
``identity``           identity class -> the term it stands for
``catchAll``           direction in which a set-parameterized class is a catch-all
``anyPredicate``       predicate placeholder where predicates are not compared
``any``                object placeholder where objects are not compared
``count``              vcp payload
``source``             dsp payload
``summarizes``         vip payload
=====================  =====================================================

Schema edges over incoming triples are written reversed (target first).
"""

from __future__ import annotations

import json
from typing import Optional

from .graph import FLUID, IRI, RDF_TYPE, XSD, Term, iri, literal
from .rdfs import InferenceStats
from .summarizer import SummaryGraph

VERTEX_SUMMARY = iri(FLUID + "VertexSummary")
HAS_SECONDARY = iri(FLUID + "hasSecondary")
ON_PREDICATE_CLASS = iri(FLUID + "onPredicateClass")
SUBJECT_CLASS = iri(FLUID + "subjectClass")
IDENTITY = iri(FLUID + "identity")
CATCH_ALL = iri(FLUID + "catchAll")
ANY_PREDICATE = iri(FLUID + "anyPredicate")
ANY = iri(FLUID + "any")
COUNT = iri(FLUID + "count")
SOURCE = iri(FLUID + "source")
SUMMARIZES = iri(FLUID + "summarizes")


def class_iri(cid: bytes) -> Term:
    return iri(f"{FLUID}cs/{cid.hex()}")


def predicate_class_iri(cid: bytes) -> Term:
    return iri(f"{FLUID}pc/{cid.hex()}")


def _line(s: Term, p: Term, o: Term) -> str:
    return f"{s.n3()} {p.n3()} {o.n3()} ."


def _structure_lines(node: Term, st) -> set:
    lines = set()
    if st.kind in ("PC", "OC", "POC", "CSE"):
        for d, p, o in st.items:
            if isinstance(p, bytes):
                pred = predicate_class_iri(p)
                lines.add(_line(pred, ON_PREDICATE_CLASS, class_iri(p)))
            else:
                pred = p if p is not None else ANY_PREDICATE
            if isinstance(o, bytes):
                target = class_iri(o)
                lines.add(_line(node, HAS_SECONDARY, target))
            else:
                target = o if o is not None else ANY
            lines.add(_line(node, pred, target) if d == "out" else _line(target, pred, node))
        for d in st.other:
            lines.add(_line(node, CATCH_ALL, literal(d)))
        if st.sub is not None:
            lines.add(_line(node, SUBJECT_CLASS, class_iri(st.sub)))
            lines.add(_line(node, HAS_SECONDARY, class_iri(st.sub)))
    elif st.kind == "AND":
        for c in st.items:
            lines.add(_line(node, HAS_SECONDARY, class_iri(c)))
    elif st.kind == "UNION":
        for _, c in st.items:
            lines.add(_line(node, HAS_SECONDARY, class_iri(c)))
    elif st.kind == "ID":
        lines.add(_line(node, IDENTITY, st.items[0]))
    return lines


def to_ntriples(sg: SummaryGraph) -> str:
    out = []
    for cid in sorted(sg.summaries):
        vs = sg.summaries[cid]
        node = class_iri(cid)
        lines = _structure_lines(node, vs.structure)
        lines.add(_line(node, RDF_TYPE, VERTEX_SUMMARY))
        for kind, value in vs.payloads.items():
            if kind == "vcp":
                lines.add(_line(node, COUNT, literal(str(value), XSD + "integer")))
            elif kind == "dsp":
                lines.update(_line(node, SOURCE, d) for d in value)
            elif kind == "vip":
                lines.update(_line(node, SUMMARIZES, m) for m in value)
        out.extend(sorted(lines))
    for cid in sorted(sg.secondary):
        if cid in sg.summaries:
            continue
        out.extend(sorted(_structure_lines(class_iri(cid), sg.secondary[cid])))
    return "".join(line + "\n" for line in out)


def _ref(x):
    if x is None:
        return None
    if isinstance(x, bytes):
        return {"class": x.hex()}
    return x.n3()


def _structure_json(st) -> dict:
    out: dict = {"kind": st.kind}
    if st.kind in ("PC", "OC", "POC", "CSE"):
        out["edges"] = [{"direction": d, "predicate": _ref(p), "object": _ref(o)} for d, p, o in st.items]
        if st.other:
            out["catch_all"] = list(st.other)
        if st.sub is not None:
            out["subject_class"] = st.sub.hex()
    elif st.kind == "AND":
        out["parts"] = [c.hex() for c in st.items]
    elif st.kind == "UNION":
        out["parts"] = [{"operand": n, "class": c.hex()} for n, c in st.items]
    elif st.kind == "ID":
        out["term"] = st.items[0].n3()
    return out


def _payload_json(kind: str, value):
    if kind == "vcp":
        return value
    return [t.n3() for t in value]


def to_json_obj(sg: SummaryGraph) -> dict:
    doc: dict = {
        "summaries": [
            {
                "id": cid.hex(),
                "structure": _structure_json(sg.summaries[cid].structure),
                "payloads": {k: _payload_json(k, v) for k, v in sorted(sg.summaries[cid].payloads.items())},
            }
            for cid in sorted(sg.summaries)
        ]
    }
    secondary = {cid: st for cid, st in sg.secondary.items() if cid not in sg.summaries}
    if secondary:
        doc["secondary"] = [{"id": cid.hex(), "structure": _structure_json(secondary[cid])} for cid in sorted(secondary)]
    if sg.provenance:
        doc["provenance"] = sg.provenance
    return doc


def to_json(sg: SummaryGraph) -> str:
    return json.dumps(to_json_obj(sg), sort_keys=True, ensure_ascii=False) + "\n"


def write_summary(sg: SummaryGraph, sink, fmt: str = "ntriples") -> None:
    """Write to a binary stream or a path."""
    if fmt == "ntriples":
        text = to_ntriples(sg)
    elif fmt == "json":
        text = to_json(sg)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    data = text.encode("utf-8")
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "wb") as f:
            f.write(data)
    else:
        sink.write(data)


def stats_json(st: InferenceStats) -> str:
    """Stats in a fixed key order; factors carry one fractional digit."""
    d = st.to_dict()
    parts = []
    for k, v in d.items():
        text = f"{v:.1f}" if isinstance(v, float) else str(v)
        parts.append(f'  "{k}": {text}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def write_stats(st: InferenceStats, sink) -> None:
    data = stats_json(st).encode("utf-8")
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "wb") as f:
            f.write(data)
    else:
        sink.write(data)
