"""End-to-end summarization: inference, evaluation, payload extraction."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .definition import DSP, RDFS_INSIDE, VCP, VIP, SummaryDefinition, format_definition
from .engine import V, Engine, Partition, SchemaStructure
from .graph import IndexedGraph, Term
from .instances import rep_sort_key
from .rdfs import materialize

log = logging.getLogger(__name__)


@dataclass
class VertexSummary:
    primary: bytes
    structure: SchemaStructure
    payloads: dict = field(default_factory=dict)

    @property
    def schema_edges(self) -> list:
        """(direction, predicate ref, target ref) triples of the structure."""
        if self.structure.kind in ("PC", "OC", "POC", "CSE"):
            return list(self.structure.items)
        return []


@dataclass
class SummaryGraph:
    summaries: dict = field(default_factory=dict)  # ClassId -> VertexSummary
    secondary: dict = field(default_factory=dict)  # ClassId -> SchemaStructure
    provenance: dict = field(default_factory=dict)
    partition: Optional[Partition] = None

    def __len__(self) -> int:
        return len(self.summaries)

    def class_of(self, v: Term) -> Optional[bytes]:
        return self.partition.assignment.get(v) if self.partition else None


def extract_payload(g: IndexedGraph, members: Iterable[Term], kind: str):
    members = list(members)
    if kind == VIP:
        return sorted(members, key=rep_sort_key)
    if kind == VCP:
        return len(members)
    if kind == DSP:
        sources = set()
        for m in members:
            sources.update(q.d for q in g.out_quads(m) if q.d is not None)
        return sorted(sources, key=rep_sort_key)
    raise ValueError(f"unknown payload {kind!r}")


def summarize(g: IndexedGraph, defn: SummaryDefinition, provenance: Optional[dict] = None) -> SummaryGraph:
    """Run a summary definition over ``g``.

    Pipeline: optional RDFS materialization, evaluation of the equivalence
    relation (instance merges happen inside the engine), payloads per class,
    then collection of every nested (secondary) structure.
    """
    work = materialize(g) if defn.inference == RDFS_INSIDE else g
    if DSP in defn.payloads and len(g) and not g.has_contexts:
        log.warning("dsp requested but some quads carry no context")
    engine = Engine(work)
    partition = engine.evaluate(defn.root, with_structures=False)
    members = partition.members()
    sg = SummaryGraph(partition=partition)
    pending = deque()
    for cid, ms in members.items():
        structure, refs = engine.explain(defn.root, V, cid)
        partition.classes[cid] = structure
        payloads = {kind: extract_payload(work, ms, kind) for kind in defn.payloads}
        sg.summaries[cid] = VertexSummary(cid, structure, payloads)
        pending.extend(refs)
    seen = set()
    while pending:
        eng, node, tag, cid = pending.popleft()
        if (id(eng), node, tag, cid) in seen:
            continue
        seen.add((id(eng), node, tag, cid))
        structure, refs = eng.explain(node, tag, cid)
        if cid not in sg.summaries:
            sg.secondary.setdefault(cid, structure)
        pending.extend(refs)
    if partition.assignment:
        sg.provenance = describe(defn, sg, provenance)
    return sg


def describe(defn: SummaryDefinition, sg: SummaryGraph, extra: Optional[dict] = None) -> dict:
    """Provenance block: the definition and the size of the result."""
    out = {
        "definition": format_definition(defn),
        "vertices": len(sg.partition.assignment) if sg.partition else 0,
        "classes": len(sg.summaries),
    }
    out.update(extra or {})
    return out
