"""Out-of-core summarization for outgoing simple schema elements.

For definitions whose relation is a single out-direction SSE, evaluated
without inference, the input never has to be held as an indexed graph. The
sources are scanned up to three times:

1. only when the set parameter is V_C, to collect the types;
2. to accumulate per subject the digests the SSE compares, plus payload data;
3. to recover the Term-level structure of one representative per class.

Memory is proportional to the number of distinct (subject, compared item)
pairs rather than to the graph. Class ids and structures are identical to
the in-memory engine's.
"""

from __future__ import annotations

import hashlib
from typing import Optional

from .definition import DSP, NO_INFERENCE, OC, OUT, PC, VCP, VIP, Simple, SummaryDefinition
from .engine import Partition, SchemaStructure
from .graph import IRI, RDF_TYPE, Term, term_digest
from .ingest import IngestReport, iter_quads
from .instances import rep_sort_key
from .summarizer import SummaryGraph, VertexSummary, describe


def supports(defn: SummaryDefinition) -> bool:
    root = defn.root
    return isinstance(root, Simple) and root.direction == OUT and defn.inference == NO_INFERENCE


def _h(*parts: bytes) -> bytes:
    return hashlib.blake2b(b"".join(parts), digest_size=16).digest()


def stream_summarize(
    sources: list,
    defn: SummaryDefinition,
    gz: Optional[bool] = None,
    report: Optional[IngestReport] = None,
    provenance: Optional[dict] = None,
) -> SummaryGraph:
    """Summarize re-readable sources (paths) without building a graph."""
    if not supports(defn):
        raise ValueError("streaming summarization needs a single out-direction simple element")
    node: Simple = defn.root
    kind = node.kind
    labels = node.labels

    def admitted(p: Term) -> bool:
        return labels is None or ((p.kind == IRI and p.lexical in labels.iris) != labels.exclude)

    def scan(rep: Optional[IngestReport] = None):
        return iter_quads(sources, rep if rep is not None else IngestReport(), gz)

    S, nonempty = None, False
    if node.set_param is not None:
        if node.set_param.all_types:
            S = {q.o for q in scan() if q.p == RDF_TYPE}
            nonempty = bool(S)
        else:
            S = {Term(IRI, x) for x in node.set_param.iris}
            nonempty = bool(S)

    items: dict = {}
    outside: set = set()
    contexts: dict = {}
    digests: dict = {}

    def dg(t: Term) -> bytes:
        d = digests.get(t)
        if d is None:
            d = digests[t] = term_digest(t)
        return d

    for q in scan(report):
        bucket = items.setdefault(q.s, set())
        if DSP in defn.payloads and q.d is not None:
            contexts.setdefault(q.s, set()).add(q.d)
        if not admitted(q.p):
            continue
        if S is not None:
            if (kind != OC and q.p not in S) or (kind != PC and q.o not in S):
                outside.add(q.s)
        if kind == PC:
            bucket.add(dg(q.p))
        elif kind == OC:
            bucket.add(dg(q.o))
        else:
            bucket.add(dg(q.p) + dg(q.o))

    tag = kind.encode() + b"\0o\0"
    assignment: dict = {}
    for s, bucket in items.items():
        catch = S is not None and (s in outside or (not bucket and nonempty))
        assignment[s] = _h(tag, b"*") if catch else _h(tag, *sorted(bucket))
    del items

    reps: dict = {}
    for s, cid in assignment.items():
        if cid not in reps or rep_sort_key(s) < rep_sort_key(reps[cid]):
            reps[cid] = s
    wanted = {s: cid for cid, s in reps.items()}
    found: dict = {cid: set() for cid in reps}
    for q in scan():
        cid = wanted.get(q.s)
        if cid is None or not admitted(q.p):
            continue
        found[cid].add((q.p if kind != OC else None, q.o if kind != PC else None))

    members: dict = {}
    for s, cid in assignment.items():
        members.setdefault(cid, []).append(s)
    sg = SummaryGraph()
    sg.partition = Partition(assignment, {}, frozenset(assignment))
    for cid, ms in members.items():
        catch = cid == _h(tag, b"*") and S is not None
        if catch:
            structure = SchemaStructure(kind, (), other=(OUT,))
        else:
            ordered = sorted(
                found[cid],
                key=lambda po: (dg(po[0]) if po[0] is not None else b"", dg(po[1]) if po[1] is not None else b""),
            )
            structure = SchemaStructure(kind, tuple((OUT, p, o) for p, o in ordered))
        payloads = {}
        for k in defn.payloads:
            if k == VIP:
                payloads[k] = sorted(ms, key=rep_sort_key)
            elif k == VCP:
                payloads[k] = len(ms)
            elif k == DSP:
                srcs = set()
                for m in ms:
                    srcs |= contexts.get(m, set())
                payloads[k] = sorted(srcs, key=rep_sort_key)
        sg.summaries[cid] = VertexSummary(cid, structure, payloads)
        sg.partition.classes[cid] = structure
    if assignment:
        sg.provenance = describe(defn, sg, provenance)
    return sg
