"""RDFS vocabulary graph, closure, materialization and inference statistics.

Rules: rdfs2 (domain), rdfs3 (range), rdfs7 (subPropertyOf), rdfs9
(subClassOf) and the transitivity rules rdfs5/rdfs11 applied to the
vocabulary graph. The vocabulary graph is read from the input once and is
not extended by inferred triples.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

from .graph import (
    LITERAL,
    P_RDFS,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    IndexedGraph,
    Term,
)


@dataclass
class VocabularyGraph:
    """Schema triples of a graph, as adjacency sets keyed by P_RDFS predicate."""

    edges: dict = field(default_factory=lambda: {p: set() for p in P_RDFS})
    closed: bool = False

    def add(self, s: Term, p: Term, o: Term) -> None:
        self.edges[p].add((s, o))

    @property
    def property_vertices(self) -> set:
        out = set()
        for s, o in self.edges[RDFS_SUBPROPERTYOF]:
            out.update((s, o))
        for p in (RDFS_DOMAIN, RDFS_RANGE):
            out.update(s for s, _ in self.edges[p])
        return out

    @property
    def type_vertices(self) -> set:
        out = set()
        for s, o in self.edges[RDFS_SUBCLASSOF]:
            out.update((s, o))
        for p in (RDFS_DOMAIN, RDFS_RANGE):
            out.update(o for _, o in self.edges[p])
        return out

    @property
    def vertices(self) -> set:
        return self.property_vertices | self.type_vertices

    def __len__(self) -> int:
        return sum(len(e) for e in self.edges.values())

    def successors(self, p: Term) -> dict:
        out: dict = {}
        for s, o in self.edges[p]:
            out.setdefault(s, set()).add(o)
        return out


def build_vocabulary_graph(g: IndexedGraph) -> VocabularyGraph:
    vg = VocabularyGraph()
    for s, p, o in g.triples():
        if p in vg.edges:
            vg.add(s, p, o)
    return vg


def _reach(succ: dict) -> dict:
    """Transitive (not reflexive) successors by BFS; handles cycles."""
    out = {}
    for start in succ:
        seen = set()
        queue = deque(succ[start])
        while queue:
            x = queue.popleft()
            if x in seen:
                continue
            seen.add(x)
            queue.extend(succ.get(x, ()))
        out[start] = seen
    return out


def closure(vg: VocabularyGraph) -> VocabularyGraph:
    """Transitively close subClassOf and subPropertyOf (rdfs11, rdfs5)."""
    out = VocabularyGraph({p: set(e) for p, e in vg.edges.items()}, closed=True)
    for p in (RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF):
        for s, supers in _reach(vg.successors(p)).items():
            out.edges[p].update((s, o) for o in supers)
    return out


class _Rules:
    """Closed vocabulary compiled to term ids for fast rule application."""

    def __init__(self, g: IndexedGraph, vg: VocabularyGraph) -> None:
        if not vg.closed:
            vg = closure(vg)
        intern = g.table.intern
        self.table = g.table
        self.type = intern(RDF_TYPE)

        def compile_(p):
            out: dict = {}
            for s, o in vg.edges[p]:
                out.setdefault(intern(s), set()).add(intern(o))
            return out

        self.sup_p = compile_(RDFS_SUBPROPERTYOF)
        self.sup_c = compile_(RDFS_SUBCLASSOF)
        self.dom = compile_(RDFS_DOMAIN)
        self.rng = compile_(RDFS_RANGE)
        self.dropped_literal_types = 0

    def consequences(self, s: int, p: int, o: int):
        """Triples entailed in one step by (s, p, o) under the closed vocabulary."""
        props = {p}
        props.update(self.sup_p.get(p, ()))
        for q in props:
            if q != p:
                yield s, q, o
        types_s, types_o = set(), set()
        for q in props:
            types_s.update(self.dom.get(q, ()))
            types_o.update(self.rng.get(q, ()))
        if self.type in props:
            types_s.add(o)
            types_s.update(self.sup_c.get(o, ()))
        for t in list(types_s):
            types_s.update(self.sup_c.get(t, ()))
        for t in types_s:
            yield s, self.type, t
        if types_o:
            if self.table.terms[o].kind == LITERAL:
                self.dropped_literal_types += len(types_o)
                return
            for t in list(types_o):
                types_o.update(self.sup_c.get(t, ()))
            for t in types_o:
                yield o, self.type, t


def materialize(g: IndexedGraph, vg: Optional[VocabularyGraph] = None) -> IndexedGraph:
    """``g`` plus every entailed quad; inferred quads inherit the context of
    the quad they were derived from. The result shares ``g``'s term table."""
    if vg is None:
        vg = build_vocabulary_graph(g)
    rules = _Rules(g, vg)
    out = g.derived()
    add = out._add_ids
    queue = deque(g.quad_ids())
    for q in queue:
        add(*q)
    out._include_ids(g.vertex_ids(), g.predicate_ids())
    while queue:
        s, p, o, d = queue.popleft()
        for ns, np_, no in rules.consequences(s, p, o):
            if add(ns, np_, no, d):
                queue.append((ns, np_, no, d))
    out.dropped_literal_types = rules.dropped_literal_types
    return out


def inferred_triples(g: IndexedGraph, vg: Optional[VocabularyGraph] = None) -> tuple[set, int]:
    """Distinct entailed (s, p, o) id triples not already in ``g``, computed
    without building a graph; also returns the dropped literal-type count."""
    if vg is None:
        vg = build_vocabulary_graph(g)
    rules = _Rules(g, vg)
    base = {(s, p, o) for s, p, o, _ in g.quad_ids()}
    seen = set(base)
    queue = deque(base)
    while queue:
        t = queue.popleft()
        for n in rules.consequences(*t):
            if n not in seen:
                seen.add(n)
                queue.append(n)
    return seen - base, rules.dropped_literal_types


@dataclass
class InferenceStats:
    property_vertices: int = 0
    subpropertyof_triples: int = 0
    type_vertices: int = 0
    subclassof_triples: int = 0
    domain_triples: int = 0
    range_triples: int = 0
    vg_vertices: int = 0
    vg_triples: int = 0
    properties_not_in_vg: int = 0
    properties_in_vg: int = 0
    properties_in_dataset: int = 0
    properties_added: int = 0
    properties_total: int = 0
    types_not_in_vg: int = 0
    types_in_vg: int = 0
    types_in_dataset: int = 0
    types_added: int = 0
    types_total: int = 0
    increase_factor_properties: float = 1.0
    increase_factor_types: float = 1.0
    increase_factor_total: float = 1.0
    dropped_literal_types: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def _factor(base: int, added: int) -> float:
    return round((base + added) / base, 1) if base else 1.0


def inference_stats(
    g: IndexedGraph,
    vg: Optional[VocabularyGraph] = None,
    materialized: Optional[IndexedGraph] = None,
) -> InferenceStats:
    """Vocabulary-graph size and the growth caused by inference.

    Occurrences count triples: a property occurs once per triple using it as
    predicate, a type once per rdf:type triple naming it. Schema triples are
    not counted as property occurrences. Additions are distinct inferred
    triples; with ``materialized`` they are read off that graph, otherwise
    they are enumerated without building one.
    """
    if vg is None:
        vg = build_vocabulary_graph(g)
    st = InferenceStats()
    pv, tv = vg.property_vertices, vg.type_vertices
    st.property_vertices = len(pv)
    st.type_vertices = len(tv)
    st.vg_vertices = len(pv | tv)
    st.subpropertyof_triples = len(vg.edges[RDFS_SUBPROPERTYOF])
    st.subclassof_triples = len(vg.edges[RDFS_SUBCLASSOF])
    st.domain_triples = len(vg.edges[RDFS_DOMAIN])
    st.range_triples = len(vg.edges[RDFS_RANGE])
    st.vg_triples = len(vg)

    schema = set(P_RDFS)
    for s, p, o in g.triples():
        if p == RDF_TYPE:
            if o in tv:
                st.types_in_vg += 1
            else:
                st.types_not_in_vg += 1
        elif p not in schema:
            if p in pv:
                st.properties_in_vg += 1
            else:
                st.properties_not_in_vg += 1
    st.properties_in_dataset = st.properties_in_vg + st.properties_not_in_vg
    st.types_in_dataset = st.types_in_vg + st.types_not_in_vg

    if materialized is not None:
        base = g.triples()
        added = [t for t in materialized.triples() if t not in base]
        type_added = sum(1 for t in added if t[1] == RDF_TYPE)
        prop_added = len(added) - type_added
        st.dropped_literal_types = getattr(materialized, "dropped_literal_types", 0)
    else:
        added_ids, st.dropped_literal_types = inferred_triples(g, vg)
        type_id = g.id_of(RDF_TYPE)
        type_added = sum(1 for t in added_ids if t[1] == type_id)
        prop_added = len(added_ids) - type_added
    st.properties_added = prop_added
    st.types_added = type_added
    st.properties_total = st.properties_in_dataset + prop_added
    st.types_total = st.types_in_dataset + type_added
    st.increase_factor_properties = _factor(st.properties_in_dataset, prop_added)
    st.increase_factor_types = _factor(st.types_in_dataset, type_added)
    st.increase_factor_total = _factor(
        st.properties_in_dataset + st.types_in_dataset, prop_added + type_added
    )
    return st


def chain_graph(n: int, ns: str = "http://example.org/chain/") -> IndexedGraph:
    """Worst-case construction: n/2 data triples over p1 and a subPropertyOf
    chain p1 ⊑ … ⊑ p(n/2); materialization yields (n/2)² property triples."""
    from .graph import iri

    if n % 2:
        raise ValueError("n must be even")
    half = n // 2
    g = IndexedGraph()
    for i in range(1, half + 1):
        g.add(iri(f"{ns}s{i}"), iri(f"{ns}p1"), iri(f"{ns}o{i}"))
    for i in range(1, half):
        g.add(iri(f"{ns}p{i}"), RDFS_SUBPROPERTYOF, iri(f"{ns}p{i + 1}"))
    return g
