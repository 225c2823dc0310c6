"""Instance equivalences: owl:sameAs instances and related-property instances.

Both are computed with a union-find forest over term ids. ``merged_view``
builds the quotient graph in which every instance collapses to one
representative vertex.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .graph import LITERAL, OWL_SAMEAS, RDF_TYPE, IndexedGraph, Term

SAMEAS = "sameas"
RELATED_SRC = "related_src"
RELATED_TRG = "related_trg"
RELATED_BOTH = "related_both"


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, items: Iterable = ()) -> None:
        self.parent: dict = {}
        self.size: dict = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        if x not in parent:
            self.add(x)
            return x
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def rep_sort_key(t: Term) -> tuple:
    # literals last so a merged vertex is never a literal unless all members are
    return (t.kind == LITERAL, t.kind, t.lexical)


class InstancePartition:
    """Instance equivalence classes over the vertices of one graph."""

    def __init__(self, graph: IndexedGraph, kind: str, uf: UnionFind) -> None:
        self.graph = graph
        self.kind = kind
        terms = graph.table.terms
        self._rep: dict[int, int] = {}
        for members in uf.groups().values():
            vs = [m for m in members if m >= 0]
            if not vs:
                continue
            rep = min(vs, key=lambda i: rep_sort_key(terms[i]))
            for m in vs:
                self._rep[m] = rep

    def rep_id(self, i: int) -> int:
        return self._rep.get(i, i)

    @property
    def rep_ids(self) -> dict[int, int]:
        return self._rep

    def find(self, v: Term) -> Term:
        i = self.graph.id_of(v)
        if i is None:
            return v
        return self.graph.term(self.rep_id(i))

    def components(self) -> list[set[Term]]:
        groups: dict[int, set[Term]] = {}
        for i, r in self._rep.items():
            groups.setdefault(r, set()).add(self.graph.term(i))
        return sorted(groups.values(), key=lambda c: sorted(map(rep_sort_key, c)))

    def is_trivial(self) -> bool:
        return all(i == r for i, r in self._rep.items())


def sameas_partition(g: IndexedGraph) -> InstancePartition:
    """Weakly connected components of the owl:sameAs subgraph."""
    uf = UnionFind(g.vertex_ids())
    sa = g.id_of(OWL_SAMEAS)
    if sa is not None:
        for s, p, o, _ in g.quad_ids():
            if p == sa:
                uf.union(s, o)
    return InstancePartition(g, SAMEAS, uf)


def related_property_partition(g: IndexedGraph, direction: str = "src") -> InstancePartition:
    """Vertices linked through chains of shared non-type properties.

    ``direction`` is ``src`` (outgoing property sets), ``trg`` (incoming) or
    ``both`` (closure of the union of the two relations).
    """
    uf = UnionFind(g.vertex_ids())
    rdf_type = g.id_of(RDF_TYPE)
    # property nodes are negative so they never clash with vertex ids;
    # src and trg properties get disjoint ranges
    offset = len(g.table) + 1
    use_src = direction in ("src", "both")
    use_trg = direction in ("trg", "both")
    for s, p, o, _ in g.quad_ids():
        if p == rdf_type:
            continue
        if use_src:
            uf.union(s, -(p + 1))
        if use_trg:
            uf.union(o, -(p + 1 + offset))
    kind = {"src": RELATED_SRC, "trg": RELATED_TRG}.get(direction, RELATED_BOTH)
    return InstancePartition(g, kind, uf)


def merged_view(g: IndexedGraph, part: InstancePartition, drop_predicate: Optional[Term] = None) -> IndexedGraph:
    """Quotient of ``g`` under ``part``.

    Every subject and object is replaced by its instance representative.
    For sameAs instances the owl:sameAs edges are consumed by the merge.
    The merged graph keeps all representatives and all predicates of ``g``
    in its universe even when no edge mentions them any more.
    """
    if drop_predicate is None and part.kind == SAMEAS:
        drop_predicate = OWL_SAMEAS
    drop = g.id_of(drop_predicate) if drop_predicate is not None else None
    rep = part.rep_ids
    merged = g.derived()
    add = merged._add_ids
    for s, p, o, d in g.quad_ids():
        if p == drop:
            continue
        add(rep.get(s, s), p, rep.get(o, o), d)
    merged._include_ids(
        (rep.get(v, v) for v in g.vertex_ids()),
        g.predicate_ids(),
    )
    return merged
