"""Brute-force reference semantics.

Equivalence is decided pair by pair by transcribing each definition's
quantifiers over the graph's triples. Nothing here is shared with the
hash-based engine apart from the AST and the graph accessors, so agreement
between the two is meaningful evidence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import replace
from itertools import combinations
from typing import Optional, Union

from .definition import (
    RDFS_INSIDE,
    SAMEAS,
    Complex,
    EqNode,
    ExtUnion,
    Ident,
    InstanceParam,
    Intersect,
    LabelSet,
    SetParam,
    Simple,
    SummaryDefinition,
    Taut,
)
from .graph import (
    IRI,
    LITERAL,
    OWL_SAMEAS,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    IndexedGraph,
    Quad,
    Term,
)

DEFAULT_CAP = 200
VERTICES, ALL_TERMS = "vertices", "terms"


class OracleCapExceeded(ValueError):
    pass


class NotAnEquivalence(AssertionError):
    pass


def _label_ok(labels: Optional[LabelSet], p: Term) -> bool:
    if labels is None:
        return True
    return (p.kind == IRI and p.lexical in labels.iris) != labels.exclude


def _root_direction(node: EqNode) -> str:
    if isinstance(node, (Simple, Complex)):
        return node.direction
    if isinstance(node, InstanceParam):
        return _root_direction(node.inner)
    if isinstance(node, (Intersect, ExtUnion)):
        found = {_root_direction(p) for p in node.parts}
        return found.pop() if len(found) == 1 else "both"
    return "out"


class Oracle:
    """Pairwise verdicts for one graph, memoized per (node, u, v)."""

    def __init__(self, g: IndexedGraph) -> None:
        self.g = g
        self.cache: dict = {}
        self._closures: dict = {}
        self._merged: dict = {}
        vertices = set()
        preds = set()
        for q in g.quads():
            vertices.add(q.s)
            vertices.add(q.o)
            preds.add(q.p)
        vertices |= g.vertices()
        preds |= g.predicates()
        self.universes = {VERTICES: vertices, ALL_TERMS: vertices | preds}
        self._types = {q.o for q in g.quads() if q.p == RDF_TYPE}

    def triples(self, v: Term, direction: str) -> list[tuple[Term, Term]]:
        """(predicate, far end) pairs of v's triples in one direction."""
        if direction == "out":
            return [(q.p, q.o) for q in self.g.out_quads(v)]
        return [(q.p, q.s) for q in self.g.in_quads(v)]

    def equivalent(self, node: EqNode, u: Term, v: Term, universe: str = VERTICES) -> bool:
        if u == v:
            return True
        key = (node, universe, u, v) if u <= v else (node, universe, v, u)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._decide(node, u, v, universe)
        return hit

    def _decide(self, node: EqNode, u: Term, v: Term, universe: str) -> bool:
        if isinstance(node, Taut):
            return True
        if isinstance(node, Ident):
            return False  # u != v here
        if isinstance(node, Simple):
            return all(self._simple(node, d, u, v) for d in _directions(node.direction))
        if isinstance(node, Complex):
            return all(self._complex(node, d, u, v, universe) for d in _directions(node.direction))
        if isinstance(node, Intersect):
            return all(self.equivalent(p, u, v, universe) for p in node.parts)
        if isinstance(node, ExtUnion):
            comp = self._closure(node, universe)
            return comp[u] == comp[v]
        if isinstance(node, InstanceParam):
            sub, rep = self._merged_oracle(node)
            return sub.equivalent(node.inner, rep.get(u, u), rep.get(v, v), universe)
        raise TypeError(node)

    # -- simple schema elements --------------------------------------------

    def _simple(self, node: Simple, d: str, u: Term, v: Term) -> bool:
        tu = [t for t in self.triples(u, d) if _label_ok(node.labels, t[0])]
        tv = [t for t in self.triples(v, d) if _label_ok(node.labels, t[0])]
        if node.set_param is not None:
            S = self._resolve_set(node.set_param)
            cu = self._outside(node.kind, tu, S)
            cv = self._outside(node.kind, tv, S)
            if cu or cv:
                return cu and cv
        return self._covers(node.kind, tu, tv) and self._covers(node.kind, tv, tu)

    @staticmethod
    def _covers(kind: str, a, b) -> bool:
        """Every triple of a has a partner in b."""
        for p, o in a:
            if kind == "POC":
                ok = any(p == p2 and o == o2 for p2, o2 in b)
            elif kind == "PC":
                ok = any(p == p2 for p2, _ in b)
            else:
                ok = any(o == o2 for _, o2 in b)
            if not ok:
                return False
        return True

    def _resolve_set(self, sp: SetParam) -> set:
        if sp.all_types:
            return set(self._types)
        return {Term(IRI, x) for x in sp.iris}

    @staticmethod
    def _outside(kind: str, triples, S: set) -> bool:
        # catch-all class: some compared term outside S, or nothing to compare
        # while S is non-empty
        if not triples:
            return len(S) > 0
        for p, o in triples:
            if kind in ("PC", "POC") and p not in S:
                return True
            if kind in ("OC", "POC") and o not in S:
                return True
        return False

    # -- complex schema elements -------------------------------------------

    def _complex(self, node: Complex, d: str, u: Term, v: Term, universe: str) -> bool:
        obj = node.obj if node.k == 1 else replace(node, k=node.k - 1)
        scope = node.pred.labels if isinstance(node.pred, Ident) else None
        tu = [t for t in self.triples(u, d) if _label_ok(scope, t[0])]
        tv = [t for t in self.triples(v, d) if _label_ok(scope, t[0])]
        if not tu and not tv:
            return True
        if not tu or not tv:
            return False
        if not self.equivalent(node.sub, u, v, universe):
            return False

        def match(a, b):
            return all(
                any(
                    self.equivalent(node.pred, p, p2, ALL_TERMS) and self.equivalent(obj, o, o2, VERTICES)
                    for p2, o2 in b
                )
                for p, o in a
            )

        return match(tu, tv) and match(tv, tu)

    # -- extended union: connected components of the union of verdicts -------

    def _closure(self, node: ExtUnion, universe: str) -> dict:
        key = (node, universe)
        if key in self._closures:
            return self._closures[key]
        terms = sorted(self.universes[universe])
        comp: dict = {}
        for start in terms:
            if start in comp:
                continue
            comp[start] = start
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in terms:
                    if y not in comp and any(self.equivalent(p, x, y, universe) for p in node.parts):
                        comp[y] = start
                        queue.append(y)
        self._closures[key] = comp
        return comp

    # -- instance parameterization -----------------------------------------

    def _merged_oracle(self, node: InstanceParam):
        if node.delta == SAMEAS:
            kind = SAMEAS
        else:
            kind = {"out": "src", "in": "trg"}.get(_root_direction(node.inner), "both")
        if kind not in self._merged:
            groups = self._instance_groups(kind)
            rep = {}
            for group in groups:
                r = min(group, key=lambda t: (t.kind == LITERAL, t.kind, t.lexical))
                for t in group:
                    rep[t] = r
            quads = []
            for q in self.g.quads():
                if kind == SAMEAS and q.p == OWL_SAMEAS:
                    continue
                quads.append(Quad(rep.get(q.s, q.s), q.p, rep.get(q.o, q.o), q.d))
            merged = IndexedGraph.from_quads(quads)
            merged.include({rep.get(t, t) for t in self.universes[VERTICES]}, self.g.predicates())
            self._merged[kind] = (Oracle(merged), rep)
        return self._merged[kind]

    def _instance_groups(self, kind: str) -> list[set]:
        """Connected components of the instance relation, by BFS."""
        vertices = sorted(self.universes[VERTICES])
        adj: dict = {v: set() for v in vertices}
        if kind == SAMEAS:
            for q in self.g.quads():
                if q.p == OWL_SAMEAS:
                    adj[q.s].add(q.o)
                    adj[q.o].add(q.s)
        else:
            dirs = {"src": ("out",), "trg": ("in",), "both": ("out", "in")}[kind]
            props = {
                v: {(d, p) for d in dirs for p, _ in self.triples(v, d) if p != RDF_TYPE} for v in vertices
            }
            for a, b in combinations(vertices, 2):
                if props[a] & props[b]:
                    adj[a].add(b)
                    adj[b].add(a)
        seen: set = set()
        groups = []
        for v in vertices:
            if v in seen:
                continue
            group = {v}
            queue = deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        group.add(y)
                        queue.append(y)
            groups.append(group)
        return groups


def _directions(direction: str) -> tuple:
    return ("out", "in") if direction == "both" else (direction,)


def candidate_domain(g: IndexedGraph, node: EqNode) -> set:
    d = _root_direction(node)
    subjects = {q.s for q in g.quads()}
    objects = {q.o for q in g.quads()}
    if d == "out":
        return subjects
    if d == "in":
        return objects
    return subjects | objects


_SCHEMA_P = (RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF, RDFS_DOMAIN, RDFS_RANGE)


def naive_materialize(g: IndexedGraph) -> IndexedGraph:
    """Apply the single-step RDFS rules 2, 3, 7 and 9 until nothing changes.

    The schema triples are read once from the input; inferred triples never
    extend the vocabulary. Iterating single steps makes the transitive rules
    5 and 11 implicit.
    """
    schema = [q for q in g.quads() if q.p in _SCHEMA_P]
    pairs = {p: {(q.s, q.o) for q in schema if q.p == p} for p in _SCHEMA_P}
    quads = set(g.quads())
    while True:
        new = set()
        for q in quads:
            for a, b in pairs[RDFS_SUBPROPERTYOF]:
                if a == q.p:
                    new.add(Quad(q.s, b, q.o, q.d))
            for a, b in pairs[RDFS_DOMAIN]:
                if a == q.p:
                    new.add(Quad(q.s, RDF_TYPE, b, q.d))
            for a, b in pairs[RDFS_RANGE]:
                if a == q.p and q.o.kind != LITERAL:
                    new.add(Quad(q.o, RDF_TYPE, b, q.d))
            if q.p == RDF_TYPE:
                for a, b in pairs[RDFS_SUBCLASSOF]:
                    if a == q.o:
                        new.add(Quad(q.s, RDF_TYPE, b, q.d))
        new -= quads
        if not new:
            return IndexedGraph.from_quads(quads)
        quads |= new


def naive_partition(
    g: IndexedGraph,
    target: Union[SummaryDefinition, EqNode],
    cap: int = DEFAULT_CAP,
    check_transitivity: bool = True,
) -> set:
    """Classes of the candidate domain as a set of frozensets of Terms."""
    node = target.root if isinstance(target, SummaryDefinition) else target
    if isinstance(target, SummaryDefinition) and target.inference == RDFS_INSIDE:
        g = naive_materialize(g)
    domain = sorted(candidate_domain(g, node))
    if len(domain) > cap:
        raise OracleCapExceeded(f"candidate domain has {len(domain)} vertices, cap is {cap}")
    oracle = Oracle(g)
    classes: list[list[Term]] = []
    for v in domain:
        for cls in classes:
            if oracle.equivalent(node, cls[0], v):
                cls.append(v)
                break
        else:
            classes.append([v])
    if check_transitivity:
        _check_equivalence(oracle, node, domain, classes)
    return {frozenset(c) for c in classes}


def _check_equivalence(oracle: Oracle, node: EqNode, domain: list, classes: list) -> None:
    where = {v: i for i, c in enumerate(classes) for v in c}
    for a, b in combinations(domain, 2):
        verdict = oracle.equivalent(node, a, b)
        if verdict != (where[a] == where[b]):
            raise NotAnEquivalence(f"verdicts on {a.n3()} / {b.n3()} are not transitive")
        if verdict != oracle.equivalent(node, b, a):
            raise NotAnEquivalence(f"verdict on {a.n3()} / {b.n3()} is not symmetric")


def naive_equivalent(g: IndexedGraph, node: EqNode, u: Term, v: Term) -> bool:
    return Oracle(g).equivalent(node, u, v)
