"""Hash-based evaluation of equivalence-relation ASTs.

Every node is evaluated to a map ``term id -> ClassId`` where the ClassId is
a 128-bit blake2b digest of a canonical, kind-tagged serialization of the
vertex's schema structure. Two ids share a ClassId iff their structures are
equal, so grouping by ClassId yields the partition.

Relations are defined over a universe of terms. Vertex positions (the
summarized vertex, CSE subjects and objects) use the graph's vertices;
the CSE predicate position uses vertices and predicates. The distinction
only matters for extended unions, whose transitive closure is taken over
the universe they are evaluated on.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import Optional

from .definition import (
    BOTH,
    IN,
    OC,
    OUT,
    PC,
    POC,
    RELATED,
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
    Taut,
    direction_of,
)
from .graph import IRI, RDF_TYPE, IndexedGraph, Term
from .instances import (
    InstancePartition,
    UnionFind,
    merged_view,
    related_property_partition,
    sameas_partition,
)

V, VP = "V", "VP"


def _h(*parts: bytes) -> bytes:
    return hashlib.blake2b(b"".join(parts), digest_size=16).digest()


TOP_KEY = _h(b"TOP")
_DIR_TAG = {OUT: b"o", IN: b"i"}


@dataclass(frozen=True)
class SchemaStructure:
    """Canonical schema structure of one equivalence class.

    ``items`` for simple elements are ``(direction, predicate, object)``
    triples of Terms (``None`` where the element does not compare that
    position); for CSEs they are ``(direction, pred_ref, obj_ref)`` where a
    ref is a Term (identity), a ClassId (nested class) or ``None`` (⊤).
    ``other`` lists the directions in which the vertex fell into a
    set-parameterization catch-all class.
    """

    kind: str
    items: tuple = ()
    sub: Optional[bytes] = None
    other: tuple = ()


@dataclass
class Partition:
    assignment: dict  # Term -> ClassId
    classes: dict  # ClassId -> SchemaStructure
    domain: frozenset

    def members(self) -> dict:
        out: dict = {}
        for t, c in self.assignment.items():
            out.setdefault(c, set()).add(t)
        return out

    def blocks(self) -> set:
        return {frozenset(m) for m in self.members().values()}

    def refines(self, other: "Partition") -> bool:
        """True when every class of self lies inside one class of other."""
        for block in self.blocks():
            if len({other.assignment.get(t) for t in block}) > 1:
                return False
        return True

    def __len__(self) -> int:
        return len(self.classes)


def _dirs(direction: str) -> tuple:
    return (OUT, IN) if direction == BOTH else (direction,)


def _is_local(node: EqNode) -> bool:
    """Local nodes give the same key to a term whatever universe they run on."""
    if isinstance(node, (ExtUnion, InstanceParam)):
        return False
    if isinstance(node, Complex):
        return _is_local(node.sub)
    if isinstance(node, Intersect):
        return all(_is_local(p) for p in node.parts)
    return True


def instance_kind(node: InstanceParam) -> str:
    if node.delta == SAMEAS:
        return SAMEAS
    return {OUT: "src", IN: "trg"}.get(direction_of(node.inner), "both")


class Engine:
    """Evaluates EqNodes on one graph, memoizing every (node, universe) pair."""

    def __init__(self, graph: IndexedGraph) -> None:
        self.g = graph
        self._memo: dict = {}
        self._inverse: dict = {}
        self._subs: dict = {}
        self._parts: dict = {}
        self._universe = {
            V: frozenset(graph.vertex_ids()),
            VP: frozenset(graph.vertex_ids()) | frozenset(graph.predicate_ids()),
        }

    # -- public ----------------------------------------------------------

    def domain_ids(self, node: EqNode) -> set:
        d = direction_of(node)
        if d == OUT:
            return set(self.g.subject_ids())
        if d == IN:
            return set(self.g.object_ids())
        return set(self.g.subject_ids()) | set(self.g.object_ids())

    def evaluate(self, node: EqNode, with_structures: bool = True) -> Partition:
        keys = self.keys(node, V)
        terms = self.g.table.terms
        domain = self.domain_ids(node)
        assignment = {terms[i]: keys[i] for i in domain}
        classes: dict = {}
        if with_structures:
            for cid in set(assignment.values()):
                classes[cid] = self.structure(node, V, cid)
        else:
            classes = {cid: None for cid in assignment.values()}
        return Partition(assignment, classes, frozenset(assignment))

    def keys(self, node: EqNode, tag: str) -> dict:
        if _is_local(node):
            tag = VP
        memo_key = (node, tag)
        res = self._memo.get(memo_key)
        if res is None:
            res = self._memo[memo_key] = self._compute(node, tag)
        return res

    # -- dispatch ---------------------------------------------------------

    def _compute(self, node: EqNode, tag: str) -> dict:
        universe = self._universe[tag]
        if isinstance(node, Taut):
            return dict.fromkeys(universe, TOP_KEY)
        if isinstance(node, Ident):
            digest = self.g.table.digest
            return {i: digest(i) for i in universe}
        if isinstance(node, Simple):
            return self._simple(node, universe)
        if isinstance(node, Complex):
            return self._complex(node, tag, universe)
        if isinstance(node, Intersect):
            child = [self.keys(p, tag) for p in node.parts]
            return {i: _h(b"AND", *(c[i] for c in child)) for i in universe}
        if isinstance(node, ExtUnion):
            return self._ext_union(node, tag, universe)
        if isinstance(node, InstanceParam):
            sub, part = self._instance(node)
            inner = sub.keys(node.inner, tag)
            rep = part.rep_ids
            return {i: inner[rep.get(i, i)] for i in universe}
        raise TypeError(f"cannot evaluate {node!r}")

    # -- parameter resolution -------------------------------------------

    def _admitted(self, labels: Optional[LabelSet]):
        """(ids, exclude) such that predicate p is admitted iff (p in ids) != exclude."""
        if labels is None:
            return frozenset(), True
        ids = self.g.table.ids
        found = frozenset(ids[t] for t in (Term(IRI, x) for x in labels.iris) if t in ids)
        return found, labels.exclude

    def _set_ids(self, sp: SetParam):
        """(ids of S present in the graph, whether S itself is non-empty)."""
        ids = self.g.table.ids
        if sp.all_types:
            rdf_type = ids.get(RDF_TYPE)
            found = frozenset(o for s, p, o, _ in self.g.quad_ids() if p == rdf_type)
            return found, bool(found)
        return frozenset(ids[t] for t in (Term(IRI, x) for x in sp.iris) if t in ids), bool(sp.iris)

    def _edges(self, v: int, direction: str):
        """(predicate, other end) pairs of v in one direction."""
        if direction == OUT:
            return [(p, o) for p, o, _ in self.g.out_ids(v)]
        return [(p, s) for s, p, _ in self.g.in_ids(v)]

    # -- simple schema elements ------------------------------------------

    def _simple(self, node: Simple, universe) -> dict:
        lab, excl = self._admitted(node.labels)
        digest = self.g.table.digest
        kind = node.kind
        sp = node.set_param
        S = self._set_ids(sp) if sp is not None else None
        dirs = _dirs(node.direction)
        tags = {d: kind.encode() + b"\0" + _DIR_TAG[d] + b"\0" for d in dirs}
        out: dict = {}
        for v in universe:
            parts = []
            for d in dirs:
                rel = [(p, x) for p, x in self._edges(v, d) if (p in lab) != excl]
                if S is not None and _is_catch_all(kind, rel, S):
                    parts.append(_h(tags[d], b"*"))
                    continue
                if kind == PC:
                    items = {digest(p) for p, _ in rel}
                elif kind == OC:
                    items = {digest(x) for _, x in rel}
                else:
                    items = {digest(p) + digest(x) for p, x in rel}
                parts.append(_h(tags[d], *sorted(items)))
            out[v] = parts[0] if len(parts) == 1 else _h(b"BOTH", *parts)
        return out

    # -- complex schema elements -----------------------------------------

    def _chain_obj(self, node: Complex) -> EqNode:
        return node.obj if node.k == 1 else replace(node, k=node.k - 1)

    def _pred_filter(self, node: Complex):
        if isinstance(node.pred, Ident) and node.pred.labels is not None:
            return self._admitted(node.pred.labels)
        return frozenset(), True

    def _complex(self, node: Complex, tag: str, universe) -> dict:
        sub = self.keys(node.sub, tag)
        pk = self.keys(node.pred, VP)
        ok = self.keys(self._chain_obj(node), V)
        lab, excl = self._pred_filter(node)
        dirs = _dirs(node.direction)
        tags = {d: b"CSE\0" + _DIR_TAG[d] + b"\0" for d in dirs}
        out: dict = {}
        for v in universe:
            parts = []
            for d in dirs:
                items = {pk[p] + ok[x] for p, x in self._edges(v, d) if (p in lab) != excl}
                if items:
                    parts.append(_h(tags[d], sub[v], *sorted(items)))
                else:
                    parts.append(_h(tags[d], b"empty"))
            out[v] = parts[0] if len(parts) == 1 else _h(b"BOTH", *parts)
        return out

    # -- combinators -------------------------------------------------------

    def _ext_union(self, node: ExtUnion, tag: str, universe) -> dict:
        child = [self.keys(p, tag) for p in node.parts]
        uf = UnionFind(universe)
        for keys in child:
            first: dict = {}
            for i in universe:
                k = keys[i]
                j = first.setdefault(k, i)
                if j != i:
                    uf.union(i, j)
        out: dict = {}
        for members in uf.groups().values():
            labels = sorted({n.to_bytes(2, "big") + c[i] for i in members for n, c in enumerate(child)})
            cid = _h(b"UNION", *labels)
            for i in members:
                out[i] = cid
        return out

    def _instance(self, node: InstanceParam):
        kind = instance_kind(node)
        hit = self._subs.get(kind)
        if hit is None:
            if kind == SAMEAS:
                part = sameas_partition(self.g)
            else:
                part = related_property_partition(self.g, kind)
            hit = self._subs[kind] = (Engine(merged_view(self.g, part)), part)
        return hit

    def instance_partition(self, node: InstanceParam) -> InstancePartition:
        return self._instance(node)[1]

    # -- structures ----------------------------------------------------------

    def representative(self, node: EqNode, tag: str, cid: bytes) -> int:
        if _is_local(node):
            tag = VP
        inv = self._inverse.get((node, tag))
        if inv is None:
            inv = {}
            for i, c in self.keys(node, tag).items():
                j = inv.get(c)
                if j is None or i < j:
                    inv[c] = i
            self._inverse[(node, tag)] = inv
        return inv[cid]

    def structure(self, node: EqNode, tag: str, cid: bytes) -> SchemaStructure:
        return self.explain(node, tag, cid)[0]

    def explain(self, node: EqNode, tag: str, cid: bytes):
        """-> (SchemaStructure, refs); each ref is (engine, node, tag, ClassId)
        naming a nested class the structure points at."""
        if isinstance(node, Taut):
            return SchemaStructure("TOP"), []
        if isinstance(node, InstanceParam):
            return self._instance(node)[0].explain(node.inner, tag, cid)
        v = self.representative(node, tag, cid)
        terms = self.g.table.terms
        if isinstance(node, Ident):
            return SchemaStructure("ID", (terms[v],)), []
        if isinstance(node, Simple):
            return self._explain_simple(node, v), []
        if isinstance(node, Complex):
            return self._explain_complex(node, tag, v)
        if isinstance(node, Intersect):
            refs = [(self, p, tag, self.keys(p, tag)[v]) for p in node.parts]
            return SchemaStructure("AND", tuple(r[3] for r in refs)), refs
        if isinstance(node, ExtUnion):
            keys = self.keys(node, tag)
            child = [self.keys(p, tag) for p in node.parts]
            pairs = sorted({(n, c[i]) for i, k in keys.items() if k == cid for n, c in enumerate(child)})
            refs = [(self, node.parts[n], tag, c) for n, c in pairs]
            return SchemaStructure("UNION", tuple(pairs)), refs
        raise TypeError(f"cannot explain {node!r}")

    def _explain_simple(self, node: Simple, v: int) -> SchemaStructure:
        lab, excl = self._admitted(node.labels)
        S = self._set_ids(node.set_param) if node.set_param is not None else None
        terms = self.g.table.terms
        digest = self.g.table.digest
        items = set()
        other = []
        for d in _dirs(node.direction):
            rel = [(p, x) for p, x in self._edges(v, d) if (p in lab) != excl]
            if S is not None and _is_catch_all(node.kind, rel, S):
                other.append(d)
                continue
            for p, x in rel:
                items.add((d, p if node.kind != OC else None, x if node.kind != PC else None))

        def sort_key(it):
            d, p, x = it
            return (d, digest(p) if p is not None else b"", digest(x) if x is not None else b"")

        ordered = tuple(
            (d, terms[p] if p is not None else None, terms[x] if x is not None else None)
            for d, p, x in sorted(items, key=sort_key)
        )
        return SchemaStructure(node.kind, ordered, other=tuple(other))

    def _explain_complex(self, node: Complex, tag: str, v: int):
        sub_keys = self.keys(node.sub, tag)
        pk = self.keys(node.pred, VP)
        obj = self._chain_obj(node)
        ok = self.keys(obj, V)
        lab, excl = self._pred_filter(node)
        terms = self.g.table.terms
        refs = []
        items = set()
        for d in _dirs(node.direction):
            for p, x in self._edges(v, d):
                if (p in lab) != excl:
                    items.add((d, pk[p], ok[x], p, x))
        out = []
        seen = set()
        for d, pkey, okey, p, x in sorted(items):
            if (d, pkey, okey) in seen:
                continue
            seen.add((d, pkey, okey))
            out.append((d, self._ref(node.pred, VP, p, pkey, refs), self._ref(obj, V, x, okey, refs)))
        sub = None
        if items and not isinstance(node.sub, Taut):
            sub = sub_keys[v]
            refs.append((self, node.sub, tag, sub))
        return SchemaStructure("CSE", tuple(out), sub), refs

    def _ref(self, node: EqNode, tag: str, term_id: int, key: bytes, refs: list):
        if isinstance(node, Taut):
            return None
        if isinstance(node, Ident):
            return self.g.table.terms[term_id]
        refs.append((self, node, tag, key))
        return key


def _is_catch_all(kind: str, rel: list, S: tuple) -> bool:
    S, nonempty = S
    if not rel:
        return nonempty
    if kind in (PC, POC) and any(p not in S for p, _ in rel):
        return True
    if kind in (OC, POC) and any(x not in S for _, x in rel):
        return True
    return False


def evaluate(node: EqNode, graph: IndexedGraph) -> Partition:
    return Engine(graph).evaluate(node)
