"""Seeded generators: small random graphs and definitions for fuzzing, and
bounded-degree graphs for scaling runs."""

from __future__ import annotations

import random
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
)
from .graph import (
    OWL_SAMEAS,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    IndexedGraph,
    iri,
    literal,
)

EX = "http://example.org/"


def predicate_iri(i: int) -> str:
    return f"{EX}p{i}"


def type_iri(i: int) -> str:
    return f"{EX}T{i}"


def random_graph(
    seed: int,
    max_vertices: int = 30,
    max_edges: int = 60,
    n_predicates: int = 6,
    n_types: int = 6,
    schema: bool = True,
    sameas: bool = True,
) -> IndexedGraph:
    """A small random graph mixing data edges, rdf:type edges, literals,
    a few contexts, optional owl:sameAs links and optional RDFS schema."""
    rng = random.Random(seed)
    nv = rng.randint(1, max_vertices)
    ne = rng.randint(1, max_edges)
    npred = rng.randint(1, n_predicates)
    ntype = rng.randint(1, n_types)
    vertices = [iri(f"{EX}v{i}") for i in range(nv)]
    preds = [iri(predicate_iri(i)) for i in range(1, npred + 1)]
    types = [iri(type_iri(i)) for i in range(1, ntype + 1)]
    literals = [literal(f"l{i}") for i in range(rng.randint(0, 4))]
    contexts = [iri(f"{EX}doc{i}") for i in range(rng.randint(1, 3))]
    g = IndexedGraph()
    budget = ne
    n_schema = rng.randint(0, 4) if schema and rng.random() < 0.5 else 0
    for _ in range(n_schema):
        kind = rng.random()
        if kind < 0.35:
            g.add(rng.choice(types), RDFS_SUBCLASSOF, rng.choice(types), contexts[0])
        elif kind < 0.6:
            g.add(rng.choice(preds), RDFS_SUBPROPERTYOF, rng.choice(preds), contexts[0])
        elif kind < 0.8:
            g.add(rng.choice(preds), RDFS_DOMAIN, rng.choice(types), contexts[0])
        else:
            g.add(rng.choice(preds), RDFS_RANGE, rng.choice(types), contexts[0])
        budget -= 1
    n_sameas = rng.randint(0, 3) if sameas and rng.random() < 0.4 else 0
    for _ in range(n_sameas):
        g.add(rng.choice(vertices), OWL_SAMEAS, rng.choice(vertices), rng.choice(contexts))
        budget -= 1
    for _ in range(max(budget, 1)):
        s = rng.choice(vertices)
        r = rng.random()
        if r < 0.25:
            g.add(s, RDF_TYPE, rng.choice(types), rng.choice(contexts))
        elif r < 0.35 and literals:
            g.add(s, rng.choice(preds), rng.choice(literals), rng.choice(contexts))
        else:
            g.add(s, rng.choice(preds), rng.choice(vertices), rng.choice(contexts))
    return g


class AstGenerator:
    """Random well-formed equivalence-relation ASTs (depth ≤ 3, k ≤ 3)."""

    def __init__(self, seed: int, max_depth: int = 3, max_k: int = 3, n_predicates: int = 6, n_types: int = 6):
        self.rng = random.Random(seed)
        self.max_depth = max_depth
        self.max_k = max_k
        self.preds = [predicate_iri(i) for i in range(1, n_predicates + 1)]
        self.types = [type_iri(i) for i in range(1, n_types + 1)]

    def labels(self) -> Optional[LabelSet]:
        r = self.rng.random()
        if r < 0.45:
            return None
        if r < 0.6:
            return LabelSet(frozenset({RDF_TYPE.lexical}))
        if r < 0.75:
            return LabelSet(frozenset({RDF_TYPE.lexical}), exclude=True)
        pick = self.rng.sample(self.preds, self.rng.randint(1, 3))
        return LabelSet(frozenset(pick), exclude=self.rng.random() < 0.3)

    def set_param(self, kind: str) -> Optional[SetParam]:
        r = self.rng.random()
        if r < 0.7:
            return None
        if r < 0.8:
            return SetParam(all_types=True)
        pool = self.preds + [RDF_TYPE.lexical] if kind == PC else self.types + self.preds + [RDF_TYPE.lexical]
        return SetParam(frozenset(self.rng.sample(pool, self.rng.randint(0, 3))))

    def direction(self) -> str:
        return self.rng.choice((OUT, OUT, IN, BOTH))

    def simple(self) -> Simple:
        kind = self.rng.choice((POC, PC, OC))
        return Simple(kind, self.labels(), self.set_param(kind), self.direction())

    def leaf(self) -> EqNode:
        r = self.rng.random()
        if r < 0.2:
            return Taut()
        if r < 0.4:
            return Ident(self.rng.choice((None, None, LabelSet(frozenset({RDF_TYPE.lexical}), exclude=True))))
        return self.simple()

    def node(self, depth: int = 0, position: bool = False) -> EqNode:
        """position=True allows ⊤ and id (inside a CSE)."""
        if depth >= self.max_depth:
            return self.leaf() if position else self.simple()
        r = self.rng.random()
        if r < 0.3:
            return self.leaf() if position else self.simple()
        if r < 0.65:
            pred = self.rng.choice(
                (Taut(), Ident(), Ident(), Ident(LabelSet(frozenset({RDF_TYPE.lexical}), exclude=True)), None)
            )
            if pred is None:
                pred = self.node(depth + 1, True)
            return Complex(
                self.node(depth + 1, True),
                pred,
                self.node(depth + 1, True),
                k=self.rng.randint(1, self.max_k),
                direction=self.direction(),
            )
        if r < 0.75:
            return Intersect((self.node(depth + 1, position), self.node(depth + 1, position)))
        if r < 0.87:
            return ExtUnion((self.node(depth + 1, position), self.node(depth + 1, position)))
        inner = self.node(depth + 1, False)
        return InstanceParam(inner, self.rng.choice((SAMEAS, RELATED)))

    def root(self) -> EqNode:
        return self.node(0, False)


def random_ast(seed: int, **kw) -> EqNode:
    return AstGenerator(seed, **kw).root()


def bench_graph(n_edges: int, seed: int = 0, out_degree: int = 4, n_predicates: int = 20, n_types: int = 10) -> IndexedGraph:
    """Bounded-degree graph with exactly ``n_edges`` distinct triples.

    Each subject has ``out_degree`` edges: one rdf:type edge and the rest to
    vertices chosen from a small window ahead of it, so in-degrees stay
    bounded too.
    """
    rng = random.Random(seed)
    g = IndexedGraph()
    table = g.table
    n_sub = -(-n_edges // out_degree)
    vid = [table.intern(iri(f"{EX}v{i}")) for i in range(n_sub)]
    pid = [table.intern(iri(predicate_iri(i))) for i in range(n_predicates)]
    tid = [table.intern(iri(type_iri(i))) for i in range(n_types)]
    type_id = table.intern(RDF_TYPE)
    ctx = table.intern(iri(f"{EX}bench"))
    add = g._add_ids
    left = n_edges
    for i in range(n_sub):
        s = vid[i]
        if left and add(s, type_id, tid[rng.randrange(n_types)], ctx):
            left -= 1
        for j in range(1, out_degree):
            if not left:
                break
            o = vid[(i + j * rng.randint(1, 8)) % n_sub]
            p = pid[(j * 7 + rng.randrange(3)) % n_predicates]
            if add(s, p, o, ctx):
                left -= 1
    return g
