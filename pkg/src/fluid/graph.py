"""In-memory indexed RDF quad store.

Terms are interned to small integers so that the partition engine can work
on ints; the public accessors speak :class:`Term` values.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator, NamedTuple, Optional

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
FLUID = "urn:fluid:"

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"
_KINDS = (IRI, BLANK, LITERAL)

OUT = "out"
IN = "in"


class Term(NamedTuple):
    """An RDF term. ``lexical`` of a literal is its canonical N-Triples form,
    quotes and datatype/language tag included."""

    kind: str
    lexical: str

    def n3(self) -> str:
        if self.kind == IRI:
            return f"<{self.lexical}>"
        if self.kind == BLANK:
            return f"_:{self.lexical}"
        return self.lexical

    def __str__(self) -> str:
        return self.n3()


class Quad(NamedTuple):
    s: Term
    p: Term
    o: Term
    d: Optional[Term] = None


class GraphError(ValueError):
    pass


def iri(value: str) -> Term:
    return Term(IRI, value)


def blank(label: str) -> Term:
    return Term(BLANK, label)


def escape_string(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def literal(value: str, datatype: Optional[str] = None, lang: Optional[str] = None) -> Term:
    text = f'"{escape_string(value)}"'
    if lang:
        text += "@" + lang.lower()
    elif datatype:
        text += f"^^<{datatype}>"
    return Term(LITERAL, text)


RDF_TYPE = iri(RDF + "type")
RDFS_SUBCLASSOF = iri(RDFS + "subClassOf")
RDFS_SUBPROPERTYOF = iri(RDFS + "subPropertyOf")
RDFS_DOMAIN = iri(RDFS + "domain")
RDFS_RANGE = iri(RDFS + "range")
OWL_SAMEAS = iri(OWL + "sameAs")
P_RDFS = (RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF, RDFS_DOMAIN, RDFS_RANGE)

_KIND_TAG = {IRI: b"I", BLANK: b"B", LITERAL: b"L"}


def term_sort_key(t: Term) -> tuple:
    return (t.kind, t.lexical)


def term_digest(t: Term) -> bytes:
    """128-bit digest of a single term; the leaf of every canonical form."""
    return hashlib.blake2b(
        b"T" + _KIND_TAG[t.kind] + t.lexical.encode("utf-8"), digest_size=16
    ).digest()


class TermTable:
    """Bidirectional Term <-> int interning, shareable between graphs."""

    def __init__(self) -> None:
        self.ids: dict[Term, int] = {}
        self.terms: list[Term] = []
        self._digests: list[Optional[bytes]] = []

    def intern(self, t: Term) -> int:
        i = self.ids.get(t)
        if i is None:
            i = len(self.terms)
            self.ids[t] = i
            self.terms.append(t)
            self._digests.append(None)
        return i

    def digest(self, i: int) -> bytes:
        d = self._digests[i]
        if d is None:
            d = self._digests[i] = term_digest(self.terms[i])
        return d

    def __len__(self) -> int:
        return len(self.terms)


def _check_quad(q: Quad) -> None:
    for t in (q.s, q.p, q.o) + ((q.d,) if q.d is not None else ()):
        if t.kind not in _KINDS or not t.lexical:
            raise GraphError(f"malformed term {t!r}")
    if q.s.kind == LITERAL:
        raise GraphError(f"literal subject {q.s.n3()}")
    if q.p.kind != IRI:
        raise GraphError(f"predicate must be an IRI, got {q.p.n3()}")
    if q.d is not None and q.d.kind != IRI:
        raise GraphError(f"context must be an IRI, got {q.d.n3()}")


class IndexedGraph:
    """Set of quads with subject (OutMap) and object (InMap) indices.

    Internally a quad is a tuple of term ids ``(s, p, o, d)`` with ``d == -1``
    for a missing context. Bucket entries are ``(p, o, d)`` in the out index
    and ``(s, p, d)`` in the in index.
    """

    def __init__(self, table: Optional[TermTable] = None) -> None:
        self.table = table if table is not None else TermTable()
        self._quads: set[tuple[int, int, int, int]] = set()
        self._out: dict[int, list[tuple[int, int, int]]] = {}
        self._in: dict[int, list[tuple[int, int, int]]] = {}
        self._vertices: set[int] = set()
        self._predicates: set[int] = set()
        self._missing_context = False

    # -- construction ---------------------------------------------------

    @classmethod
    def from_quads(cls, quads: Iterable[Quad]) -> "IndexedGraph":
        g = cls()
        for q in quads:
            g.add_quad(q)
        return g

    def add_quad(self, q: Quad) -> "IndexedGraph":
        _check_quad(q)
        intern = self.table.intern
        d = intern(q.d) if q.d is not None else -1
        self._add_ids(intern(q.s), intern(q.p), intern(q.o), d)
        return self

    def add(self, s: Term, p: Term, o: Term, d: Optional[Term] = None) -> "IndexedGraph":
        return self.add_quad(Quad(s, p, o, d))

    def _add_ids(self, s: int, p: int, o: int, d: int) -> bool:
        key = (s, p, o, d)
        if key in self._quads:
            return False
        self._quads.add(key)
        self._out.setdefault(s, []).append((p, o, d))
        self._in.setdefault(o, []).append((s, p, d))
        self._vertices.add(s)
        self._vertices.add(o)
        self._predicates.add(p)
        if d < 0:
            self._missing_context = True
        return True

    def include(self, vertices: Iterable[Term] = (), predicates: Iterable[Term] = ()) -> None:
        """Register terms as vertices/predicates even if no quad mentions them.

        Merged (quotient) graphs use this to keep vertices whose only edges
        were consumed by the merge.
        """
        intern = self.table.intern
        self._vertices.update(intern(v) for v in vertices)
        self._predicates.update(intern(p) for p in predicates)

    def _include_ids(self, vertices: Iterable[int] = (), predicates: Iterable[int] = ()) -> None:
        self._vertices.update(vertices)
        self._predicates.update(predicates)

    def derived(self) -> "IndexedGraph":
        """An empty graph sharing this graph's term table."""
        return IndexedGraph(self.table)

    # -- id-level access (used by the engine) --------------------------

    def out_ids(self, v: int) -> list[tuple[int, int, int]]:
        return self._out.get(v, [])

    def in_ids(self, v: int) -> list[tuple[int, int, int]]:
        return self._in.get(v, [])

    def vertex_ids(self) -> set[int]:
        return self._vertices

    def predicate_ids(self) -> set[int]:
        return self._predicates

    def subject_ids(self):
        return self._out.keys()

    def object_ids(self):
        return self._in.keys()

    def quad_ids(self) -> set[tuple[int, int, int, int]]:
        return self._quads

    def id_of(self, t: Term) -> Optional[int]:
        return self.table.ids.get(t)

    def term(self, i: int) -> Term:
        return self.table.terms[i]

    # -- public accessors ------------------------------------------------

    def __len__(self) -> int:
        return len(self._quads)

    def __contains__(self, q: Quad) -> bool:
        ids = self.table.ids
        try:
            d = ids[q.d] if q.d is not None else -1
            return (ids[q.s], ids[q.p], ids[q.o], d) in self._quads
        except KeyError:
            return False

    def quads(self) -> Iterator[Quad]:
        terms = self.table.terms
        for s, p, o, d in self._quads:
            yield Quad(terms[s], terms[p], terms[o], terms[d] if d >= 0 else None)

    def triples(self) -> set[tuple[Term, Term, Term]]:
        terms = self.table.terms
        return {(terms[s], terms[p], terms[o]) for s, p, o, _ in self._quads}

    @property
    def out_index(self) -> dict[Term, list[Quad]]:
        return {self.term(s): self.out_quads(self.term(s)) for s in self._out}

    @property
    def in_index(self) -> dict[Term, list[Quad]]:
        return {self.term(o): self.in_quads(self.term(o)) for o in self._in}

    def out_quads(self, v: Term) -> list[Quad]:
        i = self.id_of(v)
        if i is None:
            return []
        t = self.table.terms
        return [Quad(v, t[p], t[o], t[d] if d >= 0 else None) for p, o, d in self.out_ids(i)]

    def in_quads(self, v: Term) -> list[Quad]:
        i = self.id_of(v)
        if i is None:
            return []
        t = self.table.terms
        return [Quad(t[s], t[p], v, t[d] if d >= 0 else None) for s, p, d in self.in_ids(i)]

    def vertices(self) -> set[Term]:
        return {self.term(i) for i in self._vertices}

    def subjects(self) -> set[Term]:
        return {self.term(i) for i in self._out}

    def predicates(self) -> set[Term]:
        return {self.term(i) for i in self._predicates}

    def contexts(self) -> set[Term]:
        return {self.term(d) for *_, d in self._quads if d >= 0}

    @property
    def has_contexts(self) -> bool:
        """True when every quad carries a data-source context."""
        return not self._missing_context

    def type_set(self, v: Term) -> set[Term]:
        return {q.o for q in self.out_quads(v) if q.p == RDF_TYPE}

    def property_set(self, v: Term, direction: str = OUT) -> set[Term]:
        quads = self.out_quads(v) if direction == OUT else self.in_quads(v)
        return {q.p for q in quads if q.p != RDF_TYPE}

    def neighbors(self, v: Term, direction: str = OUT) -> set[Term]:
        if direction == OUT:
            return {q.o for q in self.out_quads(v)}
        return {q.s for q in self.in_quads(v)}

    def types(self) -> set[Term]:
        """V_C: every object of an rdf:type triple."""
        t = self.id_of(RDF_TYPE)
        if t is None:
            return set()
        return {self.term(o) for s, p, o, _ in self._quads if p == t}
