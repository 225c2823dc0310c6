"""Line-oriented N-Triples / N-Quads ingestion.

Unparsable lines are skipped and counted, never fatal. Blank-node labels are
skolemized per source document so that labels from different files cannot
collide.
"""

from __future__ import annotations

import glob
import gzip
import hashlib
import io
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, NamedTuple, Optional, Union

from .graph import BLANK, FLUID, IRI, LITERAL, IndexedGraph, Quad, Term, escape_string

log = logging.getLogger(__name__)

MAX_SKIP_SAMPLES = 100

MALFORMED_IRI = "malformed_iri"
LITERAL_SUBJECT = "literal_subject"
MISSING_DOT = "missing_dot"
BAD_ESCAPE = "bad_escape"
BAD_PREDICATE = "non_iri_predicate"
SYNTAX = "syntax"
ENCODING = "encoding"


class Skip(NamedTuple):
    reason: str
    detail: str = ""


@dataclass
class IngestReport:
    lines_read: int = 0
    quads_accepted: int = 0
    lines_skipped: int = 0
    skip_samples: list = field(default_factory=list)
    failed_sources: list = field(default_factory=list)

    def skip(self, source: str, lineno: int, reason: str) -> None:
        self.lines_skipped += 1
        if len(self.skip_samples) < MAX_SKIP_SAMPLES:
            self.skip_samples.append((lineno, reason) if not source else (source, lineno, reason))

    def merge(self, other: "IngestReport") -> None:
        self.lines_read += other.lines_read
        self.quads_accepted += other.quads_accepted
        self.lines_skipped += other.lines_skipped
        room = MAX_SKIP_SAMPLES - len(self.skip_samples)
        self.skip_samples.extend(other.skip_samples[:room])
        self.failed_sources.extend(other.failed_sources)


class _ParseError(Exception):
    def __init__(self, reason: str, detail: str = "") -> None:
        super().__init__(reason)
        self.reason = reason
        self.detail = detail


_WS = re.compile(r"[ \t]*")
_IRI = re.compile(r'<((?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>')
_BLANK = re.compile(r"_:([A-Za-z0-9_·À-￿](?:[A-Za-z0-9_.\-·À-￿]*[A-Za-z0-9_\-·À-￿])?)")
_STRING = re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')
_LANG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.S)
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(text: str) -> str:
    def sub(m: re.Match) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE_ESCAPES:
            raise _ParseError(BAD_ESCAPE, "\\" + ch)
        return _SIMPLE_ESCAPES[ch]

    if "\\" not in text:
        return text
    try:
        return _ESCAPE.sub(sub, text)
    except ValueError as exc:  # chr() out of range
        raise _ParseError(BAD_ESCAPE, str(exc)) from None


def skolem_iri(doc_id: str, label: str) -> str:
    return f"{FLUID}skolem/{doc_id}/{label}"


def document_id(source: str) -> str:
    return hashlib.blake2b(source.encode("utf-8"), digest_size=6).hexdigest()


class _LineParser:
    __slots__ = ("text", "pos", "doc_id")

    def __init__(self, text: str, doc_id: Optional[str]) -> None:
        self.text = text
        self.pos = 0
        self.doc_id = doc_id

    def ws(self) -> None:
        self.pos = _WS.match(self.text, self.pos).end()

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def term(self) -> Term:
        self.ws()
        ch = self.peek()
        text = self.text
        if ch == "<":
            m = _IRI.match(text, self.pos)
            if m is None or not m.group(1):
                raise _ParseError(MALFORMED_IRI, text[self.pos : self.pos + 40])
            self.pos = m.end()
            return Term(IRI, _unescape(m.group(1)))
        if ch == "_":
            m = _BLANK.match(text, self.pos)
            if m is None:
                raise _ParseError(SYNTAX, "bad blank node label")
            self.pos = m.end()
            label = m.group(1)
            if self.doc_id is None:
                return Term(BLANK, label)
            return Term(IRI, skolem_iri(self.doc_id, label))
        if ch == '"':
            m = _STRING.match(text, self.pos)
            if m is None:
                raise _ParseError(SYNTAX, "unterminated literal")
            self.pos = m.end()
            lexical = '"' + escape_string(_unescape(m.group(1))) + '"'
            if text.startswith("^^", self.pos):
                dt = _IRI.match(text, self.pos + 2)
                if dt is None or not dt.group(1):
                    raise _ParseError(MALFORMED_IRI, "datatype")
                self.pos = dt.end()
                lexical += f"^^<{_unescape(dt.group(1))}>"
            elif text.startswith("@", self.pos):
                lm = _LANG.match(text, self.pos)
                if lm is None:
                    raise _ParseError(SYNTAX, "bad language tag")
                self.pos = lm.end()
                lexical += "@" + lm.group(1).lower()
            return Term(LITERAL, lexical)
        if not ch:
            raise _ParseError(SYNTAX, "unexpected end of line")
        raise _ParseError(SYNTAX, f"unexpected character {ch!r}")

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text) or self.text[self.pos] == "#"


def parse_line(text: str, default_context: Optional[Term] = None, doc_id: Optional[str] = None):
    """Parse one N-Triples/N-Quads line.

    Returns a :class:`Quad`, a :class:`Skip` with a machine-readable reason,
    or ``None`` for blank and comment lines. The context is the fourth term
    when present, else ``default_context``.
    """
    stripped = text.strip()
    if not stripped or stripped.startswith("#"):
        return None
    p = _LineParser(stripped, doc_id)
    try:
        s = p.term()
        if s.kind == LITERAL:
            return Skip(LITERAL_SUBJECT, s.lexical)
        pred = p.term()
        if pred.kind != IRI or pred.lexical.startswith(FLUID + "skolem/"):
            return Skip(BAD_PREDICATE, pred.n3())
        o = p.term()
        p.ws()
        d = default_context
        if p.peek() not in (".", ""):
            d = p.term()
            if d.kind == LITERAL:
                return Skip(SYNTAX, "literal context")
            p.ws()
        if p.peek() != ".":
            return Skip(MISSING_DOT)
        p.pos += 1
        if not p.at_end():
            return Skip(SYNTAX, "trailing content")
    except _ParseError as exc:
        return Skip(exc.reason, exc.detail)
    return Quad(s, pred, o, d)


def format_quad(q: Quad, with_context: bool = True) -> str:
    parts = [q.s.n3(), q.p.n3(), q.o.n3()]
    if with_context and q.d is not None:
        parts.append(q.d.n3())
    return " ".join(parts) + " ."


Source = Union[str, Path, BinaryIO, tuple]


def _open(path: str, gz: Optional[bool]) -> BinaryIO:
    f = open(path, "rb")
    if gz or (gz is None and path.endswith(".gz")):
        return gzip.GzipFile(fileobj=f)
    return f


def iter_source(
    stream: BinaryIO,
    source_iri: str,
    report: IngestReport,
    default_context: Optional[Term] = None,
) -> Iterator[Quad]:
    """Yield the quads of one byte stream, recording skips in ``report``."""
    if default_context is None:
        default_context = Term(IRI, source_iri)
    doc_id = document_id(source_iri)
    for lineno, raw in enumerate(stream, 1):
        report.lines_read += 1
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError:
            report.skip(source_iri, lineno, ENCODING)
            continue
        res = parse_line(line, default_context, doc_id)
        if res is None:
            continue
        if isinstance(res, Skip):
            report.skip(source_iri, lineno, res.reason)
            continue
        report.quads_accepted += 1
        yield res


def _normalize(src: Source) -> tuple:
    """-> (opener, source_iri)."""
    if isinstance(src, tuple):
        stream, name = src
        return (lambda: stream), str(name)
    if isinstance(src, (str, Path)):
        path = str(src)
        return path, Path(path).resolve().as_uri()
    name = getattr(src, "name", None) or "urn:fluid:stream"
    return (lambda: src), str(name)


def expand_inputs(patterns: Iterable[str]) -> list[str]:
    paths: list[str] = []
    for pat in patterns:
        hits = sorted(glob.glob(pat)) if any(c in pat for c in "*?[") else [pat]
        paths.extend(hits)
    return paths


def iter_quads(sources: Iterable[Source], report: IngestReport, gz: Optional[bool] = None) -> Iterator[Quad]:
    """Stream quads from several sources in order; unreadable sources are
    recorded in the report and skipped."""
    for src in sources:
        opener, name = _normalize(src)
        try:
            stream = _open(opener, gz) if isinstance(opener, str) else opener()
            if gz and not isinstance(opener, str):
                stream = gzip.GzipFile(fileobj=stream)
        except OSError as exc:
            log.warning("cannot read %s: %s", name, exc)
            report.failed_sources.append((name, str(exc)))
            continue
        sub = IngestReport()
        try:
            with stream:
                yield from iter_source(stream, name, sub)
        except (OSError, EOFError) as exc:
            log.warning("read error in %s: %s", name, exc)
            sub.failed_sources.append((name, str(exc)))
        report.merge(sub)


def _read_all(src: Source, gz: Optional[bool]) -> tuple[list[Quad], IngestReport]:
    rep = IngestReport()
    return list(iter_quads([src], rep, gz)), rep


def load_graph(
    sources: Iterable[Source],
    gz: Optional[bool] = None,
    threads: int = 1,
    graph: Optional[IndexedGraph] = None,
) -> tuple[IndexedGraph, IngestReport]:
    """Load sources into one graph.

    A source is a path, a binary stream, or a ``(stream, source_iri)`` pair.
    ``gz=None`` decompresses paths ending in ``.gz``. With ``threads > 1``
    sources are parsed concurrently but inserted in input order, so the
    result never depends on the thread count.
    """
    g = graph if graph is not None else IndexedGraph()
    report = IngestReport()
    sources = list(sources)
    if threads > 1 and len(sources) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for quads, rep in pool.map(lambda s: _read_all(s, gz), sources):
                for q in quads:
                    g.add_quad(q)
                report.merge(rep)
    else:
        for q in iter_quads(sources, report, gz):
            g.add_quad(q)
    return g, report


def load_text(text: str, source_iri: str = "urn:fluid:inline") -> IndexedGraph:
    """Convenience for tests and small fixtures."""
    g, _ = load_graph([(io.BytesIO(text.encode("utf-8")), source_iri)])
    return g
