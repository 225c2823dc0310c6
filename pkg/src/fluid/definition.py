"""Summary definitions: AST, textual syntax, pretty-printer and validation.

Grammar (whitespace-insensitive)::

    definition := "summary" expr "payload" "[" payload {"," payload} "]" ["infer" "rdfs"]
    payload    := "vip" | "vcp" | "dsp"
    expr       := inter {"|ex|" inter}
    inter      := post {"&" post}
    post       := atom ["^" INT]
    atom       := "(" expr ")" | keyword | call
    keyword    := "top" | "id" | "id_rel" | "POC" | "PC" | "OC" | "OCtype" | "PCrel"
    call       := "lp(" expr "," labels ")"   | "sp(" expr "," ("VC" | iriset) ")"
                | "dp(" expr "," ("in"|"out"|"both") ")" | "cp(" expr "," INT ")"
                | "cse(" expr "," expr "," expr ")"   | "ip(" expr "," ("sameas"|"related") ")"
                | "id(" labels ")"
    labels     := ["!"] iriset
    iriset     := "{" [iri {"," iri}] "}"
    iri        := "<" chars ">" | prefix ":" name | name

A leading ``!`` on a label set means "every predicate except these"; ``PCrel``
is ``lp(PC, !{rdf:type})`` and ``OCtype`` is ``lp(OC, {rdf:type})``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .graph import OWL, RDF, RDF_TYPE, RDFS, XSD, FLUID, IRI, Term

OUT, IN, BOTH = "out", "in", "both"
DIRECTIONS = (OUT, IN, BOTH)
POC, PC, OC = "POC", "PC", "OC"
SAMEAS, RELATED = "sameas", "related"
VIP, VCP, DSP = "vip", "vcp", "dsp"
PAYLOADS = (VIP, VCP, DSP)
NO_INFERENCE, RDFS_INSIDE = "none", "rdfs_inside"

PREFIXES = {"rdf": RDF, "rdfs": RDFS, "owl": OWL, "xsd": XSD, "fluid": FLUID}


@dataclass(frozen=True)
class LabelSet:
    """A predicate filter: ``iris`` admitted, or everything but ``iris``."""

    iris: frozenset = frozenset()
    exclude: bool = False

    def admits(self, t: Term) -> bool:
        return (t.kind == IRI and t.lexical in self.iris) != self.exclude


@dataclass(frozen=True)
class SetParam:
    """The set S of a set parameterization; ``all_types`` stands for V_C."""

    iris: frozenset = frozenset()
    all_types: bool = False


TYPE_ONLY = LabelSet(frozenset({RDF_TYPE.lexical}))
NOT_TYPE = LabelSet(frozenset({RDF_TYPE.lexical}), exclude=True)


class EqNode:
    """Base of the equivalence-relation AST."""

    __slots__ = ()


@dataclass(frozen=True)
class Taut(EqNode):
    pass


@dataclass(frozen=True)
class Ident(EqNode):
    labels: Optional[LabelSet] = None


@dataclass(frozen=True)
class Simple(EqNode):
    kind: str
    labels: Optional[LabelSet] = None
    set_param: Optional[SetParam] = None
    direction: str = OUT
    k: int = 1  # only legal value is 1; kept so validation can report cp() misuse


@dataclass(frozen=True)
class Complex(EqNode):
    sub: EqNode
    pred: EqNode
    obj: EqNode
    k: int = 1
    direction: str = OUT
    set_param: Optional[SetParam] = None  # illegal; reported by validation


@dataclass(frozen=True)
class Intersect(EqNode):
    parts: tuple


@dataclass(frozen=True)
class ExtUnion(EqNode):
    parts: tuple


@dataclass(frozen=True)
class InstanceParam(EqNode):
    inner: EqNode
    delta: str


@dataclass(frozen=True)
class SummaryDefinition:
    root: EqNode
    payloads: tuple = (VIP,)
    inference: str = NO_INFERENCE


OCTYPE = Simple(OC, TYPE_ONLY)
PCREL = Simple(PC, NOT_TYPE)
ID_REL = Ident(NOT_TYPE)


def direction_of(node: EqNode) -> str:
    """Edge direction a node looks at; decides the candidate domain."""
    if isinstance(node, (Simple, Complex)):
        return node.direction
    if isinstance(node, InstanceParam):
        return direction_of(node.inner)
    if isinstance(node, (Intersect, ExtUnion)):
        dirs = {direction_of(p) for p in node.parts}
        return dirs.pop() if len(dirs) == 1 else BOTH
    return OUT


def walk(node: EqNode):
    yield node
    if isinstance(node, Complex):
        for child in (node.sub, node.pred, node.obj):
            yield from walk(child)
    elif isinstance(node, (Intersect, ExtUnion)):
        for child in node.parts:
            yield from walk(child)
    elif isinstance(node, InstanceParam):
        yield from walk(node.inner)


# ---------------------------------------------------------------------------
# printing

def _iri_text(value: str) -> str:
    for prefix, ns in PREFIXES.items():
        if value.startswith(ns) and re.fullmatch(r"[A-Za-z_][\w\-]*", value[len(ns):]):
            return f"{prefix}:{value[len(ns):]}"
    if re.fullmatch(r"[A-Za-z_][\w\-]*", value) and value not in _KEYWORDS:
        return value
    return f"<{value}>"


def _set_text(iris) -> str:
    return "{" + ", ".join(_iri_text(i) for i in sorted(iris)) + "}"


def _labels_text(ls: LabelSet) -> str:
    return ("!" if ls.exclude else "") + _set_text(ls.iris)


def format_node(node: EqNode) -> str:
    if isinstance(node, Taut):
        return "top"
    if isinstance(node, Ident):
        if node.labels is None:
            return "id"
        if node.labels == NOT_TYPE:
            return "id_rel"
        return f"id({_labels_text(node.labels)})"
    if isinstance(node, Simple):
        if node.kind == OC and node.labels == TYPE_ONLY:
            text = "OCtype"
        elif node.kind == PC and node.labels == NOT_TYPE:
            text = "PCrel"
        elif node.labels is not None:
            text = f"lp({node.kind}, {_labels_text(node.labels)})"
        else:
            text = node.kind
        return _wrap(text, node.set_param, node.direction, node.k)
    if isinstance(node, Complex):
        text = f"cse({format_node(node.sub)}, {format_node(node.pred)}, {format_node(node.obj)})"
        if node.k != 1:
            text += f"^{node.k}"
        return _wrap(text, node.set_param, node.direction, 1)
    if isinstance(node, (Intersect, ExtUnion)):
        op = " & " if isinstance(node, Intersect) else " |ex| "
        return op.join(
            f"({format_node(p)})" if isinstance(p, (Intersect, ExtUnion)) else format_node(p)
            for p in node.parts
        )
    if isinstance(node, InstanceParam):
        return f"ip({format_node(node.inner)}, {node.delta})"
    raise TypeError(f"not an EqNode: {node!r}")


def _wrap(text: str, set_param: Optional[SetParam], direction: str, k: int) -> str:
    if set_param is not None:
        s = "VC" if set_param.all_types else _set_text(set_param.iris)
        text = f"sp({text}, {s})"
    if direction != OUT:
        text = f"dp({text}, {direction})"
    if k != 1:
        text = f"cp({text}, {k})"
    return text


def format_definition(defn: SummaryDefinition) -> str:
    text = f"summary {format_node(defn.root)} payload [{', '.join(defn.payloads)}]"
    if defn.inference == RDFS_INSIDE:
        text += " infer rdfs"
    return text


# ---------------------------------------------------------------------------
# parsing

class DefinitionSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


_KEYWORDS = {"top", "id", "id_rel", "POC", "PC", "OC", "OCtype", "PCrel", "VC"}
_CALLS = {"lp": 2, "sp": 2, "dp": 2, "cp": 2, "cse": 3, "ip": 2, "id": 1}

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<iri><[^<>\s]*>)
      | (?P<union>\|ex\|)
      | (?P<int>\d+)
      | (?P<name>[A-Za-z_][\w\-]*(?::[A-Za-z_][\w\-.]*)?)
      | (?P<punct>[()\[\]{},^&!])
    """,
    re.X,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DefinitionSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), pos):
                if ch == "\n":
                    line, line_start = line + 1, i + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        raise DefinitionSyntaxError(message, tok.line, tok.col)

    def next(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "iri":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        if not self.accept(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.toks[self.i - 1]

    # definition ----------------------------------------------------------

    def definition(self) -> SummaryDefinition:
        self.expect("summary")
        root = self.expr()
        if not self.accept("payload"):
            self.error("missing payload clause")
        self.expect("[")
        payloads = []
        while True:
            t = self.next()
            if t.text not in PAYLOADS:
                self.error(f"unknown payload {t.text!r}", t)
            payloads.append(t.text)
            if not self.accept(","):
                break
        self.expect("]")
        inference = NO_INFERENCE
        if self.accept("infer"):
            self.expect("rdfs")
            inference = RDFS_INSIDE
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return SummaryDefinition(root, tuple(payloads), inference)

    # expressions --------------------------------------------------------

    def expr(self) -> EqNode:
        parts = [self.inter()]
        while self.accept("|ex|"):
            parts.append(self.inter())
        return parts[0] if len(parts) == 1 else ExtUnion(tuple(parts))

    def inter(self) -> EqNode:
        parts = [self.post()]
        while self.accept("&"):
            parts.append(self.post())
        return parts[0] if len(parts) == 1 else Intersect(tuple(parts))

    def post(self) -> EqNode:
        node = self.atom()
        if self.accept("^"):
            t = self.tok
            if t.kind != "int":
                self.error("expected chaining depth after '^'")
            self.next()
            node = self._chain(node, int(t.text), t)
        return node

    def atom(self) -> EqNode:
        t = self.tok
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if t.kind != "name":
            self.error(f"expected a schema element, found {t.text or 'end of input'!r}")
        self.next()
        if t.text in _CALLS and self.tok.text == "(":
            return self.call(t)
        simple = {
            "top": Taut(),
            "id": Ident(),
            "id_rel": ID_REL,
            "POC": Simple(POC),
            "PC": Simple(PC),
            "OC": Simple(OC),
            "OCtype": OCTYPE,
            "PCrel": PCREL,
        }
        if t.text in simple:
            return simple[t.text]
        self.error(f"unknown keyword {t.text!r}", t)

    def call(self, name: _Tok) -> EqNode:
        self.expect("(")
        args: list = []
        fn = name.text
        arity = _CALLS[fn]
        while True:
            args.append(self.argument(fn, len(args)))
            if not self.accept(","):
                break
        close = self.tok
        self.expect(")") if self.tok.text == ")" else self.error(
            f"{fn}() takes {arity} argument{'s' if arity > 1 else ''}"
        )
        if len(args) != arity:
            self.error(f"{fn}() takes {arity} argument{'s' if arity > 1 else ''}, got {len(args)}", name)
        if fn == "id":
            return Ident(args[0])
        if fn == "cse":
            return Complex(*args)
        node, arg = args
        if fn == "lp":
            if not isinstance(node, Simple):
                self.error("label parameterization requires a simple schema element", name)
            if node.labels is not None:
                self.error("label parameterization applied twice", name)
            return replace(node, labels=arg)
        if fn == "sp":
            if not isinstance(node, (Simple, Complex)):
                self.error("set parameterization requires a schema element", name)
            if node.set_param is not None:
                self.error("set parameterization applied twice", name)
            return replace(node, set_param=arg)
        if fn == "dp":
            if not isinstance(node, (Simple, Complex)):
                self.error("direction parameterization requires a schema element", name)
            if node.direction != OUT:
                self.error("direction parameterization applied twice", name)
            return replace(node, direction=arg)
        if fn == "cp":
            return self._chain(node, arg, close)
        if fn == "ip":
            return InstanceParam(node, arg)
        raise AssertionError(fn)

    def _chain(self, node: EqNode, k: int, tok: _Tok) -> EqNode:
        if not isinstance(node, (Simple, Complex)):
            self.error("chaining parameterization requires a complex schema element", tok)
        if node.k != 1:
            self.error("chaining parameterization applied twice", tok)
        return replace(node, k=k)

    def argument(self, fn: str, index: int):
        if fn in ("cse",) or index == 0 and fn != "id":
            return self.expr()
        if fn in ("lp", "id"):
            exclude = self.accept("!")
            return LabelSet(self.iriset(), exclude)
        if fn == "sp":
            if self.accept("VC"):
                return SetParam(all_types=True)
            return SetParam(self.iriset())
        t = self.next()
        if fn == "dp":
            if t.text not in DIRECTIONS:
                self.error(f"direction must be one of in/out/both, got {t.text!r}", t)
            return t.text
        if fn == "cp":
            if t.kind != "int":
                self.error("chaining depth must be an integer", t)
            return int(t.text)
        if fn == "ip":
            if t.text not in (SAMEAS, RELATED):
                self.error(f"instance relation must be sameas or related, got {t.text!r}", t)
            return t.text
        self.error(f"unexpected argument {t.text!r}", t)

    def iriset(self) -> frozenset:
        self.expect("{")
        items = []
        if not self.accept("}"):
            while True:
                items.append(self.iri())
                if not self.accept(","):
                    break
            self.expect("}")
        return frozenset(items)

    def iri(self) -> str:
        t = self.next()
        if t.kind == "iri":
            return t.text[1:-1]
        if t.kind == "name":
            prefix, sep, local = t.text.partition(":")
            if sep and prefix in PREFIXES:
                return PREFIXES[prefix] + local
            known = ", ".join(sorted(PREFIXES))
            self.error(f"{t.text!r} is neither <iri> nor a prefixed name ({known})", t)
        self.error(f"expected an IRI, found {t.text or 'end of input'!r}", t)


def parse_definition(text: str) -> SummaryDefinition:
    return _Parser(text).definition()


def parse_expression(text: str) -> EqNode:
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return node


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    message: str
    path: str = ""
    severity: str = "error"

    def __str__(self) -> str:
        where = f" at {self.path}" if self.path else ""
        return f"{self.severity}: {self.message}{where}"


def validate_definition(defn: SummaryDefinition, has_contexts: bool = True) -> list[Violation]:
    """Every violation in ``defn``; an empty list means the definition is valid.

    Warnings (severity ``warning``) do not make a definition invalid.
    """
    out: list[Violation] = []
    if isinstance(defn.root, (Taut, Ident)):
        out.append(Violation("tautology/identity may only appear inside a CSE or a combinator", "root"))
    _validate(defn.root, "root", out)
    if not defn.payloads:
        out.append(Violation("a summary needs at least one payload element"))
    for p in defn.payloads:
        if p not in PAYLOADS:
            out.append(Violation(f"unknown payload element {p!r}"))
    if DSP in defn.payloads and not has_contexts:
        out.append(Violation("dsp requested but the input has no quad contexts", severity="warning"))
    if defn.inference not in (NO_INFERENCE, RDFS_INSIDE):
        out.append(Violation(f"unknown inference mode {defn.inference!r}"))
    return out


def is_valid(violations: list[Violation]) -> bool:
    return not any(v.severity == "error" for v in violations)


def _validate(node: EqNode, path: str, out: list[Violation]) -> None:
    if isinstance(node, Simple):
        if node.kind not in (POC, PC, OC):
            out.append(Violation(f"unknown simple schema element {node.kind!r}", path))
        if node.k != 1:
            out.append(Violation("chaining parameterization requires a CSE", path))
        if node.direction not in DIRECTIONS:
            out.append(Violation(f"unknown direction {node.direction!r}", path))
    elif isinstance(node, Complex):
        if node.set_param is not None:
            out.append(Violation("set parameterization requires SSE", path))
        if node.k < 1:
            out.append(Violation(f"chaining depth must be >= 1, got {node.k}", path))
        if node.direction not in DIRECTIONS:
            out.append(Violation(f"unknown direction {node.direction!r}", path))
        for name, child in (("sub", node.sub), ("pred", node.pred), ("obj", node.obj)):
            _validate(child, f"{path}.{name}", out)
    elif isinstance(node, (Intersect, ExtUnion)):
        if not node.parts:
            kind = "Intersect" if isinstance(node, Intersect) else "ExtUnion"
            out.append(Violation(f"empty {kind}", path))
        for i, child in enumerate(node.parts):
            _validate(child, f"{path}[{i}]", out)
    elif isinstance(node, InstanceParam):
        if node.delta not in (SAMEAS, RELATED):
            out.append(Violation(f"unknown instance relation {node.delta!r}", path))
        if isinstance(node.inner, (Taut, Ident)):
            out.append(Violation("instance parameterization requires a schema element", path))
        _validate(node.inner, f"{path}.inner", out)
    elif not isinstance(node, (Taut, Ident)):
        out.append(Violation(f"not an equivalence-relation node: {node!r}", path))
