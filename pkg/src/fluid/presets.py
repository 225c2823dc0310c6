"""Catalog of literature summary models expressed in the definition language."""

from __future__ import annotations

import re

from .definition import SummaryDefinition, format_definition, parse_definition

DEFAULT_K = 2
DEFAULT_TRAN_LABELS = "{rdf:type}"

_WEAK = "ip(dp(PCrel, in), related) |ex| ip(PCrel, related)"
_STRONG = "ip(dp(PCrel, both), related)"

# name -> (template, parameter names); templates use str.format fields
_CATALOG = {
    "attribute-collection": ("summary PCrel payload [vip]", ()),
    "class-collection": ("summary OCtype payload [vip]", ()),
    "characteristic-sets": ("summary dp(PC, both) payload [vcp]", ()),
    "semsets": ("summary POC payload [vip]", ()),
    "lodex": ("summary cse(OCtype, id_rel, OCtype) payload [vip]", ()),
    "loupe": ("summary cse(OCtype, id_rel, OCtype) payload [vip]", ()),
    "schemex": ("summary cse(OCtype, id_rel, OCtype) payload [dsp]", ()),
    "schemex-u-i": ("summary ip(cse(OCtype, id_rel, OCtype), sameas) payload [dsp] infer rdfs", ()),
    "abstat": ("summary cse(OCtype, id_rel, OCtype) payload [vip] infer rdfs", ()),
    "termpicker": ("summary cse(OCtype & PCrel, top, OCtype) payload [vip]", ()),
    "weak": (f"summary {_WEAK} payload [vip] infer rdfs", ()),
    "strong": (f"summary {_STRONG} payload [vip] infer rdfs", ()),
    "typed-weak": (
        "summary (sp(OCtype, {}) & (" + _WEAK + ")) |ex| sp(OCtype, VC) payload [vip] infer rdfs",
        (),
    ),
    "typed-strong": (
        "summary (sp(OCtype, {}) & " + _STRONG + ") |ex| sp(OCtype, VC) payload [vip] infer rdfs",
        (),
    ),
    "tran": ("summary cse(top, id({L}), top)^{k} payload [vip]", ("L", "k")),
    "ak-index": ("summary cse(dp(PC, both), top, top)^{k} payload [vip]", ("k",)),
    "t-index": ("summary cse(dp(PC, in), top, top)^{k} payload [vip]", ("k",)),
    "consens": ("summary cse(OCtype, id_rel, OCtype)^{k} payload [vip]", ("k",)),
    "schaetzle": ("summary cse(OC, id, OC)^{k} payload [vip]", ("k",)),
}

PRESET_NAMES = tuple(_CATALOG)


class UnknownPreset(KeyError):
    pass


_CALL = re.compile(r"^\s*([a-z\-]+)\s*(?:\((.*)\))?\s*$", re.S)


def _split_args(text: str) -> list[str]:
    args, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            args.append(cur.strip())
            cur = ""
            continue
        depth += ch in "{("
        depth -= ch in "})"
        cur += ch
    if cur.strip():
        args.append(cur.strip())
    return args


def preset_text(name: str) -> str:
    """DSL text of a preset. Parameterized presets accept call syntax,
    e.g. ``ak-index(3)`` or ``tran({rdf:type, ex:p}, 2)``."""
    m = _CALL.match(name)
    if m is None or m.group(1) not in _CATALOG:
        raise UnknownPreset(name)
    base, argtext = m.group(1), m.group(2)
    template, params = _CATALOG[base]
    args = _split_args(argtext) if argtext else []
    if len(args) > len(params):
        raise UnknownPreset(f"{base} takes at most {len(params)} arguments")
    values = {"L": DEFAULT_TRAN_LABELS, "k": str(DEFAULT_K)}
    if params == ("L", "k") and len(args) == 1 and args[0].isdigit():
        args = [DEFAULT_TRAN_LABELS, args[0]]
    for pname, arg in zip(params, args):
        values[pname] = arg
    if "k" in params and not values["k"].isdigit():
        raise UnknownPreset(f"{base}: chaining depth must be an integer")
    return template.format(**values) if params else template


def preset(name: str) -> SummaryDefinition:
    return parse_definition(preset_text(name))


def catalog() -> dict[str, str]:
    """Preset name -> canonical DSL text, in catalog order."""
    out = {}
    for name, (_, params) in _CATALOG.items():
        label = f"{name}({', '.join(params)})" if params else name
        out[label] = format_definition(preset(name))
    return out
