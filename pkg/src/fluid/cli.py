"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 ingest failure, 3 invalid
definition, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from typing import Optional

from . import bench as bench_mod
from .definition import (
    DefinitionSyntaxError,
    SummaryDefinition,
    format_definition,
    is_valid,
    parse_definition,
    validate_definition,
)
from .engine import Engine
from .ingest import expand_inputs, load_graph
from .oracle import DEFAULT_CAP, OracleCapExceeded, naive_partition
from .presets import PRESET_NAMES, UnknownPreset, catalog, preset
from .rdfs import inference_stats, materialize
from .serialize import to_json, to_ntriples, stats_json
from .streaming import stream_summarize, supports
from .summarizer import summarize
from .synthetic import random_ast, random_graph

EXIT_OK, EXIT_USAGE, EXIT_INGEST, EXIT_DEFINITION, EXIT_MISMATCH = 0, 1, 2, 3, 4

log = logging.getLogger("fluid")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fluid", description="Structural graph summaries of RDF graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def inputs(sp):
        sp.add_argument("-i", "--input", action="append", default=[], help="N-Triples/N-Quads file or glob (repeatable)")
        sp.add_argument("--gzip", action="store_true", default=None, help="force gzip decompression")
        sp.add_argument("--threads", type=int, default=1, help="parser threads (results do not depend on it)")

    s = sub.add_parser("summarize", help="compute a summary")
    inputs(s)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="catalog entry, e.g. schemex or ak-index(3)")
    src.add_argument("--definition", help="inline definition text")
    src.add_argument("--definition-file", help="file holding a definition")
    s.add_argument("-o", "--output", help="output file (default: stdout)")
    s.add_argument("--format", choices=("ntriples", "json"), default="ntriples")
    s.add_argument("--in-memory", action="store_true", help="never use the streaming path")

    st = sub.add_parser("stats", help="RDFS vocabulary and inference statistics")
    inputs(st)
    st.add_argument("-o", "--output")
    st.add_argument("--stats-only", action="store_true", help="count entailments without materializing")

    sub.add_parser("presets", help="list the preset catalog")

    oc = sub.add_parser("oracle-check", help="fuzz the engine against the brute-force oracle")
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--graphs", type=int, default=100)
    oc.add_argument("--asts", type=int, default=2, help="random definitions per graph")
    oc.add_argument("--max-oracle-vertices", type=int, default=DEFAULT_CAP)

    b = sub.add_parser("bench", help="scaling run on synthetic graphs, CSV on stdout")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--sizes", default=",".join(str(n) for n in bench_mod.DEFAULT_SIZES))
    b.add_argument("--preset", action="append", help="definitions to time (default: PC and schemex)")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("-o", "--output")
    return p


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "wb") as f:
            f.write(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _definition(args) -> SummaryDefinition:
    if args.preset:
        return preset(args.preset)
    if args.definition_file:
        with open(args.definition_file, encoding="utf-8") as f:
            return parse_definition(f.read())
    return parse_definition(args.definition)


def _load(args):
    paths = expand_inputs(args.input)
    if not paths:
        raise UsageError("no input files given")
    g, report = load_graph(paths, gz=args.gzip, threads=args.threads)
    if report.failed_sources:
        for name, err in report.failed_sources:
            log.error("cannot read %s: %s", name, err)
        return None, report
    return g, report


def _report_dict(report) -> dict:
    return {"lines_read": report.lines_read, "quads_accepted": report.quads_accepted, "lines_skipped": report.lines_skipped}


def cmd_summarize(args) -> int:
    try:
        defn = _definition(args)
    except (DefinitionSyntaxError, UnknownPreset, OSError) as exc:
        print(f"invalid definition: {exc}", file=sys.stderr)
        return EXIT_DEFINITION
    t0 = time.perf_counter()
    paths = expand_inputs(args.input)
    if not paths:
        raise UsageError("no input files given")
    violations = validate_definition(defn)
    for v in violations:
        print(str(v), file=sys.stderr)
    if not is_valid(violations):
        return EXIT_DEFINITION
    if supports(defn) and not args.in_memory:
        from .ingest import IngestReport

        report = IngestReport()
        missing = [p for p in paths if not os.path.exists(p)]
        if missing:
            for p in missing:
                log.error("cannot read %s", p)
            return EXIT_INGEST
        sg = stream_summarize(paths, defn, gz=args.gzip, report=report)
    else:
        g, report = _load(args)
        if g is None:
            return EXIT_INGEST
        if "dsp" in defn.payloads and len(g) and not g.has_contexts:
            log.warning("dsp requested but the input has no quad contexts")
        sg = summarize(g, defn)
    if sg.provenance:
        sg.provenance["ingest"] = _report_dict(report)
    text = to_json(sg) if args.format == "json" else to_ntriples(sg)
    _emit(text, args.output)
    run_report = {
        "classes": len(sg.summaries),
        "vertices": len(sg.partition.assignment) if sg.partition else 0,
        "wall_seconds": round(time.perf_counter() - t0, 3),
        **_report_dict(report),
    }
    print(json.dumps(run_report, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_stats(args) -> int:
    g, report = _load(args)
    if g is None:
        return EXIT_INGEST
    if args.stats_only:
        st = inference_stats(g)
    else:
        st = inference_stats(g, materialized=materialize(g))
    _emit(stats_json(st), args.output)
    return EXIT_OK


def cmd_presets(args) -> int:
    for name, text in catalog().items():
        print(f"{name}\t{text}")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    defs = [preset(n) for n in PRESET_NAMES]
    checked = 0
    for i in range(args.graphs):
        seed = args.seed + i
        g = random_graph(seed)
        mat = None
        cases = [(n, d) for n, d in zip(PRESET_NAMES, defs)]
        cases += [(f"random-{seed}-{j}", SummaryDefinition(random_ast(seed * 1000 + j))) for j in range(args.asts)]
        for name, d in cases:
            if d.inference != "none":
                mat = mat if mat is not None else materialize(g)
                work = mat
            else:
                work = g
            try:
                expected = naive_partition(g, d, cap=args.max_oracle_vertices)
            except OracleCapExceeded as exc:
                log.info("seed %d %s skipped: %s", seed, name, exc)
                continue
            got = Engine(work).evaluate(d.root, with_structures=False).blocks()
            checked += 1
            if got != expected:
                print(f"mismatch: graph seed {seed}, definition {name}: {format_definition(d)}", file=sys.stderr)
                print(f"engine classes {len(got)}, oracle classes {len(expected)}", file=sys.stderr)
                return EXIT_MISMATCH
    print(f"{checked} checks, 0 mismatches")
    return EXIT_OK


def cmd_bench(args) -> int:
    names = args.preset or ["PC", "schemex"]
    defs = {}
    try:
        for n in names:
            defs[n] = parse_definition("summary PC payload [vip]") if n == "PC" else preset(n)
        sizes = [int(x) for x in args.sizes.split(",") if x]
    except (UnknownPreset, ValueError) as exc:
        raise UsageError(str(exc))
    rows = bench_mod.run(defs, sizes, seed=args.seed, repeats=args.repeats)
    _emit(bench_mod.to_csv(rows), args.output)
    for n in names:
        f = bench_mod.fit([r for r in rows if r.definition == n])
        ratios = ", ".join(f"{x:.2f}" for x in f.doubling_ratios)
        print(f"{n}: R^2 {f.r_squared:.4f}, ratio per doubling [{ratios}]", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "summarize": cmd_summarize,
    "stats": cmd_stats,
    "presets": cmd_presets,
    "oracle-check": cmd_oracle_check,
    "bench": cmd_bench,
}


def main(argv: Optional[list] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("FLUID_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fluid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
