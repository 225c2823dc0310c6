"""Scaling runs on synthetic bounded-degree graphs."""

from __future__ import annotations

import gc
import statistics
import time
from dataclasses import dataclass

from .definition import SummaryDefinition
from .summarizer import summarize
from .synthetic import bench_graph

DEFAULT_SIZES = (100_000, 200_000, 400_000, 800_000)


@dataclass
class BenchRow:
    edges: int
    definition: str
    seconds: float


@dataclass
class Fit:
    slope: float
    intercept: float
    r_squared: float
    doubling_ratios: list


def time_summarize(g, defn: SummaryDefinition, repeats: int = 1) -> float:
    """Best wall time of ``repeats`` summarize calls with the collector paused."""
    best = float("inf")
    enabled = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        for _ in range(repeats):
            t0 = time.perf_counter()
            summarize(g, defn)
            best = min(best, time.perf_counter() - t0)
    finally:
        if enabled:
            gc.enable()
    return best


def run(definitions: dict, sizes=DEFAULT_SIZES, seed: int = 0, repeats: int = 1) -> list[BenchRow]:
    rows = []
    for n in sizes:
        g = bench_graph(n, seed=seed)
        for name, defn in definitions.items():
            rows.append(BenchRow(n, name, time_summarize(g, defn, repeats)))
        del g
    return rows


def fit(rows: list[BenchRow]) -> Fit:
    xs = [float(r.edges) for r in rows]
    ys = [r.seconds for r in rows]
    slope, intercept = statistics.linear_regression(xs, ys)
    r2 = statistics.correlation(xs, ys) ** 2 if len(rows) > 2 else 1.0
    ordered = sorted(rows, key=lambda r: r.edges)
    ratios = [
        b.seconds / a.seconds
        for a, b in zip(ordered, ordered[1:])
        if b.edges == 2 * a.edges and a.seconds > 0
    ]
    return Fit(slope, intercept, r2, ratios)


def to_csv(rows: list[BenchRow]) -> str:
    lines = ["edges,definition,seconds"]
    lines.extend(f"{r.edges},{r.definition},{r.seconds:.6f}" for r in rows)
    return "\n".join(lines) + "\n"
