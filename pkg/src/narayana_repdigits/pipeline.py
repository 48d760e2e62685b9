"""Bounds, reduction, search and table comparison chained together."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .balls import DEFAULT_PRECISION
from .bounds import absolute_bounds, published_comparison
from .reduction import RETRIES, SweepResult, reduction_sweep
from .search import (
    PUBLISHED_EQ2_TABLE,
    PUBLISHED_EQ3_TABLE,
    TableDiff,
    diff_against_published_tables,
    solve_eq2,
    solve_eq3,
)

log = logging.getLogger(__name__)

# published search horizon for the two-factor equation
EQ2_MIN_SEARCH = 290


@dataclass
class PipelineResult:
    equation: str
    bases: list
    bounds: dict
    sweep: SweepResult
    search_ranges: dict
    solutions: list
    diff: TableDiff
    soundness: dict
    timings: dict = field(default_factory=dict)

    @property
    def sound(self) -> bool:
        return all(self.soundness.values())

    def summary(self) -> dict:
        return {
            "equation": self.equation,
            "bases": [str(self.bases[0]), str(self.bases[-1])],
            "bounds": self.bounds,
            "reduction": {k: str(v) for k, v in sorted(self.sweep.maxima.items())},
            "fallbacks": self.sweep.fallbacks,
            "retried_instances": str(len(self.sweep.retried)),
            "search_ranges": {k: str(v) for k, v in sorted(self.search_ranges.items())},
            "soundness": self.soundness,
            "solutions": [s.as_dict() for s in self.solutions],
            "diff": self.diff.as_dict(),
        }


def eq3_ranges(sweep: SweepResult) -> dict:
    mx = sweep.maxima
    return {"k_max": mx["k_max"], "l1_max": mx["l1_max"], "l2_max": mx["l2_max"]}


def eq2_ranges(sweep: SweepResult) -> dict:
    n = max(sweep.maxima["n_max"], EQ2_MIN_SEARCH)
    # m <= n is searched exhaustively, so the m range is n as well
    return {"n_max": n, "m_max": n}


def soundness_gate(equation: str, sweep: SweepResult, ranges: dict) -> dict:
    """Every computed maximum must lie inside the range actually searched."""
    mx = sweep.maxima
    if equation == "eq3":
        checks = {
            "l1": ranges["l1_max"] >= mx["l1_max"],
            "l2": ranges["l2_max"] >= mx["l2_max"],
            "k": ranges["k_max"] >= mx["k_max"],
            "k_from_l2": ranges["k_max"] >= 22 * mx["l2_max"] + 1,
        }
        for b, pb in sweep.per_base.items():
            checks[f"b{b}"] = pb["l1_max"] <= ranges["l1_max"] and pb["l2_max"] <= ranges["l2_max"]
    else:
        checks = {
            "m": ranges["m_max"] >= mx["m_max"],
            "n_eps": ranges["n_max"] >= mx["n_max_eps"],
            "n_fallback": ranges["n_max"] >= mx["n_max_fallback"],
        }
    return {k: bool(v) for k, v in checks.items()}


def run_pipeline(
    equation: str,
    bases=range(2, 51),
    bits: int = DEFAULT_PRECISION,
    cap: int | None = None,
    workers: int = 1,
    retries: int = RETRIES,
    refine: bool = False,
) -> PipelineResult:
    bases = sorted(bases)
    cap = cap or bits
    t = {}
    t0 = time.perf_counter()
    ab = absolute_bounds(equation, bases)
    bounds = ab.as_dict()
    bounds["published_comparison"] = published_comparison(ab)
    t["bounds"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    sweep = reduction_sweep(equation, bases, bits, cap, retries, workers, refine)
    t["reduction"] = time.perf_counter() - t0
    log.info("%s reduction maxima %s", equation, sweep.maxima)

    t0 = time.perf_counter()
    if equation == "eq3":
        ranges = eq3_ranges(sweep)
        sols = solve_eq3(bases, ranges["k_max"], ranges["l1_max"], ranges["l2_max"], workers)
    else:
        ranges = eq2_ranges(sweep)
        sols = solve_eq2(bases, ranges["n_max"], ranges["m_max"], workers)
    t["search"] = time.perf_counter() - t0

    if equation == "eq2":
        table = [p for p in PUBLISHED_EQ2_TABLE if p[4] in bases]
    else:
        table = [p for p in PUBLISHED_EQ3_TABLE if p[1] in bases]
    diff = diff_against_published_tables(sols, table, equation)
    log.info("%s timings (s): %s", equation, {k: round(v, 2) for k, v in t.items()})
    return PipelineResult(
        equation, bases, bounds, sweep, ranges, sols, diff, soundness_gate(equation, sweep, ranges), t
    )
