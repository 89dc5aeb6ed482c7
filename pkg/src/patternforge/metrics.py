"""Throughput metrics computed from match counters and wall time."""

from __future__ import annotations

from dataclasses import dataclass

from .engine import MatchStats
from .errors import ZeroDuration, ZeroEdges, ZeroInferences


def lips(stats: MatchStats) -> float:
    """Logical inferences per second."""
    if stats.elapsed_seconds <= 0:
        raise ZeroDuration("elapsed time must be positive")
    return stats.inferences / stats.elapsed_seconds


def cycles_per_inference(stats: MatchStats, clock_hz: float) -> float:
    n = stats.inferences
    if n <= 0:
        raise ZeroInferences("no inferences recorded")
    return clock_hz * stats.elapsed_seconds / n


def cycles_per_edge(elapsed_seconds: float, cores: int, clock_hz: float, edge_count: int) -> float:
    if edge_count <= 0:
        raise ZeroEdges("edge count must be positive")
    return cores * clock_hz * elapsed_seconds / edge_count


@dataclass(frozen=True)
class BenchRow:
    edges: int
    strategy: str
    elapsed_s: float
    atom_matches: int
    rule_firings: int
    inferences: int
    lips: float
    cycles_per_inference: float
    cycles_per_edge: float
    seed: int

    @classmethod
    def from_stats(cls, edges: int, strategy: str, stats: MatchStats, seed: int,
                   clock_hz: float, cores: int = 1) -> "BenchRow":
        """Derive every computed column from the raw counters.

        Undefined ratios (zero time or zero inferences) become NaN.
        """
        elapsed = stats.elapsed_seconds
        try:
            rate = lips(stats)
        except ZeroDuration:
            rate = float("nan")
        try:
            cpi = cycles_per_inference(stats, clock_hz)
        except ZeroInferences:
            cpi = float("nan")
        return cls(
            edges=edges,
            strategy=strategy,
            elapsed_s=elapsed,
            atom_matches=stats.atom_matches,
            rule_firings=stats.rule_firings,
            inferences=stats.inferences,
            lips=rate,
            cycles_per_inference=cpi,
            cycles_per_edge=cycles_per_edge(elapsed, cores, clock_hz, edges),
            seed=seed,
        )
