"""Simulation outputs and baseline-relative comparisons."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional


@dataclass(frozen=True)
class SimStats:
    """Counters and timing totals of one simulation run.

    amat_ns averages the charged latency of read accesses only: a read
    costs the latency of the level it hits, or the full interconnect round
    trip on an L3 miss. Writes are posted and excluded. total_cycles is
    wall-clock: instruction issue plus miss stalls after overlap through
    the outstanding-miss window.
    """

    instructions: int
    reads: int
    writes: int
    l1_hits: int
    l1_misses: int
    l2_hits: int
    l2_misses: int
    l3_hits: int
    l3_misses: int
    dram_cache_hits: int
    dram_cache_misses: int
    dram_cache_writebacks: int
    dirty_evictions: int
    amat_ns: float
    total_ns: float
    total_cycles: int
    slowdown_vs_baseline: Optional[float] = None

    @property
    def dram_cache_hit_rate(self) -> float:
        total = self.dram_cache_hits + self.dram_cache_misses
        return self.dram_cache_hits / total if total else 0.0

    @property
    def memory_accesses(self) -> int:
        return self.reads + self.writes

    def with_slowdown(self, baseline: "SimStats") -> "SimStats":
        return replace(self, slowdown_vs_baseline=slowdown(self, baseline))


def slowdown(stats_a: SimStats, stats_b: SimStats) -> float:
    """Cycle ratio of run a over run b (b is the baseline)."""
    if stats_b.total_cycles == 0:
        raise ValueError("baseline run has zero cycles")
    return stats_a.total_cycles / stats_b.total_cycles


def merge_stats(parts: list[SimStats]) -> SimStats:
    """Order-independent sum of independent lanes.

    Counter fields add; amat_ns recombines as the read-weighted mean;
    total cycles/ns add (lanes model serial slices of one core's work).
    """
    if not parts:
        raise ValueError("nothing to merge")
    reads = sum(p.reads for p in parts)
    amat = (sum(p.amat_ns * p.reads for p in parts) / reads) if reads else 0.0
    return SimStats(
        instructions=sum(p.instructions for p in parts),
        reads=reads,
        writes=sum(p.writes for p in parts),
        l1_hits=sum(p.l1_hits for p in parts),
        l1_misses=sum(p.l1_misses for p in parts),
        l2_hits=sum(p.l2_hits for p in parts),
        l2_misses=sum(p.l2_misses for p in parts),
        l3_hits=sum(p.l3_hits for p in parts),
        l3_misses=sum(p.l3_misses for p in parts),
        dram_cache_hits=sum(p.dram_cache_hits for p in parts),
        dram_cache_misses=sum(p.dram_cache_misses for p in parts),
        dram_cache_writebacks=sum(p.dram_cache_writebacks for p in parts),
        dirty_evictions=sum(p.dirty_evictions for p in parts),
        amat_ns=amat,
        total_ns=sum(p.total_ns for p in parts),
        total_cycles=sum(p.total_cycles for p in parts),
    )
