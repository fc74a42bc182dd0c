"""Stable CSV column schema for SimStats rows."""

from __future__ import annotations

from typing import List

from .engine import SimStats

RUN_CSV_FIELDS = (
    "instructions",
    "reads",
    "writes",
    "l1_hits",
    "l1_misses",
    "l2_hits",
    "l2_misses",
    "l3_hits",
    "l3_misses",
    "dram_cache_hits",
    "dram_cache_misses",
    "dram_cache_hit_rate",
    "dram_cache_writebacks",
    "dirty_evictions",
    "amat_ns",
    "total_ns",
    "total_cycles",
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def stat_values(stats: SimStats) -> List[str]:
    """SimStats rendered in RUN_CSV_FIELDS order."""
    return [_fmt(getattr(stats, name)) for name in RUN_CSV_FIELDS]
