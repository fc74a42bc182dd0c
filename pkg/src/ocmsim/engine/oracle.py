"""Closed-form AMAT predictor used to cross-check the engine."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import CacheLevelConfig, Interconnect


@dataclass(frozen=True)
class TraceProfile:
    """Where a trace's reads land, as absolute fractions summing to 1.

    t_mem_ns is the mean DRAM service time seen by the reads that miss
    L3 (row-state dependent, so it is an input rather than a constant).
    """

    l1_hit: float
    l2_hit: float
    l3_hit: float
    l3_miss: float
    t_mem_ns: float = 0.0

    def __post_init__(self):
        parts = (self.l1_hit, self.l2_hit, self.l3_hit, self.l3_miss)
        if any(p < 0 for p in parts):
            raise ValueError("hit fractions must be nonnegative")
        if abs(sum(parts) - 1.0) > 1e-9:
            raise ValueError("hit fractions must sum to 1")
        if self.t_mem_ns < 0:
            raise ValueError("t_mem_ns must be nonnegative")


def amat_oracle(
    profile: TraceProfile,
    hierarchy: Sequence[CacheLevelConfig],
    interconnect: Interconnect,
) -> float:
    """Expected read latency in ns for a window=1 dependence profile.

    Each read costs the latency of the level it hits; an L3 miss costs
    the full interconnect round trip at the profile's mean DRAM time.
    """
    ghz = interconnect.core_ghz
    lat = [lvl.latency_cycles / ghz for lvl in hierarchy]
    round_trip = interconnect.round_trip(profile.t_mem_ns).total_ns
    return (profile.l1_hit * lat[0]
            + profile.l2_hit * lat[1]
            + profile.l3_hit * lat[2]
            + profile.l3_miss * round_trip)
