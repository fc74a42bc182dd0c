"""Trace-driven cache/DRAM/interconnect simulation engine."""

from .core import (
    CacheLevelConfig,
    DramCacheConfig,
    MainMemoryConfig,
    MemoryRequest,
    TracePack,
    active_kernel_name,
    compiled_kernel_available,
    default_hierarchy,
    pack_trace,
    run_simulation,
)
from .oracle import TraceProfile, amat_oracle
from .stats import SimStats, merge_stats, slowdown

__all__ = [
    "CacheLevelConfig",
    "DramCacheConfig",
    "MainMemoryConfig",
    "MemoryRequest",
    "SimStats",
    "TracePack",
    "TraceProfile",
    "active_kernel_name",
    "amat_oracle",
    "compiled_kernel_available",
    "default_hierarchy",
    "merge_stats",
    "pack_trace",
    "run_simulation",
    "slowdown",
]
