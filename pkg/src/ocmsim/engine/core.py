"""Trace-driven simulation front end.

Validates configuration, packs trace records into flat arrays, and
dispatches to one of two interchangeable kernels: a compiled extension
(built from _kernel_cy.pyx) when available, else the pure-Python
reference in _kernel_py. Both produce bit-identical stats; set
OCMSIM_PURE=1 to force the pure kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..dram import DdrTimingParams, LockstepGroup, bus_latency_tbl
from ..errors import ConfigConflict
from ..interconnect import LocalElectrical, Nic, OcmOptical
from ..traces import TraceRecord
from . import _kernel_py
from .stats import SimStats

try:
    from . import _kernel_cy
except ImportError:
    _kernel_cy = None

Interconnect = Union[LocalElectrical, OcmOptical, Nic]

KIND_READ = "Read"
KIND_WRITE = "Write"


def active_kernel_name() -> str:
    """Kernel the next run_simulation call will use by default."""
    if _kernel_cy is not None and os.environ.get("OCMSIM_PURE") != "1":
        return "compiled"
    return "pure"


def compiled_kernel_available() -> bool:
    return _kernel_cy is not None


@dataclass(frozen=True)
class CacheLevelConfig:
    """One SRAM cache level (set-associative, LRU, write-back)."""

    capacity_bytes: int
    associativity: int
    latency_cycles: int
    line_bytes: int = 128

    def __post_init__(self):
        if self.capacity_bytes <= 0 or self.associativity <= 0:
            raise ValueError("capacity and associativity must be > 0")
        if self.line_bytes <= 0 or self.line_bytes & (self.line_bytes - 1):
            raise ValueError("line_bytes must be a positive power of two")
        if self.capacity_bytes % (self.associativity * self.line_bytes):
            raise ValueError(
                "capacity must divide evenly into associativity x line")
        if self.latency_cycles <= 0:
            raise ValueError("latency_cycles must be > 0")

    @property
    def sets(self) -> int:
        return self.capacity_bytes // (self.associativity * self.line_bytes)


def default_hierarchy(line_bytes: int = 128) -> tuple:
    """32 KB L1 / 256 KB L2 / 8 MB L3 with conventional latencies."""
    return (
        CacheLevelConfig(32 * 1024, 8, 4, line_bytes),
        CacheLevelConfig(256 * 1024, 16, 12, line_bytes),
        CacheLevelConfig(8 * 1024 * 1024, 16, 40, line_bytes),
    )


@dataclass(frozen=True)
class DramCacheConfig:
    """Remote-side DRAM page cache with frequency-based replacement."""

    capacity_bytes: int = 4 * 1024 * 1024 * 1024
    ways: int = 4
    page_bytes: int = 4096
    ddr: DdrTimingParams = DdrTimingParams()
    channels: int = 1
    banks_per_channel: int = 16

    def __post_init__(self):
        if self.ways <= 0 or self.capacity_bytes <= 0:
            raise ValueError("capacity and ways must be > 0")
        if self.page_bytes <= 0 or self.page_bytes & (self.page_bytes - 1):
            raise ValueError("page_bytes must be a positive power of two")
        if self.capacity_bytes % (self.ways * self.page_bytes):
            raise ValueError("capacity must divide evenly into ways x page")
        if self.channels <= 0 or self.banks_per_channel <= 0:
            raise ValueError("channels and banks must be > 0")

    @property
    def sets(self) -> int:
        return self.capacity_bytes // (self.ways * self.page_bytes)


@dataclass(frozen=True)
class MemoryRequest:
    """Normalized trace record: address is aligned down to the access."""

    issue_instruction_index: int
    address: int
    kind: str
    size_bytes: int = 8

    def __post_init__(self):
        if self.kind not in (KIND_READ, KIND_WRITE):
            raise ValueError("kind must be Read or Write")
        aligned = self.address - self.address % self.size_bytes
        object.__setattr__(self, "address", aligned)


@dataclass(frozen=True)
class MainMemoryConfig:
    """Geometry of the memory pool behind the interconnect."""

    channels: int = 4
    banks_per_channel: int = 16
    row_bytes: int = 8192

    def __post_init__(self):
        if min(self.channels, self.banks_per_channel, self.row_bytes) <= 0:
            raise ValueError("memory geometry must be positive")


class TracePack:
    """Trace records flattened into kernel-ready arrays."""

    __slots__ = ("deltas", "kinds", "addrs")

    def __init__(self, deltas, kinds, addrs):
        self.deltas = deltas
        self.kinds = kinds
        self.addrs = addrs

    def __len__(self) -> int:
        return len(self.deltas)


def pack_trace(records: Iterable[TraceRecord]) -> TracePack:
    """Flatten records; addresses are aligned down to their access size."""
    deltas = []
    kinds = []
    addrs = []
    for rec in records:
        deltas.append(rec.instruction_delta)
        kinds.append(1 if rec.kind == "W" else 0)
        addrs.append(rec.address - rec.address % rec.size_bytes)
    return TracePack(
        np.asarray(deltas, dtype=np.int64),
        np.asarray(kinds, dtype=np.uint8),
        np.asarray(addrs, dtype=np.uint64),
    )


def _validate_hierarchy(hierarchy: Sequence[CacheLevelConfig]):
    if len(hierarchy) != 3:
        raise ConfigConflict("hierarchy must define exactly L1, L2, L3")
    line = hierarchy[0].line_bytes
    if any(lvl.line_bytes != line for lvl in hierarchy):
        raise ConfigConflict("all cache levels must share one line size")
    lats = [lvl.latency_cycles for lvl in hierarchy]
    if not lats[0] < lats[1] < lats[2]:
        raise ConfigConflict("level latencies must ascend L1 < L2 < L3")


def run_simulation(
    trace: Union[TracePack, Iterable[TraceRecord]],
    hierarchy: Optional[Sequence[CacheLevelConfig]] = None,
    interconnect: Optional[Interconnect] = None,
    lockstep: Optional[LockstepGroup] = None,
    ddr: Optional[DdrTimingParams] = None,
    dram_cache: Optional[DramCacheConfig] = None,
    *,
    memory: Optional[MainMemoryConfig] = None,
    window: int = 4,
    force_kernel: Optional[str] = None,
) -> SimStats:
    """Run one trace through the cache/interconnect/DRAM model.

    Timing model: in-order core; non-memory instructions cost one cycle
    each (batched through record deltas); cache hits are pipelined; L3
    read misses pay the interconnect round trip against live bank state
    and overlap through an outstanding-miss window; writes are posted.
    """
    hierarchy = tuple(hierarchy) if hierarchy else default_hierarchy()
    interconnect = interconnect if interconnect else LocalElectrical()
    lockstep = lockstep if lockstep else LockstepGroup()
    ddr = ddr if ddr else DdrTimingParams()
    memory = memory if memory else MainMemoryConfig()

    _validate_hierarchy(hierarchy)
    if window < 1:
        raise ConfigConflict("outstanding-miss window must be >= 1")
    if dram_cache is not None and isinstance(interconnect, LocalElectrical):
        raise ConfigConflict(
            "a DRAM cache fronts a remote pool; local memory has none")
    line_bytes = hierarchy[0].line_bytes
    if memory.row_bytes % line_bytes:
        raise ConfigConflict("row_bytes must be a multiple of the line size")
    if dram_cache is not None and dram_cache.page_bytes < line_bytes:
        raise ConfigConflict("DRAM cache pages must hold whole lines")

    pack = trace if isinstance(trace, TracePack) else pack_trace(trace)
    n = len(pack)
    if n == 0:
        raise ValueError("trace is empty")

    ghz = interconnect.core_ghz
    cyc_ns = 1.0 / ghz
    lv_sets = [lvl.sets for lvl in hierarchy]
    lv_ways = [lvl.associativity for lvl in hierarchy]
    lv_lat = [lvl.latency_cycles / ghz for lvl in hierarchy]
    line_shift = line_bytes.bit_length() - 1

    tbl = bus_latency_tbl(ddr, lockstep)
    tck = ddr.tck_ns
    mm_t_hit = ddr.tcas * tck + tbl
    mm_t_empty = (ddr.trcd + ddr.tcas) * tck + tbl
    mm_t_conf = (ddr.trp + ddr.trcd + ddr.tcas) * tck + tbl
    mm_lines_per_row = memory.row_bytes // line_bytes

    if dram_cache is not None:
        dc = dram_cache
        dc_tbl = bus_latency_tbl(
            dc.ddr, LockstepGroup(dimms_per_channel=1,
                                  cache_line_bytes=line_bytes))
        dc_tck = dc.ddr.tck_ns
        dc_args = (
            1,
            dc.sets,
            dc.ways,
            dc.page_bytes.bit_length() - 1,
            dc.channels,
            dc.banks_per_channel,
            mm_lines_per_row,
            dc.ddr.tcas * dc_tck + dc_tbl,
            (dc.ddr.trcd + dc.ddr.tcas) * dc_tck + dc_tbl,
            (dc.ddr.trp + dc.ddr.trcd + dc.ddr.tcas) * dc_tck + dc_tbl,
            dc.ddr.tras * dc_tck,
            dc.ddr.trp * dc_tck,
        )
    else:
        dc_args = (0, 1, 1, 12, 1, 1, mm_lines_per_row, 0.0, 0.0, 0.0,
                   0.0, 0.0)

    args = (
        n,
        line_shift,
        lv_sets,
        lv_ways,
        lv_lat,
        cyc_ns,
        ghz,
        window,
        interconnect.non_memory_ns,
        memory.channels,
        memory.banks_per_channel,
        mm_lines_per_row,
        mm_t_hit,
        mm_t_empty,
        mm_t_conf,
        ddr.tras * tck,
        ddr.trp * tck,
    ) + dc_args

    kernel = _pick_kernel(force_kernel)
    if kernel is _kernel_py:
        out = kernel.run_kernel(pack.deltas.tolist(), pack.kinds.tolist(),
                                pack.addrs.tolist(), *args)
    else:
        out = kernel.run_kernel(pack.deltas, pack.kinds, pack.addrs, *args)

    (instructions, reads, writes, h1, m1, h2, m2, h3, m3,
     dch, dcm, dcwb, dirty_ev, amat_sum, total_ns, total_cycles) = out
    return SimStats(
        instructions=instructions,
        reads=reads,
        writes=writes,
        l1_hits=h1,
        l1_misses=m1,
        l2_hits=h2,
        l2_misses=m2,
        l3_hits=h3,
        l3_misses=m3,
        dram_cache_hits=dch,
        dram_cache_misses=dcm,
        dram_cache_writebacks=dcwb,
        dirty_evictions=dirty_ev,
        amat_ns=amat_sum / reads if reads else 0.0,
        total_ns=total_ns,
        total_cycles=total_cycles,
    )


def _pick_kernel(force_kernel: Optional[str]):
    if force_kernel == "pure":
        return _kernel_py
    if force_kernel == "compiled":
        if _kernel_cy is None:
            raise RuntimeError("compiled kernel is not available")
        return _kernel_cy
    if force_kernel is not None:
        raise ValueError("force_kernel must be 'pure' or 'compiled'")
    return _kernel_cy if active_kernel_name() == "compiled" else _kernel_py
