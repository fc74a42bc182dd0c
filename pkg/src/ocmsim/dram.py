"""DDR4 channel/bank timing and lockstep cache-line splitting.

Open-page row-buffer policy with per-bank FIFO service: each bank carries its
own service clock, an open row, and the time of the last activate, which is
enough to price row hits, empty-row activates, and row conflicts (including
the tRAS floor before an early precharge). Refresh, command-bus arbitration,
and rank-switch penalties are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DdrTimingParams:
    """DDR4 speed-grade timing in memory-clock cycles.

    Defaults model a 2400R grade part: CL/tRCD/tRP = 16/16/16, tRAS = 39.
    """

    data_rate_mtps: float = 2400.0
    bus_width_bits: int = 64
    tcas: int = 16
    trcd: int = 16
    trp: int = 16
    tras: int = 39
    burst_length: int = 8

    def __post_init__(self):
        if self.data_rate_mtps <= 0:
            raise ValueError("data_rate_mtps must be > 0")
        if self.bus_width_bits <= 0:
            raise ValueError("bus_width_bits must be > 0")
        for name in ("tcas", "trcd", "trp", "tras", "burst_length"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def tck_ns(self) -> float:
        # Two transfers per clock: a 2400 MT/s part runs a 1200 MHz clock.
        return 2000.0 / self.data_rate_mtps

    @property
    def peak_bandwidth_gbps(self) -> float:
        return self.data_rate_mtps * 1e6 * self.bus_width_bits / 1e9


@dataclass(frozen=True)
class LockstepGroup:
    """X DIMMs answering one cache line together, a slice each."""

    dimms_per_channel: int = 2
    cache_line_bytes: int = 128

    def __post_init__(self):
        if self.dimms_per_channel < 1:
            raise ValueError("dimms_per_channel must be >= 1")
        if self.cache_line_bytes < 1:
            raise ValueError("cache_line_bytes must be >= 1")
        if self.cache_line_bytes % self.dimms_per_channel != 0:
            raise ValueError(
                "cache_line_bytes must divide evenly across lockstep DIMMs")

    @property
    def per_dimm_slice_bytes(self) -> int:
        return self.cache_line_bytes // self.dimms_per_channel


def bus_latency_tbl(ddr: DdrTimingParams, group: LockstepGroup) -> float:
    """Data-bus burst duration (tBL) for one cache line, in ns.

    The line occupies line_bytes*8/bus_width beats on one channel; X
    lockstep DIMMs each carry 1/X of the beats concurrently, shortening the
    burst. DDR moves two beats per clock, and a burst can never finish in
    less than one full clock (one beat-pair).
    """
    line_bits = group.cache_line_bytes * 8
    if line_bits % ddr.bus_width_bits != 0:
        raise ValueError("cache line must be a whole number of bus beats")
    beats = line_bits // ddr.bus_width_bits
    if beats % group.dimms_per_channel == 0:
        per_dimm_beats = beats // group.dimms_per_channel
    else:
        per_dimm_beats = beats / group.dimms_per_channel
    per_dimm_beats = max(per_dimm_beats, 2)
    return per_dimm_beats * ddr.tck_ns / 2.0


class BankState:
    """Mutable timing state of one DRAM bank (single-owner)."""

    __slots__ = ("open_row", "clock_ns", "activate_ns")

    def __init__(self):
        self.open_row = -1
        self.clock_ns = 0.0
        self.activate_ns = 0.0

    def reset(self):
        self.open_row = -1
        self.clock_ns = 0.0
        self.activate_ns = 0.0


def dram_access_latency(bank: BankState, row: int, ddr: DdrTimingParams,
                        tbl_ns: float) -> float:
    """Service latency of one line access at this bank, in ns.

    Row hit: tCAS + tBL. Empty row: tRCD + tCAS + tBL. Conflict:
    tRP + tRCD + tCAS + tBL, where the precharge may additionally wait for
    the tRAS minimum since the row's activate. Advances the bank clock and
    open-row state.
    """
    tck = ddr.tck_ns
    if bank.open_row == row:
        dt = ddr.tcas * tck + tbl_ns
    elif bank.open_row == -1:
        bank.activate_ns = bank.clock_ns
        bank.open_row = row
        dt = (ddr.trcd + ddr.tcas) * tck + tbl_ns
    else:
        precharge_start = max(bank.clock_ns,
                              bank.activate_ns + ddr.tras * tck)
        wait = precharge_start - bank.clock_ns
        bank.activate_ns = precharge_start + ddr.trp * tck
        bank.open_row = row
        dt = wait + (ddr.trp + ddr.trcd + ddr.tcas) * tck + tbl_ns
    bank.clock_ns += dt
    return dt
