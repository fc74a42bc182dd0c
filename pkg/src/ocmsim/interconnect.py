"""End-to-end memory latency composition for the three attachment paths.

A memory access pays its DRAM service time plus whatever the attachment adds:
nothing for local electrical, the SERDES/modulation/propagation stack for the
optical path, or a fixed adapter cost for a NIC. Each path reports a
LatencyBreakdown whose named terms always sum to the total, in both ns and
core cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

NIC_DEFAULT_CYCLES = 1050
DEFAULT_CORE_GHZ = 3.0


@dataclass(frozen=True)
class LatencyBreakdown:
    """Named additive latency terms of one round trip."""

    terms_ns: Tuple[Tuple[str, float], ...]
    core_ghz: float

    @property
    def total_ns(self) -> float:
        return sum(v for _, v in self.terms_ns)

    @property
    def total_cycles(self) -> float:
        return sum(v * self.core_ghz for _, v in self.terms_ns)

    def term_ns(self, name: str) -> float:
        for term, value in self.terms_ns:
            if term == name:
                return value
        raise KeyError(name)

    def term_cycles(self, name: str) -> float:
        return self.term_ns(name) * self.core_ghz


@dataclass(frozen=True)
class OcmLatencyParams:
    """Optical-path latency contributions, mostly in core cycles.

    t_setup is pinned to zero (connection setup is off the per-access
    path); distance_m is one-way and doubled internally for the round trip.
    """

    t_setup: int = 0
    t_contr: int = 0
    t_serdes: int = 10
    t_mod: int = 0
    t_demod: int = 0
    distance_m: float = 1.0
    propagation_ns_per_m: float = 5.0
    core_ghz: float = DEFAULT_CORE_GHZ

    def __post_init__(self):
        if self.t_setup != 0:
            raise ValueError("t_setup is fixed at 0 cycles")
        for name in ("t_contr", "t_serdes", "t_mod", "t_demod"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.distance_m < 0:
            raise ValueError("distance_m must be >= 0")
        if self.propagation_ns_per_m < 0:
            raise ValueError("propagation_ns_per_m must be >= 0")
        if self.core_ghz <= 0:
            raise ValueError("core_ghz must be > 0")

    @property
    def distance_ns(self) -> float:
        return 2.0 * self.distance_m * self.propagation_ns_per_m

    @property
    def non_memory_ns(self) -> float:
        cyc = 1.0 / self.core_ghz
        return ((self.t_setup + self.t_contr + self.t_serdes + self.t_mod
                 + self.t_demod) * cyc + self.distance_ns)


# SERDES latency presets in core cycles: optimistic, conservative, and the
# worst demonstrated value.
SERDES_PRESET_CYCLES = (10, 150, 340)


def ocm_round_trip(params: OcmLatencyParams,
                   t_mem_ns: float) -> LatencyBreakdown:
    """Optical-path round trip: setup + controller + memory + SERDES +
    modulation + demodulation + distance propagation."""
    cyc = 1.0 / params.core_ghz
    terms = (
        ("setup", params.t_setup * cyc),
        ("controller", params.t_contr * cyc),
        ("memory", t_mem_ns),
        ("serdes", params.t_serdes * cyc),
        ("modulation", params.t_mod * cyc),
        ("demodulation", params.t_demod * cyc),
        ("distance", params.distance_ns),
    )
    return LatencyBreakdown(terms_ns=terms, core_ghz=params.core_ghz)


def nic_round_trip(fixed_cycles: int, t_mem_ns: float,
                   core_ghz: float = DEFAULT_CORE_GHZ) -> LatencyBreakdown:
    """NIC-attached round trip: memory plus a fixed adapter latency."""
    terms = (
        ("memory", t_mem_ns),
        ("nic", fixed_cycles / core_ghz),
    )
    return LatencyBreakdown(terms_ns=terms, core_ghz=core_ghz)


def local_round_trip(t_mem_ns: float,
                     core_ghz: float = DEFAULT_CORE_GHZ) -> LatencyBreakdown:
    """Locally attached memory: the DRAM service time is the whole story."""
    return LatencyBreakdown(terms_ns=(("memory", t_mem_ns),),
                            core_ghz=core_ghz)


@dataclass(frozen=True)
class LocalElectrical:
    """Conventional in-server DRAM attachment."""

    core_ghz: float = DEFAULT_CORE_GHZ

    @property
    def non_memory_ns(self) -> float:
        return 0.0

    def round_trip(self, t_mem_ns: float) -> LatencyBreakdown:
        return local_round_trip(t_mem_ns, self.core_ghz)


@dataclass(frozen=True)
class OcmOptical:
    """Optically attached remote DRAM."""

    params: OcmLatencyParams = OcmLatencyParams()

    @property
    def core_ghz(self) -> float:
        return self.params.core_ghz

    @property
    def non_memory_ns(self) -> float:
        return self.params.non_memory_ns

    def round_trip(self, t_mem_ns: float) -> LatencyBreakdown:
        return ocm_round_trip(self.params, t_mem_ns)


@dataclass(frozen=True)
class Nic:
    """NIC-attached remote DRAM with a fixed adapter latency."""

    fixed_cycles: int = NIC_DEFAULT_CYCLES
    core_ghz: float = DEFAULT_CORE_GHZ

    def __post_init__(self):
        if self.fixed_cycles <= 0:
            raise ValueError("fixed_cycles must be > 0")

    @property
    def non_memory_ns(self) -> float:
        return self.fixed_cycles / self.core_ghz

    def round_trip(self, t_mem_ns: float) -> LatencyBreakdown:
        return nic_round_trip(self.fixed_cycles, t_mem_ns, self.core_ghz)


@dataclass(frozen=True)
class FlitPlan:
    """Serialization plan for one cache line on the optical link."""

    flit_bytes: int
    data_flits: int
    extra_flits: int

    def __post_init__(self):
        if self.flit_bytes < 1:
            raise ValueError("flit_bytes must be >= 1")
        if self.extra_flits < 1:
            raise ValueError("extra_flits must be >= 1 for any transfer")

    @property
    def total_flits(self) -> int:
        return self.data_flits + self.extra_flits


def flit_plan(line_bytes: int, flit_bytes: int) -> FlitPlan:
    """Split a line into data flits plus one command/address flit."""
    if line_bytes < 1:
        raise ValueError("line_bytes must be >= 1")
    if flit_bytes < 1:
        raise ValueError("flit_bytes must be >= 1")
    return FlitPlan(
        flit_bytes=flit_bytes,
        data_flits=math.ceil(line_bytes / flit_bytes),
        extra_flits=1,
    )
