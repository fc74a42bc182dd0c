"""Pure-Python and compiled kernels must produce identical statistics.

Every field of SimStats is compared exactly, floats included: both
kernels perform the same arithmetic in the same order, so any drift is
a bug, not rounding noise.
"""

from __future__ import annotations

import pytest

from ocmsim.engine import (
    DramCacheConfig,
    compiled_kernel_available,
    pack_trace,
    run_simulation,
)
from ocmsim.interconnect import (
    LocalElectrical,
    Nic,
    OcmLatencyParams,
    OcmOptical,
)
from ocmsim.traces import (
    MIXED_LOCALITY,
    POINTER_CHASE,
    STREAM,
    SyntheticWorkloadSpec,
    TraceRecord,
    generate,
)

pytestmark = pytest.mark.skipif(
    not compiled_kernel_available(),
    reason="compiled kernel not built in this environment")

OCM = OcmOptical(OcmLatencyParams(t_serdes=150, distance_m=2.0))

WORKLOADS = {
    "stream": SyntheticWorkloadSpec(
        kind=STREAM, footprint_bytes=256 * 1024, memory_intensity=0.2,
        length_instructions=20_000, seed=5),
    "chase": SyntheticWorkloadSpec(
        kind=POINTER_CHASE, footprint_bytes=1024 * 1024,
        length_instructions=10_000, seed=6),
    "mixed": SyntheticWorkloadSpec(
        kind=MIXED_LOCALITY, footprint_bytes=32 * 1024 * 1024,
        reuse_distance_profile=((16 * 1024, 0.55), (1024 * 1024, 0.30),
                                (0, 0.15)),
        length_instructions=20_000, seed=7, prefault=True),
}


def both(pack, **kwargs):
    pure = run_simulation(pack, force_kernel="pure", **kwargs)
    compiled = run_simulation(pack, force_kernel="compiled", **kwargs)
    return pure, compiled


@pytest.fixture(scope="module")
def packs():
    return {name: pack_trace(generate(spec))
            for name, spec in WORKLOADS.items()}


class TestKernelEquivalence:
    @pytest.mark.parametrize("workload", sorted(WORKLOADS))
    @pytest.mark.parametrize("window", [1, 4, 8])
    def test_local_runs_match(self, packs, workload, window):
        pure, compiled = both(packs[workload], window=window)
        assert pure == compiled

    @pytest.mark.parametrize("workload", sorted(WORKLOADS))
    @pytest.mark.parametrize("front", [OCM, Nic()],
                             ids=["ocm", "nic"])
    def test_remote_runs_match(self, packs, workload, front):
        pure, compiled = both(packs[workload], interconnect=front)
        assert pure == compiled

    @pytest.mark.parametrize("workload", sorted(WORKLOADS))
    def test_dram_cache_runs_match(self, packs, workload):
        dc = DramCacheConfig(capacity_bytes=1024 * 1024, ways=4,
                             page_bytes=4096)
        pure, compiled = both(packs[workload], interconnect=OCM,
                              dram_cache=dc, window=2)
        assert pure == compiled
        assert pure.dram_cache_hits + pure.dram_cache_misses \
            == pure.l3_misses

    def test_write_heavy_trace_matches(self):
        # Dirty page, then a same-set page read twice: the second read
        # out-counts the dirty resident and forces a write-back.
        records = []
        for i in range(64):
            records.append(TraceRecord(i % 7, "W", i * 4096, 128))
            records.append(TraceRecord(0, "R", (i + 128) * 4096, 128))
            records.append(TraceRecord(0, "R", (i + 128) * 4096 + 128, 128))
        dc = DramCacheConfig(capacity_bytes=512 * 1024, ways=1,
                             page_bytes=4096)
        pure, compiled = both(pack_trace(records), interconnect=OCM,
                              dram_cache=dc, window=1)
        assert pure == compiled
        assert pure.dram_cache_writebacks > 0
        assert pure.dirty_evictions > 0

    def test_default_selection_matches_forced(self, packs, monkeypatch):
        from ocmsim.engine import active_kernel_name
        monkeypatch.delenv("OCMSIM_PURE", raising=False)
        assert active_kernel_name() == "compiled"
        default = run_simulation(packs["chase"])
        forced = run_simulation(packs["chase"], force_kernel="compiled")
        assert default == forced
        monkeypatch.setenv("OCMSIM_PURE", "1")
        assert active_kernel_name() == "pure"
