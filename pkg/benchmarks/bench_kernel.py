"""Throughput comparison of the pure-Python and compiled engine kernels.

Runs the same packed 1M-record trace through both kernels (best of three
repetitions each) and prints records/second plus the speedup. Usage:

    python3 benchmarks/bench_kernel.py [--records N]
"""

from __future__ import annotations

import argparse
import time

from ocmsim.engine import (
    DramCacheConfig,
    compiled_kernel_available,
    pack_trace,
    run_simulation,
)
from ocmsim.interconnect import OcmLatencyParams, OcmOptical
from ocmsim.traces import SyntheticWorkloadSpec, generate

REPS = 3


def best_rate(pack, kernel: str, **kwargs) -> tuple:
    best = None
    stats = None
    for _ in range(REPS):
        start = time.perf_counter()
        stats = run_simulation(pack, force_kernel=kernel, **kwargs)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return len(pack) / best, stats


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--records", type=int, default=1_000_000)
    args = parser.parse_args()

    spec = SyntheticWorkloadSpec(
        kind="mixed_locality", footprint_bytes=64 * 1024 * 1024,
        reuse_distance_profile=((4096, 0.60), (64 * 1024, 0.25),
                                (1024 * 1024, 0.10), (0, 0.05)),
        length_instructions=args.records, seed=3)
    print(f"generating {args.records} records...")
    pack = pack_trace(generate(spec))
    ocm = OcmOptical(OcmLatencyParams(t_serdes=150, distance_m=2.0))
    kwargs = dict(interconnect=ocm,
                  dram_cache=DramCacheConfig(capacity_bytes=16 * 1024 * 1024,
                                             ways=4, page_bytes=4096))

    pure_rate, pure_stats = best_rate(pack, "pure", **kwargs)
    print(f"pure:     {pure_rate:12,.0f} records/s")

    if not compiled_kernel_available():
        print("compiled: not built in this environment")
        return 0

    comp_rate, comp_stats = best_rate(pack, "compiled", **kwargs)
    print(f"compiled: {comp_rate:12,.0f} records/s")
    print(f"speedup:  {comp_rate / pure_rate:.1f}x")
    if pure_stats != comp_stats:
        print("WARNING: kernels disagree on this trace")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
