"""Synthetic memory-trace generation and trace-file ingestion.

Trace file format, one record per line:

    <instruction_delta> <R|W> <0xADDRESS> <size_bytes>

Blank lines and lines starting with '#' are skipped; files ending in .gz are
transparently (de)compressed. Generation is deterministic per seed and keeps
all address math in 64-bit integers so traces are byte-identical across
platforms. Random choices use the xorshift64* generator (shifts 12/25/27,
multiplier 2685821657736338717); pointer chains walk a full-period LCG
permutation (multiplier 6364136223846793005, increment 1442695040888963407)
over a power-of-two line count.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, NamedTuple, Tuple

from .errors import MalformedTrace

POINTER_CHASE = "pointer_chase"
STREAM = "stream"
MIXED_LOCALITY = "mixed_locality"
WORKLOAD_KINDS = (POINTER_CHASE, STREAM, MIXED_LOCALITY)

MASK64 = (1 << 64) - 1

# xorshift64* (public-domain constants); used for every random pick.
XORSHIFT_MULT = 2685821657736338717

# Full-period LCG over a power-of-two range: multiplier = 5 (mod 8),
# increment odd. Drives the dependent pointer-chase permutation.
CHASE_MULT = 6364136223846793005
CHASE_INC = 1442695040888963407

# Cold (no-reuse) accesses stride one DRAM row apart so every one of them
# lands in a fresh row.
COLD_STRIDE_BYTES = 8192


class TraceRecord(NamedTuple):
    """One memory access preceded by instruction_delta non-memory ops."""

    instruction_delta: int
    kind: str  # "R" or "W"
    address: int
    size_bytes: int


@dataclass(frozen=True)
class SyntheticWorkloadSpec:
    """Recipe for one synthetic trace.

    reuse_distance_profile applies to the mixed_locality kind: each
    (distance_bytes, probability) entry pins a resident region of that byte
    span which receives that fraction of accesses; a distance of 0 marks
    the no-reuse (cold) fraction, which streams through fresh DRAM rows.
    Each resident region is walked with a rotating cursor, so a region's
    reuse distance is exactly its span. memory_intensity is the fraction
    of instructions that are memory ops; the remainder is spread as
    instruction deltas. prefault (mixed_locality only) emits a preamble of
    zero-delta posted writes touching every resident line once, so the
    measured body starts from a warmed hierarchy.
    """

    kind: str
    footprint_bytes: int
    memory_intensity: float = 1.0
    reuse_distance_profile: Tuple[Tuple[int, float], ...] = ()
    seed: int = 1
    length_instructions: int = 1_000_000
    line_bytes: int = 128
    access_bytes: int = 64
    prefault: bool = False

    def __post_init__(self):
        if self.kind not in WORKLOAD_KINDS:
            raise ValueError(f"kind must be one of {WORKLOAD_KINDS}")
        if self.footprint_bytes <= 0:
            raise ValueError("footprint_bytes must be > 0")
        if not 0 < self.memory_intensity <= 1:
            raise ValueError("memory_intensity must be in (0, 1]")
        if self.length_instructions < 1:
            raise ValueError("length_instructions must be >= 1")
        if self.line_bytes < 1 or self.access_bytes < 1:
            raise ValueError("line_bytes and access_bytes must be >= 1")
        if self.reuse_distance_profile:
            total = sum(p for _, p in self.reuse_distance_profile)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(
                    f"reuse profile probabilities sum to {total}, expected 1")
            for dist, prob in self.reuse_distance_profile:
                if dist < 0:
                    raise ValueError("reuse distances must be >= 0")
                if prob < 0:
                    raise ValueError("probabilities must be >= 0")
        elif self.kind == MIXED_LOCALITY:
            raise ValueError("mixed_locality requires a reuse profile")
        if self.prefault and self.kind != MIXED_LOCALITY:
            raise ValueError("prefault applies to mixed_locality only")

    @property
    def record_count(self) -> int:
        return max(1, round(self.length_instructions
                            * self.memory_intensity))


def xorshift64star(state: int) -> Tuple[int, int]:
    """One xorshift64* step: returns (new_state, output)."""
    x = state & MASK64
    x ^= x >> 12
    x ^= (x << 25) & MASK64
    x ^= x >> 27
    return x, (x * XORSHIFT_MULT) & MASK64


def _seed_state(seed: int) -> int:
    state = seed & MASK64
    # xorshift has a single all-zero fixed point; nudge away from it.
    return state if state != 0 else 0x9E3779B97F4A7C15


def next_chase_line(line: int, line_count_mask: int) -> int:
    """Successor of a pointer-chase line (full-period LCG permutation)."""
    return (CHASE_MULT * line + CHASE_INC) & line_count_mask


class _DeltaFeed:
    """Spreads non-memory instructions between records so the achieved
    memory intensity matches the spec."""

    def __init__(self, intensity: float):
        self._extra_per_record = 1.0 / intensity - 1.0
        self._acc = 0.0

    def next_delta(self) -> int:
        self._acc += self._extra_per_record
        delta = int(self._acc)
        self._acc -= delta
        return delta


def _generate_pointer_chase(spec: SyntheticWorkloadSpec
                            ) -> Iterator[TraceRecord]:
    lines = spec.footprint_bytes // spec.line_bytes
    if lines < 2:
        raise ValueError("pointer chase needs a footprint of >= 2 lines")
    lines = 1 << (lines.bit_length() - 1)  # round down to a power of two
    mask = lines - 1
    state = _seed_state(spec.seed)
    state, out = xorshift64star(state)
    line = out & mask
    deltas = _DeltaFeed(spec.memory_intensity)
    for _ in range(spec.record_count):
        yield TraceRecord(deltas.next_delta(), "R",
                          line * spec.line_bytes, 8)
        line = next_chase_line(line, mask)


def _generate_stream(spec: SyntheticWorkloadSpec) -> Iterator[TraceRecord]:
    usable = spec.footprint_bytes - spec.footprint_bytes % spec.access_bytes
    if usable < spec.access_bytes:
        raise ValueError("stream footprint smaller than one access")
    deltas = _DeltaFeed(spec.memory_intensity)
    offset = 0
    for _ in range(spec.record_count):
        yield TraceRecord(deltas.next_delta(), "R", offset,
                          spec.access_bytes)
        offset += spec.access_bytes
        if offset >= usable:
            offset = 0


class _ColdWalker:
    """Fresh-line generator.

    Strides one DRAM row plus one line per step: successive accesses keep
    opening fresh rows while the extra line staggers them across cache
    sets (a bare row stride would alias every cold access onto the same
    few sets and evict the resident regions' lines)."""

    def __init__(self, base_line: int, region_lines: int, line_bytes: int):
        self.base_line = base_line
        self.stride = max(1, COLD_STRIDE_BYTES // line_bytes) + 1
        self.region_lines = max(1, region_lines)
        self.pos = 0

    def next_line(self) -> int:
        line = self.base_line + self.pos
        self.pos = (self.pos + self.stride) % self.region_lines
        return line


def _generate_mixed(spec: SyntheticWorkloadSpec) -> Iterator[TraceRecord]:
    line_bytes = spec.line_bytes
    footprint_lines = spec.footprint_bytes // line_bytes

    regions = []  # (threshold, base_line, region_lines) for resident sets
    cold_prob = 0.0
    offset_lines = 0
    for dist_bytes, prob in spec.reuse_distance_profile:
        if dist_bytes == 0:
            cold_prob += prob
            continue
        region_lines = max(1, dist_bytes // line_bytes)
        regions.append([prob, offset_lines, region_lines])
        offset_lines += region_lines
    if offset_lines > footprint_lines:
        raise ValueError("reuse regions exceed the footprint")
    cold_lines = footprint_lines - offset_lines
    if cold_prob > 0 and cold_lines <= COLD_STRIDE_BYTES // line_bytes:
        raise ValueError("footprint leaves no room for the no-reuse region")

    if spec.prefault:
        # Largest region first, so after the preamble each region's tail
        # sits no higher in the hierarchy than the region belongs.
        for _, base, span in sorted(regions, key=lambda r: -r[2]):
            for k in range(span):
                yield TraceRecord(0, "W", (base + k) * line_bytes,
                                  line_bytes)

    # Integer thresholds on the raw 64-bit draw keep selection float-free.
    # Each region entry carries its rotating cursor as the last element.
    thresholds = []
    cum = 0.0
    for prob, base, span in regions:
        cum += prob
        thresholds.append([min(MASK64, int(cum * 2.0 ** 64)), base, span, 0])
    # Anything above the last threshold is a cold access.

    cold = _ColdWalker(offset_lines, cold_lines, line_bytes)
    state = _seed_state(spec.seed)
    deltas = _DeltaFeed(spec.memory_intensity)
    for _ in range(spec.record_count):
        state, pick = xorshift64star(state)
        line = None
        for entry in thresholds:
            if pick < entry[0]:
                line = entry[1] + entry[3]
                entry[3] = (entry[3] + 1) % entry[2]
                break
        if line is None:
            line = cold.next_line()
        yield TraceRecord(deltas.next_delta(), "R", line * line_bytes,
                          line_bytes)


def generate(spec: SyntheticWorkloadSpec) -> Iterator[TraceRecord]:
    """Generate the trace records for a synthetic workload spec."""
    if spec.kind == POINTER_CHASE:
        return _generate_pointer_chase(spec)
    if spec.kind == STREAM:
        return _generate_stream(spec)
    return _generate_mixed(spec)


def _open_for_read(path) -> IO[str]:
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def _open_for_write(path) -> IO[str]:
    if str(path).endswith(".gz"):
        return gzip.open(path, "wt", encoding="utf-8", newline="\n")
    return open(path, "w", encoding="utf-8", newline="\n")


def serialize_trace(records: Iterable[TraceRecord], path) -> None:
    """Write records in the text trace format (gzip by extension)."""
    with _open_for_write(path) as fh:
        for rec in records:
            fh.write(f"{rec.instruction_delta} {rec.kind} "
                     f"0x{rec.address:x} {rec.size_bytes}\n")


def parse_trace(path) -> Iterator[TraceRecord]:
    """Stream records from a trace file.

    Raises MalformedTrace with the 1-based line number and the offending
    token on any format violation.
    """
    with _open_for_read(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 4:
                raise MalformedTrace(line_no, line,
                                     "expected 4 whitespace-separated fields")
            delta_tok, kind, addr_tok, size_tok = tokens
            try:
                delta = int(delta_tok)
            except ValueError:
                raise MalformedTrace(line_no, delta_tok,
                                     "instruction delta must be an integer")
            if delta < 0:
                raise MalformedTrace(line_no, delta_tok,
                                     "instruction delta must be >= 0")
            if kind not in ("R", "W"):
                raise MalformedTrace(line_no, kind, "kind must be R or W")
            if not addr_tok.lower().startswith("0x"):
                raise MalformedTrace(line_no, addr_tok,
                                     "address must be 0x-prefixed hex")
            try:
                address = int(addr_tok, 16)
            except ValueError:
                raise MalformedTrace(line_no, addr_tok,
                                     "address must be 0x-prefixed hex")
            try:
                size = int(size_tok)
            except ValueError:
                raise MalformedTrace(line_no, size_tok,
                                     "size must be an integer")
            if size < 1:
                raise MalformedTrace(line_no, size_tok, "size must be >= 1")
            yield TraceRecord(delta, kind, address, size)
