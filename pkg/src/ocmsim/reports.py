"""Plot-data emitters: gnuplot-ready whitespace-separated series.

Each report reads a CSV produced by the CLI (or library helpers) and
writes a small text file with '#' header comments naming the axes and
units. No rendered images; the files feed straight into gnuplot or a
spreadsheet.
"""

from __future__ import annotations

import csv
from typing import Dict, Iterable, List, Optional, Tuple

from .photonics import io_counts

REPORT_KINDS = ("energy_curve", "slowdown_bars", "io_counts")


def _read_csv(path: str) -> Tuple[List[str], List[Dict[str, str]]]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        data = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(data)
    for row in reader:
        rows.append(row)
    return list(reader.fieldnames or ()), rows


def _write_series(path: str, header_lines: Iterable[str],
                  rows: Iterable[Tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        for row in rows:
            fh.write(" ".join(str(v) for v in row) + "\n")


def energy_curve(sweep_csv: str, out_path: str) -> Optional[int]:
    """Energy-per-bit vs wavelength count from a link-sweep CSV.

    The link-sweep CSV has one row per design point (m, ring area);
    the curve keeps the best point per m, preferring feasible ones.
    Emits: m, energy (pJ/bit), feasibility flag, and a marker column
    that is 1 on the feasible minimum row. Returns the minimum m.
    """
    _, rows = _read_csv(sweep_csv)
    per_m: Dict[int, Tuple[float, str, bool]] = {}
    for row in rows:
        m = int(row["m"])
        energy = float(row["energy_pj_per_bit"])
        feasible = row["feasible"] in ("1", "True", "true")
        prev = per_m.get(m)
        if (prev is None or (feasible, -energy) > (prev[2], -prev[0])):
            per_m[m] = (energy, row["energy_pj_per_bit"], feasible)
    best_m = None
    best_e = None
    series = []
    for m in sorted(per_m):
        energy, text, feasible = per_m[m]
        series.append([m, text, int(feasible), 0])
        if feasible and (best_e is None or energy < best_e):
            best_e = energy
            best_m = m
    for entry in series:
        if entry[0] == best_m:
            entry[3] = 1
    header = [
        "energy per bit vs wavelengths per fiber",
        "columns: m energy_pj_per_bit feasible is_minimum",
        (f"minimum: m={best_m} energy_pj_per_bit={best_e}"
         if best_m is not None else "minimum: none feasible"),
    ]
    _write_series(out_path, header, [tuple(e) for e in series])
    return best_m


def slowdown_bars(sweep_csv: str, out_path: str) -> int:
    """Labeled slowdown bars from a grid-sweep CSV. Returns bar count."""
    fields, rows = _read_csv(sweep_csv)
    axis_fields = [f for f in fields
                   if f in ("interconnect", "serdes_cycles", "roundtrip_m")]
    bars = []
    for row in rows:
        label = "/".join(str(row[f]) for f in axis_fields if row[f] != "")
        bars.append((label, row["slowdown"]))
    header = [
        "slowdown relative to the named baseline cell",
        "columns: cell_label slowdown",
    ]
    _write_series(out_path, header, bars)
    return len(bars)


def io_count_series(out_path: str, max_channels: int = 32,
                    per_channel_gbps: float = 153.7,
                    per_fiber_gbps: float = 614.8,
                    pins_per_channel: int = 260) -> None:
    """Electrical pins vs optical fiber I/O as channel count grows.

    The fiber column counts one fiber per direction per per_fiber_gbps
    of aggregate bandwidth. Flags rows where the optical count at the
    reference design point stays below the electrical pin count.
    """
    rows = []
    for channels in range(1, max_channels + 1):
        counts = io_counts(channels, per_channel_gbps, per_fiber_gbps,
                           pins_per_channel)
        rows.append((channels, counts.electrical_io, counts.optical_io))
    header = [
        "I/O footprint vs memory channel count",
        f"per_channel_gbps={per_channel_gbps} "
        f"per_fiber_gbps={per_fiber_gbps} "
        f"pins_per_channel={pins_per_channel}",
        "columns: channels electrical_pins optical_fibers",
    ]
    _write_series(out_path, header, rows)
