"""Command-line front end: run, sweep, link-sweep, report, gen-trace.

Exit codes: 0 success, 2 configuration error, 3 malformed trace file.
CSV outputs begin with '#'-prefixed metadata lines (tool version and
config hash) and are byte-identical across repeat runs and across
--jobs settings.
"""

from __future__ import annotations

import argparse
import dataclasses
import multiprocessing
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .config import (
    RunConfig,
    SweepSpec,
    apply_cell,
    build_run_config,
    load_config_tree,
    load_run_config,
    load_sweep_spec,
)
from .engine import TracePack, active_kernel_name, pack_trace, run_simulation
from .errors import ConfigConflict, MalformedTrace, NoFeasibleDesign
from .photonics import design_sweep, write_sweep_csv
from .reports import REPORT_KINDS, energy_curve, io_count_series, slowdown_bars
from .stats_csv import RUN_CSV_FIELDS, stat_values
from .traces import generate, parse_trace, serialize_trace

_AXIS_ORDER = ("interconnect", "serdes_cycles", "roundtrip_m")


def _build_trace(config: RunConfig, seed: Optional[int]) -> TracePack:
    if config.trace_path:
        with_records = parse_trace(config.trace_path)
        return pack_trace(with_records)
    if config.workload is None:
        raise ConfigConflict(
            "config needs a workload source: give 'workload' or 'trace'")
    spec = config.workload
    if seed is not None:
        spec = dataclasses.replace(spec, seed=seed)
    return pack_trace(generate(spec))


def _run_one(config: RunConfig, pack: TracePack):
    return run_simulation(
        pack,
        config.hierarchy,
        config.interconnect,
        config.lockstep,
        config.ddr,
        config.dram_cache,
        memory=config.memory,
        window=config.window,
    )


def _write_csv(path: str, metadata: Sequence[str], header: str,
               rows: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in metadata:
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _cmd_run(args) -> int:
    config = load_run_config(args.config)
    out = args.out or config.output
    if not out:
        raise ConfigConflict("no output path: give --out or 'output'")
    pack = _build_trace(config, args.seed)
    stats = _run_one(config, pack)
    header = "config_hash,workload,kernel," + ",".join(RUN_CSV_FIELDS)
    row = ",".join([config.hash, config.workload_label,
                    active_kernel_name()] + stat_values(stats))
    _write_csv(out, [f"ocmsim {__version__}", f"config {config.hash}"],
               header, [row])
    print(f"wrote {out} (1 row, config {config.hash})")
    return 0


_WORKER_BASE: Dict = {}
_WORKER_PACK: Optional[TracePack] = None


def _init_worker(base_tree, pack):
    global _WORKER_BASE, _WORKER_PACK
    _WORKER_BASE = base_tree
    _WORKER_PACK = pack


def _run_cell(cell: Dict):
    config = build_run_config(apply_cell(_WORKER_BASE, cell))
    return _run_one(config, _WORKER_PACK)


def _cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.config)
    if not spec.axes:
        if spec.link_targets:
            return _run_link_sweep(spec, args)
        raise ConfigConflict("sweep config has no axes")
    out = args.out or spec.base_tree.get("output")
    if not out:
        raise ConfigConflict("no output path: give --out or 'output'")

    base_config = build_run_config(apply_cell(spec.base_tree, spec.baseline))
    pack = _build_trace(base_config, args.seed)

    baseline_stats = _run_one(base_config, pack)
    cells = spec.cells()
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(cells) > 1:
        with multiprocessing.Pool(
                min(jobs, len(cells)), initializer=_init_worker,
                initargs=(spec.base_tree, pack)) as pool:
            results = pool.map(_run_cell, cells)
    else:
        _init_worker(spec.base_tree, pack)
        results = [_run_cell(cell) for cell in cells]

    axis_names = [a for a in _AXIS_ORDER
                  if a in spec.axes or a in spec.baseline]
    header = (",".join(axis_names) + ",baseline,"
              + ",".join(RUN_CSV_FIELDS) + ",slowdown")
    rows = []
    base_cycles = baseline_stats.total_cycles
    base_axes = [str(spec.baseline.get(a, "")) for a in axis_names]
    rows.append(",".join(base_axes + ["1"] + stat_values(baseline_stats)
                         + ["1"]))
    for cell, stats in zip(cells, results):
        ratio = stats.total_cycles / base_cycles
        rows.append(",".join(
            [str(cell.get(a, "")) for a in axis_names] + ["0"]
            + stat_values(stats) + [f"{ratio:.10g}"]))
    _write_csv(out, [f"ocmsim {__version__}", f"config {spec.hash}",
                     f"workload {base_config.workload_label}"],
               header, rows)
    print(f"wrote {out} ({len(rows)} rows, config {spec.hash})")
    return 0


def _run_link_sweep(spec: SweepSpec, args) -> int:
    out = args.out or spec.base_tree.get("output")
    if not out:
        raise ConfigConflict("no output path: give --out or 'output'")
    m_lo, m_hi = spec.link_m_range
    paths = []
    for target in spec.link_targets:
        result = design_sweep(target, m_range=range(m_lo, m_hi + 1))
        if len(spec.link_targets) == 1:
            path = out
        else:
            root, ext = os.path.splitext(out)
            path = f"{root}_{target:g}{ext or '.csv'}"
        write_sweep_csv(result, path,
                        metadata=(f"ocmsim {__version__}",
                                  f"config {spec.hash}",
                                  f"target_gbps {target:g}"))
        paths.append(path)
    print(f"wrote {', '.join(paths)}")
    return 0


def _cmd_link_sweep(args) -> int:
    spec = load_sweep_spec(args.config)
    if not spec.link_targets:
        raise ConfigConflict("link-sweep config needs a 'link_sweep' "
                             "section with 'targets_gbps'")
    return _run_link_sweep(spec, args)


def _cmd_report(args) -> int:
    if args.kind not in REPORT_KINDS:
        raise ConfigConflict(
            f"unknown report kind '{args.kind}' (expected one of "
            f"{', '.join(REPORT_KINDS)})")
    if not args.out:
        raise ConfigConflict("no output path: give --out")
    if args.kind == "io_counts":
        io_count_series(args.out)
    else:
        if not args.csv:
            raise ConfigConflict(f"report {args.kind} needs an input CSV")
        if args.kind == "energy_curve":
            energy_curve(args.csv, args.out)
        else:
            slowdown_bars(args.csv, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_gen_trace(args) -> int:
    tree = load_config_tree(args.config)
    config = build_run_config(tree)
    if config.workload is None:
        raise ConfigConflict("gen-trace config needs a 'workload' section")
    if not args.out:
        raise ConfigConflict("no output path: give --out")
    spec = config.workload
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    serialize_trace(generate(spec), args.out)
    print(f"wrote {args.out}")
    return 0


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocmsim",
        description="Optically connected memory: link design and "
                    "trace-driven simulation.")
    parser.add_argument("--version", action="version",
                        version=f"ocmsim {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True,
                           help="config file path or preset name")
        p.add_argument("--out", help="output file path")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker processes (default: CPU count)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the workload seed")

    add_common(sub.add_parser("run", help="simulate one configuration"))
    add_common(sub.add_parser("sweep", help="grid sweep with slowdowns"))
    add_common(sub.add_parser("link-sweep",
                              help="photonic-link design sweep"))
    rep = sub.add_parser("report", help="emit gnuplot-ready series")
    rep.add_argument("kind", choices=REPORT_KINDS)
    rep.add_argument("csv", nargs="?", help="input CSV (not needed for "
                                            "io_counts)")
    add_common(rep, needs_config=False)
    add_common(sub.add_parser("gen-trace", help="write a synthetic trace"))
    return parser


_DISPATCH = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "link-sweep": _cmd_link_sweep,
    "report": _cmd_report,
    "gen-trace": _cmd_gen_trace,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        return _DISPATCH[args.verb](args)
    except ConfigConflict as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoFeasibleDesign as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MalformedTrace as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
