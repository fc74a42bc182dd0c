"""YAML run/sweep configuration: presets, merging, validation, hashing.

A config file is a key tree with sections mirroring the library modules
(hierarchy, ddr, lockstep, memory, interconnect, dram_cache, workload).
A top-level `preset: <name>` pulls in a shipped preset file as the base
layer; the file's own keys override it. OCMSIM_PRESET_DIR prepends a
search directory for presets.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from importlib import resources
from typing import Any, Dict, Optional, Sequence, Tuple

import yaml

from .dram import DdrTimingParams, LockstepGroup
from .engine import (
    CacheLevelConfig,
    DramCacheConfig,
    MainMemoryConfig,
)
from .errors import ConfigConflict
from .interconnect import (
    NIC_DEFAULT_CYCLES,
    LocalElectrical,
    Nic,
    OcmLatencyParams,
    OcmOptical,
)
from .traces import SyntheticWorkloadSpec

PRESET_ENV_VAR = "OCMSIM_PRESET_DIR"
PRESET_NAMES = ("memconf1", "memconf2", "ocm-min", "ocm-mid", "ocm-max",
                "nic40g")
SWEEP_CELL_CAP = 10_000

_AXIS_NAMES = ("interconnect", "serdes_cycles", "roundtrip_m")


def _load_yaml(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigConflict(f"{path}: top level must be a mapping")
    return data


def _preset_path(name: str) -> str:
    override = os.environ.get(PRESET_ENV_VAR)
    if override:
        candidate = os.path.join(override, f"{name}.yaml")
        if os.path.exists(candidate):
            return candidate
    pkg_dir = resources.files("ocmsim.presets")
    candidate = pkg_dir / f"{name}.yaml"
    if candidate.is_file():
        return str(candidate)
    raise ConfigConflict(f"preset '{name}' not found (known presets: "
                         f"{', '.join(PRESET_NAMES)})")


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]
                ) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if (key in merged and isinstance(merged[key], dict)
                and isinstance(value, dict)):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config_tree(path_or_preset: str) -> Dict[str, Any]:
    """Load a YAML config file (or bare preset name), resolving presets."""
    if os.path.exists(path_or_preset):
        tree = _load_yaml(path_or_preset)
    else:
        base, ext = os.path.splitext(path_or_preset)
        if ext in (".yaml", ".yml") or os.sep in path_or_preset:
            raise ConfigConflict(f"config file not found: {path_or_preset}")
        tree = _load_yaml(_preset_path(path_or_preset))
    seen = set()
    while "preset" in tree:
        name = tree.pop("preset")
        if name in seen:
            raise ConfigConflict(f"preset cycle through '{name}'")
        seen.add(name)
        tree = _deep_merge(_load_yaml(_preset_path(name)), tree)
    return tree


def config_hash(tree: Dict[str, Any]) -> str:
    """Stable 12-hex-digit digest of a fully resolved config tree."""
    canon = json.dumps(tree, sort_keys=True, separators=(",", ":"),
                       default=str)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def _section(tree: Dict[str, Any], name: str) -> Dict[str, Any]:
    value = tree.get(name, {})
    if value is None:
        value = {}
    if not isinstance(value, dict):
        raise ConfigConflict(f"section '{name}' must be a mapping")
    return value


def _capacity_bytes(mapping: Dict[str, Any], prefix: str = "capacity"
                    ) -> Optional[int]:
    keys = [k for k in (f"{prefix}_bytes", f"{prefix}_kb", f"{prefix}_mb")
            if k in mapping]
    if not keys:
        return None
    if len(keys) > 1:
        raise ConfigConflict(f"give only one of {keys}")
    key = keys[0]
    scale = {"_bytes": 1, "_kb": 1024, "_mb": 1024 * 1024}[key[len(prefix):]]
    return int(mapping[key] * scale)


def _build_level(mapping: Dict[str, Any], defaults: CacheLevelConfig,
                 line_bytes: int) -> CacheLevelConfig:
    return CacheLevelConfig(
        capacity_bytes=_capacity_bytes(mapping)
        or defaults.capacity_bytes,
        associativity=int(mapping.get("associativity",
                                      defaults.associativity)),
        latency_cycles=int(mapping.get("latency_cycles",
                                       defaults.latency_cycles)),
        line_bytes=line_bytes,
    )


@dataclass(frozen=True)
class RunConfig:
    """Fully materialized single-run configuration."""

    core_ghz: float
    window: int
    hierarchy: Tuple[CacheLevelConfig, ...]
    ddr: DdrTimingParams
    lockstep: LockstepGroup
    memory: MainMemoryConfig
    interconnect: Any
    dram_cache: Optional[DramCacheConfig]
    workload: Optional[SyntheticWorkloadSpec]
    trace_path: Optional[str]
    output: Optional[str]
    hash: str

    @property
    def workload_label(self) -> str:
        if self.trace_path:
            return os.path.basename(self.trace_path)
        return self.workload.kind if self.workload else "none"


def _build_interconnect(tree: Dict[str, Any], core_ghz: float):
    icx = _section(tree, "interconnect")
    kind = icx.get("kind", "local")
    if kind == "local":
        return LocalElectrical(core_ghz=core_ghz)
    if kind == "ocm":
        roundtrip_m = float(icx.get("roundtrip_m", 2.0))
        params = OcmLatencyParams(
            t_contr=int(icx.get("controller_cycles", 0)),
            t_serdes=int(icx.get("serdes_cycles", 10)),
            t_mod=int(icx.get("modulation_cycles", 0)),
            t_demod=int(icx.get("demodulation_cycles", 0)),
            distance_m=roundtrip_m / 2.0,
            propagation_ns_per_m=float(icx.get("propagation_ns_per_m", 5.0)),
            core_ghz=core_ghz,
        )
        return OcmOptical(params=params)
    if kind == "nic":
        return Nic(fixed_cycles=int(icx.get("nic_cycles",
                                            NIC_DEFAULT_CYCLES)),
                   core_ghz=core_ghz)
    raise ConfigConflict(f"unknown interconnect kind '{kind}' "
                         "(expected local, ocm, or nic)")


def _build_ddr(mapping: Dict[str, Any]) -> DdrTimingParams:
    base = DdrTimingParams()
    return DdrTimingParams(
        data_rate_mtps=float(mapping.get("data_rate_mtps",
                                         base.data_rate_mtps)),
        bus_width_bits=int(mapping.get("bus_width_bits",
                                       base.bus_width_bits)),
        tcas=int(mapping.get("tcas", base.tcas)),
        trcd=int(mapping.get("trcd", base.trcd)),
        trp=int(mapping.get("trp", base.trp)),
        tras=int(mapping.get("tras", base.tras)),
        burst_length=int(mapping.get("burst_length", base.burst_length)),
    )


def _build_workload(mapping: Dict[str, Any]) -> SyntheticWorkloadSpec:
    if "kind" not in mapping:
        raise ConfigConflict("workload section needs a 'kind'")
    footprint = _capacity_bytes(mapping, "footprint")
    if footprint is None:
        raise ConfigConflict("workload section needs footprint_bytes "
                             "(or footprint_kb / footprint_mb)")
    profile = tuple(
        (int(dist), float(prob))
        for dist, prob in mapping.get("reuse_distance_profile", ()))
    try:
        return SyntheticWorkloadSpec(
            kind=mapping["kind"],
            footprint_bytes=footprint,
            memory_intensity=float(mapping.get("memory_intensity", 1.0)),
            reuse_distance_profile=profile,
            seed=int(mapping.get("seed", 1)),
            length_instructions=int(mapping.get("length_instructions",
                                                1_000_000)),
            line_bytes=int(mapping.get("line_bytes", 128)),
            access_bytes=int(mapping.get("access_bytes", 64)),
            prefault=bool(mapping.get("prefault", False)),
        )
    except ValueError as exc:
        raise ConfigConflict(f"workload: {exc}") from exc


def build_run_config(tree: Dict[str, Any]) -> RunConfig:
    """Materialize and validate a resolved config tree."""
    core_ghz = float(tree.get("core_ghz", 3.0))
    window = int(tree.get("window", 4))

    hier = _section(tree, "hierarchy")
    line_bytes = int(hier.get("line_bytes", 128))
    defaults = (
        CacheLevelConfig(32 * 1024, 8, 4, line_bytes),
        CacheLevelConfig(256 * 1024, 16, 12, line_bytes),
        CacheLevelConfig(8 * 1024 * 1024, 16, 40, line_bytes),
    )
    try:
        hierarchy = tuple(
            _build_level(_section(hier, name), dflt, line_bytes)
            for name, dflt in zip(("l1", "l2", "l3"), defaults))
        ddr = _build_ddr(_section(tree, "ddr"))
        lck = _section(tree, "lockstep")
        lockstep = LockstepGroup(
            dimms_per_channel=int(lck.get("dimms_per_channel", 2)),
            cache_line_bytes=int(lck.get("cache_line_bytes", line_bytes)),
        )
        mem = _section(tree, "memory")
        memory = MainMemoryConfig(
            channels=int(mem.get("channels", 4)),
            banks_per_channel=int(mem.get("banks_per_channel", 16)),
            row_bytes=int(mem.get("row_bytes", 8192)),
        )
    except ValueError as exc:
        raise ConfigConflict(str(exc)) from exc

    interconnect = _build_interconnect(tree, core_ghz)

    dc_map = _section(tree, "dram_cache")
    dram_cache = None
    if dc_map.get("enabled", False):
        try:
            dram_cache = DramCacheConfig(
                capacity_bytes=_capacity_bytes(dc_map)
                or DramCacheConfig().capacity_bytes,
                ways=int(dc_map.get("ways", 4)),
                page_bytes=int(dc_map.get("page_bytes", 4096)),
                ddr=_build_ddr(_section(dc_map, "ddr")),
                channels=int(dc_map.get("channels", 1)),
                banks_per_channel=int(dc_map.get("banks_per_channel", 16)),
            )
        except ValueError as exc:
            raise ConfigConflict(f"dram_cache: {exc}") from exc

    workload = None
    trace_path = tree.get("trace")
    if "workload" in tree and tree["workload"]:
        workload = _build_workload(_section(tree, "workload"))
    if workload is not None and trace_path:
        raise ConfigConflict(
            "give exactly one workload source: found both 'workload' "
            "and 'trace'")

    return RunConfig(
        core_ghz=core_ghz,
        window=window,
        hierarchy=hierarchy,
        ddr=ddr,
        lockstep=lockstep,
        memory=memory,
        interconnect=interconnect,
        dram_cache=dram_cache,
        workload=workload,
        trace_path=trace_path,
        output=tree.get("output"),
        hash=config_hash(tree),
    )


def load_run_config(path_or_preset: str) -> RunConfig:
    return build_run_config(load_config_tree(path_or_preset))


@dataclass(frozen=True)
class SweepSpec:
    """Grid sweep: a base run config plus named axis lists.

    Recognized axes: interconnect (local/ocm/nic), serdes_cycles,
    roundtrip_m. The baseline mapping names one explicit cell; slowdown
    columns are relative to it.
    """

    base_tree: Dict[str, Any]
    axes: Dict[str, Sequence[Any]]
    baseline: Dict[str, Any]
    link_targets: Tuple[float, ...]
    link_m_range: Tuple[int, int]
    hash: str

    def cells(self) -> list:
        """Axis-value mappings in deterministic lexicographic order."""
        names = [a for a in _AXIS_NAMES if a in self.axes]
        cells = [{}]
        for name in names:
            cells = [dict(cell, **{name: value})
                     for cell in cells
                     for value in self.axes[name]]
        cells.sort(key=lambda c: tuple(str(c[n]) for n in names))
        return cells


def build_sweep_spec(tree: Dict[str, Any]) -> SweepSpec:
    axes_map = _section(tree, "axes")
    link_map = _section(tree, "link_sweep")
    if not axes_map and not link_map:
        raise ConfigConflict("sweep config needs 'axes' or 'link_sweep'")
    axes: Dict[str, Sequence[Any]] = {}
    size = 1
    for name, values in axes_map.items():
        if name not in _AXIS_NAMES:
            raise ConfigConflict(
                f"unknown axis '{name}' (expected one of {_AXIS_NAMES})")
        if not isinstance(values, (list, tuple)) or not values:
            raise ConfigConflict(f"axis '{name}' must be a nonempty list")
        axes[name] = tuple(values)
        size *= len(values)
    if size > SWEEP_CELL_CAP:
        raise ConfigConflict(
            f"sweep grid has {size} cells, cap is {SWEEP_CELL_CAP}")

    baseline = _section(tree, "baseline")
    if axes and not baseline:
        raise ConfigConflict("sweep with axes needs an explicit 'baseline' "
                             "cell mapping")

    targets = tuple(float(t) for t in link_map.get("targets_gbps", ()))
    m_min = int(link_map.get("m_min", 10))
    m_max = int(link_map.get("m_max", 60))
    if link_map and not targets:
        raise ConfigConflict("link_sweep needs a nonempty 'targets_gbps'")
    if m_min < 1 or m_max < m_min:
        raise ConfigConflict("link_sweep m range must satisfy 1 <= min <= "
                             "max")

    base_tree = {k: v for k, v in tree.items()
                 if k not in ("axes", "baseline", "link_sweep")}
    return SweepSpec(
        base_tree=base_tree,
        axes=axes,
        baseline=dict(baseline),
        link_targets=targets,
        link_m_range=(m_min, m_max),
        hash=config_hash(tree),
    )


def load_sweep_spec(path_or_preset: str) -> SweepSpec:
    return build_sweep_spec(load_config_tree(path_or_preset))


def apply_cell(base_tree: Dict[str, Any], cell: Dict[str, Any]
               ) -> Dict[str, Any]:
    """Overlay one sweep cell's axis values onto the base run tree."""
    icx = {}
    if "interconnect" in cell:
        icx["kind"] = cell["interconnect"]
    if "serdes_cycles" in cell:
        icx["serdes_cycles"] = cell["serdes_cycles"]
    if "roundtrip_m" in cell:
        icx["roundtrip_m"] = cell["roundtrip_m"]
    return _deep_merge(base_tree, {"interconnect": icx})
