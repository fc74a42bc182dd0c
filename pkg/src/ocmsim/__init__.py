"""ocmsim: optically connected memory, at desk scale.

Two halves share one package: a silicon-photonic WDM link model (energy
per bit, area, feasibility, I/O counts) and a deterministic trace-driven
simulator of a cache hierarchy in front of local, optical, or NIC-attached
DRAM. A compiled kernel accelerates the simulator when available; the
pure-Python twin produces bit-identical results.
"""

__version__ = "0.1.0"

from .dram import (
    BankState,
    DdrTimingParams,
    LockstepGroup,
    bus_latency_tbl,
    dram_access_latency,
)
from .engine import (
    CacheLevelConfig,
    DramCacheConfig,
    MainMemoryConfig,
    MemoryRequest,
    SimStats,
    TracePack,
    TraceProfile,
    active_kernel_name,
    amat_oracle,
    compiled_kernel_available,
    default_hierarchy,
    merge_stats,
    pack_trace,
    run_simulation,
    slowdown,
)
from .errors import (
    ConfigConflict,
    InfeasibleCrosstalk,
    MalformedTrace,
    NoFeasibleDesign,
    OcmsimError,
)
from .interconnect import (
    FlitPlan,
    LatencyBreakdown,
    LocalElectrical,
    Nic,
    OcmLatencyParams,
    OcmOptical,
    flit_plan,
    local_round_trip,
    nic_round_trip,
    ocm_round_trip,
)
from .photonics import (
    CalibrationParams,
    IoCounts,
    LinkDesign,
    LinkEvaluation,
    PhotonicDeviceParams,
    RingGeometry,
    channel_spacing_ghz,
    crosstalk_penalty_db,
    design_sweep,
    er_penalty_db,
    evaluate_link,
    io_counts,
    link_area_mm2,
    link_pitch_um,
    loss_stack_db,
    mrr_count,
    receiver_sensitivity_dbm,
    required_link_bandwidth,
    write_sweep_csv,
)
from .traces import (
    SyntheticWorkloadSpec,
    TraceRecord,
    generate,
    parse_trace,
    serialize_trace,
)

__all__ = [
    "__version__",
    "BankState",
    "CacheLevelConfig",
    "CalibrationParams",
    "ConfigConflict",
    "DdrTimingParams",
    "DramCacheConfig",
    "FlitPlan",
    "InfeasibleCrosstalk",
    "IoCounts",
    "LatencyBreakdown",
    "LinkDesign",
    "LinkEvaluation",
    "LocalElectrical",
    "LockstepGroup",
    "MainMemoryConfig",
    "MalformedTrace",
    "MemoryRequest",
    "Nic",
    "NoFeasibleDesign",
    "OcmLatencyParams",
    "OcmOptical",
    "OcmsimError",
    "PhotonicDeviceParams",
    "RingGeometry",
    "SimStats",
    "SyntheticWorkloadSpec",
    "TracePack",
    "TraceProfile",
    "TraceRecord",
    "active_kernel_name",
    "amat_oracle",
    "bus_latency_tbl",
    "channel_spacing_ghz",
    "compiled_kernel_available",
    "crosstalk_penalty_db",
    "default_hierarchy",
    "design_sweep",
    "dram_access_latency",
    "er_penalty_db",
    "evaluate_link",
    "flit_plan",
    "generate",
    "io_counts",
    "link_area_mm2",
    "link_pitch_um",
    "local_round_trip",
    "loss_stack_db",
    "merge_stats",
    "mrr_count",
    "nic_round_trip",
    "ocm_round_trip",
    "pack_trace",
    "parse_trace",
    "receiver_sensitivity_dbm",
    "required_link_bandwidth",
    "run_simulation",
    "serialize_trace",
    "slowdown",
    "write_sweep_csv",
]
