"""Networks of probabilistic bits.

Build a network (:class:`PBitNetwork`, or the seeded generators), sample it
with the clocked engine or free-run it with one of the two autonomous
device-level engines, and compare the result against exact enumeration
oracles with the analysis helpers.
"""

from .analysis import (
    AutocorrResult,
    StepResponseResult,
    autocorrelation,
    histogram,
    sigmoid_sweep,
    step_response,
    tv_distance,
)
from .clocked import ClockedConfig, UpdatePolicy, bsn_update, run_clocked, synapse_input
from .core import (
    NetworkKind,
    NodeId,
    PBitNetwork,
    ValidationReport,
    Violation,
    gen_fig3_network,
    gen_layered_random_bn,
    topological_order,
    validate_network,
)
from .d1 import (
    D1Params,
    MtjMode,
    effective_tau_n,
    mtj_step,
    rt_relax,
    run_autonomous_d1,
    synapse_relax,
)
from .d2 import D2Params, d2_step, run_autonomous_d2
from .errors import (
    ConstantTraceError,
    CycleDetectedError,
    DimensionMismatchError,
    InvalidNetworkError,
    NetworkFormatError,
    NotConvergedError,
    PBitError,
    PolicyMismatchError,
    SubsetMismatchError,
    TooLargeError,
    UnknownNodeError,
    UnstableTimestepWarning,
    WrongKindError,
)
from .netio import load_network, save_network, write_table_csv, write_trace_csv
from .oracle import (
    ENUMERATION_CAP,
    DistributionTable,
    bn_joint,
    boltzmann_joint,
    marginalize,
)
from .rng import RandomStream
from .trace import SampleTrace

__version__ = "0.1.0"

__all__ = [
    "AutocorrResult",
    "ClockedConfig",
    "ConstantTraceError",
    "CycleDetectedError",
    "D1Params",
    "D2Params",
    "DimensionMismatchError",
    "DistributionTable",
    "ENUMERATION_CAP",
    "InvalidNetworkError",
    "MtjMode",
    "NetworkFormatError",
    "NetworkKind",
    "NodeId",
    "NotConvergedError",
    "PBitError",
    "PBitNetwork",
    "PolicyMismatchError",
    "RandomStream",
    "SampleTrace",
    "StepResponseResult",
    "SubsetMismatchError",
    "TooLargeError",
    "UnknownNodeError",
    "UnstableTimestepWarning",
    "UpdatePolicy",
    "ValidationReport",
    "Violation",
    "WrongKindError",
    "autocorrelation",
    "bn_joint",
    "boltzmann_joint",
    "bsn_update",
    "d2_step",
    "effective_tau_n",
    "gen_fig3_network",
    "gen_layered_random_bn",
    "histogram",
    "load_network",
    "marginalize",
    "mtj_step",
    "rt_relax",
    "run_autonomous_d1",
    "run_autonomous_d2",
    "run_clocked",
    "save_network",
    "sigmoid_sweep",
    "step_response",
    "synapse_input",
    "synapse_relax",
    "topological_order",
    "tv_distance",
    "validate_network",
    "write_table_csv",
    "write_trace_csv",
]
