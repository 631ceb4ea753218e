"""Sparse-plus-low-rank matrix recovery.

Thin python layer over the C++ core: synthetic-data generators, the three
solvers (matrix completion, robust decomposition, low-rank representation),
the spectral clustering pipeline, and the convergence diagnostics. Matrices
are numpy arrays of float64 throughout.
"""

from ._core import (
    ClusterLabels,
    CompletionResult,
    KktResiduals,
    LrrResult,
    NumericalError,
    ParseError,
    RateCheck,
    RegularizerSpec,
    RpcaResult,
    SolveTrace,
    SolverConfig,
    SubspaceData,
    accuracy,
    advance_alpha,
    affinity,
    append_outliers,
    auto_thresholds,
    complete,
    detect_outliers,
    drift_stabilized,
    dual_drift,
    gen_lowrank,
    gen_mask,
    gen_sparse_error,
    gen_subspaces,
    gsvt,
    kkt_report,
    lrr,
    prox_l1,
    prox_l21,
    rate_report,
    rpca,
    singular_values,
    spectral_cluster,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterLabels",
    "CompletionResult",
    "KktResiduals",
    "LrrResult",
    "NumericalError",
    "ParseError",
    "RateCheck",
    "RegularizerSpec",
    "RpcaResult",
    "SolveTrace",
    "SolverConfig",
    "SubspaceData",
    "accuracy",
    "advance_alpha",
    "affinity",
    "append_outliers",
    "auto_thresholds",
    "complete",
    "detect_outliers",
    "drift_stabilized",
    "dual_drift",
    "gen_lowrank",
    "gen_mask",
    "gen_sparse_error",
    "gen_subspaces",
    "gsvt",
    "kkt_report",
    "lrr",
    "prox_l1",
    "prox_l21",
    "rate_report",
    "rpca",
    "singular_values",
    "spectral_cluster",
]
