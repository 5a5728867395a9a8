"""Statevector simulation of natural parameterized quantum circuits."""

from ._npqc import (
    BasisIndexMap,
    CraoReport,
    InitMode,
    Method,
    NpqcSpec,
    OptimizerConfig,
    ScanPoint,
    ScanResult,
    SenseRow,
    StateVector,
    SuperposeRequest,
    SuperposeResult,
    TrainRecord,
    TrainTrace,
    Variant,
    adaptive_rate_initial,
    adaptive_rates,
    basis_index_map,
    crao_check,
    encode,
    estimate,
    estimate_exact,
    feasibility_bounds,
    fidelity,
    fidelity_and_gradient,
    gaussian_fidelity,
    inner_product,
    prepare_state,
    prepare_y_state,
    qfim,
    qng,
    random_haar_state,
    reference_params,
    sample_basis,
    sense_experiment,
    single_step_scan,
    solve_superposition,
    superposition_error,
    target_from_distance,
    train,
)

__all__ = [
    "BasisIndexMap",
    "CraoReport",
    "InitMode",
    "Method",
    "NpqcSpec",
    "OptimizerConfig",
    "ScanPoint",
    "ScanResult",
    "SenseRow",
    "StateVector",
    "SuperposeRequest",
    "SuperposeResult",
    "TrainRecord",
    "TrainTrace",
    "Variant",
    "adaptive_rate_initial",
    "adaptive_rates",
    "basis_index_map",
    "crao_check",
    "encode",
    "estimate",
    "estimate_exact",
    "feasibility_bounds",
    "fidelity",
    "fidelity_and_gradient",
    "gaussian_fidelity",
    "inner_product",
    "prepare_state",
    "prepare_y_state",
    "qfim",
    "qng",
    "random_haar_state",
    "reference_params",
    "sample_basis",
    "sense_experiment",
    "single_step_scan",
    "solve_superposition",
    "superposition_error",
    "target_from_distance",
    "train",
]
