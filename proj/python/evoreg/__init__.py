"""Spectral solvers and weighted Holder diagnostics for parabolic evolution equations."""

from ._core import (
    ConfigError,
    GateViolation,
    SpectralOperator,
    cable_operator,
    estimate_holder_exponent,
    fractional_power_apply,
    graded_mesh,
    ito_isometry_oracle,
    mc_second_moment,
    operator_norm_semigroup,
    parse_config,
    phi_kernels,
    power_kernel,
    run_scenario,
    sample_path,
    semigroup_apply,
    smoothing_envelope,
    solve_mild,
    validate_h3,
    validate_h4,
    validate_joint,
    weighted_holder_norm,
)

__all__ = [
    "ConfigError",
    "GateViolation",
    "SpectralOperator",
    "cable_operator",
    "estimate_holder_exponent",
    "fractional_power_apply",
    "graded_mesh",
    "ito_isometry_oracle",
    "mc_second_moment",
    "operator_norm_semigroup",
    "parse_config",
    "phi_kernels",
    "power_kernel",
    "run_scenario",
    "sample_path",
    "semigroup_apply",
    "smoothing_envelope",
    "solve_mild",
    "validate_h3",
    "validate_h4",
    "validate_joint",
    "weighted_holder_norm",
]
