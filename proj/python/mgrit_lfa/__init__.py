"""Two-level MGRIT local Fourier analysis for semi-Lagrangian advection."""

from ._core import (
    ConfigError,
    InsufficientIterations,
    SemiLagrangianScheme,
    __version__,
    dense_error_propagator,
    error_propagator_symbol,
    f_poly,
    in_admissible_set,
    lfa_norm,
    lfa_norm_sup,
    lfa_rho_sup,
    lfa_spectral_radius,
    lfa_worst_case,
    measured_convergence_factor,
    modified_coarse_gamma,
    rho_check_lower_bound,
    run_experiment,
    sl_symbol_estimate,
    spacetime_rho,
    theta_dagger,
)

__all__ = [
    "ConfigError",
    "InsufficientIterations",
    "SemiLagrangianScheme",
    "__version__",
    "dense_error_propagator",
    "error_propagator_symbol",
    "f_poly",
    "in_admissible_set",
    "lfa_norm",
    "lfa_norm_sup",
    "lfa_rho_sup",
    "lfa_spectral_radius",
    "lfa_worst_case",
    "measured_convergence_factor",
    "modified_coarse_gamma",
    "rho_check_lower_bound",
    "run_experiment",
    "sl_symbol_estimate",
    "spacetime_rho",
    "theta_dagger",
]
