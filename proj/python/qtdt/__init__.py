"""Sib-pair transmission-test toolkit.

Thin re-export of the compiled extension: two-locus haplotype simulation,
trait-model calibration, a small GLM engine, the multivariate transmission
test, and scenario-driven Monte Carlo power studies.
"""

from ._core import (  # noqa: F401
    DeletionScope,
    FitResult,
    HaplotypeDist,
    MissingType,
    PowerRow,
    Scenario,
    Strategy,
    TestResult,
    TraitConfig,
    TraitKind,
    Variant,
    binary_penetrance,
    chi_square_sf,
    compute_delta,
    fit_logistic,
    fit_ols,
    fit_poisson,
    genetic_variance,
    haplotype_distribution,
    load_scenario,
    multivariate_tdt,
    p_star_oracle,
    run_scenario,
    select_strategy,
    simulate_transmissions,
    solve_residual_param,
    write_results_csv,
)

__all__ = [
    "DeletionScope",
    "FitResult",
    "HaplotypeDist",
    "MissingType",
    "PowerRow",
    "Scenario",
    "Strategy",
    "TestResult",
    "TraitConfig",
    "TraitKind",
    "Variant",
    "binary_penetrance",
    "chi_square_sf",
    "compute_delta",
    "fit_logistic",
    "fit_ols",
    "fit_poisson",
    "genetic_variance",
    "haplotype_distribution",
    "load_scenario",
    "multivariate_tdt",
    "p_star_oracle",
    "run_scenario",
    "select_strategy",
    "simulate_transmissions",
    "solve_residual_param",
    "write_results_csv",
]
