"""Coupled PSO / CBO particle simulations and zero-inertia studies."""

from ._core import (
    ConfigError,
    MemoryParams,
    NumericalAbort,
    Objective,
    Params,
    cli,
    compare_distributions,
    consensus_point,
    empirical_moments,
    initial_positions,
    kl_histogram,
    laplace_sweep,
    laplace_value,
    make_objective,
    optimize,
    paired_msq_gap,
    run,
    wasserstein2_1d,
    zero_inertia_study,
)

__all__ = [
    "ConfigError",
    "MemoryParams",
    "NumericalAbort",
    "Objective",
    "Params",
    "cli",
    "compare_distributions",
    "consensus_point",
    "empirical_moments",
    "initial_positions",
    "kl_histogram",
    "laplace_sweep",
    "laplace_value",
    "make_objective",
    "optimize",
    "paired_msq_gap",
    "run",
    "wasserstein2_1d",
    "zero_inertia_study",
]
