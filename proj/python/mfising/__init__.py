"""Mean-field Ising model with cubic interactions.

Exact likelihood on the magnetization spectrum, adaptive Metropolis,
metric-preconditioned HMC and the hybrid sampler, plus convergence
diagnostics. Parameters are always ordered (K, J, h).
"""

from ._core import (
    Chain,
    ConvergenceError,
    DataError,
    Dataset,
    DomainError,
    NumericalError,
    Posterior,
    SamplerConfig,
    coverage_study,
    density_compare,
    entropy,
    free_energy,
    gelman_rubin,
    grid_starts,
    load_dataset,
    log_count,
    model_summary,
    parse_chain_csv,
    pressure_limit,
    reproduce,
    run_chains,
    scenarios,
    simulate,
    solve_consistency,
    spectrum,
    summarize,
    theoretical_mean,
)

__all__ = [
    "Chain",
    "ConvergenceError",
    "DataError",
    "Dataset",
    "DomainError",
    "NumericalError",
    "Posterior",
    "SamplerConfig",
    "coverage_study",
    "density_compare",
    "entropy",
    "fit",
    "free_energy",
    "gelman_rubin",
    "grid_starts",
    "load_dataset",
    "log_count",
    "model_summary",
    "parse_chain_csv",
    "pressure_limit",
    "reproduce",
    "run_chains",
    "scenarios",
    "simulate",
    "solve_consistency",
    "spectrum",
    "summarize",
    "theoretical_mean",
]

__version__ = "0.1.0"


def fit(data, chains=4, config=None, prior_sd=None, level=0.95, workers=0):
    """Grid-initialised multi-chain fit; returns (chains, report dict)."""
    cfg = config if config is not None else SamplerConfig()
    starts = grid_starts(data, chains, prior_sd)
    runs = run_chains(data, cfg, starts, prior_sd, workers)
    return runs, summarize(runs, cfg.burn_in, level)
