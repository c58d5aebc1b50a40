"""Directional Metropolis-Hastings sampler: Python bindings for the C++ core."""

from ._dirmh import (
    AdaptState,
    AdaptTraceRow,
    AdaptiveRun,
    BananaTarget,
    Chain,
    ConfigError,
    DiagnosticsReport,
    DriftEstimate,
    GaussianTarget,
    GlmPosterior,
    KernelConfig,
    KernelFlavor,
    ProposalShape,
    TargetDensity,
    __version__,
    adapt_delta,
    autocorrelation,
    compute_report,
    covariance_matrix,
    default_batch_size,
    drift_ratio_estimate,
    ess_univariate,
    glm_posterior_from_csv,
    iact,
    log_hastings_ratio,
    mess,
    msjd,
    proposal_log_density,
    run_adaptive_chain,
    run_chain,
    simulated_glm_posterior,
)

__all__ = [
    "AdaptState",
    "AdaptTraceRow",
    "AdaptiveRun",
    "BananaTarget",
    "Chain",
    "ConfigError",
    "DiagnosticsReport",
    "DriftEstimate",
    "GaussianTarget",
    "GlmPosterior",
    "KernelConfig",
    "KernelFlavor",
    "ProposalShape",
    "TargetDensity",
    "__version__",
    "adapt_delta",
    "autocorrelation",
    "compute_report",
    "covariance_matrix",
    "default_batch_size",
    "drift_ratio_estimate",
    "ess_univariate",
    "glm_posterior_from_csv",
    "iact",
    "log_hastings_ratio",
    "mess",
    "msjd",
    "proposal_log_density",
    "run_adaptive_chain",
    "run_chain",
    "simulated_glm_posterior",
]
