"""Uniform-delay affine SDE: simulation, drift MLE, limit-law Monte Carlo.

The model is ``dX(t) = a * (average of X over [t-1, t]) dt + dW(t)`` with a
deterministic continuous initial segment on [-1, 0].  The package computes
the characteristic roots and asymptotic regime of the drift, the
fundamental solution and its information limit, simulated paths with exact
discrete likelihood identities, samplers for the five limit laws of the
scaled estimation error, and a Monte Carlo harness comparing the two by
the Kolmogorov-Smirnov distance.
"""

from .errors import (
    DegenerateDenominator,
    EmptySample,
    InvalidGrid,
    InvalidPhase,
    KernelTooShort,
    MissingIncrements,
    NoConvergence,
    NonpositiveInformation,
    UniDelayError,
    UnsupportedRegime,
)
from .fundamental import (
    FundamentalSolution,
    asymptotic_form,
    delay_average,
    fisher_limit,
    fundamental_solution,
)
from .harness import ExperimentConfig, MCReport, ks_distance, ks_threshold, run_experiment
from .inference import (
    EstimateResult,
    LocalQuadratic,
    delay_integral,
    local_quadratic,
    loglik_ratio,
    loglik_ratio_dw,
    mle,
)
from .limits import (
    LimitSample,
    sample_critical_limit,
    sample_df_limit,
    sample_lamn_limit,
    sample_lan_limit,
    sample_plamn_limit,
)
from .paths import (
    DelayModel,
    InitialSegment,
    SamplePath,
    initial_term,
    replicate_seed,
    simulate_path,
    trailing_averages,
    y_process,
)
from .roots import (
    CRITICAL_A,
    LeadingRoot,
    Regime,
    ResidueData,
    classify_regime,
    eval_char,
    leading_root,
    residue_constants,
    scaling,
)

__version__ = "0.1.0"

__all__ = [
    "CRITICAL_A",
    "DegenerateDenominator",
    "DelayModel",
    "EmptySample",
    "EstimateResult",
    "ExperimentConfig",
    "FundamentalSolution",
    "InitialSegment",
    "InvalidGrid",
    "InvalidPhase",
    "KernelTooShort",
    "LeadingRoot",
    "LimitSample",
    "LocalQuadratic",
    "MCReport",
    "MissingIncrements",
    "NoConvergence",
    "NonpositiveInformation",
    "Regime",
    "ResidueData",
    "SamplePath",
    "UniDelayError",
    "UnsupportedRegime",
    "asymptotic_form",
    "classify_regime",
    "delay_average",
    "delay_integral",
    "eval_char",
    "fisher_limit",
    "fundamental_solution",
    "initial_term",
    "ks_distance",
    "ks_threshold",
    "leading_root",
    "local_quadratic",
    "loglik_ratio",
    "loglik_ratio_dw",
    "mle",
    "replicate_seed",
    "residue_constants",
    "run_experiment",
    "sample_critical_limit",
    "sample_df_limit",
    "sample_lamn_limit",
    "sample_lan_limit",
    "sample_plamn_limit",
    "scaling",
    "simulate_path",
    "trailing_averages",
    "y_process",
]
