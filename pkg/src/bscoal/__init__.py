"""Exact finite-n analysis of the Bolthausen-Sznitman coalescent.

The package covers the block counting process and the fixation line:
exact triangular spectral decompositions of their generators, transition
and hitting probabilities, absorption-time distributions with their
Gumbel limit and Edgeworth refinements, samplers for the Mittag-Leffler
and one-sided stable limit marginals, and exact-distribution Monte Carlo
with reproducible substreams.
"""

from .combinatorics import (
    DEFAULT_NMAX,
    EULER_GAMMA,
    ZETA,
    general_binomial,
    log_gamma,
    signed_log_gamma,
    stirling_first,
    stirling_second,
)
from .spectral import (
    DegenerateSpectrumError,
    GeneratorKind,
    SpectralDecomposition,
    TriangularMatrix,
    VerificationReport,
    build_generator,
    closed_form_decomposition,
    generator_entry,
    recursive_decomposition,
    verify_decomposition,
)
from .analytics import (
    EdgeworthCoeffs,
    HittingMethod,
    NumericInstabilityError,
    TimePoint,
    absorption_cdf,
    block_tail_via_duality,
    edgeworth_c,
    edgeworth_cdf,
    edgeworth_d,
    fixation_marginal,
    fixation_pgf,
    fixation_transition,
    gumbel_cumulant,
    gumbel_limit_cdf,
    gumbel_moment,
    hitting_asymptotic,
    hitting_gf_coefficients,
    hitting_probability,
    reciprocal_factorial_moment,
)
from .limits import (
    LogProcess,
    check_pow_inequality,
    log_cumulant,
    ml_moment,
    neveu_laplace_fd,
    sample_mittag_leffler,
    sample_neveu,
    siegmund_duality_gap,
)
from .simulate import (
    EstimateWithError,
    PathSample,
    SimConfig,
    estimate_hitting,
    ks_distance,
    replicate_rng,
    sample_absorption_times,
    sample_block_marginal,
    sample_fixation_marginal,
    scaled_marginal_sample,
    simulate_block,
    simulate_fixation,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_NMAX",
    "EULER_GAMMA",
    "ZETA",
    "stirling_first",
    "stirling_second",
    "general_binomial",
    "log_gamma",
    "signed_log_gamma",
    "GeneratorKind",
    "TriangularMatrix",
    "SpectralDecomposition",
    "VerificationReport",
    "DegenerateSpectrumError",
    "generator_entry",
    "build_generator",
    "closed_form_decomposition",
    "recursive_decomposition",
    "verify_decomposition",
    "TimePoint",
    "HittingMethod",
    "EdgeworthCoeffs",
    "NumericInstabilityError",
    "fixation_pgf",
    "fixation_transition",
    "fixation_marginal",
    "reciprocal_factorial_moment",
    "block_tail_via_duality",
    "hitting_probability",
    "hitting_gf_coefficients",
    "hitting_asymptotic",
    "absorption_cdf",
    "gumbel_limit_cdf",
    "gumbel_cumulant",
    "gumbel_moment",
    "edgeworth_c",
    "edgeworth_d",
    "edgeworth_cdf",
    "LogProcess",
    "ml_moment",
    "sample_neveu",
    "sample_mittag_leffler",
    "neveu_laplace_fd",
    "log_cumulant",
    "siegmund_duality_gap",
    "check_pow_inequality",
    "SimConfig",
    "PathSample",
    "EstimateWithError",
    "replicate_rng",
    "simulate_block",
    "simulate_fixation",
    "estimate_hitting",
    "sample_block_marginal",
    "sample_absorption_times",
    "sample_fixation_marginal",
    "scaled_marginal_sample",
    "ks_distance",
]
