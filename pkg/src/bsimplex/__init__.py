"""Bivariate Simplex distribution with an FGM copula: density, sampling, fitting."""
from .bivariate import (BivParams, ThetaDerived, covariance, joint_moment, joint_pdf,
                        log_lik, observed_info, score)
from .copula import conditional_inverse, fgm_cdf, fgm_density
from .errors import (AccuracyError, BSimplexError, DomainError, EstimationError,
                     NumericError, ParseError)
from .estimate import FitResult, fit, moment_init, wald_ci
from .montecarlo import McSummary, ScenarioConfig, run_scenario
from .sampler import SeededStream, sample_matrix, sample_pair
from .simplex import UniParams, cdf, log_pdf, pdf, quantile, uni_fit

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "BSimplexError", "BivParams", "DomainError", "EstimationError",
    "FitResult", "McSummary", "NumericError", "ParseError", "ScenarioConfig",
    "SeededStream", "ThetaDerived", "UniParams", "cdf", "conditional_inverse",
    "covariance", "fgm_cdf", "fgm_density", "fit", "joint_moment", "joint_pdf",
    "log_lik", "log_pdf", "moment_init", "observed_info", "pdf", "quantile",
    "run_scenario", "sample_matrix", "sample_pair", "score", "uni_fit", "wald_ci",
]
