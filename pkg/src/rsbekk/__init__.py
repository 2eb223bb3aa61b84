"""Bivariate BEKK GARCH-in-mean models with Markov regime switching.

Core pieces: the single-regime diagonal BEKK(1,1) in-mean model
(:mod:`rsbekk.bekk`), the two-state switching layer with Hamilton
filtering and Gray-style recombination (:mod:`rsbekk.regime`), QML
estimation with robust standard errors (:mod:`rsbekk.estimation`),
simulators (:mod:`rsbekk.simulate`), data preparation and diagnostics
(:mod:`rsbekk.dataio`), and the risk-premium decomposition
(:mod:`rsbekk.premium`).  A FastAPI service (:mod:`rsbekk.service`) wraps
the library; the ``rsbekk`` CLI is a thin client of that service.
"""

__version__ = "0.1.0"

from .errors import (
    CovarianceError,
    DataError,
    DegenerateDummyError,
    DegenerateLikelihoodError,
    EstimationError,
    NearSingularError,
    RsbekkError,
    SeriesError,
    SingularInformationError,
)
from .types import (
    BekkParams,
    Cov2,
    DummyParams,
    EstimationResult,
    ExcessReturnSeries,
    FilterOutput,
    MeanParams,
    RsModelParams,
    validate_series,
)
from .bekk import BekkPath, conditional_mean, cov_step, log_likelihood, log_likelihood_terms
from .regime import (
    ex_ante_step,
    filter_step,
    recombine,
    rs_log_likelihood,
    rs_log_likelihood_terms,
    smooth,
    stationary_dist,
)
from .estimation import (
    OptimizerConfig,
    fit,
    from_unconstrained,
    normalize_labels,
    robust_std_errors,
    to_unconstrained,
)
from .simulate import simulate_rs, simulate_single
from .dataio import (
    MonthlyTable,
    SummaryStats,
    bond_price,
    bond_total_return,
    excess_returns,
    ljung_box,
    load_csv,
    summary_stats,
)
from .premium import (
    PremiumPath,
    annualized_median_premium,
    dummy_premium,
    fit_dummy_model,
    high_vol_dummy,
    linear_premium,
    rs_premium,
)

__all__ = [
    "__version__",
    "BekkParams", "BekkPath", "Cov2", "DummyParams", "EstimationResult",
    "ExcessReturnSeries", "FilterOutput", "MeanParams", "MonthlyTable",
    "OptimizerConfig", "PremiumPath", "RsModelParams", "SummaryStats",
    "CovarianceError", "DataError", "DegenerateDummyError",
    "DegenerateLikelihoodError", "EstimationError", "NearSingularError",
    "RsbekkError", "SeriesError", "SingularInformationError",
    "annualized_median_premium", "bond_price", "bond_total_return",
    "conditional_mean", "cov_step", "dummy_premium", "ex_ante_step",
    "excess_returns", "filter_step", "fit", "fit_dummy_model",
    "from_unconstrained", "high_vol_dummy", "linear_premium", "ljung_box",
    "load_csv", "log_likelihood", "log_likelihood_terms", "normalize_labels",
    "recombine", "robust_std_errors", "rs_log_likelihood",
    "rs_log_likelihood_terms", "rs_premium", "simulate_rs", "simulate_single",
    "smooth", "stationary_dist", "summary_stats", "to_unconstrained",
    "validate_series",
]
