"""Risk-premium decomposition implied by the fitted mean equations.

The expected market excess return splits into a variance-compensation
piece (the l11 coefficient times the conditional market variance) and a
hedging piece (l12 times the conditional covariance with bonds).  In the
switching model the pieces are probability-weighted across regimes; the
full-sample smoothed probabilities are the default weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import estimation
from .bekk import as_return_arrays
from .errors import DegenerateDummyError
from .types import (
    BekkParams,
    EstimationResult,
    FilterOutput,
    MeanParams,
    RsModelParams,
)


@dataclass(frozen=True)
class PremiumPath:
    """Monthly market premium decomposition, in decimal units."""

    market: np.ndarray
    hedge: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.market + self.hedge

    def __len__(self) -> int:
        return self.market.size


def linear_premium(mean: MeanParams, h_path: np.ndarray) -> PremiumPath:
    """Premium path under the single-regime model.

    ``h_path`` is the (T, 3) conditional covariance path with columns
    (smm, sbb, smb), as produced by the likelihood evaluation.
    """
    h = np.asarray(h_path, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] != 3:
        raise ValueError(f"h_path must be (T, 3), got {h.shape}")
    return PremiumPath(market=mean.l11 * h[:, 0], hedge=mean.l12 * h[:, 2])


def rs_premium(
    params: RsModelParams,
    filt: FilterOutput,
    weights: str = "smoothed",
) -> PremiumPath:
    """Premium path under the switching model.

    Per period the state pieces are weighted by the chosen probabilities:

        market_t = sum_k w_{t,k} * l11^{(k)} * smm_{t,k}
        hedge_t  = sum_k w_{t,k} * l12^{(k)} * smb_{t,k}

    ``weights`` is "smoothed" (default; requires the smoother to have
    run), "filtered", or "ex_ante".
    """
    if weights == "smoothed":
        w = filt.smoothed
        if w is None:
            raise ValueError("smoothed probabilities are not available; run the smoother first")
    elif weights == "filtered":
        w = filt.filtered
    elif weights == "ex_ante":
        w = filt.ex_ante
    else:
        raise ValueError(f"unknown weights {weights!r}")
    l11 = np.array([params.regime1.mean.l11, params.regime2.mean.l11])
    l12 = np.array([params.regime1.mean.l12, params.regime2.mean.l12])
    market = (w * filt.state_cov[:, :, 0]) @ l11
    hedge = (w * filt.state_cov[:, :, 2]) @ l12
    return PremiumPath(market=market, hedge=hedge)


def annualized_median_premium(total: np.ndarray) -> float:
    """Twelve times the median monthly premium."""
    total = np.asarray(total, dtype=np.float64)
    if total.size == 0:
        raise ValueError("empty premium path")
    return 12.0 * float(np.median(total))


def high_vol_dummy(high_prob: np.ndarray, threshold: float = 0.75) -> np.ndarray:
    """Indicator path: 1.0 when the high-volatility probability exceeds
    the threshold.  Errors if the indicator is constant, since its
    coefficients would be unidentified."""
    p = np.asarray(high_prob, dtype=np.float64)
    if not (0.0 < threshold < 1.0):
        raise ValueError(f"threshold must lie in (0, 1), got {threshold!r}")
    d = (p > threshold).astype(np.float64)
    ones = int(d.sum())
    if ones == 0:
        raise DegenerateDummyError(
            f"no period has high-volatility probability above {threshold}; "
            "the dummy coefficients are unidentified"
        )
    if ones == d.size:
        raise DegenerateDummyError(
            f"every period has high-volatility probability above {threshold}; "
            "the dummy coefficients are unidentified"
        )
    return d


def fit_dummy_model(
    series,
    high_prob: np.ndarray,
    threshold: float = 0.75,
    restricted: bool = False,
    include_level: bool = False,
    config: estimation.OptimizerConfig | None = None,
    **fit_kwargs,
) -> tuple[EstimationResult, np.ndarray]:
    """Single-regime model with a high-volatility dummy in the market mean.

    ``high_prob`` is the per-period probability of the high-volatility
    state from a switching fit (filtered by convention).  The dummy marks
    periods where it exceeds ``threshold`` and interacts with the
    conditional variance and covariance terms, so the risk-return slope is
    allowed to differ inside high-volatility episodes.  Returns the fitted
    result together with the dummy path used.
    """
    rm, _ = as_return_arrays(series)
    if np.asarray(high_prob).shape != rm.shape:
        raise ValueError("high_prob must align with the return series")
    d = high_vol_dummy(high_prob, threshold)
    result = estimation.fit(
        series,
        n_regimes=1,
        restricted=restricted,
        config=config,
        dummy=d,
        dummy_level=include_level,
        **fit_kwargs,
    )
    return result, d


def dummy_premium(params, dummy: np.ndarray, h_path: np.ndarray) -> PremiumPath:
    """Premium path for the dummy-augmented model: the slopes shift by
    (l11d, l12d) inside high-volatility periods."""
    h = np.asarray(h_path, dtype=np.float64)
    d = np.asarray(dummy, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] != 3 or d.shape != (h.shape[0],):
        raise ValueError("misaligned dummy/covariance paths")
    mean = params.base.mean
    market = (mean.l11 + params.l11d * d) * h[:, 0]
    hedge = (mean.l12 + params.l12d * d) * h[:, 2]
    return PremiumPath(market=market, hedge=hedge)
