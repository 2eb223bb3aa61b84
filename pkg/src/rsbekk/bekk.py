"""Single-regime diagonal BEKK(1,1) in-mean model.

The covariance recursion is H_t = CC' + A'e_{t-1}e_{t-1}'A + B'H_{t-1}B
with C lower triangular and A, B diagonal, and the conditional means feed
off the current covariance (GARCH-in-mean).  The Gaussian log-likelihood
uses the closed-form 2x2 inverse and determinant.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import NearSingularError, SeriesError
from .types import BekkParams, Cov2, DummyParams, ExcessReturnSeries, MeanParams


class BekkPath(NamedTuple):
    """Log-likelihood with the conditional covariance and innovation paths.

    ``h_path`` rows are (smm, sbb, smb); ``eps_path`` rows are (em, eb).
    """

    loglik: float
    h_path: np.ndarray
    eps_path: np.ndarray


def as_return_arrays(series) -> tuple[np.ndarray, np.ndarray]:
    """Accept an ExcessReturnSeries, a (T, 2) array, or an (rm, rb) pair."""
    if isinstance(series, ExcessReturnSeries):
        return series.rm, series.rb
    if isinstance(series, tuple) and len(series) == 2:
        rm = np.ascontiguousarray(series[0], dtype=np.float64)
        rb = np.ascontiguousarray(series[1], dtype=np.float64)
    else:
        arr = np.asarray(series, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise SeriesError(f"expected a (T, 2) return array, got shape {arr.shape}")
        rm = np.ascontiguousarray(arr[:, 0])
        rb = np.ascontiguousarray(arr[:, 1])
    if rm.shape != rb.shape or rm.ndim != 1:
        raise SeriesError("return columns must be one-dimensional and aligned")
    if rm.size == 0:
        raise SeriesError("empty return series")
    if not (np.isfinite(rm).all() and np.isfinite(rb).all()):
        raise SeriesError("non-finite value in return series")
    return rm, rb


def default_h0(rm: np.ndarray, rb: np.ndarray) -> Cov2:
    """Seed covariance: the sample covariance of the observed returns."""
    if rm.size < 2:
        raise SeriesError("need at least 2 observations for the default seed covariance; pass h0")
    c = np.cov(rm, rb, ddof=1)
    return Cov2(smm=float(c[0, 0]), sbb=float(c[1, 1]), smb=float(c[0, 1]))


def resolve_seeds(rm, rb, h0: Cov2 | None, eps0) -> tuple[np.ndarray, np.ndarray]:
    """Materialize the (h0, eps0) pre-sample pair as kernel-ready arrays."""
    if h0 is None:
        h0 = default_h0(rm, rb)
    h0_arr = np.array([h0.smm, h0.sbb, h0.smb])
    if eps0 is None:
        eps0_arr = np.zeros(2)
    else:
        eps0_arr = np.asarray(eps0, dtype=np.float64).reshape(2)
    return h0_arr, eps0_arr


def cov_step(h_prev: Cov2, eps_prev: Sequence[float], params: BekkParams) -> Cov2:
    """Advance the covariance one period given last period's innovations."""
    e = np.asarray(eps_prev, dtype=np.float64).reshape(2)
    smm, sbb, smb = _kernels.cov_step_kernel(
        h_prev.smm, h_prev.sbb, h_prev.smb, e[0], e[1],
        params.c11, params.c12, params.c22,
        params.a11, params.a22, params.b11, params.b22,
    )
    return Cov2(smm=smm, sbb=sbb, smb=smb)


def conditional_mean(h: Cov2, mean: MeanParams) -> np.ndarray:
    """Expected (rm, rb) given the conditional covariance."""
    mm = mean.l10 + mean.l11 * h.smm + mean.l12 * h.smb
    mb = mean.l20 + mean.l21 * h.smb + mean.l22 * h.sbb
    return np.array([mm, mb])


def _dummy_inputs(params, dummy, T: int):
    if isinstance(params, DummyParams):
        base = params.base
        dcoef = np.array([params.l10d, params.l11d, params.l12d])
        if dummy is None:
            raise ValueError("a dummy path is required with DummyParams")
    else:
        base = params
        dcoef = np.zeros(3)
    if dummy is None:
        dpath = np.zeros(T)
    else:
        dpath = np.ascontiguousarray(dummy, dtype=np.float64)
        if dpath.shape != (T,):
            raise ValueError(f"dummy path has shape {dpath.shape}, expected ({T},)")
    return base, dcoef, dpath


def log_likelihood(
    series,
    params: BekkParams | DummyParams,
    h0: Cov2 | None = None,
    eps0: Sequence[float] | None = None,
    dummy: np.ndarray | None = None,
) -> BekkPath:
    """Gaussian log-likelihood of the series under the single-regime model.

    The recursion is seeded with ``h0`` (sample covariance when omitted)
    and pre-sample innovations ``eps0`` (zeros when omitted), so the first
    conditional covariance is one BEKK step from the seed pair.  Raises
    :class:`NearSingularError` if any |H_t| falls below 1e-18.
    """
    rm, rb = as_return_arrays(series)
    base, dcoef, dpath = _dummy_inputs(params, dummy, rm.size)
    h0_arr, eps0_arr = resolve_seeds(rm, rb, h0, eps0)
    theta = base.to_vector()
    total, _terms, h_path, eps_path, status, t_fail = _kernels.bekk_path_kernel(
        rm, rb, theta, dpath, dcoef, h0_arr, eps0_arr
    )
    if status == 1:
        raise NearSingularError(int(t_fail))
    return BekkPath(loglik=float(total), h_path=h_path, eps_path=eps_path)


def log_likelihood_terms(
    series,
    params: BekkParams | DummyParams,
    h0: Cov2 | None = None,
    eps0: Sequence[float] | None = None,
    dummy: np.ndarray | None = None,
) -> np.ndarray:
    """Per-observation log-likelihood contributions (for robust covariance)."""
    rm, rb = as_return_arrays(series)
    base, dcoef, dpath = _dummy_inputs(params, dummy, rm.size)
    h0_arr, eps0_arr = resolve_seeds(rm, rb, h0, eps0)
    _, terms, _, _, status, t_fail = _kernels.bekk_path_kernel(
        rm, rb, base.to_vector(), dpath, dcoef, h0_arr, eps0_arr
    )
    if status == 1:
        raise NearSingularError(int(t_fail))
    return terms
