"""Two-state Markov-switching layer: filter, smoother, recombination.

State 1 occupies column 0 throughout.  The transition matrix is

    P(s_t=1 | s_{t-1}=1) = p        P(s_t=1 | s_{t-1}=2) = 1 - q
    P(s_t=2 | s_{t-1}=1) = 1 - p    P(s_t=2 | s_{t-1}=2) = q

Each period the filter advances both regimes' covariances from a single
recombined (H, e) pair, scores the observation under each regime, updates
the state probabilities by Bayes' rule, and recombines by the law of total
variance so the recursion stays a single path (Gray-style recombination).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import _kernels
from .bekk import as_return_arrays, resolve_seeds
from .errors import DegenerateLikelihoodError, NearSingularError
from .types import Cov2, FilterOutput, RsModelParams


def stationary_dist(p: float, q: float) -> np.ndarray:
    """Stationary distribution of the two-state chain.

    Defined whenever the chain moves at all; two absorbing states (p = q
    = 1) have no unique stationary distribution.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError(f"transition probabilities must lie in [0, 1], got p={p!r}, q={q!r}")
    if p == 1.0 and q == 1.0:
        raise ValueError("no unique stationary distribution: both states are absorbing")
    pi1 = (1.0 - q) / (2.0 - p - q)
    return np.array([pi1, 1.0 - pi1])


def ex_ante_step(filtered: Sequence[float], p: float, q: float) -> np.ndarray:
    """One transition step: P(s_{t+1} | Omega_t) from P(s_t | Omega_t)."""
    f1 = float(filtered[0])
    f2 = float(filtered[1])
    e1 = p * f1 + (1.0 - q) * f2
    if e1 < 0.0:
        e1 = 0.0
    elif e1 > 1.0:
        e1 = 1.0
    return np.array([e1, 1.0 - e1])


def filter_step(ex_ante: Sequence[float], density1: float, density2: float) -> np.ndarray:
    """Bayes update of the state probabilities given the period's densities."""
    if density1 < 0.0 or density2 < 0.0:
        raise ValueError("state densities must be nonnegative")
    w1 = float(ex_ante[0]) * density1
    w2 = float(ex_ante[1]) * density2
    s = w1 + w2
    if s <= 0.0:
        raise DegenerateLikelihoodError(
            "degenerate likelihood: both state densities are zero under the ex-ante weights"
        )
    f1 = w1 / s
    if f1 < 0.0:
        f1 = 0.0
    elif f1 > 1.0:
        f1 = 1.0
    return np.array([f1, 1.0 - f1])


def recombine(
    ex_ante: Sequence[float],
    mean1: Sequence[float],
    mean2: Sequence[float],
    h1: Cov2,
    h2: Cov2,
    obs: Sequence[float],
) -> tuple[np.ndarray, Cov2]:
    """Collapse the two-state mixture into one (innovation, covariance) pair.

    The aggregated innovation is the observation minus the mixture mean;
    the aggregated covariance is the mixture covariance by the law of
    total variance (per-state covariances plus the dispersion of the
    per-state means), which is PSD whenever the inputs are.
    """
    g1 = float(ex_ante[0])
    g2 = float(ex_ante[1])
    mm1, mb1 = float(mean1[0]), float(mean1[1])
    mm2, mb2 = float(mean2[0]), float(mean2[1])
    mbar_m = g1 * mm1 + g2 * mm2
    mbar_b = g1 * mb1 + g2 * mb2
    # Mean-dispersion terms are grouped separately from the covariance
    # mixture so a degenerate weight (1, 0) returns h1 bit-for-bit.
    smm = (g1 * h1.smm + g2 * h2.smm) + (
        g1 * mm1 * mm1 + g2 * mm2 * mm2 - mbar_m * mbar_m
    )
    sbb = (g1 * h1.sbb + g2 * h2.sbb) + (
        g1 * mb1 * mb1 + g2 * mb2 * mb2 - mbar_b * mbar_b
    )
    smb = (g1 * h1.smb + g2 * h2.smb) + (
        g1 * mm1 * mb1 + g2 * mm2 * mb2 - mbar_m * mbar_b
    )
    agg_innov = np.array([float(obs[0]) - mbar_m, float(obs[1]) - mbar_b])
    return agg_innov, Cov2(smm=smm, sbb=sbb, smb=smb)


def smooth(filtered: np.ndarray, ex_ante: np.ndarray, p: float, q: float) -> np.ndarray:
    """Full-sample smoothed state probabilities (backward recursion).

    Each step reweights tomorrow's smoothed mass by the transition
    probabilities relative to tomorrow's ex-ante mass:

        P(s_t=1|O_T) = f_t1 * [ p     * sm_{t+1,1}/pi_{t+1,1}
                              + (1-p) * sm_{t+1,2}/pi_{t+1,2} ]

    and symmetrically for state 2 with (1-q, q).
    """
    filtered = np.asarray(filtered, dtype=np.float64)
    ex_ante = np.asarray(ex_ante, dtype=np.float64)
    if filtered.shape != ex_ante.shape or filtered.ndim != 2 or filtered.shape[1] != 2:
        raise ValueError("filtered and ex_ante must both have shape (T, 2)")
    T = filtered.shape[0]
    sm = np.empty_like(filtered)
    sm[T - 1] = filtered[T - 1]
    for t in range(T - 2, -1, -1):
        r = np.empty(2)
        for k in range(2):
            pi_next = ex_ante[t + 1, k]
            if pi_next > 0.0:
                r[k] = sm[t + 1, k] / pi_next
            elif sm[t + 1, k] == 0.0:
                r[k] = 0.0
            else:
                raise DegenerateLikelihoodError(
                    f"degenerate smoother: zero ex-ante probability with nonzero "
                    f"smoothed mass for state {k + 1} at t={t + 1}"
                )
        sm[t, 0] = filtered[t, 0] * (p * r[0] + (1.0 - p) * r[1])
        sm[t, 1] = filtered[t, 1] * ((1.0 - q) * r[0] + q * r[1])
    return sm


def _initial_pi1(initial_prob) -> float:
    """Validate an initial state distribution; -1 selects the stationary one."""
    if initial_prob is None:
        return -1.0
    pi = np.asarray(initial_prob, dtype=np.float64).reshape(2)
    if not (0.0 <= pi[0] <= 1.0) or abs(pi.sum() - 1.0) > 1e-12:
        raise ValueError(f"initial_prob must be a probability pair, got {pi}")
    return float(pi[0])


def rs_log_likelihood(
    series,
    params: RsModelParams,
    h0: Cov2 | None = None,
    eps0: Sequence[float] | None = None,
    recombine_weights: str = "ex_ante",
    with_smoothed: bool = True,
    initial_prob: Sequence[float] | None = None,
) -> tuple[float, FilterOutput]:
    """Mixture log-likelihood of the switching model with the filter paths.

    Seeding matches the single-regime model: both regimes step from the
    shared (h0, eps0) pair, with h0 defaulting to the sample covariance.
    ``recombine_weights`` selects the probabilities used to collapse the
    per-state covariances: ``"ex_ante"`` (default) or ``"filtered"``.
    ``initial_prob`` overrides the stationary initial state distribution.
    """
    if recombine_weights not in ("ex_ante", "filtered"):
        raise ValueError(f"unknown recombination weights {recombine_weights!r}")
    rm, rb = as_return_arrays(series)
    h0_arr, eps0_arr = resolve_seeds(rm, rb, h0, eps0)
    (total, _terms, ex_ante, filtered, state_cov, agg_cov, agg_innov,
     status, t_fail, s_fail, n_floored) = _kernels.rs_path_kernel(
        rm, rb,
        params.regime1.to_vector(), params.regime2.to_vector(),
        params.p, params.q,
        h0_arr, eps0_arr,
        recombine_weights == "filtered",
        _initial_pi1(initial_prob),
    )
    if status == 1:
        raise NearSingularError(int(t_fail), state=int(s_fail))
    if status == 2:
        raise DegenerateLikelihoodError(
            f"degenerate likelihood: both state densities are zero at t={int(t_fail)}"
        )
    out = FilterOutput(
        ex_ante=ex_ante,
        filtered=filtered,
        state_cov=state_cov,
        agg_cov=agg_cov,
        agg_innov=agg_innov,
        n_floored=int(n_floored),
    )
    if with_smoothed:
        out.smoothed = smooth(filtered, ex_ante, params.p, params.q)
    return float(total), out


def rs_log_likelihood_terms(
    series,
    params: RsModelParams,
    h0: Cov2 | None = None,
    eps0: Sequence[float] | None = None,
    recombine_weights: str = "ex_ante",
    initial_prob: Sequence[float] | None = None,
) -> np.ndarray:
    """Per-observation mixture log-likelihood contributions."""
    rm, rb = as_return_arrays(series)
    h0_arr, eps0_arr = resolve_seeds(rm, rb, h0, eps0)
    (_total, terms, _ea, _f, _sc, _ac, _ai, status, t_fail, s_fail,
     _nf) = _kernels.rs_path_kernel(
        rm, rb,
        params.regime1.to_vector(), params.regime2.to_vector(),
        params.p, params.q,
        h0_arr, eps0_arr,
        recombine_weights == "filtered",
        _initial_pi1(initial_prob),
    )
    if status == 1:
        raise NearSingularError(int(t_fail), state=int(s_fail))
    if status == 2:
        raise DegenerateLikelihoodError(
            f"degenerate likelihood: both state densities are zero at t={int(t_fail)}"
        )
    return terms
