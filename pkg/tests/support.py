"""Shared builders and reference implementations for the test suite.

The oracles here are deliberately written against full 2x2 matrices and
brute-force enumeration, independent of the scalarized production code,
so agreement between the two is meaningful.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.stats import multivariate_normal

from rsbekk import BekkParams, MeanParams, RsModelParams
from rsbekk.types import ExcessReturnSeries, month_index, month_string


def months(start: str, n: int) -> list[str]:
    base = month_index(start)
    return [month_string(base + i) for i in range(n)]


def make_series(rm, rb, start: str = "1959-02") -> ExcessReturnSeries:
    rm = np.asarray(rm, dtype=np.float64)
    return ExcessReturnSeries(dates=months(start, rm.size), rm=rm, rb=np.asarray(rb, dtype=np.float64))


def mats(params: BekkParams):
    """Full-matrix view of the parameters: (C, A, B) with C lower triangular."""
    c = np.array([[params.c11, 0.0], [params.c12, params.c22]])
    a = np.diag([params.a11, params.a22])
    b = np.diag([params.b11, params.b22])
    return c, a, b


def naive_bekk_loglik(
    rm,
    rb,
    params: BekkParams,
    h0,
    eps0=None,
    dummy=None,
    dummy_coef=(0.0, 0.0, 0.0),
):
    """Reference Gaussian log likelihood via dense matrix algebra.

    h0 may be a Cov2 or a 2x2 array. Returns (loglik, per_obs_terms, h_list).
    """
    rm = np.asarray(rm, dtype=np.float64)
    rb = np.asarray(rb, dtype=np.float64)
    c, a, b = mats(params)
    m = params.mean
    if hasattr(h0, "as_matrix"):
        h = h0.as_matrix()
    else:
        h = np.asarray(h0, dtype=np.float64)
    eps = np.zeros(2) if eps0 is None else np.asarray(eps0, dtype=np.float64)
    d0, d1, d2 = dummy_coef
    terms = []
    h_list = []
    for t in range(rm.size):
        h = c @ c.T + a.T @ np.outer(eps, eps) @ a + b.T @ h @ b
        h_list.append(h.copy())
        dt = 0.0 if dummy is None else float(dummy[t])
        mu_m = m.l10 + m.l11 * h[0, 0] + m.l12 * h[0, 1] + dt * (d0 + d1 * h[0, 0] + d2 * h[0, 1])
        mu_b = m.l20 + m.l21 * h[0, 1] + m.l22 * h[1, 1]
        eps = np.array([rm[t] - mu_m, rb[t] - mu_b])
        sign, logdet = np.linalg.slogdet(h)
        assert sign > 0
        quad = eps @ np.linalg.inv(h) @ eps
        terms.append(-np.log(2.0 * np.pi) - 0.5 * logdet - 0.5 * quad)
    return float(np.sum(terms)), np.asarray(terms), h_list


def enum_rs_reference(rm, rb, params: RsModelParams, pi1=None):
    """Exact mixture likelihood and smoothed posterior by path enumeration.

    Only valid when both regimes have A = B = 0, so each regime's
    conditional covariance is its constant intercept matrix and the
    per-period state densities do not depend on the path taken.
    Returns (loglik, posterior) with posterior shaped (T, 2).
    """
    rm = np.asarray(rm, dtype=np.float64)
    rb = np.asarray(rb, dtype=np.float64)
    T = rm.size
    p, q = params.p, params.q
    if pi1 is None:
        pi1 = (1.0 - q) / (2.0 - p - q)
    dens = np.zeros((T, 2))
    for k, reg in enumerate((params.regime1, params.regime2)):
        assert reg.a11 == reg.a22 == reg.b11 == reg.b22 == 0.0
        h = reg.intercept_cov().as_matrix()
        mu = np.array(
            [
                reg.mean.l10 + reg.mean.l11 * h[0, 0] + reg.mean.l12 * h[0, 1],
                reg.mean.l20 + reg.mean.l21 * h[0, 1] + reg.mean.l22 * h[1, 1],
            ]
        )
        mvn = multivariate_normal(mean=mu, cov=h)
        dens[:, k] = mvn.pdf(np.column_stack([rm, rb]))
        if T == 1:
            dens[:, k] = np.atleast_1d(dens[:, k])
    trans = np.array([[p, 1.0 - p], [1.0 - q, q]])  # trans[i, j] = P(j+1 | i+1)
    init = np.array([pi1, 1.0 - pi1])
    total = 0.0
    mass = np.zeros((T, 2))
    for path in itertools.product((0, 1), repeat=T):
        w = init[path[0]] * dens[0, path[0]]
        for t in range(1, T):
            w *= trans[path[t - 1], path[t]] * dens[t, path[t]]
        total += w
        for t in range(T):
            mass[t, path[t]] += w
    return float(np.log(total)), mass / total


def stable_bekk_draw(rng: np.random.Generator, scale: float = 0.01) -> BekkParams:
    """Random parameter point with a strictly stationary covariance recursion."""
    while True:
        a = rng.uniform(0.05, 0.45, size=2)
        b = rng.uniform(0.3, 0.9, size=2)
        if np.all(a**2 + b**2 < 0.98):
            break
    c11 = rng.uniform(0.5, 1.5) * scale
    c22 = rng.uniform(0.5, 1.5) * scale
    c12 = rng.uniform(-0.4, 0.4) * scale
    mean = MeanParams(
        l10=rng.uniform(-0.002, 0.002),
        l11=rng.uniform(-3.0, 3.0),
        l12=rng.uniform(-3.0, 3.0),
        l20=rng.uniform(-0.002, 0.002),
        l21=rng.uniform(-3.0, 3.0),
        l22=rng.uniform(-3.0, 3.0),
    )
    return BekkParams(
        mean=mean,
        c11=c11,
        c12=c12,
        c22=c22,
        a11=float(a[0]),
        a22=float(a[1]),
        b11=float(b[0]),
        b22=float(b[1]),
    )


def static_regime_draw(rng: np.random.Generator, scale: float = 1.0) -> BekkParams:
    """Regime with A = B = 0: constant covariance, mean still in-variance."""
    c11 = rng.uniform(0.5, 1.5) * scale
    c22 = rng.uniform(0.5, 1.5) * scale
    c12 = rng.uniform(-0.5, 0.5) * scale
    mean = MeanParams(
        l10=rng.uniform(-0.5, 0.5),
        l11=rng.uniform(-0.5, 0.5),
        l12=rng.uniform(-0.5, 0.5),
        l20=rng.uniform(-0.5, 0.5),
        l21=rng.uniform(-0.5, 0.5),
        l22=rng.uniform(-0.5, 0.5),
    )
    return BekkParams(mean=mean, c11=c11, c12=c12, c22=c22, a11=0.0, a22=0.0, b11=0.0, b22=0.0)
