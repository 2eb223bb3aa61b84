"""Quasi-maximum-likelihood estimation with robust standard errors.

Optimization runs in an unconstrained coordinate system (transition
probabilities pass through a logit; everything else is unchanged),
Nelder-Mead first and a BFGS polish with numerical gradients after, over
``n_restarts`` jittered starting points.  Standard errors come from the
Bollerslev-Wooldridge sandwich: H^{-1} (S'S) H^{-1} with H the numerical
Hessian of the log-likelihood and S the per-observation score matrix, both
by central differences, mapped back to natural coordinates by the delta
method.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from . import _kernels
from .bekk import as_return_arrays, resolve_seeds
from .errors import EstimationError, SingularInformationError
from .regime import rs_log_likelihood
from .types import (
    BekkParams,
    Cov2,
    DummyParams,
    EstimationResult,
    FilterOutput,
    MeanParams,
    RsModelParams,
)

_BIG = 1e12

_PARAM_NAMES = ("l10", "l11", "l12", "l20", "l21", "l22",
                "c11", "c12", "c22", "a11", "a22", "b11", "b22")
_FULL_IDX = np.arange(13)
# The restricted model pins l21 = l22 = 0 (bond premium only through the
# covariance with the market).
_RESTR_IDX = np.array([0, 1, 2, 3, 6, 7, 8, 9, 10, 11, 12])

# Clamp for the logit coordinates: expit(30) is still strictly below 1 in
# float64, so transition probabilities stay inside (0, 1).
_LOGIT_CLIP = 30.0


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the QML optimizer.

    ``max_iterations`` caps the Nelder-Mead iteration count per start;
    convergence requires the simplex to satisfy both ``loglik_tol`` (value
    spread) and ``param_tol`` (coordinate spread).  Restarts beyond the
    first jitter the starting point with N(0, 0.5^2) noise in the
    unconstrained coordinates, drawn from ``seed``.
    """

    n_restarts: int = 3
    max_iterations: int = 5000
    loglik_tol: float = 1e-8
    param_tol: float = 1e-6
    seed: int = 0
    polish: bool = True

    def __post_init__(self):
        if self.n_restarts < 1:
            raise ValueError(f"n_restarts must be >= 1, got {self.n_restarts}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (self.loglik_tol > 0 and self.param_tol > 0):
            raise ValueError("tolerances must be positive")


def to_unconstrained(params: BekkParams | RsModelParams | DummyParams) -> np.ndarray:
    """Map parameters to the optimizer's coordinate system.

    BEKK coefficients are untouched; p and q go through a logit.  Layouts:
    13 for a single regime, 16 for the dummy-augmented model (base then
    l11d, l12d, l10d), 28 for the switching model (regime 1 block, regime
    2 block, logit p, logit q).
    """
    if isinstance(params, RsModelParams):
        return np.concatenate([
            params.regime1.to_vector(),
            params.regime2.to_vector(),
            [logit(params.p), logit(params.q)],
        ])
    if isinstance(params, DummyParams):
        return np.concatenate([
            params.base.to_vector(),
            [params.l11d, params.l12d, params.l10d],
        ])
    return params.to_vector()


def from_unconstrained(x: np.ndarray, model: str = "bekk"):
    """Inverse of :func:`to_unconstrained` for the given model tag."""
    x = np.asarray(x, dtype=np.float64)
    if model == "bekk":
        return BekkParams.from_vector(x)
    if model == "bekk_dummy":
        if x.shape != (16,):
            raise ValueError(f"expected 16 parameters, got shape {x.shape}")
        return DummyParams(
            base=BekkParams.from_vector(x[:13]),
            l11d=float(x[13]), l12d=float(x[14]), l10d=float(x[15]),
        )
    if model == "rs_bekk":
        if x.shape != (28,):
            raise ValueError(f"expected 28 parameters, got shape {x.shape}")
        return RsModelParams(
            regime1=BekkParams.from_vector(x[:13]),
            regime2=BekkParams.from_vector(x[13:26]),
            p=float(expit(x[26])),
            q=float(expit(x[27])),
        )
    raise ValueError(f"unknown model tag {model!r}")


def canonical_signs(params: BekkParams) -> BekkParams:
    """Resolve the sign indeterminacies of the BEKK coefficients.

    The likelihood only sees c11^2, c12^2+c22^2, c11*c12, a11*a22, squares
    of a and b, and b11*b22, so (c11, c12), c22, (a11, a22), and
    (b11, b22) can each be flipped jointly without changing anything.
    Canonical form: c11 >= 0, c22 >= 0, a11 >= 0, b11 >= 0 (the partner
    coefficient carries the sign flip).
    """
    c11, c12, c22 = params.c11, params.c12, params.c22
    a11, a22 = params.a11, params.a22
    b11, b22 = params.b11, params.b22
    if c11 < 0.0:
        c11, c12 = -c11, -c12
    if c22 < 0.0:
        c22 = -c22
    if a11 < 0.0 or (a11 == 0.0 and a22 < 0.0):
        a11, a22 = -a11, -a22
    if b11 < 0.0 or (b11 == 0.0 and b22 < 0.0):
        b11, b22 = -b11, -b22
    return BekkParams(params.mean, c11, c12, c22, a11, a22, b11, b22)


def starting_values(series, n_regimes: int = 1) -> BekkParams | RsModelParams:
    """Data-driven starting point.

    C is the Cholesky factor of the sample covariance scaled by
    sqrt(1 - 0.2^2 - 0.9^2), so that with a = 0.2 and b = 0.9 the implied
    long-run covariance matches the sample covariance; mean coefficients
    start at zero.  For two regimes the C blocks are scaled down/up by
    sqrt(0.5) and sqrt(2) to break the label symmetry, with (p, q) =
    (0.85, 0.75).
    """
    rm, rb = as_return_arrays(series)
    c = np.cov(rm, rb, ddof=1)
    l11 = np.sqrt(max(c[0, 0], 1e-12))
    l21 = c[0, 1] / l11
    l22 = np.sqrt(max(c[1, 1] - l21 * l21, 1e-12))
    k = np.sqrt(1.0 - 0.2**2 - 0.9**2)

    def block(scale: float) -> BekkParams:
        return BekkParams(
            MeanParams(),
            c11=float(k * l11 * scale), c12=float(k * l21 * scale),
            c22=float(k * l22 * scale),
            a11=0.2, a22=0.2, b11=0.9, b22=0.9,
        )

    if n_regimes == 1:
        return block(1.0)
    if n_regimes == 2:
        return RsModelParams(
            regime1=block(np.sqrt(0.5)),
            regime2=block(np.sqrt(2.0)),
            p=0.85, q=0.75,
        )
    raise ValueError(f"n_regimes must be 1 or 2, got {n_regimes}")


def _coordinate_scale(name: str, std_m: float, std_b: float) -> float:
    base = name.rsplit(".", 1)[-1]
    if base in ("l10", "l20", "l10d"):
        return max(std_m, std_b)
    if base in ("l11", "l12", "l21", "l22", "l11d", "l12d"):
        return 5.0
    if base == "c11":
        return std_m
    if base in ("c12", "c22"):
        return std_b
    if base in ("a11", "a22", "b11", "b22"):
        return 0.5
    if base in ("p", "q"):
        return 2.0
    raise AssertionError(f"no scale rule for parameter {name!r}")


class _Problem:
    """Reduced-coordinate likelihood problem (restrictions applied).

    Optimizer coordinates are scaled: natural = y * scale, with per-name
    scales keyed to the data's return magnitude.  Intercept coefficients of
    the covariance recursion live near 0.01 while in-mean slopes live near
    1, and a simplex (or line search) built on raw coordinates crawls along
    that anisotropy.
    """

    def __init__(self, rm, rb, n_regimes, restricted, h0_arr, eps0_arr,
                 dummy=None, dummy_level=False, filtered_weights=False):
        self.rm = rm
        self.rb = rb
        self.n_regimes = n_regimes
        self.restricted = restricted
        self.h0 = h0_arr
        self.eps0 = eps0_arr
        self.mask = _RESTR_IDX if restricted else _FULL_IDX
        self.filtered_weights = filtered_weights
        self.has_dummy = dummy is not None
        self.dummy_level = dummy_level
        if dummy is not None:
            if n_regimes != 1:
                raise ValueError("the dummy-augmented model is single-regime")
            self.dummy = np.ascontiguousarray(dummy, dtype=np.float64)
            if self.dummy.shape != rm.shape:
                raise ValueError("dummy path must align with the return series")
        else:
            self.dummy = np.zeros_like(rm)
        m = self.mask.size
        if n_regimes == 1:
            self.n_params = m + (0 if not self.has_dummy else (3 if dummy_level else 2))
        else:
            self.n_params = 2 * m + 2
        std_m = max(float(np.std(rm)), 1e-8)
        std_b = max(float(np.std(rb)), 1e-8)
        self.scale = np.array(
            [_coordinate_scale(nm, std_m, std_b) for nm in self.names]
        )

    @property
    def names(self) -> list[str]:
        base = [_PARAM_NAMES[i] for i in self.mask]
        if self.n_regimes == 1:
            names = list(base)
            if self.has_dummy:
                names += ["l11d", "l12d"] + (["l10d"] if self.dummy_level else [])
            return names
        return ([f"regime1.{n}" for n in base]
                + [f"regime2.{n}" for n in base] + ["p", "q"])

    def reduce(self, params) -> np.ndarray:
        """Full parameters -> reduced, scaled optimizer vector."""
        if self.n_regimes == 1:
            if self.has_dummy:
                if not isinstance(params, DummyParams):
                    params = DummyParams(base=params, l11d=0.0, l12d=0.0)
                x = list(params.base.to_vector()[self.mask])
                x += [params.l11d, params.l12d]
                if self.dummy_level:
                    x += [params.l10d]
                nat = np.array(x)
            else:
                nat = params.to_vector()[self.mask]
        else:
            nat = np.concatenate([
                params.regime1.to_vector()[self.mask],
                params.regime2.to_vector()[self.mask],
                [logit(params.p), logit(params.q)],
            ])
        return nat / self.scale

    def _theta(self, xr_part) -> np.ndarray:
        th = np.zeros(13)
        th[self.mask] = xr_part
        return th

    def expand(self, xr: np.ndarray):
        """Scaled reduced vector -> (kernel inputs) without dataclass overhead."""
        xr = np.asarray(xr, dtype=np.float64) * self.scale
        m = self.mask.size
        if self.n_regimes == 1:
            th = self._theta(xr[:m])
            dcoef = np.zeros(3)
            if self.has_dummy:
                dcoef[1] = xr[m]
                dcoef[2] = xr[m + 1]
                if self.dummy_level:
                    dcoef[0] = xr[m + 2]
            return th, dcoef
        th1 = self._theta(xr[:m])
        th2 = self._theta(xr[m:2 * m])
        xp = float(np.clip(xr[2 * m], -_LOGIT_CLIP, _LOGIT_CLIP))
        xq = float(np.clip(xr[2 * m + 1], -_LOGIT_CLIP, _LOGIT_CLIP))
        return th1, th2, float(expit(xp)), float(expit(xq))

    def to_params(self, xr: np.ndarray):
        if self.n_regimes == 1:
            th, dcoef = self.expand(xr)
            base = canonical_signs(BekkParams.from_vector(th))
            if self.has_dummy:
                return DummyParams(base=base, l11d=float(dcoef[1]),
                                   l12d=float(dcoef[2]), l10d=float(dcoef[0]))
            return base
        th1, th2, p, q = self.expand(xr)
        return RsModelParams(
            regime1=canonical_signs(BekkParams.from_vector(th1)),
            regime2=canonical_signs(BekkParams.from_vector(th2)),
            p=p, q=q,
        )

    def loglik_terms(self, xr: np.ndarray) -> np.ndarray:
        """Per-observation log-likelihood; raises EstimationError off-path."""
        if self.n_regimes == 1:
            th, dcoef = self.expand(xr)
            _, terms, _, _, status, t = _kernels.bekk_path_kernel(
                self.rm, self.rb, th, self.dummy, dcoef, self.h0, self.eps0)
        else:
            th1, th2, p, q = self.expand(xr)
            out = _kernels.rs_path_kernel(
                self.rm, self.rb, th1, th2, p, q, self.h0, self.eps0,
                self.filtered_weights, -1.0)
            terms, status, t = out[1], out[7], out[8]
        if status != 0:
            raise EstimationError(
                f"likelihood undefined at the requested parameters (t={int(t)})")
        return terms

    def neg_loglik(self, xr: np.ndarray) -> float:
        if self.n_regimes == 1:
            th, dcoef = self.expand(xr)
            total, _, _, _, status, _ = _kernels.bekk_path_kernel(
                self.rm, self.rb, th, self.dummy, dcoef, self.h0, self.eps0)
        else:
            th1, th2, p, q = self.expand(xr)
            out = _kernels.rs_path_kernel(
                self.rm, self.rb, th1, th2, p, q, self.h0, self.eps0,
                self.filtered_weights, -1.0)
            total, status = out[0], out[7]
        if status != 0 or not np.isfinite(total):
            return _BIG
        return -total


def _diff_step(xi: float) -> float:
    return max(1e-5, 1e-5 * abs(xi))


def gradient(f: Callable[[np.ndarray], float], x: np.ndarray) -> np.ndarray:
    """Central-difference gradient with the per-coordinate step rule."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros(x.size)
    for i in range(x.size):
        h = _diff_step(x[i])
        xp = x.copy(); xp[i] += h
        xm = x.copy(); xm[i] -= h
        g[i] = (f(xp) - f(xm)) / (2.0 * h)
    return g


def numerical_hessian(f: Callable[[np.ndarray], float], x: np.ndarray) -> np.ndarray:
    """Symmetric central-difference Hessian of a scalar function.

    Second differences amplify roundoff by 1/h^2, and the curvature of the
    likelihood spans many orders of magnitude across coordinates, so the
    probe step is much wider than the gradient step: small true curvatures
    (weakly identified in-mean slopes) would otherwise drown in noise and
    can even come out with the wrong sign.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    H = np.zeros((n, n))
    f0 = f(x)
    steps = np.array([1e-3 * max(abs(xi), 0.1) for xi in x])
    for i in range(n):
        hi = steps[i]
        xp = x.copy(); xp[i] += hi
        xm = x.copy(); xm[i] -= hi
        H[i, i] = (f(xp) - 2.0 * f0 + f(xm)) / (hi * hi)
        for j in range(i + 1, n):
            hj = steps[j]
            xpp = x.copy(); xpp[i] += hi; xpp[j] += hj
            xpm = x.copy(); xpm[i] += hi; xpm[j] -= hj
            xmp = x.copy(); xmp[i] -= hi; xmp[j] += hj
            xmm = x.copy(); xmm[i] -= hi; xmm[j] -= hj
            H[i, j] = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * hi * hj)
            H[j, i] = H[i, j]
    return H


def score_matrix(terms_fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """Per-observation scores (T, n) by central differences."""
    x = np.asarray(x, dtype=np.float64)
    cols = []
    for i in range(x.size):
        h = _diff_step(x[i])
        xp = x.copy(); xp[i] += h
        xm = x.copy(); xm[i] -= h
        cols.append((terms_fn(xp) - terms_fn(xm)) / (2.0 * h))
    return np.column_stack(cols)


def _checked_inverse(M: np.ndarray, what: str) -> np.ndarray:
    # The raw spectrum legitimately spans ~13 orders of magnitude (in-mean
    # slopes have naturally tiny curvature next to the covariance intercepts),
    # so conditioning is judged on the diagonally equilibrated matrix, where
    # only genuine collinearity shows up.
    d = np.sqrt(np.abs(np.diag(M)))
    if not np.all(np.isfinite(d)) or np.any(d == 0.0):
        raise SingularInformationError(
            f"{what} has a zero or non-finite diagonal entry: some parameter "
            "carries no information", eigenvalues=np.diag(M))
    scale = np.outer(d, d)
    eig = np.linalg.eigvalsh(M / scale)
    top = np.max(np.abs(eig))
    if top <= 0.0 or np.min(np.abs(eig)) < 1e-10 * top:
        raise SingularInformationError(
            f"{what} is numerically singular after diagonal scaling "
            f"(scaled eigenvalues {eig})", eigenvalues=eig)
    return np.linalg.inv(M / scale) / scale


def sandwich_covariance(hessian: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """H^{-1} (S'S) H^{-1} for a log-likelihood Hessian and score matrix."""
    Hinv = _checked_inverse(hessian, "Hessian")
    B = scores.T @ scores
    return Hinv @ B @ Hinv


def _problem_for(series, result: EstimationResult, h0, eps0, dummy,
                 dummy_level: bool, recombine_weights: str = "ex_ante") -> _Problem:
    rm, rb = as_return_arrays(series)
    h0_arr, eps0_arr = resolve_seeds(rm, rb, h0, eps0)
    n_regimes = 2 if isinstance(result.params, RsModelParams) else 1
    if isinstance(result.params, DummyParams):
        if dummy is None:
            raise ValueError("the dummy path is required for dummy-model standard errors")
        dummy_level = dummy_level or result.params.l10d != 0.0
    else:
        dummy = None
    return _Problem(rm, rb, n_regimes, result.restricted, h0_arr, eps0_arr,
                    dummy=dummy, dummy_level=dummy_level,
                    filtered_weights=recombine_weights == "filtered")


def robust_std_errors(
    series,
    result: EstimationResult,
    kind: str = "sandwich",
    h0: Cov2 | None = None,
    eps0: Sequence[float] | None = None,
    dummy: np.ndarray | None = None,
    dummy_level: bool = False,
    recombine_weights: str = "ex_ante",
) -> dict[str, float]:
    """Standard errors at the fitted parameters.

    ``kind`` is one of "sandwich" (quasi-ML, the default), "hessian"
    (inverse negative Hessian), or "opg" (inverse outer product of
    scores).  Transition probabilities are differentiated in logit space
    and mapped back with dp/dx = p(1-p).  Raises
    :class:`SingularInformationError` when the information matrix is not
    invertible.
    """
    if kind not in ("sandwich", "hessian", "opg"):
        raise ValueError(f"unknown standard error kind {kind!r}")
    prob = _problem_for(series, result, h0, eps0, dummy, dummy_level,
                        recombine_weights=recombine_weights)
    x = prob.reduce(result.params)
    names = prob.names

    terms_fn = prob.loglik_terms
    S = score_matrix(terms_fn, x)
    if kind == "opg":
        V = _checked_inverse(S.T @ S, "outer product of scores")
    else:
        H = numerical_hessian(lambda xr: float(np.sum(terms_fn(xr))), x)
        if kind == "hessian":
            V = _checked_inverse(-H, "negative Hessian")
        else:
            V = sandwich_covariance(H, S)

    var = np.diag(V).copy()
    if np.any(var < -1e-12 * np.max(np.abs(var))):
        raise SingularInformationError(
            f"{kind} covariance has a negative variance: the fitted point is "
            "not a local maximum in every direction", eigenvalues=var)
    se = np.sqrt(np.clip(var, 0.0, None))
    out: dict[str, float] = {}
    for i, nm in enumerate(names):
        # chain rule out of the scaled optimizer coordinates, plus the
        # logit -> probability map for p and q
        scale = prob.scale[i]
        if nm == "p":
            scale *= result.params.p * (1.0 - result.params.p)
        elif nm == "q":
            scale *= result.params.q * (1.0 - result.params.q)
        out[nm] = float(se[i] * scale)
    return out


def _swap_se_keys(se: dict[str, float] | None) -> dict[str, float] | None:
    if se is None:
        return None
    out = {}
    for k, v in se.items():
        if k.startswith("regime1."):
            out["regime2." + k[8:]] = v
        elif k.startswith("regime2."):
            out["regime1." + k[8:]] = v
        elif k == "p":
            out["q"] = v
        elif k == "q":
            out["p"] = v
        else:
            out[k] = v
    return out


def normalize_labels(
    result: EstimationResult, filt: FilterOutput
) -> tuple[EstimationResult, FilterOutput]:
    """Order the regimes so state 1 is the low-volatility state.

    Compares the median conditional market variances of the two states;
    if state 1's is larger, every state-indexed piece is swapped: regime
    parameter blocks, p and q, probability columns, per-state covariance
    paths, and standard error keys.  The likelihood is untouched (the
    mixture is symmetric in the labels).  Applying it twice is a no-op.
    """
    if not isinstance(result.params, RsModelParams):
        return result, filt
    med1 = float(np.median(filt.state_cov[:, 0, 0]))
    med2 = float(np.median(filt.state_cov[:, 1, 0]))
    if med1 <= med2:
        return result, filt
    swapped = result.with_params(
        result.params.swapped(), std_errors=_swap_se_keys(result.std_errors)
    )
    return swapped, filt.swapped()


def _optimize_one(prob: _Problem, x0: np.ndarray, cfg: OptimizerConfig):
    """One starting point: rounds of Nelder-Mead with a BFGS polish.

    A fresh simplex after the polish lets Nelder-Mead verify its own
    tolerances at the polished point instead of stagnating on a collapsed
    simplex.  ``converged`` is declared either when Nelder-Mead meets both
    its value and coordinate tolerances, or when a full fresh-simplex round
    plus the polish improve the objective by no more than
    max(loglik_tol, 1e-6 * (1 + |loglik|)): on ridge-shaped surfaces
    (weakly identified in-mean slopes) the coordinate tolerance is
    unreachable even though the value has long stabilized, so relative
    value stationarity across a restart is the meaningful test.  The
    polish only ever improves the point and has no vote via its own
    gradient test (not meaningful under the likelihood's scaling).
    """
    x = np.asarray(x0, dtype=np.float64)
    f = prob.neg_loglik(x)
    iters = 0
    converged = False
    for round_no in range(3):
        f_round_start = f
        nm = minimize(
            prob.neg_loglik, x, method="Nelder-Mead",
            options={
                "maxiter": cfg.max_iterations,
                "maxfev": 4 * cfg.max_iterations,
                "xatol": cfg.param_tol,
                "fatol": cfg.loglik_tol,
                "adaptive": True,
            },
        )
        iters += int(nm.nit)
        if np.isfinite(nm.fun) and nm.fun < f:
            x, f = nm.x, float(nm.fun)
        polish_gain = 0.0
        if cfg.polish and f < _BIG:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                pol = minimize(
                    prob.neg_loglik, x, method="BFGS",
                    jac=lambda xx: gradient(prob.neg_loglik, xx),
                    options={"maxiter": 200, "gtol": 1e-6},
                )
            iters += int(pol.nit)
            if np.isfinite(pol.fun) and pol.fun < f:
                polish_gain = f - float(pol.fun)
                x, f = pol.x, float(pol.fun)
        value_stationary = (
            round_no > 0
            and f < _BIG
            # an iteration-starved round gains nothing either way, so it is
            # no evidence of stationarity; require a real search
            and nm.nit >= 50 * x.size
            and f_round_start - f <= max(cfg.loglik_tol, 1e-6 * (1.0 + abs(f)))
        )
        if nm.success or value_stationary:
            converged = True
            if polish_gain <= cfg.loglik_tol:
                break
    return x, f, iters, converged


def fit(
    series,
    n_regimes: int = 1,
    restricted: bool = False,
    config: OptimizerConfig | None = None,
    start: BekkParams | RsModelParams | DummyParams | None = None,
    h0: Cov2 | None = None,
    eps0: Sequence[float] | None = None,
    dummy: np.ndarray | None = None,
    dummy_level: bool = False,
    compute_std_errors: bool = True,
    recombine_weights: str = "ex_ante",
) -> EstimationResult:
    """Fit the model by Gaussian QML.

    ``n_regimes`` selects the single-regime model (optionally augmented
    with a ``dummy`` path in the market mean equation) or the two-state
    switching model.  ``restricted`` pins l21 = l22 = 0.  Multi-start
    Nelder-Mead with a BFGS polish; the best restart wins.  Two-regime
    results come back label-normalized (state 1 = low volatility) and all
    results have the sign conventions of :func:`canonical_signs`.

    Raises :class:`EstimationError` if no restart attains a finite
    likelihood.
    """
    if n_regimes not in (1, 2):
        raise ValueError(f"n_regimes must be 1 or 2, got {n_regimes}")
    cfg = config or OptimizerConfig()
    rm, rb = as_return_arrays(series)
    h0_arr, eps0_arr = resolve_seeds(rm, rb, h0, eps0)
    prob = _Problem(rm, rb, n_regimes, restricted, h0_arr, eps0_arr,
                    dummy=dummy, dummy_level=dummy_level,
                    filtered_weights=recombine_weights == "filtered")

    if start is None:
        start = starting_values(series, n_regimes)
    x0 = prob.reduce(start)

    rng = np.random.default_rng(cfg.seed)
    best = None
    for r in range(cfg.n_restarts):
        xr0 = x0 if r == 0 else x0 + rng.normal(0.0, 0.5, size=x0.size)
        x_best, f_best, iters, converged = _optimize_one(prob, xr0, cfg)
        if best is None or f_best < best[1]:
            best = (x_best, f_best, iters, converged)

    if best is None or best[1] >= _BIG:
        raise EstimationError(
            "estimation failed: no restart produced a finite likelihood")

    x_hat, f_hat, iters, converged = best
    params = prob.to_params(x_hat)
    result = EstimationResult(
        params=params,
        loglik=-f_hat,
        std_errors=None,
        converged=converged,
        n_iterations=iters,
        n_restarts=cfg.n_restarts,
        restricted=restricted,
        n_obs=int(rm.size),
        seed=cfg.seed,
    )

    if n_regimes == 2:
        _, filt = rs_log_likelihood(
            (rm, rb), result.params, h0=h0, eps0=eps0,
            recombine_weights=recombine_weights, with_smoothed=False,
        )
        result, _ = normalize_labels(result, filt)

    if compute_std_errors:
        try:
            se = robust_std_errors(
                (rm, rb), result, kind="sandwich", h0=h0, eps0=eps0,
                dummy=dummy, dummy_level=dummy_level,
                recombine_weights=recombine_weights,
            )
        except SingularInformationError as exc:
            warnings.warn(f"standard errors unavailable: {exc}", RuntimeWarning)
            se = None
        result = result.with_params(result.params, std_errors=se)

    return result
