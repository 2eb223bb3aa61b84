"""Core value types: return series, covariances, parameter blocks, results.

All parameter containers are immutable dataclasses with validation in
``__post_init__`` and lossless ``to_dict`` / ``from_dict`` round-trips so
they can travel through JSON unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import CovarianceError, SeriesError

MONTH_RE = re.compile(r"^(\d{4})-(0[1-9]|1[0-2])$")

MIN_SERIES_LENGTH = 10

# Relative tolerance for the determinant check in Cov2: a covariance is
# accepted as PSD if det >= -PSD_TOL * smm * sbb.
PSD_TOL = 1e-12


def month_index(date: str) -> int:
    """Map a 'YYYY-MM' string to a month counter (for contiguity checks)."""
    m = MONTH_RE.match(date)
    if m is None:
        raise SeriesError(f"invalid month identifier {date!r} (expected YYYY-MM)")
    return int(m.group(1)) * 12 + int(m.group(2)) - 1


def month_string(index: int) -> str:
    return f"{index // 12:04d}-{index % 12 + 1:02d}"


@dataclass(frozen=True)
class ExcessReturnSeries:
    """Aligned monthly excess returns for the market and long-term bonds.

    Returns are in decimal units (0.01 = one percent per month).
    """

    dates: tuple[str, ...]
    rm: np.ndarray
    rb: np.ndarray

    def __post_init__(self):
        rm = np.asarray(self.rm, dtype=np.float64)
        rb = np.asarray(self.rb, dtype=np.float64)
        object.__setattr__(self, "rm", rm)
        object.__setattr__(self, "rb", rb)
        object.__setattr__(self, "dates", tuple(self.dates))
        if rm.ndim != 1 or rb.ndim != 1:
            raise SeriesError("return columns must be one-dimensional")
        if not (len(self.dates) == rm.size == rb.size):
            raise SeriesError(
                f"misaligned columns: {len(self.dates)} dates, "
                f"{rm.size} market returns, {rb.size} bond returns"
            )
        if rm.size < MIN_SERIES_LENGTH:
            raise SeriesError(
                f"series too short: {rm.size} observations, need at least {MIN_SERIES_LENGTH}"
            )
        for name, col in (("rm", rm), ("rb", rb)):
            bad = np.flatnonzero(~np.isfinite(col))
            if bad.size:
                raise SeriesError(
                    f"non-finite value in column {name!r} at row {bad[0]} "
                    f"(date {self.dates[bad[0]]})"
                )
        idx = [month_index(d) for d in self.dates]
        for i in range(1, len(idx)):
            if idx[i] <= idx[i - 1]:
                raise SeriesError(
                    f"dates not strictly increasing at row {i}: "
                    f"{self.dates[i - 1]!r} followed by {self.dates[i]!r}"
                )
            if idx[i] != idx[i - 1] + 1:
                raise SeriesError(
                    f"missing month between {self.dates[i - 1]!r} and "
                    f"{self.dates[i]!r} (row {i}): series must be contiguous"
                )

    def __len__(self) -> int:
        return self.rm.size

    def returns(self) -> np.ndarray:
        """Stack to a (T, 2) array, market first."""
        return np.column_stack([self.rm, self.rb])

    def sample_cov(self) -> "Cov2":
        c = np.cov(self.rm, self.rb, ddof=1)
        return Cov2(smm=float(c[0, 0]), sbb=float(c[1, 1]), smb=float(c[0, 1]))


def validate_series(
    dates: Sequence[str],
    rm: Sequence[float],
    rb: Sequence[float],
) -> ExcessReturnSeries:
    """Validate raw columns and build an :class:`ExcessReturnSeries`.

    Raises :class:`SeriesError` naming the offending row on bad input.
    """
    try:
        rm_arr = np.asarray(rm, dtype=np.float64)
        rb_arr = np.asarray(rb, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SeriesError(f"non-numeric return value: {exc}") from exc
    return ExcessReturnSeries(dates=tuple(dates), rm=rm_arr, rb=rb_arr)


@dataclass(frozen=True)
class Cov2:
    """Symmetric 2x2 covariance: market variance, bond variance, covariance."""

    smm: float
    sbb: float
    smb: float

    def __post_init__(self):
        for name in ("smm", "sbb", "smb"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise CovarianceError(f"non-finite covariance entry {name}={v!r}")
        if self.smm <= 0.0:
            raise CovarianceError(f"market variance must be positive, got smm={self.smm!r}")
        if self.sbb <= 0.0:
            raise CovarianceError(f"bond variance must be positive, got sbb={self.sbb!r}")
        if self.det() < -PSD_TOL * self.smm * self.sbb:
            raise CovarianceError(
                f"covariance not PSD: det={self.det()!r} < 0 "
                f"(smm={self.smm!r}, sbb={self.sbb!r}, smb={self.smb!r})"
            )

    def det(self) -> float:
        return self.smm * self.sbb - self.smb * self.smb

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.smm, self.smb], [self.smb, self.sbb]])

    def correlation(self) -> float:
        return self.smb / np.sqrt(self.smm * self.sbb)

    def to_dict(self) -> dict[str, float]:
        return {"smm": self.smm, "sbb": self.sbb, "smb": self.smb}

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "Cov2":
        return cls(smm=float(d["smm"]), sbb=float(d["sbb"]), smb=float(d["smb"]))


_MEAN_FIELDS = ("l10", "l11", "l12", "l20", "l21", "l22")


@dataclass(frozen=True)
class MeanParams:
    """Coefficients of the in-mean equations.

    Market:  rm_t = l10 + l11 * smm_t + l12 * smb_t + em_t
    Bond:    rb_t = l20 + l21 * smb_t + l22 * sbb_t + eb_t

    The restricted model pins l21 = l22 = 0 so that the bond premium works
    only through the covariance with the market.
    """

    l10: float = 0.0
    l11: float = 0.0
    l12: float = 0.0
    l20: float = 0.0
    l21: float = 0.0
    l22: float = 0.0

    def __post_init__(self):
        for name in _MEAN_FIELDS:
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite mean coefficient {name}")

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in _MEAN_FIELDS])

    def to_dict(self) -> dict[str, float]:
        return {f: float(getattr(self, f)) for f in _MEAN_FIELDS}

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "MeanParams":
        return cls(**{f: float(d.get(f, 0.0)) for f in _MEAN_FIELDS})


_BEKK_COV_FIELDS = ("c11", "c12", "c22", "a11", "a22", "b11", "b22")


@dataclass(frozen=True)
class BekkParams:
    """One regime of the diagonal bivariate BEKK(1,1) in-mean model.

    The covariance recursion is

        H_t = C C' + A' e_{t-1} e_{t-1}' A + B' H_{t-1} B

    with C lower triangular (c11, c12, c22) and A, B diagonal.  C is stored
    row-wise: C = [[c11, 0], [c12, c22]].
    """

    mean: MeanParams
    c11: float
    c12: float
    c22: float
    a11: float
    a22: float
    b11: float
    b22: float

    def __post_init__(self):
        for name in _BEKK_COV_FIELDS:
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite BEKK coefficient {name}")

    def cov_vector(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in _BEKK_COV_FIELDS])

    def to_vector(self) -> np.ndarray:
        """Full 13-vector: six mean coefficients then (c11,c12,c22,a11,a22,b11,b22)."""
        return np.concatenate([self.mean.to_vector(), self.cov_vector()])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "BekkParams":
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (13,):
            raise ValueError(f"expected 13 parameters, got shape {x.shape}")
        mean = MeanParams(*[float(v) for v in x[:6]])
        return cls(mean, *[float(v) for v in x[6:]])

    def intercept_cov(self) -> Cov2:
        """The constant term C C' of the recursion."""
        return Cov2(
            smm=self.c11 * self.c11,
            sbb=self.c12 * self.c12 + self.c22 * self.c22,
            smb=self.c11 * self.c12,
        )

    def to_dict(self) -> dict[str, float]:
        d = self.mean.to_dict()
        d.update({f: float(getattr(self, f)) for f in _BEKK_COV_FIELDS})
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "BekkParams":
        mean = MeanParams.from_dict(d)
        return cls(mean, *[float(d[f]) for f in _BEKK_COV_FIELDS])


@dataclass(frozen=True)
class RsModelParams:
    """Two-state regime-switching BEKK in-mean model.

    ``p`` is the probability of staying in state 1, ``q`` of staying in
    state 2.  By convention (after label normalization) state 1 is the
    low-volatility state.
    """

    regime1: BekkParams
    regime2: BekkParams
    p: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"transition probability p must lie in (0, 1), got {self.p!r}")
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"transition probability q must lie in (0, 1), got {self.q!r}")

    def swapped(self) -> "RsModelParams":
        """Exchange the regime labels (and with them p and q)."""
        return RsModelParams(regime1=self.regime2, regime2=self.regime1, p=self.q, q=self.p)

    def to_dict(self) -> dict[str, Any]:
        return {
            "regime1": self.regime1.to_dict(),
            "regime2": self.regime2.to_dict(),
            "p": float(self.p),
            "q": float(self.q),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RsModelParams":
        return cls(
            regime1=BekkParams.from_dict(d["regime1"]),
            regime2=BekkParams.from_dict(d["regime2"]),
            p=float(d["p"]),
            q=float(d["q"]),
        )


@dataclass(frozen=True)
class DummyParams:
    """Single-regime model augmented with a high-volatility dummy in the
    market mean equation: extra terms (l10d +) l11d * D_t * smm_t +
    l12d * D_t * smb_t."""

    base: BekkParams
    l11d: float
    l12d: float
    l10d: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        d = self.base.to_dict()
        d.update({"l11d": float(self.l11d), "l12d": float(self.l12d)})
        if self.l10d != 0.0:
            d["l10d"] = float(self.l10d)
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "DummyParams":
        return cls(
            base=BekkParams.from_dict(d),
            l11d=float(d["l11d"]),
            l12d=float(d["l12d"]),
            l10d=float(d.get("l10d", 0.0)),
        )


@dataclass
class FilterOutput:
    """Per-period output of the regime filter.

    Probability arrays have shape (T, 2) with state 1 in column 0.
    ``state_cov`` has shape (T, 2, 3): per state, the (smm, sbb, smb)
    triple.  ``agg_cov`` is the recombined covariance (T, 3) and
    ``agg_innov`` the recombined innovations (T, 2).  ``smoothed`` is None
    until the smoother has run.
    """

    ex_ante: np.ndarray
    filtered: np.ndarray
    state_cov: np.ndarray
    agg_cov: np.ndarray
    agg_innov: np.ndarray
    smoothed: np.ndarray | None = None
    n_floored: int = 0

    def __post_init__(self):
        T = self.ex_ante.shape[0]
        expected = {
            "ex_ante": (T, 2),
            "filtered": (T, 2),
            "state_cov": (T, 2, 3),
            "agg_cov": (T, 3),
            "agg_innov": (T, 2),
        }
        for name, shape in expected.items():
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
        if self.smoothed is not None and self.smoothed.shape != (T, 2):
            raise ValueError(f"smoothed has shape {self.smoothed.shape}, expected {(T, 2)}")

    def __len__(self) -> int:
        return self.ex_ante.shape[0]

    def swapped(self) -> "FilterOutput":
        """Exchange the state labels in every state-indexed array."""
        return FilterOutput(
            ex_ante=self.ex_ante[:, ::-1].copy(),
            filtered=self.filtered[:, ::-1].copy(),
            state_cov=self.state_cov[:, ::-1, :].copy(),
            agg_cov=self.agg_cov.copy(),
            agg_innov=self.agg_innov.copy(),
            smoothed=None if self.smoothed is None else self.smoothed[:, ::-1].copy(),
            n_floored=self.n_floored,
        )


ParamsLike = BekkParams | RsModelParams | DummyParams

_MODEL_TAGS = {BekkParams: "bekk", RsModelParams: "rs_bekk", DummyParams: "bekk_dummy"}


@dataclass(frozen=True)
class EstimationResult:
    """Fitted model with metadata.

    ``std_errors`` maps parameter names to robust standard errors (dotted
    keys such as ``regime1.a11`` for the switching model); None when they
    were not computed.
    """

    params: ParamsLike
    loglik: float
    std_errors: dict[str, float] | None
    converged: bool
    n_iterations: int
    n_restarts: int
    restricted: bool = False
    n_obs: int = 0
    seed: int = 0

    @property
    def model(self) -> str:
        return _MODEL_TAGS[type(self.params)]

    def with_params(self, params: ParamsLike, **changes: Any) -> "EstimationResult":
        return replace(self, params=params, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": 1,
            "model": self.model,
            "restricted": self.restricted,
            "params": self.params.to_dict(),
            "loglik": float(self.loglik),
            "std_errors": self.std_errors,
            "converged": self.converged,
            "n_iterations": self.n_iterations,
            "n_restarts": self.n_restarts,
            "n_obs": self.n_obs,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "EstimationResult":
        model = d.get("model", "bekk")
        raw = d["params"]
        params: ParamsLike
        if model == "rs_bekk":
            params = RsModelParams.from_dict(raw)
        elif model == "bekk_dummy":
            params = DummyParams.from_dict(raw)
        elif model == "bekk":
            params = BekkParams.from_dict(raw)
        else:
            raise ValueError(f"unknown model tag {model!r}")
        se = d.get("std_errors")
        return cls(
            params=params,
            loglik=float(d["loglik"]),
            std_errors=None if se is None else {k: float(v) for k, v in se.items()},
            converged=bool(d["converged"]),
            n_iterations=int(d.get("n_iterations", 0)),
            n_restarts=int(d.get("n_restarts", 0)),
            restricted=bool(d.get("restricted", False)),
            n_obs=int(d.get("n_obs", 0)),
            seed=int(d.get("seed", 0)),
        )
