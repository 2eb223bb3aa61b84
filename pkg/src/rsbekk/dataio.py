"""CSV ingestion, bond return construction, and summary statistics.

The on-disk format is a plain CSV with a ``date`` column of 'YYYY-MM'
months plus numeric columns.  An optional pragma comment on line 1,
``# units=percent``, marks value columns stored in percent; they are
rescaled to decimals on load so everything downstream works in decimal
units.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as sstats

from .errors import DataError
from .types import MONTH_RE, month_index


@dataclass(frozen=True)
class MonthlyTable:
    """Contiguous monthly observations keyed by 'YYYY-MM' dates."""

    dates: tuple[str, ...]
    columns: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.dates)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise DataError(
                f"column {name!r} not found; available: {sorted(self.columns)}"
            )
        return self.columns[name]


def load_csv(source, date_column: str = "date") -> MonthlyTable:
    """Load a monthly CSV table from a path or file-like object.

    Months must be strictly increasing with no gaps and no duplicates.
    Raises :class:`DataError` naming the row and column on any malformed
    cell.
    """
    if hasattr(source, "read"):
        text = source.read()
        name = getattr(source, "name", "<stream>")
    else:
        name = os.fspath(source)
        try:
            with open(name, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DataError(f"cannot read {name}: {exc}") from exc

    lines = text.splitlines()
    percent = False
    start = 0
    if lines and lines[0].lstrip().startswith("#"):
        pragma = lines[0].lstrip()[1:].strip()
        if pragma.replace(" ", "") == "units=percent":
            percent = True
        elif pragma:
            raise DataError(f"{name}: unknown pragma {pragma!r} (expected 'units=percent')")
        start = 1

    reader = csv.reader(io.StringIO("\n".join(lines[start:])))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{name}: empty file") from None
    header = [h.strip() for h in header]
    if date_column not in header:
        raise DataError(f"{name}: missing {date_column!r} column in header {header}")
    value_names = [h for h in header if h != date_column]
    if not value_names:
        raise DataError(f"{name}: no value columns besides {date_column!r}")
    date_pos = header.index(date_column)

    dates: list[str] = []
    values: list[list[float]] = [[] for _ in value_names]
    for row_num, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DataError(
                f"{name}: row {row_num} has {len(row)} fields, expected {len(header)}"
            )
        date = row[date_pos].strip()
        if MONTH_RE.match(date) is None:
            raise DataError(
                f"{name}: row {row_num}: invalid month {date!r} (expected YYYY-MM)"
            )
        dates.append(date)
        vi = 0
        for pos, cell in enumerate(row):
            if pos == date_pos:
                continue
            try:
                values[vi].append(float(cell))
            except ValueError:
                raise DataError(
                    f"{name}: row {row_num}, column {header[pos]!r}: "
                    f"non-numeric value {cell.strip()!r}"
                ) from None
            vi += 1

    if not dates:
        raise DataError(f"{name}: empty table (header but no data rows)")
    idx = [month_index(d) for d in dates]
    for i in range(1, len(idx)):
        if idx[i] == idx[i - 1]:
            raise DataError(f"{name}: duplicate month {dates[i]!r}")
        if idx[i] < idx[i - 1]:
            raise DataError(
                f"{name}: months out of order: {dates[i - 1]!r} followed by {dates[i]!r}"
            )
        if idx[i] != idx[i - 1] + 1:
            raise DataError(
                f"{name}: missing month between {dates[i - 1]!r} and {dates[i]!r}"
            )

    scale = 0.01 if percent else 1.0
    columns = {
        nm: np.asarray(vals, dtype=np.float64) * scale
        for nm, vals in zip(value_names, values)
    }
    return MonthlyTable(dates=tuple(dates), columns=columns)


def write_csv(path, dates: Sequence[str], columns: Mapping[str, Sequence]) -> None:
    """Write a monthly table; floats use their shortest exact representation."""
    names = list(columns)
    cols = [columns[n] for n in names]
    for n, c in zip(names, cols):
        if len(c) != len(dates):
            raise DataError(f"column {n!r} has {len(c)} rows, expected {len(dates)}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["date"] + names)
        for i, d in enumerate(dates):
            w.writerow([d] + [repr(float(c[i])) for c in cols])


def bond_price(yield_level: float, coupon: float, maturity_years: int) -> float:
    """Par-100 price (per unit face) of an annual-coupon bond."""
    y = yield_level
    v = (1.0 + y) ** (-maturity_years)
    return coupon * (1.0 - v) / y + v


def bond_total_return(yields: Sequence[float], maturity_years: int = 20) -> np.ndarray:
    """Monthly total returns of a rolled par bond from a yield series.

    At the end of month t-1 the bond is issued at par with coupon equal to
    the prevailing yield; over month t the holder earns one month of
    coupon accrual plus the revaluation at the new yield:

        r_t = y_{t-1} / 12 + [P(y_t; coupon=y_{t-1}, M) - 1]

    The output has length T-1, aligned with the dates of ``yields[1:]``.
    Flat yields give exactly y/12.
    """
    y = np.asarray(yields, dtype=np.float64)
    if y.ndim != 1 or y.size < 2:
        raise DataError("need at least two yield observations")
    if not np.isfinite(y).all():
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise DataError(f"non-finite yield at row {bad}")
    if (y <= 0).any():
        bad = int(np.flatnonzero(y <= 0)[0])
        raise DataError(f"nonpositive yield at row {bad}: {y[bad]!r}")
    if not isinstance(maturity_years, (int, np.integer)) or maturity_years < 1:
        raise DataError(f"maturity must be a positive integer, got {maturity_years!r}")

    v = (1.0 + y[1:]) ** (-float(maturity_years))
    price = y[:-1] * (1.0 - v) / y[1:] + v
    return y[:-1] / 12.0 + (price - 1.0)


def excess_returns(
    total_returns: Sequence[float],
    rf_yields: Sequence[float],
    dates: Sequence[str] | None = None,
    rf_dates: Sequence[str] | None = None,
) -> np.ndarray:
    """Subtract one month of the riskless yield: r - rf/12.

    ``rf_yields`` are annualized decimal yields for the same months as the
    returns.  When both date sequences are supplied they must agree.
    """
    r = np.asarray(total_returns, dtype=np.float64)
    rf = np.asarray(rf_yields, dtype=np.float64)
    if r.shape != rf.shape or r.ndim != 1:
        raise DataError(
            f"misaligned series: {r.shape} returns vs {rf.shape} riskless yields"
        )
    if dates is not None and rf_dates is not None:
        if len(dates) != len(rf_dates):
            raise DataError(
                f"misaligned dates: {len(dates)} return months vs {len(rf_dates)} riskless months"
            )
        for i, (a, b) in enumerate(zip(dates, rf_dates)):
            if a != b:
                raise DataError(f"misaligned dates at row {i}: {a!r} vs {b!r}")
    return r - rf / 12.0


@dataclass(frozen=True)
class SummaryStats:
    """Distribution and autocorrelation diagnostics for one series.

    Kurtosis is the raw fourth standardized moment (normal = 3).  The
    Ljung-Box fields are None when the corresponding series is constant
    (autocorrelations undefined).
    """

    n_obs: int
    mean: float
    std: float
    skewness: float
    kurtosis: float
    jarque_bera: float
    jarque_bera_pvalue: float
    lb_lags: int
    ljung_box_levels: float | None
    ljung_box_levels_pvalue: float | None
    ljung_box_squares: float | None
    ljung_box_squares_pvalue: float | None

    def to_dict(self) -> dict:
        return {
            "n_obs": self.n_obs,
            "mean": self.mean,
            "std": self.std,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
            "jarque_bera": self.jarque_bera,
            "jarque_bera_pvalue": self.jarque_bera_pvalue,
            "lb_lags": self.lb_lags,
            "ljung_box_levels": self.ljung_box_levels,
            "ljung_box_levels_pvalue": self.ljung_box_levels_pvalue,
            "ljung_box_squares": self.ljung_box_squares,
            "ljung_box_squares_pvalue": self.ljung_box_squares_pvalue,
        }


def ljung_box(x: np.ndarray, lags: int) -> float | None:
    """Ljung-Box portmanteau statistic; None for a constant series."""
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    mean = x.mean()
    xc = x - mean
    denom = float(xc @ xc)
    # centering a constant series leaves rounding residue of order
    # (eps * mean)^2, so the constant test has to be relative
    if denom <= T * (1e-12 * max(1.0, abs(float(mean)))) ** 2:
        return None
    acc = 0.0
    for k in range(1, lags + 1):
        rho = float(xc[k:] @ xc[:-k]) / denom
        acc += rho * rho / (T - k)
    return T * (T + 2.0) * acc


def summary_stats(x: Sequence[float], lags: int = 6) -> SummaryStats:
    """Moments, Jarque-Bera, and Ljung-Box diagnostics for one series.

    Uses population central moments for skewness/kurtosis (matching the
    Jarque-Bera statistic) and the ddof=1 standard deviation for
    reporting.  P-values come from the chi-squared tail: JB against 2
    degrees of freedom, LB against ``lags``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DataError(f"expected a one-dimensional series, got shape {x.shape}")
    if x.size < 8:
        raise DataError(f"series too short for summary statistics: n={x.size}, need at least 8")
    if not np.isfinite(x).all():
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise DataError(f"non-finite value at row {bad}")
    if not isinstance(lags, (int, np.integer)) or lags < 1:
        raise DataError(f"lags must be a positive integer, got {lags!r}")
    T = x.size
    if T <= lags:
        raise DataError(f"need more than {lags} observations for {lags} Ljung-Box lags")

    mean = float(x.mean())
    xc = x - mean
    m2 = float(np.mean(xc**2))
    if m2 <= (1e-12 * max(1.0, abs(mean))) ** 2:
        raise DataError("degenerate series: zero variance")
    m3 = float(np.mean(xc**3))
    m4 = float(np.mean(xc**4))
    skew = m3 / m2**1.5
    kurt = m4 / (m2 * m2)
    jb = T / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) ** 2)
    jb_p = float(sstats.chi2.sf(jb, 2))

    lb_lev = ljung_box(x, lags)
    lb_sq = ljung_box(x * x, lags)
    return SummaryStats(
        n_obs=T,
        mean=mean,
        std=float(x.std(ddof=1)),
        skewness=skew,
        kurtosis=kurt,
        jarque_bera=jb,
        jarque_bera_pvalue=jb_p,
        lb_lags=int(lags),
        ljung_box_levels=lb_lev,
        ljung_box_levels_pvalue=None if lb_lev is None else float(sstats.chi2.sf(lb_lev, lags)),
        ljung_box_squares=lb_sq,
        ljung_box_squares_pvalue=None if lb_sq is None else float(sstats.chi2.sf(lb_sq, lags)),
    )
