"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class SeriesPayload(BaseModel):
    """A monthly excess-return series in decimal units."""

    dates: list[str]
    rm: list[float]
    rb: list[float]


class StatsRequest(BaseModel):
    columns: dict[str, list[float]]
    lags: int = Field(default=6, ge=1)


class StatsResponse(BaseModel):
    stats: dict[str, dict]


class FitRequest(BaseModel):
    series: SeriesPayload
    regimes: Literal[1, 2] = 1
    restricted: bool = False
    restarts: int = Field(default=3, ge=1)
    seed: int = 0
    max_iterations: int = Field(default=5000, ge=1)
    std_errors: bool = True
    polish: bool = True


class FilterRequest(BaseModel):
    series: SeriesPayload
    result: dict


class ColumnsResponse(BaseModel):
    """Aligned per-month output columns."""

    dates: list[str]
    columns: dict[str, list[float]]


class SimulateRequest(BaseModel):
    result: dict
    periods: int = Field(ge=1)
    seed: int = 0
    start_month: str = "2000-01"
    h0: list[float] | None = None


class SimulateResponse(BaseModel):
    dates: list[str]
    rm: list[float]
    rb: list[float]
    states: list[int] | None = None


class PremiumRequest(BaseModel):
    series: SeriesPayload
    result: dict
    weights: Literal["smoothed", "filtered", "ex_ante"] = "smoothed"


class PremiumResponse(ColumnsResponse):
    median_total: float
    annualized_median_total: float


class HealthResponse(BaseModel):
    status: str
    version: str
