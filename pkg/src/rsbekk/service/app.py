"""FastAPI service exposing the model operations.

The CLI is a thin client of these endpoints; anything it can do goes
through the JSON bodies defined in :mod:`rsbekk.service.schemas`.
Domain errors (bad series, degenerate likelihoods, singular information
matrices) map to HTTP 400 with the error message in ``detail``;
malformed bodies are FastAPI's usual 422.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__, dataio, estimation, premium, regime, simulate
from ..bekk import log_likelihood
from ..errors import RsbekkError
from ..types import (
    BekkParams,
    EstimationResult,
    RsModelParams,
    month_index,
    month_string,
    validate_series,
)
from . import schemas


def _series(payload: schemas.SeriesPayload):
    return validate_series(payload.dates, payload.rm, payload.rb)


def _result(doc: dict) -> EstimationResult:
    try:
        return EstimationResult.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=f"bad result document: {exc}") from exc


def create_app() -> FastAPI:
    app = FastAPI(title="rsbekk", version=__version__)

    @app.exception_handler(RsbekkError)
    async def _domain_error(request, exc: RsbekkError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/stats", response_model=schemas.StatsResponse)
    def stats(req: schemas.StatsRequest):
        out = {}
        for name, values in req.columns.items():
            out[name] = dataio.summary_stats(np.asarray(values), lags=req.lags).to_dict()
        return schemas.StatsResponse(stats=out)

    @app.post("/fit")
    def fit(req: schemas.FitRequest) -> dict:
        series = _series(req.series)
        cfg = estimation.OptimizerConfig(
            n_restarts=req.restarts,
            max_iterations=req.max_iterations,
            seed=req.seed,
            polish=req.polish,
        )
        result = estimation.fit(
            series,
            n_regimes=req.regimes,
            restricted=req.restricted,
            config=cfg,
            compute_std_errors=req.std_errors,
        )
        return result.to_dict()

    @app.post("/filter", response_model=schemas.ColumnsResponse)
    def filter_series(req: schemas.FilterRequest):
        series = _series(req.series)
        result = _result(req.result)
        if isinstance(result.params, RsModelParams):
            _, filt = regime.rs_log_likelihood(series, result.params)
            cols = {
                "ex_ante_state1": filt.ex_ante[:, 0],
                "ex_ante_state2": filt.ex_ante[:, 1],
                "filtered_state1": filt.filtered[:, 0],
                "filtered_state2": filt.filtered[:, 1],
                "smoothed_state1": filt.smoothed[:, 0],
                "smoothed_state2": filt.smoothed[:, 1],
                "var_m_state1": filt.state_cov[:, 0, 0],
                "var_b_state1": filt.state_cov[:, 0, 1],
                "cov_mb_state1": filt.state_cov[:, 0, 2],
                "var_m_state2": filt.state_cov[:, 1, 0],
                "var_b_state2": filt.state_cov[:, 1, 1],
                "cov_mb_state2": filt.state_cov[:, 1, 2],
                # Conditional variances are conventionally reported x 10^4
                # (decimal^2 units are unreadably small).
                "var_m_state1_x1e4": filt.state_cov[:, 0, 0] * 1e4,
                "var_m_state2_x1e4": filt.state_cov[:, 1, 0] * 1e4,
            }
        elif isinstance(result.params, BekkParams):
            path = log_likelihood(series, result.params)
            cols = {
                "var_m": path.h_path[:, 0],
                "var_b": path.h_path[:, 1],
                "cov_mb": path.h_path[:, 2],
                "resid_m": path.eps_path[:, 0],
                "resid_b": path.eps_path[:, 1],
            }
        else:
            raise HTTPException(
                status_code=400,
                detail="filtering needs a plain or switching model result",
            )
        return schemas.ColumnsResponse(
            dates=list(series.dates),
            columns={k: [float(v) for v in arr] for k, arr in cols.items()},
        )

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate_model(req: schemas.SimulateRequest):
        result = _result(req.result)
        params = result.params
        if req.h0 is not None:
            if len(req.h0) != 3:
                raise HTTPException(
                    status_code=400, detail="h0 must be [var_m, var_b, cov_mb]")
            from ..types import Cov2

            h0 = Cov2(smm=req.h0[0], sbb=req.h0[1], smb=req.h0[2])
        elif isinstance(params, RsModelParams):
            h0 = simulate.implied_unconditional_cov(params.regime1)
        elif isinstance(params, BekkParams):
            h0 = simulate.implied_unconditional_cov(params)
        else:
            raise HTTPException(
                status_code=400,
                detail="simulation needs a plain or switching model result",
            )
        start = month_index(req.start_month)
        dates = [month_string(start + t) for t in range(req.periods)]
        if isinstance(params, RsModelParams):
            path = simulate.simulate_rs(params, req.periods, h0, seed=req.seed)
            states = [int(s) for s in path.states]
        else:
            path = simulate.simulate_single(params, req.periods, h0, seed=req.seed)
            states = None
        return schemas.SimulateResponse(
            dates=dates,
            rm=[float(v) for v in path.rm],
            rb=[float(v) for v in path.rb],
            states=states,
        )

    @app.post("/premium", response_model=schemas.PremiumResponse)
    def premium_path(req: schemas.PremiumRequest):
        series = _series(req.series)
        result = _result(req.result)
        if isinstance(result.params, RsModelParams):
            _, filt = regime.rs_log_likelihood(series, result.params)
            path = premium.rs_premium(result.params, filt, weights=req.weights)
        elif isinstance(result.params, BekkParams):
            bp = log_likelihood(series, result.params)
            path = premium.linear_premium(result.params.mean, bp.h_path)
        else:
            raise HTTPException(
                status_code=400,
                detail="the premium decomposition needs a plain or switching "
                       "model result (the dummy model needs its dummy path; "
                       "use the library API)",
            )
        total = path.total
        return schemas.PremiumResponse(
            dates=list(series.dates),
            columns={
                "market": [float(v) for v in path.market],
                "hedge": [float(v) for v in path.hedge],
                "total": [float(v) for v in total],
            },
            median_total=float(np.median(total)),
            annualized_median_total=premium.annualized_median_premium(total),
        )

    return app
