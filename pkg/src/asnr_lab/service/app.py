"""FastAPI service wrapping the simulation package.

Each experiment is a POST endpoint taking a typed config body and
returning the result tables as JSON.  Config problems surface as 422
responses; numeric failures inside a run (Voigt solve divergence, span
rejection) surface as 500 responses with code "numeric_failure".
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, reports
from ..errors import ConfigError, NumericError
from ..experiments import (
    Sweep2DConfig,
    SweepConfig,
    WidthSweepConfig,
    amplitude_sweep,
    sweep_2d,
    width_sweep,
)
from ..grids import make_grid
from ..roc import RocConfig, density_histogram, roc_analysis, run_hypothesis_trials
from ..tables import ResultTable
from .schemas import (
    AmpSweepRequest,
    DensityRequest,
    ExperimentResponse,
    GammaTableRequest,
    HealthResponse,
    RocRequest,
    Sweep2DRequest,
    TablePayload,
    WidthSweepRequest,
)


def _response(experiment: str, tables: list[ResultTable],
              started: float) -> ExperimentResponse:
    return ExperimentResponse(
        experiment=experiment,
        version=__version__,
        wall_time_s=time.perf_counter() - started,
        tables=[TablePayload(name=t.name, columns=t.columns, rows=t.rows,
                             meta=t.meta) for t in tables],
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="asnr-lab service",
        description="Monte Carlo comparison of area-based and peak-based "
                    "SNR detection statistics",
        version=__version__,
    )

    @app.exception_handler(ConfigError)
    async def config_error(request: Request, exc: ConfigError):
        return JSONResponse(status_code=422, content={
            "detail": {"code": "config_error", "message": str(exc)}})

    @app.exception_handler(NumericError)
    async def numeric_error(request: Request, exc: NumericError):
        return JSONResponse(status_code=500, content={
            "detail": {"code": "numeric_failure", "message": str(exc)}})

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/experiments/amp-sweep", response_model=ExperimentResponse)
    def amp_sweep(req: AmpSweepRequest) -> ExperimentResponse:
        started = time.perf_counter()
        config = SweepConfig(
            families=tuple(req.families), fwhm_bins=tuple(req.fwhm_bins),
            amplitudes=tuple(req.amplitudes), threshold=req.threshold,
            n_mc=req.n_mc, n_repeats=req.n_repeats, sigma=req.sigma,
            eta=req.eta, base_seed=req.seed,
            grid=make_grid(1, req.grid_spacing, req.grid_extent))
        result = amplitude_sweep(config)
        tables = reports.amp_sweep_tables(result, req.seed, req.model_dump())
        return _response("amp-sweep", tables, started)

    @app.post("/v1/experiments/width-sweep", response_model=ExperimentResponse)
    def width_sweep_route(req: WidthSweepRequest) -> ExperimentResponse:
        started = time.perf_counter()
        config = WidthSweepConfig(
            families=tuple(req.families), amplitudes=tuple(req.amplitudes),
            fwhm_bins=tuple(req.fwhm_bins), threshold=req.threshold,
            n_mc=req.n_mc, n_repeats=req.n_repeats, sigma=req.sigma,
            eta=req.eta, base_seed=req.seed,
            grid=make_grid(1, req.grid_spacing, req.grid_extent))
        result = width_sweep(config)
        tables = reports.width_sweep_tables(result, req.seed, req.model_dump())
        return _response("width-sweep", tables, started)

    @app.post("/v1/experiments/roc", response_model=ExperimentResponse)
    def roc(req: RocRequest) -> ExperimentResponse:
        started = time.perf_counter()
        config = RocConfig(
            family=req.family, amplitude=req.amplitude,
            fwhm_bins=req.fwhm_bins, width_param=req.width_param,
            n_mc=req.n_mc, tau_min=req.tau_min, tau_max=req.tau_max,
            tau_step=req.tau_step, n_repeats=req.n_repeats,
            two_sided=req.two_sided, sigma=req.sigma, eta=req.eta,
            base_seed=req.seed,
            grid=make_grid(1, req.grid_spacing, req.grid_extent))
        result = roc_analysis(config)
        tables = reports.roc_tables(result, req.seed, req.model_dump())
        return _response("roc", tables, started)

    @app.post("/v1/experiments/density", response_model=ExperimentResponse)
    def density(req: DensityRequest) -> ExperimentResponse:
        started = time.perf_counter()
        config = RocConfig(
            family=req.family, amplitude=req.amplitude,
            fwhm_bins=req.fwhm_bins, width_param=req.width_param,
            n_mc=req.n_mc, n_repeats=1, sigma=req.sigma, eta=req.eta,
            base_seed=req.seed,
            grid=make_grid(1, req.grid_spacing, req.grid_extent))
        values = run_hypothesis_trials(config)
        histograms = {
            "psnr_h0": density_histogram(values.h0_psnr, req.bin_width),
            "psnr_h1": density_histogram(values.h1_psnr, req.bin_width),
            "asnr_h0": density_histogram(values.h0_asnr, req.bin_width),
            "asnr_h1": density_histogram(values.h1_asnr, req.bin_width),
        }
        tables = reports.density_tables(config, histograms, values, req.seed,
                                        req.model_dump())
        return _response("density", tables, started)

    @app.post("/v1/experiments/sweep2d", response_model=ExperimentResponse)
    def sweep2d(req: Sweep2DRequest) -> ExperimentResponse:
        started = time.perf_counter()
        config = Sweep2DConfig(
            families=tuple(req.families), widths_px=tuple(req.widths_px),
            amplitudes=tuple(req.amplitudes), n_mc=req.n_mc,
            n_repeats=req.n_repeats, sigma=req.sigma, eta=req.eta,
            base_seed=req.seed,
            grid=make_grid(2, req.grid_spacing, req.grid_extent))
        result = sweep_2d(config)
        tables = reports.sweep2d_tables(result, req.seed, req.model_dump())
        return _response("sweep2d", tables, started)

    @app.post("/v1/experiments/gamma-table", response_model=ExperimentResponse)
    def gamma(req: GammaTableRequest) -> ExperimentResponse:
        started = time.perf_counter()
        table = reports.gamma_table(tuple(req.families), req.eta,
                                    req.b_over_dx, req.seed, req.model_dump())
        return _response("gamma-table", [table], started)

    return app


app = create_app()
