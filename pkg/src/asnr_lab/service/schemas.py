"""Pydantic request/response models for the experiment service.

A request body doubles as the on-disk JSON config format for the CLI:
unknown fields are rejected and missing fields take the documented
defaults of the original protocols.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

Family = Literal["gaussian", "lorentzian", "voigt"]

DEFAULT_AMPLITUDES = [round(0.5 * k, 1) for k in range(11)]  # 0, 0.5, ..., 5


class _GridParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=42, ge=0)
    sigma: float = Field(default=1.0, gt=0)
    eta: float = Field(default=0.5, gt=0, lt=1)
    grid_spacing: float = Field(default=0.01, gt=0)
    grid_extent: float = Field(default=20.0, gt=0)


class AmpSweepRequest(_GridParams):
    families: list[Family] = ["gaussian"]
    fwhm_bins: list[int] = [3, 10, 50]
    amplitudes: list[float] = DEFAULT_AMPLITUDES
    threshold: float = 3.0
    n_mc: int = Field(default=2000, ge=1)
    n_repeats: int = Field(default=10, ge=1)


class WidthSweepRequest(_GridParams):
    families: list[Family] = ["gaussian", "lorentzian", "voigt"]
    amplitudes: list[float] = [1.0, 2.0, 3.0]
    fwhm_bins: list[int] = list(range(1, 51))
    threshold: float = 3.0
    n_mc: int = Field(default=2000, ge=1)
    n_repeats: int = Field(default=1, ge=1)


class RocRequest(_GridParams):
    family: Family = "gaussian"
    amplitude: float = 0.5
    fwhm_bins: Optional[int] = 50
    width_param: Optional[float] = Field(default=None, gt=0)
    n_mc: int = Field(default=10_000, ge=1)
    n_repeats: int = Field(default=10, ge=1)
    tau_min: float = 0.0
    tau_max: float = 10.0
    tau_step: float = Field(default=0.05, gt=0)
    two_sided: bool = True

    @model_validator(mode="after")
    def _check_width(self):
        if self.fwhm_bins is None and self.width_param is None:
            raise ValueError("one of fwhm_bins or width_param is required")
        if self.tau_max <= self.tau_min:
            raise ValueError("tau_max must exceed tau_min")
        return self


class DensityRequest(_GridParams):
    family: Family = "gaussian"
    amplitude: float = 0.3
    fwhm_bins: Optional[int] = None
    width_param: Optional[float] = Field(default=0.5, gt=0)
    bin_width: float = Field(default=0.05, gt=0)
    n_mc: int = Field(default=100_000, ge=1)

    @model_validator(mode="after")
    def _check_width(self):
        if self.fwhm_bins is None and self.width_param is None:
            raise ValueError("one of fwhm_bins or width_param is required")
        return self


class Sweep2DRequest(_GridParams):
    families: list[Family] = ["gaussian", "lorentzian", "voigt"]
    widths_px: list[int] = list(range(1, 21))
    amplitudes: list[float] = DEFAULT_AMPLITUDES
    n_mc: int = Field(default=200, ge=1)
    n_repeats: int = Field(default=1, ge=1)
    grid_spacing: float = Field(default=0.1, gt=0)
    grid_extent: float = Field(default=5.0, gt=0)


class GammaTableRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    families: list[Family] = ["gaussian", "lorentzian", "voigt"]
    eta: float = Field(default=0.5, gt=0, lt=1)
    b_over_dx: float = Field(default=50.0, gt=0)
    seed: int = Field(default=42, ge=0)


class TablePayload(BaseModel):
    name: str
    columns: list[str]
    rows: list[list[Any]]
    meta: dict[str, Any]


class ExperimentResponse(BaseModel):
    experiment: str
    version: str
    wall_time_s: float
    tables: list[TablePayload]


class HealthResponse(BaseModel):
    status: str
    version: str
