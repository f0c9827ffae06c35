"""Pydantic request/response models for the diffraction service."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class GeometrySpec(BaseModel):
    period_d: float = Field(gt=0, description="grating period in nm")
    slit_s: float = Field(gt=0, description="slit width in nm")
    num_bars: int = Field(default=1, ge=1)


class ModelSpec(BaseModel):
    variant: Literal["point", "exponential", "tabulated"] = "exponential"
    kappa: Optional[float] = Field(default=None, gt=0, description="decay constant in 1/nm")
    samples: Optional[list[tuple[float, float]]] = Field(
        default=None, description="(x2 nm, rho 1/nm) rows for the tabulated variant"
    )


class ReferenceSpec(BaseModel):
    label: str = "reference"
    geometry: Optional[GeometrySpec] = None
    model_spec: ModelSpec = Field(default=ModelSpec(variant="point"), alias="model")

    model_config = {"populate_by_name": True}


class ScenarioRequest(BaseModel):
    """Either a preset name or a full scenario; overrides win over preset values."""

    preset: Optional[str] = None
    scenario_name: Optional[str] = None
    geometry: Optional[GeometrySpec] = None
    model_spec: Optional[ModelSpec] = Field(default=None, alias="model")
    reference: Optional[ReferenceSpec] = None
    k2_min: Optional[float] = None
    k2_max: Optional[float] = None
    n_samples: Optional[int] = Field(default=None, ge=2)
    sigma_k2: Optional[float] = Field(default=None, ge=0)

    model_config = {"populate_by_name": True}


class CurvePayload(BaseModel):
    label: str
    period_d: float
    slit_s: float
    num_bars: int
    k2_nm_inv: list[float]
    amp_re_nm: list[float]
    amp_im_nm: list[float]
    intensity: list[float]


class PeakPayload(BaseModel):
    order_n: int
    k2_location: float
    height: float
    fwhm: Optional[float] = None


class RunResult(BaseModel):
    scenario_name: str
    curves: list[CurvePayload]
    peaks: dict[str, list[PeakPayload]]
    log_scale: bool = False


class FitRequest(BaseModel):
    samples: list[tuple[float, float]] = Field(
        description="(K2 1/nm, |A| nm) pairs below the first amplitude zero"
    )
    bar_a_init: float = Field(gt=0)


class FitResult(BaseModel):
    effective_width_nm: float


class PresetInfo(BaseModel):
    name: str
    period_d: float
    slit_s: float
    num_bars: int
    k2_min: float
    k2_max: float
    n_samples: int
