"""FastAPI service wrapping the diffraction core."""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from ..amplitude import FitError, fit_effective_width
from ..model import (
    ClusterModel,
    GratingGeometry,
    IsotropicExponential,
    PointParticle,
    TabulatedDensity,
    default_dimer_model,
)
from ..pattern import DiffractionPattern, PeakRecord, ResolutionError
from ..quadrature import QuadratureConvergenceError
from ..scenarios import ConfigError, PRESETS, ScenarioConfig, preset_config, run_scenario
from .schemas import (
    CurvePayload,
    FitRequest,
    FitResult,
    GeometrySpec,
    ModelSpec,
    PeakPayload,
    PresetInfo,
    RunResult,
    ScenarioRequest,
)

__all__ = ["app", "create_app"]


def _to_geometry(spec: GeometrySpec) -> GratingGeometry:
    return GratingGeometry(
        period_d=spec.period_d, slit_s=spec.slit_s, num_bars=spec.num_bars
    )


def _to_model(spec: ModelSpec) -> ClusterModel:
    if spec.variant == "point":
        return PointParticle()
    if spec.variant == "exponential":
        if spec.kappa is None:
            return default_dimer_model()
        return IsotropicExponential(kappa=spec.kappa)
    if spec.samples is None:
        raise ConfigError("tabulated model requires samples")
    arr = np.asarray(spec.samples, dtype=float)
    return TabulatedDensity(arr[:, 0], arr[:, 1])


def _build_config(req: ScenarioRequest, want_peaks: bool) -> ScenarioConfig:
    if req.preset is not None:
        base = preset_config(req.preset)
    else:
        if req.geometry is None or req.k2_min is None or req.k2_max is None or req.n_samples is None:
            raise ConfigError(
                "without a preset, geometry, k2_min, k2_max, and n_samples are required"
            )
        base = ScenarioConfig(
            scenario_name=req.scenario_name or "custom",
            geometry=_to_geometry(req.geometry),
            model=_to_model(req.model_spec) if req.model_spec else default_dimer_model(),
            k2_min=req.k2_min,
            k2_max=req.k2_max,
            n_samples=req.n_samples,
        )
    from dataclasses import replace

    updates: dict = {}
    if req.preset is not None:
        if req.scenario_name is not None:
            updates["scenario_name"] = req.scenario_name
        if req.geometry is not None:
            updates["geometry"] = _to_geometry(req.geometry)
        if req.model_spec is not None:
            updates["model"] = _to_model(req.model_spec)
        for name in ("k2_min", "k2_max", "n_samples", "sigma_k2"):
            value = getattr(req, name)
            if value is not None:
                updates[name] = value
    elif req.sigma_k2 is not None:
        updates["sigma_k2"] = req.sigma_k2
    if req.reference is not None:
        ref_geometry = (
            _to_geometry(req.reference.geometry)
            if req.reference.geometry is not None
            else (updates.get("geometry") or base.geometry)
        )
        updates["reference"] = (
            req.reference.label,
            ref_geometry,
            _to_model(req.reference.model_spec),
        )
    outputs = set(base.outputs)
    if want_peaks:
        outputs.add("peaks")
    else:
        outputs.discard("peaks")
    updates["outputs"] = frozenset(outputs)
    return replace(base, **updates)


def _curve_payload(label: str, pattern: DiffractionPattern) -> CurvePayload:
    return CurvePayload(
        label=label,
        period_d=pattern.geometry.period_d,
        slit_s=pattern.geometry.slit_s,
        num_bars=pattern.geometry.num_bars,
        k2_nm_inv=pattern.k2_grid.tolist(),
        amp_re_nm=pattern.amplitude.real.tolist(),
        amp_im_nm=pattern.amplitude.imag.tolist(),
        intensity=pattern.intensity.tolist(),
    )


def _peak_payload(rec: PeakRecord) -> PeakPayload:
    fwhm = rec.fwhm if rec.fwhm == rec.fwhm else None  # NaN -> null
    return PeakPayload(
        order_n=rec.order_n, k2_location=rec.k2_location, height=rec.height, fwhm=fwhm
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="dimerdiff",
        description=(
            "Elastic diffraction of weakly bound two-particle clusters by "
            "nanostructure transmission gratings"
        ),
        version="0.1.0",
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/presets", response_model=list[PresetInfo])
    def presets() -> list[PresetInfo]:
        infos = []
        for name in sorted(PRESETS):
            cfg = preset_config(name)
            infos.append(
                PresetInfo(
                    name=name,
                    period_d=cfg.geometry.period_d,
                    slit_s=cfg.geometry.slit_s,
                    num_bars=cfg.geometry.num_bars,
                    k2_min=cfg.k2_min,
                    k2_max=cfg.k2_max,
                    n_samples=cfg.n_samples,
                )
            )
        return infos

    def _run(req: ScenarioRequest, want_peaks: bool) -> RunResult:
        try:
            config = _build_config(req, want_peaks)
            report = run_scenario(config)
        except (ConfigError, ResolutionError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except QuadratureConvergenceError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return RunResult(
            scenario_name=config.scenario_name,
            curves=[_curve_payload(label, pattern) for label, pattern in report.curves],
            peaks={
                label: [_peak_payload(r) for r in records]
                for label, records in report.peaks.items()
            },
            log_scale=config.log_scale,
        )

    @app.post("/run", response_model=RunResult)
    def run(req: ScenarioRequest, include_peaks: bool = False) -> RunResult:
        return _run(req, include_peaks)

    @app.post("/peaks", response_model=RunResult)
    def peaks(req: ScenarioRequest) -> RunResult:
        return _run(req, True)

    @app.post("/fit-width", response_model=FitResult)
    def fit_width(req: FitRequest) -> FitResult:
        try:
            width = fit_effective_width(req.samples, req.bar_a_init)
        except (FitError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return FitResult(effective_width_nm=width)

    return app


app = create_app()
