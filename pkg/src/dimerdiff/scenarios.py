"""Scenario configuration, presets, and the scenario runner.

Presets mirror the single-bar and full-grating setups of the reference
figures; the bar-count N and the beam momentum spread are exposed as
parameters rather than pinned.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import emit
from .density import load_tabulated_density
from .model import (
    ClusterModel,
    GratingGeometry,
    IsotropicExponential,
    PointParticle,
    TabulatedDensity,
    default_dimer_model,
)
from .pattern import (
    DiffractionPattern,
    PeakRecord,
    coherent_intensity,
    convolve_beam_spread,
    find_peaks,
)

__all__ = [
    "ScenarioConfig",
    "ScenarioReport",
    "ConfigError",
    "PRESETS",
    "preset_config",
    "load_config",
    "resolve_config",
    "run_scenario",
]

_ALLOWED_OUTPUTS = frozenset({"csv", "svg", "peaks"})


class ConfigError(ValueError):
    """Invalid scenario configuration."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_name: str
    geometry: GratingGeometry
    model: ClusterModel
    k2_min: float
    k2_max: float
    n_samples: int
    sigma_k2: float = 0.0
    outputs: frozenset = frozenset({"csv"})
    # optional comparison curve (label, geometry, model)
    reference: Optional[tuple[str, GratingGeometry, ClusterModel]] = None
    log_scale: bool = False

    def __post_init__(self):
        if not self.k2_min < self.k2_max:
            raise ConfigError("require k2_min < k2_max")
        if self.n_samples < 2:
            raise ConfigError("n_samples must be >= 2")
        if self.sigma_k2 < 0.0:
            raise ConfigError("sigma_k2 must be nonnegative")
        bad = set(self.outputs) - _ALLOWED_OUTPUTS
        if bad:
            raise ConfigError(f"unknown outputs {sorted(bad)}; allowed: {sorted(_ALLOWED_OUTPUTS)}")
        object.__setattr__(self, "outputs", frozenset(self.outputs))


@dataclass
class ScenarioReport:
    config: ScenarioConfig
    curves: list[tuple[str, DiffractionPattern]]
    peaks: dict[str, list[PeakRecord]]
    files: list[str] = field(default_factory=list)


def _model_label(model: ClusterModel) -> str:
    if isinstance(model, PointParticle):
        return "point"
    if isinstance(model, IsotropicExponential):
        return "dimer"
    return "tabulated"


def _fig2() -> ScenarioConfig:
    geometry = GratingGeometry(period_d=50.0, slit_s=25.0, num_bars=1)
    return ScenarioConfig(
        scenario_name="fig2",
        geometry=geometry,
        model=default_dimer_model(),
        k2_min=1e-3,
        k2_max=1.2,
        n_samples=1201,
        outputs=frozenset({"csv", "svg"}),
        reference=("point", geometry, PointParticle()),
        log_scale=True,
    )


def _fig3() -> ScenarioConfig:
    geometry = GratingGeometry(period_d=50.0, slit_s=25.0, num_bars=1)
    ref_geometry = GratingGeometry(period_d=50.0, slit_s=22.2, num_bars=1)
    return ScenarioConfig(
        scenario_name="fig3",
        geometry=geometry,
        model=default_dimer_model(),
        k2_min=1e-3,
        k2_max=0.45,
        n_samples=901,
        outputs=frozenset({"csv", "svg"}),
        reference=("point_wide_bar", ref_geometry, PointParticle()),
        log_scale=True,
    )


def _fig4() -> ScenarioConfig:
    geometry = GratingGeometry(period_d=100.0, slit_s=50.0, num_bars=20)
    return ScenarioConfig(
        scenario_name="fig4",
        geometry=geometry,
        model=default_dimer_model(),
        k2_min=-0.25,
        k2_max=0.25,
        n_samples=1601,
        outputs=frozenset({"csv", "svg", "peaks"}),
        reference=("point", geometry, PointParticle()),
        log_scale=True,
    )


def _fig5() -> ScenarioConfig:
    geometry = GratingGeometry(period_d=50.0, slit_s=25.0, num_bars=20)
    return ScenarioConfig(
        scenario_name="fig5",
        geometry=geometry,
        model=default_dimer_model(),
        k2_min=-0.6,
        k2_max=0.6,
        n_samples=1921,
        outputs=frozenset({"csv", "svg", "peaks"}),
        reference=("point", geometry, PointParticle()),
        log_scale=True,
    )


PRESETS: dict[str, Callable[[], ScenarioConfig]] = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
}


def preset_config(name: str) -> ScenarioConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None


def _parse_model(section) -> ClusterModel:
    variant = section.get("variant", "exponential").strip().lower()
    if variant == "point":
        return PointParticle()
    if variant == "exponential":
        kappa = section.getfloat("kappa", fallback=default_dimer_model().kappa)
        return IsotropicExponential(kappa=kappa)
    if variant == "tabulated":
        path = section.get("samples_path")
        if not path:
            raise ConfigError("tabulated model requires samples_path")
        return load_tabulated_density(path)
    raise ConfigError(f"unknown model variant {variant!r}")


def _parse_geometry(section) -> GratingGeometry:
    try:
        return GratingGeometry(
            period_d=section.getfloat("period_d"),
            slit_s=section.getfloat("slit_s"),
            num_bars=section.getint("num_bars", fallback=1),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid geometry: {exc}") from exc


def load_config(path) -> ScenarioConfig:
    """Parse a scenario config file (flat key=value text with sections)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "scenario" not in parser or "geometry" not in parser:
        raise ConfigError("config needs [scenario] and [geometry] sections")
    scen = parser["scenario"]
    geometry = _parse_geometry(parser["geometry"])
    model = _parse_model(parser["model"]) if "model" in parser else default_dimer_model()
    reference = None
    if "reference" in parser:
        ref = parser["reference"]
        ref_geom = GratingGeometry(
            period_d=ref.getfloat("period_d", fallback=geometry.period_d),
            slit_s=ref.getfloat("slit_s", fallback=geometry.slit_s),
            num_bars=ref.getint("num_bars", fallback=geometry.num_bars),
        )
        reference = (ref.get("label", "reference"), ref_geom, _parse_model(ref))
    outputs = frozenset(
        token.strip()
        for token in scen.get("outputs", "csv").split(",")
        if token.strip()
    )
    try:
        return ScenarioConfig(
            scenario_name=scen.get("scenario_name", Path(path).stem),
            geometry=geometry,
            model=model,
            k2_min=scen.getfloat("k2_min"),
            k2_max=scen.getfloat("k2_max"),
            n_samples=scen.getint("n_samples"),
            sigma_k2=scen.getfloat("sigma_k2", fallback=0.0),
            outputs=outputs,
            reference=reference,
            log_scale=scen.getboolean("log_scale", fallback=False),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid scenario section: {exc}") from exc


def resolve_config(name_or_path: str, overrides: Optional[dict] = None) -> ScenarioConfig:
    """Look up a preset by name or load a config file, then apply overrides."""
    if name_or_path in PRESETS:
        config = preset_config(name_or_path)
    elif Path(name_or_path).exists():
        config = load_config(name_or_path)
    else:
        raise ConfigError(f"{name_or_path!r} is neither a preset nor a config file")
    if overrides:
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if "outputs" in overrides:
            overrides["outputs"] = frozenset(overrides["outputs"])
        config = replace(config, **overrides)
    return config


def run_scenario(config: ScenarioConfig, out_dir=None) -> ScenarioReport:
    """Compute all configured curves, extract peaks, and write artifacts.

    Deterministic for identical config.  Files are written only when
    out_dir is given and the corresponding output format is requested.
    """
    grid = np.linspace(config.k2_min, config.k2_max, config.n_samples)
    jobs = [(_model_label(config.model), config.geometry, config.model)]
    if config.reference is not None:
        jobs.append(config.reference)
    curves: list[tuple[str, DiffractionPattern]] = []
    for label, geometry, model in jobs:
        pattern = coherent_intensity(model, geometry, grid)
        if config.sigma_k2 > 0.0:
            pattern = convolve_beam_spread(pattern, config.sigma_k2)
        curves.append((label, pattern))
    peaks: dict[str, list[PeakRecord]] = {}
    if "peaks" in config.outputs:
        for label, pattern in curves:
            peaks[label] = find_peaks(pattern)
    report = ScenarioReport(config=config, curves=curves, peaks=peaks)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if "csv" in config.outputs:
            for label, pattern in curves:
                path = out / f"{config.scenario_name}_{label}.csv"
                emit.write_csv(pattern, path)
                report.files.append(str(path))
        if "svg" in config.outputs:
            path = out / f"{config.scenario_name}.svg"
            emit.write_svg(curves, path, log_scale=config.log_scale)
            report.files.append(str(path))
        if "peaks" in config.outputs:
            path = out / f"{config.scenario_name}_peaks.csv"
            emit.write_peaks_csv(peaks, path)
            report.files.append(str(path))
    return report
