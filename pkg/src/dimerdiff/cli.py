"""Command-line front end.

The CLI is a thin client of the HTTP service: it builds a request from a
preset name or config file plus flag overrides, posts it to the service
(in-process by default, or a remote server with --server), and writes
the requested CSV/SVG/peak artifacts from the response.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import emit
from .model import (
    GratingGeometry,
    IsotropicExponential,
    PointParticle,
    TabulatedDensity,
)
from .pattern import DiffractionPattern, PeakRecord
from .scenarios import ConfigError, PRESETS, ScenarioConfig, resolve_config


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _model_to_spec(model) -> dict:
    if isinstance(model, PointParticle):
        return {"variant": "point"}
    if isinstance(model, IsotropicExponential):
        return {"variant": "exponential", "kappa": model.kappa}
    assert isinstance(model, TabulatedDensity)
    return {
        "variant": "tabulated",
        "samples": [[float(x), float(r)] for x, r in zip(model.x2, model.rho)],
    }


def _geometry_to_spec(geometry: GratingGeometry) -> dict:
    return {
        "period_d": geometry.period_d,
        "slit_s": geometry.slit_s,
        "num_bars": geometry.num_bars,
    }


def _config_to_request(config: ScenarioConfig) -> dict:
    req = {
        "scenario_name": config.scenario_name,
        "geometry": _geometry_to_spec(config.geometry),
        "model": _model_to_spec(config.model),
        "k2_min": config.k2_min,
        "k2_max": config.k2_max,
        "n_samples": config.n_samples,
        "sigma_k2": config.sigma_k2,
    }
    if config.reference is not None:
        label, geometry, model = config.reference
        req["reference"] = {
            "label": label,
            "geometry": _geometry_to_spec(geometry),
            "model": _model_to_spec(model),
        }
    return req


def _scenario_request(args) -> tuple[dict, ScenarioConfig]:
    overrides = {
        "k2_min": args.k2_min,
        "k2_max": args.k2_max,
        "n_samples": args.n_samples,
        "sigma_k2": args.sigma_k2,
    }
    if getattr(args, "formats", None):
        overrides["outputs"] = frozenset(
            token.strip() for token in args.formats.split(",") if token.strip()
        )
    config = resolve_config(args.scenario, overrides)
    return _config_to_request(config), config


def _curves_from_response(payload: dict) -> list[tuple[str, DiffractionPattern]]:
    curves = []
    for c in payload["curves"]:
        geometry = GratingGeometry(c["period_d"], c["slit_s"], c["num_bars"])
        amp = np.asarray(c["amp_re_nm"]) + 1j * np.asarray(c["amp_im_nm"])
        pattern = DiffractionPattern(
            np.asarray(c["k2_nm_inv"]), amp, np.asarray(c["intensity"]), geometry, None
        )
        curves.append((c["label"], pattern))
    return curves


def _peaks_from_response(payload: dict) -> dict[str, list[PeakRecord]]:
    out: dict[str, list[PeakRecord]] = {}
    for label, records in payload["peaks"].items():
        out[label] = [
            PeakRecord(
                order_n=r["order_n"],
                k2_location=r["k2_location"],
                height=r["height"],
                fwhm=r["fwhm"] if r["fwhm"] is not None else math.nan,
            )
            for r in records
        ]
    return out


def _post(client, url: str, body: dict, **kwargs) -> dict:
    response = client.post(url, json=body, **kwargs)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise RuntimeError(f"service error ({response.status_code}): {detail}")
    return response.json()


def _cmd_run(args) -> int:
    request, config = _scenario_request(args)
    want_peaks = "peaks" in config.outputs
    with _client(args.server) as client:
        payload = _post(client, "/run", request, params={"include_peaks": want_peaks})
    curves = _curves_from_response(payload)
    peaks = _peaks_from_response(payload)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in config.outputs:
        for label, pattern in curves:
            path = out / f"{config.scenario_name}_{label}.csv"
            emit.write_csv(pattern, path)
            written.append(path)
    if "svg" in config.outputs:
        path = out / f"{config.scenario_name}.svg"
        emit.write_svg(curves, path, log_scale=config.log_scale)
        written.append(path)
    if want_peaks:
        path = out / f"{config.scenario_name}_peaks.csv"
        emit.write_peaks_csv(peaks, path)
        written.append(path)
    for path in written:
        print(path)
    _print_peak_table(peaks)
    return 0


def _print_peak_table(peaks: dict[str, list[PeakRecord]]) -> None:
    if not peaks:
        return
    print("label,order_n,k2_nm_inv,height_rel,fwhm_nm_inv")
    for label in sorted(peaks):
        for rec in peaks[label]:
            print(
                f"{label},{rec.order_n},{rec.k2_location:.11e},"
                f"{rec.height:.11e},{rec.fwhm:.11e}"
            )


def _cmd_peaks(args) -> int:
    request, _config = _scenario_request(args)
    with _client(args.server) as client:
        payload = _post(client, "/peaks", request)
    _print_peak_table(_peaks_from_response(payload))
    return 0


def _read_samples(path) -> list[list[float]]:
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.replace(",", " ").split()
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected two columns")
            samples.append([float(parts[0]), float(parts[1])])
    return samples


def _cmd_fit_width(args) -> int:
    samples = _read_samples(args.samples)
    with _client(args.server) as client:
        payload = _post(
            client, "/fit-width", {"samples": samples, "bar_a_init": args.bar_a_init}
        )
    print(f"{payload['effective_width_nm']:.6f}")
    return 0


def _cmd_presets(args) -> int:
    with _client(args.server) as client:
        response = client.get("/presets")
        response.raise_for_status()
    for info in response.json():
        print(
            f"{info['name']}: d={info['period_d']} nm, s={info['slit_s']} nm, "
            f"N={info['num_bars']}, K2 in [{info['k2_min']}, {info['k2_max']}], "
            f"{info['n_samples']} samples"
        )
    return 0


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", help="preset name or config file path")
    parser.add_argument("--k2-min", type=float, default=None)
    parser.add_argument("--k2-max", type=float, default=None)
    parser.add_argument("--n-samples", type=int, default=None)
    parser.add_argument("--sigma-k2", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimerdiff",
        description="Diffraction of weakly bound clusters by transmission gratings",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; defaults to in-process execution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write artifacts")
    _add_scenario_args(p_run)
    p_run.add_argument("--out-dir", default=".", help="output directory")
    p_run.add_argument(
        "--formats", default=None, help="comma list of outputs: csv,svg,peaks"
    )
    p_run.set_defaults(func=_cmd_run)

    p_peaks = sub.add_parser("peaks", help="print the extracted peak table")
    _add_scenario_args(p_peaks)
    p_peaks.set_defaults(func=_cmd_peaks)

    p_fit = sub.add_parser("fit-width", help="fit an effective bar width to samples")
    p_fit.add_argument("samples", help="two-column file of (K2 1/nm, |A| nm)")
    p_fit.add_argument("--bar-a-init", type=float, required=True)
    p_fit.set_defaults(func=_cmd_fit_width)

    p_presets = sub.add_parser("presets", help="list available presets")
    p_presets.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
