"""CSV and SVG emission for diffraction patterns."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .pattern import DiffractionPattern, PeakRecord

__all__ = ["write_csv", "write_svg", "write_peaks_csv", "csv_text"]

CSV_HEADER = "k2_nm_inv,amp_re_nm,amp_im_nm,intensity"

_LOG_FLOOR = 1e-8

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _fmt(x: float) -> str:
    """12 significant digits, locale-free."""
    return f"{x:.11e}"


def csv_text(pattern: DiffractionPattern) -> str:
    lines = [CSV_HEADER]
    for k2, amp, inten in zip(pattern.k2_grid, pattern.amplitude, pattern.intensity):
        lines.append(f"{_fmt(k2)},{_fmt(amp.real)},{_fmt(amp.imag)},{_fmt(inten)}")
    return "\n".join(lines) + "\n"


def write_csv(pattern: DiffractionPattern, path) -> None:
    """Write one row per grid point: k2_nm_inv,amp_re_nm,amp_im_nm,intensity."""
    try:
        Path(path).write_text(csv_text(pattern), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def write_peaks_csv(peaks: dict[str, list[PeakRecord]], path) -> None:
    lines = ["label,order_n,k2_nm_inv,height_rel,fwhm_nm_inv"]
    for label in sorted(peaks):
        for rec in peaks[label]:
            lines.append(
                f"{label},{rec.order_n},{_fmt(rec.k2_location)},"
                f"{_fmt(rec.height)},{_fmt(rec.fwhm)}"
            )
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write peak table to {path}: {exc}") from exc


def _svg_document(
    curves: Sequence[tuple[str, DiffractionPattern]], log_scale: bool
) -> str:
    width, height = 800.0, 520.0
    ml, mr, mt, mb = 70.0, 20.0, 20.0, 50.0
    pw, ph = width - ml - mr, height - mt - mb

    k2_lo = min(p.k2_grid[0] for _, p in curves)
    k2_hi = max(p.k2_grid[-1] for _, p in curves)

    def yval(i: float) -> float:
        if log_scale:
            return math.log10(max(i, _LOG_FLOOR))
        return i

    y_lo = min(yval(float(np.min(p.intensity))) for _, p in curves)
    y_hi = max(yval(float(np.max(p.intensity))) for _, p in curves)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(k2: float) -> float:
        return ml + (k2 - k2_lo) / (k2_hi - k2_lo) * pw

    def py(i: float) -> float:
        return mt + (y_hi - yval(i)) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:g}" height="{height:g}" viewBox="0 0 {width:g} {height:g}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    # ticks at the diffraction orders K2 = 2 pi n / d of the first curve
    d = curves[0][1].geometry.period_d
    spacing = 2.0 * math.pi / d
    n_lo = math.ceil(k2_lo / spacing)
    n_hi = math.floor(k2_hi / spacing)
    for n in range(n_lo, n_hi + 1):
        x = px(n * spacing)
        parts.append(
            f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 6}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{mt + ph + 20}" font-size="12" text-anchor="middle">{n}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2:.2f}" y="{height - 12}" font-size="13" '
        f'text-anchor="middle">diffraction order (K2 = 2 pi n / d)</text>'
    )
    ylabel = "log10 intensity" if log_scale else "intensity"
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2:.2f})">{ylabel}</text>'
    )
    for idx, (label, pattern) in enumerate(curves):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(
            f"{px(float(k)):.2f},{py(float(i)):.2f}"
            for k, i in zip(pattern.k2_grid, pattern.intensity)
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.2" '
            f'data-label="{label}" points="{points}"/>'
        )
        parts.append(
            f'<text x="{ml + 10}" y="{mt + 16 + 16 * idx}" font-size="12" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(
    curves: Sequence[tuple[str, DiffractionPattern]], path, log_scale: bool = False
) -> None:
    """Standalone SVG 1.1 with one polyline per labeled pattern.

    Axis ticks sit at the diffraction orders; with log_scale the
    intensity axis is log10, clipped at 1e-8.
    """
    if not curves:
        raise ValueError("need at least one pattern to plot")
    try:
        Path(path).write_text(_svg_document(curves, log_scale), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
