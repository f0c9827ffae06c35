"""Full grating diffraction patterns: grating function, coherent
intensity, beam-spread convolution, and peak extraction.

The coherent amplitude factorizes into the single-bar amplitude times
the N-bar grating function sin(N K2 d/2)/sin(K2 d/2), whose principal
maxima sit at K2 = 2 pi n / d for every cluster model.  Intensities are
normalized so the zeroth-order value is 1; only relative heights are
physical here.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .amplitude import mol_bar_amplitude
from .density import mean_abs_x2
from .model import ClusterModel, GratingGeometry, PointParticle
from .quadrature import QuadratureSpec

__all__ = [
    "DiffractionPattern",
    "PeakRecord",
    "ResolutionError",
    "NonUniformGridError",
    "grating_function",
    "coherent_phase_sum",
    "coherent_intensity",
    "convolve_beam_spread",
    "find_peaks",
]

# Two-term split of pi for accurate reduction of K2 d/2 modulo pi.
_PI_HI = 3.141592653589793
_PI_LO = 1.2246467991473532e-16


class ResolutionError(ValueError):
    """K2 grid too coarse to resolve the grating function."""


class NonUniformGridError(ValueError):
    """Operation requires a uniformly spaced K2 grid."""


@dataclass(frozen=True)
class DiffractionPattern:
    """Sampled diffraction pattern on a sorted K2 grid."""

    k2_grid: np.ndarray
    amplitude: np.ndarray
    intensity: np.ndarray
    geometry: GratingGeometry
    model: Optional[ClusterModel]

    def __post_init__(self):
        k2 = np.asarray(self.k2_grid, dtype=float)
        amp = np.asarray(self.amplitude, dtype=complex)
        inten = np.asarray(self.intensity, dtype=float)
        if not (k2.shape == amp.shape == inten.shape) or k2.ndim != 1:
            raise ValueError("grid, amplitude, and intensity must be 1-d and equal length")
        if np.any(np.diff(k2) <= 0.0):
            raise ValueError("K2 grid must be strictly increasing")
        if np.any(inten < 0.0):
            raise ValueError("intensity must be nonnegative")
        for arr in (k2, amp, inten):
            arr.setflags(write=False)
        object.__setattr__(self, "k2_grid", k2)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "intensity", inten)


@dataclass(frozen=True)
class PeakRecord:
    """One extracted diffraction peak; height is relative to order 0."""

    order_n: int
    k2_location: float
    height: float
    fwhm: float


def _reduce_mod_pi(x: float) -> tuple[int, float]:
    """Nearest integer m and residual delta with x = m*pi + delta."""
    m = int(math.floor(x / math.pi + 0.5))
    delta = (x - m * _PI_HI) - m * _PI_LO
    return m, delta


def grating_function(k2: float, geometry: GratingGeometry) -> float:
    """N-bar interference factor sin(N K2 d/2)/sin(K2 d/2).

    Removable singularities at K2 d/2 = m pi return the limit
    N*(-1)^(m(N-1)); the limit branch triggers for |sin(K2 d/2)| < 1e-12.
    The residual of K2 d/2 modulo pi is computed with a two-term pi so
    numerator and denominator stay consistent near principal maxima.
    """
    n_bars = geometry.num_bars
    m, delta = _reduce_mod_pi(0.5 * k2 * geometry.period_d)
    sign = -1.0 if (m * (n_bars - 1)) % 2 else 1.0
    sd = math.sin(delta)
    if abs(sd) < 1e-12:
        return n_bars * sign
    return sign * math.sin(n_bars * delta) / sd


def coherent_phase_sum(k2: float, geometry: GratingGeometry) -> complex:
    """Bar-translation phase sum sum_{n=0}^{N-1} e^(-i n K2 d).

    Its modulus equals |grating_function| (geometric series identity).
    The phase K2 d = 2 m pi + 2 delta is reduced with the same two-term
    pi as the grating function; dropping the exact 2 pi multiples keeps
    the two routes comparable to full precision.
    """
    _, delta = _reduce_mod_pi(0.5 * k2 * geometry.period_d)
    return sum(cmath.exp(-2j * n * delta) for n in range(geometry.num_bars))


def coherent_intensity(
    model: ClusterModel,
    geometry: GratingGeometry,
    k2_grid,
    fourier_via: str = "closed",
    spec: QuadratureSpec = QuadratureSpec(),
) -> DiffractionPattern:
    """Coherent pattern |A_mol(K2) G_N(K2)|^2 normalized to 1 at K2 = 0.

    The incoherent term is dropped; that is justified only when slit and
    bar are larger than the cluster, otherwise a warning is emitted.
    """
    k2_grid = np.asarray(k2_grid, dtype=float)
    if not isinstance(model, PointParticle):
        cluster_size = 2.0 * mean_abs_x2(model)
        if min(geometry.slit_s, geometry.bar_a) < cluster_size:
            warnings.warn(
                "slit or bar width below the cluster size "
                f"({cluster_size:.3g} nm); dropping the incoherent term is "
                "not justified here",
                stacklevel=2,
            )
    amp = np.empty(k2_grid.shape, dtype=complex)
    for i, k2 in enumerate(k2_grid):
        single = mol_bar_amplitude(model, float(k2), geometry.bar_a, fourier_via, spec)
        amp[i] = single.amp_mol * grating_function(float(k2), geometry)
    amp0 = mol_bar_amplitude(model, 0.0, geometry.bar_a, fourier_via, spec).amp_mol
    norm = abs(amp0 * geometry.num_bars) ** 2
    intensity = np.abs(amp) ** 2 / norm
    return DiffractionPattern(k2_grid, amp, intensity, geometry, model)


def convolve_beam_spread(pattern: DiffractionPattern, sigma_k2: float) -> DiffractionPattern:
    """Convolve the intensity with a normalized Gaussian of std sigma_k2.

    The kernel is truncated at +-5 sigma on the pattern's (uniform) grid;
    integrated intensity is preserved up to edge truncation.  sigma_k2 = 0
    returns the input unchanged.  The amplitude samples are passed through
    untouched: after an incoherent momentum average only the intensity is
    meaningful.
    """
    if sigma_k2 < 0.0:
        raise ValueError("sigma_k2 must be nonnegative")
    if sigma_k2 == 0.0:
        return pattern
    steps = np.diff(pattern.k2_grid)
    dk = steps[0]
    if not np.allclose(steps, dk, rtol=1e-8, atol=0.0):
        raise NonUniformGridError("beam-spread convolution requires a uniform K2 grid")
    half = int(math.ceil(5.0 * sigma_k2 / dk))
    offsets = np.arange(-half, half + 1) * dk
    kernel = np.exp(-0.5 * (offsets / sigma_k2) ** 2)
    kernel /= kernel.sum()
    smeared = np.convolve(pattern.intensity, kernel, mode="same")
    return DiffractionPattern(
        pattern.k2_grid, pattern.amplitude, smeared, pattern.geometry, pattern.model
    )


def _fwhm(k2: np.ndarray, intensity: np.ndarray, idx: int) -> float:
    """Full width at half maximum around the local maximum at idx, by
    linear interpolation of the half-height crossings; nan if a crossing
    does not exist inside the grid."""
    half = 0.5 * intensity[idx]
    left = math.nan
    for i in range(idx, 0, -1):
        if intensity[i - 1] <= half:
            frac = (intensity[i] - half) / (intensity[i] - intensity[i - 1])
            left = k2[i] - frac * (k2[i] - k2[i - 1])
            break
    right = math.nan
    for i in range(idx, len(k2) - 1):
        if intensity[i + 1] <= half:
            frac = (intensity[i] - half) / (intensity[i] - intensity[i + 1])
            right = k2[i] + frac * (k2[i + 1] - k2[i])
            break
    return right - left


def find_peaks(pattern: DiffractionPattern) -> list[PeakRecord]:
    """Extract diffraction peaks as PeakRecords.

    Local maxima (leftmost point on plateaus) above 1e-6 of the
    zeroth-order peak are assigned order n = round(K2 d / 2 pi); maxima
    farther than one grid step from 2 pi n / d (grating-function
    sidelobes) are discarded, and heights are reported relative to the
    order-0 peak.  Requires grid step < 2 pi/(5 N d).
    """
    k2 = pattern.k2_grid
    intensity = pattern.intensity
    geometry = pattern.geometry
    step = float(np.max(np.diff(k2)))
    required = 2.0 * math.pi / (5.0 * geometry.num_bars * geometry.period_d)
    if step >= required:
        raise ResolutionError(
            f"grid step {step:.3g} does not resolve the grating function "
            f"(need < {required:.3g})"
        )
    # local maxima, leftmost grid point on plateaus
    candidates = []
    for i in range(1, len(k2) - 1):
        if intensity[i] > intensity[i - 1]:
            j = i
            while j + 1 < len(k2) and intensity[j + 1] == intensity[i]:
                j += 1
            if j + 1 < len(k2) and intensity[j + 1] < intensity[i]:
                candidates.append(i)
    spacing = 2.0 * math.pi / geometry.period_d
    by_order: dict[int, int] = {}
    for i in candidates:
        n = int(round(k2[i] / spacing))
        if abs(k2[i] - n * spacing) > step:
            continue  # sidelobe, not a principal maximum
        if n not in by_order or intensity[i] > intensity[by_order[n]]:
            by_order[n] = i
    if 0 not in by_order:
        raise ValueError("zeroth-order peak not found; grid must cover K2 = 0")
    zero_height = intensity[by_order[0]]
    records = []
    for n in sorted(by_order):
        i = by_order[n]
        if intensity[i] < 1e-6 * zero_height:
            continue
        records.append(
            PeakRecord(
                order_n=n,
                k2_location=float(k2[i]),
                height=float(intensity[i] / zero_height),
                fwhm=float(_fwhm(k2, intensity, i)),
            )
        )
    return records
