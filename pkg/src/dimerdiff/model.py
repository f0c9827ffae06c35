"""Domain types and physical-parameter conversions.

Units are fixed across the package: lengths in nm, lateral wavenumbers
K2 in nm^-1, energies in microelectronvolt, masses in unified atomic
mass units.  Amplitudes are kept in the reduced convention in which the
point-particle single-bar amplitude is sin(K2*a/2)/K2 (units nm); the
overall dimensional prefactor cancels in normalized intensities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import constants

__all__ = [
    "GratingGeometry",
    "PointParticle",
    "IsotropicExponential",
    "TabulatedDensity",
    "ClusterModel",
    "BeamParams",
    "kappa_from_binding_energy",
    "angle_to_k2",
    "default_dimer_model",
    "binding_derived_dimer_model",
    "HE_ATOM_MASS_U",
    "HE2_BINDING_ENERGY_UEV",
    "DEFAULT_MEAN_ABS_X2_NM",
]

HE_ATOM_MASS_U = 4.002602
HE2_BINDING_ENERGY_UEV = 0.11

# The only printed moment of the dimer ground state: <|x2|> = 2.8 nm.
DEFAULT_MEAN_ABS_X2_NM = 2.8


@dataclass(frozen=True)
class GratingGeometry:
    """Transmission grating: num_bars bars of period period_d and slit width slit_s.

    The bar width a = period_d - slit_s is derived.
    """

    period_d: float
    slit_s: float
    num_bars: int = 1

    def __post_init__(self):
        if not (0.0 < self.slit_s < self.period_d):
            raise ValueError(
                f"slit width must satisfy 0 < s < d, got s={self.slit_s}, d={self.period_d}"
            )
        if int(self.num_bars) != self.num_bars or self.num_bars < 1:
            raise ValueError(f"num_bars must be a positive integer, got {self.num_bars}")

    @property
    def bar_a(self) -> float:
        """Bar width a = d - s in nm."""
        return self.period_d - self.slit_s


@dataclass(frozen=True)
class PointParticle:
    """Structureless particle: the bound-state density contracted to a point.

    Its density is a delta function and is always handled analytically,
    never evaluated pointwise.
    """


@dataclass(frozen=True)
class IsotropicExponential:
    """Isotropic exponential bound state |phi(r)|^2 = (kappa/2pi) exp(-2 kappa r)/r^2.

    kappa is the asymptotic decay constant in nm^-1.  The lateral marginal
    density is kappa*E1(2 kappa |x2|) with a logarithmic (integrable)
    divergence at x2 = 0, and <|x2|> = 1/(4 kappa).
    """

    kappa: float

    def __post_init__(self):
        if not self.kappa > 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class TabulatedDensity:
    """Marginal density given as samples (x2 in nm, rho in nm^-1).

    Samples must be symmetric under x2 -> -x2, nonnegative, and
    trapezoid-normalized to one within 1e-6.  Evaluation interpolates
    linearly inside the sample range and is zero outside.
    """

    x2: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x2, dtype=float)
        r = np.asarray(self.rho, dtype=float)
        if x.ndim != 1 or x.shape != r.shape or x.size < 2:
            raise ValueError("need matching 1-d sample arrays with at least 2 points")
        if not np.all(np.diff(x) > 0.0):
            raise ValueError("x2 samples must be strictly increasing")
        if np.any(r < 0.0):
            raise ValueError("density samples must be nonnegative")
        scale = max(abs(x[0]), abs(x[-1]))
        if not np.allclose(x + x[::-1], 0.0, atol=1e-9 * scale):
            raise ValueError("sample grid must be symmetric under x2 -> -x2")
        if not np.allclose(r, r[::-1], rtol=1e-9, atol=1e-12 * max(r.max(), 1.0)):
            raise ValueError("density samples must be even in x2")
        norm = np.trapezoid(r, x)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"trapezoid normalization is {norm}, must be 1 within 1e-6")
        x.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "x2", x)
        object.__setattr__(self, "rho", r)


ClusterModel = Union[PointParticle, IsotropicExponential, TabulatedDensity]


@dataclass(frozen=True)
class BeamParams:
    """Incident-beam parameters: de Broglie wavelength (nm) and K2 spread (nm^-1)."""

    de_broglie_wavelength: float
    sigma_k2: float = 0.0

    def __post_init__(self):
        if not self.de_broglie_wavelength > 0.0:
            raise ValueError("de Broglie wavelength must be positive")
        if self.sigma_k2 < 0.0:
            raise ValueError("sigma_k2 must be nonnegative")


def kappa_from_binding_energy(binding_energy_abs: float, atom_mass: float) -> float:
    """Asymptotic decay constant kappa = sqrt(m |E|)/hbar for an equal-mass dimer.

    binding_energy_abs in microeV, atom_mass in u (the reduced mass is
    atom_mass/2, hence kappa = sqrt(2 * (m/2) * |E|)/hbar).  Returns nm^-1.
    """
    if not binding_energy_abs > 0.0:
        raise ValueError("binding energy magnitude must be positive")
    if not atom_mass > 0.0:
        raise ValueError("atom mass must be positive")
    energy_j = binding_energy_abs * 1e-6 * constants.electron_volt
    mass_kg = atom_mass * constants.atomic_mass
    kappa_per_m = math.sqrt(mass_kg * energy_j) / constants.hbar
    return kappa_per_m * 1e-9


def angle_to_k2(wavelength: float, angle_phi: float) -> float:
    """Lateral wavenumber K2 = (2 pi / lambda) sin(phi) in nm^-1."""
    if not wavelength > 0.0:
        raise ValueError("wavelength must be positive")
    return (2.0 * math.pi / wavelength) * math.sin(angle_phi)


def default_dimer_model() -> IsotropicExponential:
    """Exponential dimer model pinned to <|x2|> = 2.8 nm."""
    return IsotropicExponential(kappa=1.0 / (4.0 * DEFAULT_MEAN_ABS_X2_NM))


def binding_derived_dimer_model() -> IsotropicExponential:
    """Alternative preset with kappa derived from the 0.11 microeV binding energy."""
    return IsotropicExponential(
        kappa=kappa_from_binding_energy(HE2_BINDING_ENERGY_UEV, HE_ATOM_MASS_U)
    )
