"""Diffraction of weakly bound two-particle clusters by transmission gratings."""

from .model import (
    BeamParams,
    ClusterModel,
    GratingGeometry,
    IsotropicExponential,
    PointParticle,
    TabulatedDensity,
    angle_to_k2,
    binding_derived_dimer_model,
    default_dimer_model,
    kappa_from_binding_energy,
)
from .quadrature import QuadratureConvergenceError, QuadratureSpec, integrate_adaptive, integrate_fixed
from .density import (
    MarginalDensity,
    density_normalization,
    exp1,
    fourier_density,
    load_tabulated_density,
    marginal_density,
    mean_abs_x2,
)
from .amplitude import (
    FitError,
    SingleBarResult,
    edge_term,
    effective_bar_width,
    fit_effective_width,
    mol_bar_amplitude,
    point_bar_amplitude,
)
from .pattern import (
    DiffractionPattern,
    NonUniformGridError,
    PeakRecord,
    ResolutionError,
    coherent_intensity,
    coherent_phase_sum,
    convolve_beam_spread,
    find_peaks,
    grating_function,
)
from .scenarios import PRESETS, ScenarioConfig, ScenarioReport, load_config, run_scenario

__version__ = "0.1.0"
