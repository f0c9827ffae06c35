"""Reduced single-bar amplitudes for clusters and point particles.

In the reduced convention the point-particle single-bar amplitude is

    A_pt(K2; a) = sin(K2 a / 2) / K2        (units nm),

and the cluster amplitude folds the bound-state marginal density in
through two terms,

    A_mol(K2; a) = (2/K2) [ sin(K2 a/2) F(K2) - Edge(K2; a) ],
    Edge(K2; a)  = integral_0^a rho(x2) sin[(K2/2)(a - x2)] dx2,

with F the density Fourier transform.  A_mol reduces exactly to A_pt
when the density contracts to a point; the delta sitting on the
integration boundary of the edge term then carries half weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import (
    exponential_cutoff,
    fourier_density,
    marginal_density,
    mean_abs_x2,
    singular_split_point,
)
from .model import ClusterModel, IsotropicExponential, PointParticle, TabulatedDensity
from .quadrature import QuadratureSpec, integrate_adaptive

__all__ = [
    "SingleBarResult",
    "FitError",
    "point_bar_amplitude",
    "edge_term",
    "mol_bar_amplitude",
    "effective_bar_width",
    "fit_effective_width",
]

# Below this |K2| the removable singularity is evaluated by its series limit.
_K2_LIMIT = 1e-6

_GL4_X, _GL4_W = np.polynomial.legendre.leggauss(4)


class FitError(RuntimeError):
    """Raised when the effective-width fit cannot bracket an interior minimum."""


@dataclass(frozen=True)
class SingleBarResult:
    """Single-bar amplitudes at one K2 together with their building blocks."""

    k2: float
    amp_point: complex
    amp_mol: complex
    fourier_term: complex
    edge_term: float


def point_bar_amplitude(k2: float, bar_a: float) -> complex:
    """Point-particle single-bar amplitude sin(K2 a/2)/K2; limit a/2 at K2 = 0."""
    if not bar_a > 0.0:
        raise ValueError("bar width must be positive")
    if abs(k2) < _K2_LIMIT:
        # sin(ka/2)/k = a/2 - k^2 a^3 / 48 + O(k^4)
        return complex(0.5 * bar_a - k2 * k2 * bar_a**3 / 48.0, 0.0)
    return complex(math.sin(0.5 * k2 * bar_a) / k2, 0.0)


def _edge_segments(kappa: float, bar_a: float, chunk: float = 30.0) -> list[tuple[float, float]]:
    eps = min(singular_split_point(kappa), bar_a)
    pts = [0.0, eps]
    x = eps
    while x < bar_a:
        x = min(x + chunk, bar_a)
        pts.append(x)
    return list(zip(pts[:-1], pts[1:]))


def _edge_exponential(
    model: IsotropicExponential, k2: float, bar_a: float, spec: QuadratureSpec
) -> float:
    def integrand(x: float) -> float:
        return marginal_density(model, x) * math.sin(0.5 * k2 * (bar_a - x))

    return sum(
        integrate_adaptive(integrand, a, b, spec)
        for a, b in _edge_segments(model.kappa, bar_a)
    )


def _edge_tabulated(model: TabulatedDensity, k2: float, bar_a: float) -> float:
    # rho is piecewise linear, so composite 4-point Gauss per sample
    # segment is exact to rounding for the smooth sin factor.
    hi = min(bar_a, float(model.x2[-1]))
    if hi <= 0.0:
        return 0.0
    inner = model.x2[(model.x2 > 0.0) & (model.x2 < hi)]
    pts = np.concatenate(([0.0], inner, [hi]))
    mid = 0.5 * (pts[:-1] + pts[1:])
    half = 0.5 * (pts[1:] - pts[:-1])
    nodes = mid[:, None] + half[:, None] * _GL4_X[None, :]
    weights = half[:, None] * _GL4_W[None, :]
    rho = np.interp(nodes, model.x2, model.rho, left=0.0, right=0.0)
    return float(np.sum(weights * rho * np.sin(0.5 * k2 * (bar_a - nodes))))


def edge_term(
    model: ClusterModel,
    k2: float,
    bar_a: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Edge integral integral_0^a rho(x2) sin[(K2/2)(a - x2)] dx2.

    For a point particle the boundary delta carries half weight:
    (1/2) sin(K2 a/2).
    """
    if not bar_a > 0.0:
        raise ValueError("bar width must be positive")
    if isinstance(model, PointParticle):
        return 0.5 * math.sin(0.5 * k2 * bar_a)
    if k2 == 0.0:
        return 0.0
    if isinstance(model, IsotropicExponential):
        return _edge_exponential(model, k2, bar_a, spec)
    return _edge_tabulated(model, k2, bar_a)


def _partial_moments(model: ClusterModel, bar_a: float) -> tuple[float, float]:
    """(integral_0^a rho, integral_0^a x rho) for the K2 -> 0 limit."""
    if isinstance(model, IsotropicExponential):
        spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14)
        upper = min(bar_a, exponential_cutoff(model.kappa))
        i0 = sum(
            integrate_adaptive(lambda x: marginal_density(model, x), a, b, spec)
            for a, b in _edge_segments(model.kappa, upper)
        )
        i1 = sum(
            integrate_adaptive(lambda x: x * marginal_density(model, x), a, b, spec)
            for a, b in _edge_segments(model.kappa, upper)
        )
        return i0, i1
    hi = min(bar_a, float(model.x2[-1]))
    if hi <= 0.0:
        return 0.0, 0.0
    inner = model.x2[(model.x2 > 0.0) & (model.x2 < hi)]
    pts = np.concatenate(([0.0], inner, [hi]))
    rho = np.interp(pts, model.x2, model.rho)
    i0 = float(np.trapezoid(rho, pts))
    # x*rho is piecewise quadratic; Simpson per segment is exact.
    mid = 0.5 * (pts[:-1] + pts[1:])
    rho_mid = np.interp(mid, model.x2, model.rho)
    h = np.diff(pts)
    i1 = float(np.sum(h / 6.0 * (pts[:-1] * rho[:-1] + 4.0 * mid * rho_mid + pts[1:] * rho[1:])))
    return i0, i1


def mol_bar_amplitude(
    model: ClusterModel,
    k2: float,
    bar_a: float,
    fourier_via: str = "closed",
    spec: QuadratureSpec = QuadratureSpec(),
) -> SingleBarResult:
    """Reduced single-bar amplitude A_mol(K2; a) for the given cluster model.

    |K2| below 1e-6 nm^-1 is evaluated through the analytic limit
    A_mol(0) = a (1 - I0) + I1 with I0, I1 the partial density moments on
    [0, a].  A PointParticle reproduces point_bar_amplitude exactly.
    """
    if not bar_a > 0.0:
        raise ValueError("bar width must be positive")
    amp_pt = point_bar_amplitude(k2, bar_a)
    if isinstance(model, PointParticle):
        return SingleBarResult(
            k2=k2,
            amp_point=amp_pt,
            amp_mol=amp_pt,
            fourier_term=1.0 + 0.0j,
            edge_term=edge_term(model, k2, bar_a),
        )
    fourier = fourier_density(model, k2, via=fourier_via)
    edge = edge_term(model, k2, bar_a, spec)
    if abs(k2) < _K2_LIMIT:
        i0, i1 = _partial_moments(model, bar_a)
        amp = complex(bar_a * (1.0 - i0) + i1, 0.0)
    else:
        amp = (2.0 / k2) * (math.sin(0.5 * k2 * bar_a) * fourier - edge)
    return SingleBarResult(
        k2=k2, amp_point=amp_pt, amp_mol=amp, fourier_term=fourier, edge_term=edge
    )


def effective_bar_width(model: ClusterModel, bar_a: float) -> float:
    """Point-particle bar width a + <|x2|> mimicking the cluster at small K2."""
    if not bar_a > 0.0:
        raise ValueError("bar width must be positive")
    return bar_a + mean_abs_x2(model)


def _golden_section(f, lo: float, hi: float, tol: float) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    inv_phi2 = (3.0 - math.sqrt(5.0)) / 2.0
    h = hi - lo
    n = max(1, int(math.ceil(math.log(tol / h) / math.log(inv_phi))))
    c = lo + inv_phi2 * h
    d = lo + inv_phi * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc < yd:
            hi, d, yd = d, c, yc
            h *= inv_phi
            c = lo + inv_phi2 * h
            yc = f(c)
        else:
            lo, c, yc = c, d, yd
            h *= inv_phi
            d = lo + inv_phi * h
            yd = f(d)
    return 0.5 * (lo + hi)


def fit_effective_width(
    pattern_small_k2: Sequence[tuple[float, float]], bar_a_init: float
) -> float:
    """Least-squares effective bar width from small-K2 amplitude samples.

    Minimizes sum (|A_pt(K2; a)| - |A|)^2 over a in [bar_a_init/2,
    2*bar_a_init] by golden-section search.  Deterministic for fixed
    input; raises FitError when fewer than 5 distinct-K2 samples are
    given or the minimum sits on the bracket boundary.
    """
    if not bar_a_init > 0.0:
        raise ValueError("bar_a_init must be positive")
    samples = [(float(k), float(y)) for k, y in pattern_small_k2]
    k2s = [k for k, _ in samples]
    if len(samples) < 5 or len(set(k2s)) < 5:
        raise FitError("need at least 5 samples at distinct K2")
    if any(k <= 0.0 for k in k2s):
        raise FitError("samples must lie at K2 > 0")

    def objective(a: float) -> float:
        return sum((abs(point_bar_amplitude(k, a)) - y) ** 2 for k, y in samples)

    lo = 0.5 * bar_a_init
    hi = 2.0 * bar_a_init
    best = _golden_section(objective, lo, hi, tol=1e-10 * bar_a_init)
    span = hi - lo
    if best - lo < 1e-4 * span or hi - best < 1e-4 * span:
        raise FitError(
            f"no interior minimum in [{lo}, {hi}]; best width {best} sits on the bracket edge"
        )
    return best
