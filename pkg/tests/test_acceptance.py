"""Acceptance gate: one test per release criterion, each printing PASS/FAIL.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion
verdict lines on the console.
"""
import math

import numpy as np
import pytest

from dimerdiff.amplitude import (
    edge_term,
    fit_effective_width,
    mol_bar_amplitude,
    point_bar_amplitude,
)
from dimerdiff.density import (
    fourier_density,
    marginal_density,
    mean_abs_x2,
    singular_split_point,
)
from dimerdiff.model import (
    GratingGeometry,
    IsotropicExponential,
    PointParticle,
    default_dimer_model,
)
from dimerdiff.pattern import (
    coherent_intensity,
    coherent_phase_sum,
    find_peaks,
    grating_function,
)
from dimerdiff.quadrature import integrate_adaptive, integrate_fixed
from dimerdiff.scenarios import resolve_config, run_scenario

from conftest import make_gaussian_model

DIMER = default_dimer_model()


def _verdict(num: int, desc: str, ok: bool) -> None:
    print(f"[criterion {num:02d}] {desc}: {'PASS' if ok else 'FAIL'}")


def _aligned_grid(d: float, n_orders: int, per_spacing: int) -> np.ndarray:
    spacing = 2.0 * math.pi / d
    m = n_orders * per_spacing
    return np.arange(-m, m + 1) * (spacing / per_spacing)


def _peak_heights(model, geometry, n_orders=4, per_spacing=128):
    grid = _aligned_grid(geometry.period_d, n_orders, per_spacing)
    peaks = find_peaks(coherent_intensity(model, geometry, grid))
    step = float(np.max(np.diff(grid)))
    return {p.order_n: p for p in peaks}, step


def test_criterion_01_point_reduction_analytic():
    k2s = np.concatenate(([0.0], np.linspace(1e-4, 1.5, 40)))
    worst = max(
        abs(mol_bar_amplitude(PointParticle(), float(k), 25.0).amp_mol
            - point_bar_amplitude(float(k), 25.0))
        for k in k2s
    )
    ok = worst == 0.0
    _verdict(1, f"point model reduces exactly (worst dev {worst:.2e})", ok)
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="a width-1e-3 nm cluster differs from a point at first order in "
    "the cluster size: |A_mol - A_pt| has an analytic floor of "
    "|cos(K2 a/2)| <|x2|>/2 ~ 4e-4 nm, so agreement to 1e-8 nm is not "
    "attainable for any correct implementation; the companion machinery "
    "test below pins the quadrature path at 1e-6 against the closed "
    "Gaussian amplitude instead",
)
def test_criterion_01_point_reduction_narrow_cluster():
    model = make_gaussian_model(1e-3, n=4001, span=10.0)
    k2s = np.linspace(0.05, 1.0, 12)
    worst = max(
        abs(mol_bar_amplitude(model, float(k), 25.0).amp_mol
            - point_bar_amplitude(float(k), 25.0))
        for k in k2s
    )
    ok = worst <= 1e-8
    _verdict(1, f"width-1e-3 cluster matches point to 1e-8 (worst dev {worst:.2e})", ok)
    assert ok


def test_criterion_01_narrow_cluster_machinery():
    # closed Gaussian amplitude: F(K2) = exp(-K2^2 w^2/8) with the edge
    # term evaluated by scipy quadrature; checks the numeric pipeline at
    # the accuracy the physics allows
    from scipy.integrate import quad

    w = 1e-3
    model = make_gaussian_model(w, n=4001, span=10.0)
    norm = 1.0 / (w * math.sqrt(2.0 * math.pi))
    bar_a = 25.0
    worst = 0.0
    for k2 in np.linspace(0.05, 1.0, 12):
        fourier = math.exp(-(k2 * w) ** 2 / 8.0)
        edge, _ = quad(
            lambda x: norm * math.exp(-0.5 * (x / w) ** 2)
            * math.sin(0.5 * k2 * (bar_a - x)),
            0.0,
            10.0 * w,
            epsabs=1e-15,
        )
        expected = (2.0 / k2) * (math.sin(0.5 * k2 * bar_a) * fourier - edge)
        got = mol_bar_amplitude(model, float(k2), bar_a).amp_mol.real
        worst = max(worst, abs(got - expected))
    ok = worst <= 1e-6
    _verdict(1, f"narrow-cluster quadrature path to 1e-6 (worst dev {worst:.2e})", ok)
    assert ok


def test_criterion_02_mean_abs_x2():
    closed = mean_abs_x2(DIMER, via="closed")
    numeric = mean_abs_x2(DIMER, via="quadrature")
    ok = abs(closed - 2.800) <= 1e-6 and abs(numeric - closed) <= 1e-7 * closed
    _verdict(2, f"<|x2|> closed {closed:.9f} nm, numeric dev {abs(numeric - closed):.2e}", ok)
    assert ok


def test_criterion_03_effective_width_fit():
    k2s = np.linspace(0.01, 0.1, 10)
    samples = [(float(k), abs(mol_bar_amplitude(DIMER, float(k), 25.0).amp_mol))
               for k in k2s]
    fitted = fit_effective_width(samples, 25.0)
    ok = abs(fitted - 27.8) <= 0.3
    _verdict(3, f"fitted effective bar width {fitted:.4f} nm (target 27.8 +- 0.3)", ok)
    assert ok


def test_criterion_04_even_order_contrast():
    geometry = GratingGeometry(period_d=50.0, slit_s=25.0, num_bars=20)
    k2_order2 = 2.0 * (2.0 * math.pi / 50.0)
    grid = np.array([0.0, k2_order2])
    point = coherent_intensity(PointParticle(), geometry, grid).intensity[1]
    dimer = coherent_intensity(DIMER, geometry, grid).intensity[1]
    ok = point < 1e-10 and dimer > 1e-4
    _verdict(4, f"order-2 intensity: point {point:.2e}, dimer {dimer:.2e}", ok)
    assert ok


def test_criterion_05_peak_positions():
    ok = True
    details = []
    for num_bars, per_spacing in ((5, 32), (20, 128)):
        for d in (50.0, 100.0):
            geometry = GratingGeometry(period_d=d, slit_s=d / 2.0, num_bars=num_bars)
            spacing = 2.0 * math.pi / d
            for model in (PointParticle(), DIMER):
                heights, step = _peak_heights(
                    model, geometry, n_orders=4, per_spacing=per_spacing
                )
                worst = max(
                    abs(p.k2_location - p.order_n * spacing) for p in heights.values()
                )
                ok = ok and worst <= step
                details.append(f"{worst / step:.2f}")
    _verdict(5, f"peak offsets in grid steps: {', '.join(details)} (all <= 1)", ok)
    assert ok


def test_criterion_06_phase_sum_identity():
    geometry = GratingGeometry(period_d=50.0, slit_s=25.0, num_bars=20)
    rng = np.random.default_rng(2024)
    k2s = rng.uniform(-3.0, 3.0, 10_000)
    worst = max(
        abs(abs(grating_function(float(k), geometry))
            - abs(coherent_phase_sum(float(k), geometry)))
        for k in k2s
    )
    ok = worst <= 1e-12
    _verdict(6, f"|grating function| vs |phase sum|, worst dev {worst:.2e}", ok)
    assert ok


def test_criterion_07_third_order_suppression():
    geometry = GratingGeometry(period_d=50.0, slit_s=25.0, num_bars=20)
    point, _ = _peak_heights(PointParticle(), geometry)
    dimer, _ = _peak_heights(DIMER, geometry)
    reduction = 1.0 - dimer[3].height / point[3].height
    ok = 0.10 <= reduction <= 0.60
    _verdict(7, f"order-3 height reduction {100 * reduction:.1f}% (band 10-60%)", ok)
    assert ok


def test_criterion_08_wide_grating_contrast():
    geometry = GratingGeometry(period_d=100.0, slit_s=50.0, num_bars=20)
    point, _ = _peak_heights(PointParticle(), geometry)
    dimer, _ = _peak_heights(DIMER, geometry)
    deltas = {n: abs(dimer[n].height - point[n].height) for n in (1, 3)}
    ok = all(delta < 0.10 for delta in deltas.values())
    _verdict(
        8,
        "order-0-normalized height differences at d=100: "
        + ", ".join(f"n={n}: {delta:.4f}" for n, delta in deltas.items()),
        ok,
    )
    assert ok


def test_criterion_09_quadrature_cross_check():
    # compare the adaptive rule against a 2^16-panel Simpson oracle on the
    # smooth parts of the working integrands; the fixed rule samples the
    # endpoints, so the logarithmically singular piece below the split
    # point is excluded by construction
    rng = np.random.default_rng(12345)
    kappa = DIMER.kappa
    split = singular_split_point(kappa)
    worst = 0.0
    for _ in range(20):
        k2 = rng.uniform(0.05, 1.5)
        bar_a = rng.uniform(10.0, 60.0)

        def edge_integrand(x: float) -> float:
            return marginal_density(DIMER, x) * math.sin(0.5 * k2 * (bar_a - x))

        def fourier_integrand(x: float) -> float:
            return 2.0 * marginal_density(DIMER, x) * math.cos(0.5 * k2 * x)

        for f, hi in ((edge_integrand, bar_a), (fourier_integrand, 30.0)):
            adaptive = integrate_adaptive(f, split, hi)
            fixed = integrate_fixed(f, split, hi, 2**16)
            worst = max(worst, abs(adaptive - fixed) / abs(fixed))
    ok = worst <= 1e-8
    _verdict(9, f"adaptive vs fixed Simpson, worst rel dev {worst:.2e}", ok)
    assert ok


def test_criterion_10_deterministic_csv(tmp_path):
    config = resolve_config("fig3", {"n_samples": 121, "outputs": {"csv"}})
    first = run_scenario(config, out_dir=tmp_path / "run1")
    second = run_scenario(config, out_dir=tmp_path / "run2")
    pairs = list(zip(sorted(first.files), sorted(second.files)))
    ok = len(pairs) == 2 and all(
        open(a, "rb").read() == open(b, "rb").read() for a, b in pairs
    )
    _verdict(10, f"{len(pairs)} CSV artifacts byte-identical across reruns", ok)
    assert ok
