import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from dimerdiff.amplitude import point_bar_amplitude
from dimerdiff.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestMeta:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"

    def test_presets(self, client):
        resp = client.get("/presets")
        assert resp.status_code == 200
        names = [row["name"] for row in resp.json()]
        assert names == ["fig2", "fig3", "fig4", "fig5"]
        fig5 = next(row for row in resp.json() if row["name"] == "fig5")
        assert fig5["period_d"] == 50.0
        assert fig5["num_bars"] == 20


class TestRun:
    def test_preset_with_overrides(self, client):
        resp = client.post("/run", json={"preset": "fig2", "n_samples": 21})
        assert resp.status_code == 200
        body = resp.json()
        assert body["scenario_name"] == "fig2"
        labels = [c["label"] for c in body["curves"]]
        assert labels == ["dimer", "point"]
        for curve in body["curves"]:
            assert len(curve["k2_nm_inv"]) == 21
            assert len(curve["intensity"]) == 21

    def test_full_scenario_without_preset(self, client):
        resp = client.post(
            "/run",
            json={
                "scenario_name": "custom",
                "geometry": {"period_d": 50.0, "slit_s": 25.0, "num_bars": 1},
                "model": {"variant": "point"},
                "k2_min": 0.0,
                "k2_max": 0.2,
                "n_samples": 5,
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["scenario_name"] == "custom"
        (curve,) = body["curves"]
        # point-particle single bar: intensity = (sin(K2 a/2)/(K2 a/2))^2
        k2 = curve["k2_nm_inv"][-1]
        expected = abs(point_bar_amplitude(k2, 25.0)) ** 2 / 12.5**2
        assert curve["intensity"][-1] == pytest.approx(expected, rel=1e-12)

    def test_peaks_included_on_request(self, client):
        resp = client.post(
            "/peaks",
            json={
                "preset": "fig5",
                "k2_min": -0.3,
                "k2_max": 0.3,
                "n_samples": 1921,
            },
        )
        assert resp.status_code == 200
        peaks = resp.json()["peaks"]
        assert set(peaks) == {"dimer", "point"}
        point_orders = {p["order_n"] for p in peaks["point"]}
        dimer_orders = {p["order_n"] for p in peaks["dimer"]}
        assert 2 not in point_orders
        assert {-1, 0, 1}.issubset(point_orders)
        assert {-1, 0, 1}.issubset(dimer_orders)

    def test_tabulated_model_variant(self, client):
        x = np.linspace(-10.0, 10.0, 201)
        rho = np.exp(-0.5 * (x / 1.5) ** 2)
        rho /= np.trapezoid(rho, x)
        resp = client.post(
            "/run",
            json={
                "scenario_name": "tab",
                "geometry": {"period_d": 50.0, "slit_s": 25.0},
                "model": {"variant": "tabulated", "samples": list(zip(x, rho))},
                "k2_min": 0.0,
                "k2_max": 0.1,
                "n_samples": 3,
            },
        )
        assert resp.status_code == 200
        assert resp.json()["curves"][0]["intensity"][0] == pytest.approx(1.0)

    def test_empty_request_rejected(self, client):
        resp = client.post("/run", json={})
        assert resp.status_code == 400
        assert "preset" in resp.json()["detail"]

    def test_bad_preset_rejected(self, client):
        resp = client.post("/run", json={"preset": "fig99"})
        assert resp.status_code == 400

    def test_invalid_geometry_rejected(self, client):
        resp = client.post(
            "/run",
            json={
                "scenario_name": "bad",
                "geometry": {"period_d": 50.0, "slit_s": 60.0},
                "k2_min": 0.0,
                "k2_max": 0.1,
                "n_samples": 3,
            },
        )
        assert resp.status_code in (400, 422)


class TestFitWidth:
    def test_round_trip(self, client):
        samples = [
            [k, abs(point_bar_amplitude(k, 27.8))]
            for k in np.linspace(0.01, 0.1, 10)
        ]
        resp = client.post(
            "/fit-width", json={"samples": samples, "bar_a_init": 25.0}
        )
        assert resp.status_code == 200
        assert resp.json()["effective_width_nm"] == pytest.approx(27.8, abs=1e-4)

    def test_too_few_samples(self, client):
        resp = client.post(
            "/fit-width", json={"samples": [[0.01, 1.0]], "bar_a_init": 25.0}
        )
        assert resp.status_code == 400
