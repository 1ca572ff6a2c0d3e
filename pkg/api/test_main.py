"""
HTTP tests for the bebound API
Exercises every router through the FastAPI test client
"""

import math

import pytest
from fastapi.testclient import TestClient

from api.main import app

client = TestClient(app)


def test_health():
    response = client.get("/api/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy"
    assert body["settings"]["tol"] > 0


def test_constants():
    response = client.get("/api/v1/constants")
    assert response.status_code == 200
    table = {entry["name"]: entry for entry in response.json()}
    assert table["c22"]["value"] == pytest.approx(4 * math.pi, abs=1e-8)
    assert table["coef_k3_p2"]["value"] == 16.0
    assert table["x0"]["provenance"] == "closed form"


def test_psi():
    response = client.get("/api/v1/psi", params={"x": 3.5})
    assert response.status_code == 200
    assert response.json()["psi"] == pytest.approx(0.35, abs=0.01)


def test_psi_rejects_nonpositive_x():
    assert client.get("/api/v1/psi", params={"x": 0}).status_code == 422


def test_cdf_bounds():
    response = client.post("/api/v1/bounds/cdf", json={"dist": "rademacher", "n": 4, "T": 10.0,
                                                       "xs": [-1.0, 0.0, 1.0]})
    assert response.status_code == 200
    reports = response.json()
    assert [r["x"] for r in reports] == [-1.0, 0.0, 1.0]
    for report in reports:
        assert report["lower"] <= report["upper"]
        assert report["contains"] is True


def test_cdf_bounds_by_reflection():
    response = client.post("/api/v1/bounds/cdf", json={"dist": "bernoulli:0.3", "n": 2, "xs": [0.5],
                                                       "reflect": True})
    assert response.status_code == 200
    assert response.json()[0]["notes"] == ["lower bound obtained by reflection X -> -X"]


def test_cdf_bounds_errors():
    both = client.post("/api/v1/bounds/cdf", json={"dist": "rademacher", "T": 10.0, "c_T": 0.5, "xs": [0.0]})
    assert both.status_code == 422
    unknown = client.post("/api/v1/bounds/cdf", json={"dist": "cauchy", "xs": [0.0]})
    assert unknown.status_code == 400
    degenerate = client.post("/api/v1/bounds/cdf", json={"dist": "point:0", "xs": [0.0]})
    assert degenerate.status_code == 400


def test_tail_bounds():
    response = client.post("/api/v1/bounds/tail", json={"dist": "normal", "T": 40.0, "xs": [3.0],
                                                        "mode": "surrogate"})
    assert response.status_code == 200
    report = response.json()[0]
    assert report["params"]["mode"] == "surrogate"
    assert report["exact"]["tail_ge"] == pytest.approx(0.0364472, abs=1e-6)
    assert report["contains"] is True


def test_tail_bounds_errors():
    negative = client.post("/api/v1/bounds/tail", json={"dist": "rademacher", "T": 10.0, "xs": [-1.0]})
    assert negative.status_code == 422
    normal_exact = client.post("/api/v1/bounds/tail", json={"dist": "normal", "T": 10.0, "xs": [1.0],
                                                            "mode": "exact_abs"})
    assert normal_exact.status_code == 400


def test_convolve():
    response = client.post("/api/v1/oracle/convolve", json={"dist": "rademacher", "n": 3})
    assert response.status_code == 200
    body = response.json()
    assert body["xs"] == [-3.0, -1.0, 1.0, 3.0]
    assert body["ps"] == pytest.approx([0.125, 0.375, 0.375, 0.125])


def test_convolve_rejects_normal():
    assert client.post("/api/v1/oracle/convolve", json={"dist": "normal", "n": 2}).status_code == 400


def test_delta_profile():
    response = client.post("/api/v1/oracle/delta-profile", json={"dist": "rademacher", "n": 1, "z": [0.0, 1.0, 2.0]})
    assert response.status_code == 200
    body = response.json()
    assert body["z"] == [0.0, 1.0, 2.0]
    assert body["small_n"] is True
    assert body["c_nu_checks"]["c_nu_small_n"] is True


def test_filter_inspect():
    response = client.get("/api/v1/filters/prawitz", params={"x": [50.0]})
    assert response.status_code == 200
    body = response.json()
    assert body["support_ok"] and body["l1_bounded"]
    assert body["c2p"]["2"] == pytest.approx(4 * math.pi, abs=1e-8)
    assert set(body["kernel_residuals"]) == {"50"}


def test_filter_errors():
    assert client.get("/api/v1/filters/gaussian").status_code == 404
    assert client.get("/api/v1/filters/prawitz", params={"x": [0.5]}).status_code == 400


def test_filter_quadrature_failure_maps_to_422(monkeypatch):
    from api.routers import filters as filters_router
    from bebound.errors import QuadratureError

    def failing(filt, x, tol=1e-6):
        raise QuadratureError("kernel quadrature did not converge", abs_error=1.0, tol=tol)

    monkeypatch.setattr(filters_router, "kernel_residual", failing)
    response = client.get("/api/v1/filters/prawitz", params={"x": [50.0]})
    assert response.status_code == 422
    assert "did not converge" in response.json()["detail"]
