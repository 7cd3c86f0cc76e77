"""HTTP service endpoints."""

import math

import pytest
from fastapi.testclient import TestClient

from ptvkin.api.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _coning_cfg(**overrides):
    cfg = {
        "profile": {"kind": "coning", "alpha": 0.01, "freq": 2 * math.pi,
                    "f0": [0.0, 0.0, 9.8], "thrust_freq": math.pi},
        "t1": 1.0,
        "steps": 1000,
        "formulations": ["ptv_vtv", "savage"],
        "coarse_samples": 50,
        "refine_factor": 16,
    }
    cfg.update(overrides)
    return cfg


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_simulate(client):
    r = client.post("/simulate", json=_coning_cfg())
    assert r.status_code == 200
    body = r.json()
    assert body["report"]["passed"] is True
    assert set(body["report"]["terminal_errors"]) == {"ptv_vtv", "savage"}
    assert body["trajectory_csv"].startswith("t,")
    assert body["wall_clock_s"] > 0


def test_simulate_rejects_unknown_keys(client):
    r = client.post("/simulate", json=_coning_cfg(bogus=1))
    assert r.status_code == 422
    r = client.post("/simulate", json=_coning_cfg(
        profile={"kind": "coning", "not_a_field": 2}))
    assert r.status_code == 422


def test_simulate_rejects_bad_values(client):
    assert client.post("/simulate", json=_coning_cfg(t1=-1.0)).status_code == 422
    assert client.post("/simulate", json=_coning_cfg(steps=0)).status_code == 422
    assert client.post("/simulate",
                       json=_coning_cfg(formulations=[])).status_code == 422
    assert client.post("/simulate",
                       json=_coning_cfg(steps=1001)).status_code == 422  # not divisible


def test_simulate_domain_violation_is_409(client):
    cfg = _coning_cfg(profile={"kind": "coning", "alpha": 1.7,
                               "freq": 2 * math.pi, "f0": [0, 0, 9.8],
                               "thrust_freq": math.pi})
    r = client.post("/simulate", json=cfg)
    assert r.status_code == 409
    assert r.json()["error"] == "domain_violation"


def test_sweep(client):
    req = {"scenario": _coning_cfg(), "step_counts": [250, 500, 1000]}
    r = client.post("/sweep", json=req)
    assert r.status_code == 200
    body = r.json()
    assert body["report"]["passed"] is True
    assert [row["steps"] for row in body["report"]["rows"]] == [250, 500, 1000]


def test_sweep_rejects_bad_step_ladder(client):
    req = {"scenario": _coning_cfg(), "step_counts": [250, 300, 1000]}
    assert client.post("/sweep", json=req).status_code == 422
    req = {"scenario": _coning_cfg(), "step_counts": [250, 500]}
    assert client.post("/sweep", json=req).status_code == 422


def test_check(client):
    r = client.post("/check", json={"seed": 5, "samples": 1000})
    assert r.status_code == 200
    body = r.json()
    assert body["report"]["passed"] is True
    names = {item["name"] for item in body["report"]["items"]}
    assert "triple_product_identities" in names
    assert "savage_map_roundtrip" in names


def test_check_tolerance_override_fails(client):
    r = client.post("/check", json={"seed": 5, "samples": 100,
                                    "tolerance": 1e-20})
    assert r.status_code == 200
    assert r.json()["report"]["passed"] is False
