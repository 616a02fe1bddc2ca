"""HTTP service wrapping the handlers, including error-code mapping."""

import math

import pytest
from fastapi.testclient import TestClient

from ellzero.service import app

client = TestClient(app)


def test_elliptic_eval_endpoint():
    resp = client.post("/elliptic/eval", json={"kind": "K", "k": 0.0})
    assert resp.status_code == 200
    assert resp.json()["value"] == pytest.approx(math.pi / 2, rel=1e-15)


def test_elliptic_eval_domain_error_maps_to_400():
    resp = client.post("/elliptic/eval", json={"kind": "K", "k": 1.5})
    assert resp.status_code == 400
    assert "modulus" in resp.json()["error"]


def test_elliptic_eval_schema_error_maps_to_422():
    resp = client.post("/elliptic/eval", json={"kind": "XX", "k": 0.1})
    assert resp.status_code == 422


def test_bound_endpoint():
    resp = client.post("/bound/psi", json={"m": 2, "n": 2, "l": 2, "s": 2})
    assert resp.status_code == 200
    assert resp.json() == {"psi": 29}
    resp = client.post("/bound/psi", json={"m": 2, "n": 2, "l": 2, "special": True})
    assert resp.json() == {"psi": 21}


def test_pf_verify_endpoint():
    resp = client.post("/picard-fuchs/verify", json={"mu": "special"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"]
    assert len(body["points"]) == 6


def test_reduce_endpoint():
    resp = client.post(
        "/reduce",
        json={
            "p": ["1"],
            "q": ["0", "1"],
            "r": ["1"],
            "mu": "1/4",
            "check_points": [0.3, 0.75],
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"]
    assert body["case"] == "constant_mu"
    assert all(r < 1e-5 for r in body["residuals"])


def test_zeros_endpoint():
    resp = client.post(
        "/zeros/count",
        json={"p": ["0", "1"], "q": ["1/3"], "r": ["0"]},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["count"] == 1
    assert body["bound_satisfied"]


def test_melnikov_pipeline_endpoints():
    spec = {"n": 2, "a_plus": [[1, 0, "1"]], "b_minus": [[0, 2, "1/3"]]}
    resp = client.post("/melnikov/decompose", json={"spec": spec})
    assert resp.status_code == 200
    assert resp.json()["n"] == 2
    resp = client.post(
        "/melnikov/eval", json={"spec": spec, "h_values": [0.004, 0.01]}
    )
    assert resp.status_code == 200
    points = resp.json()["points"]
    assert len(points) == 2
    assert points[0]["h"] == pytest.approx(0.004)
    resp = client.post("/melnikov/zeros", json={"spec": spec})
    assert resp.status_code == 200
    assert resp.json()["bound"] == 54


def test_melnikov_domain_error_maps_to_400():
    resp = client.post("/melnikov/zeros", json={"spec": {"n": 1}})
    assert resp.status_code == 400


def test_eval_consistency_between_routes():
    spec = {"n": 2, "a_plus": [[1, 1, "1"], [0, 0, "-1/2"]]}
    fast = client.post(
        "/melnikov/eval", json={"spec": spec, "h_values": [0.006]}
    ).json()["points"][0]["value"]
    slow = client.post(
        "/melnikov/eval",
        json={"spec": spec, "h_values": [0.006], "quadrature": True},
    ).json()["points"][0]["value"]
    assert fast == pytest.approx(slow, rel=1e-9, abs=1e-12)
