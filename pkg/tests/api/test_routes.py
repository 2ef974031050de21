import pytest
from fastapi.testclient import TestClient

from arithdyn.main import app

client = TestClient(app)

pytestmark = pytest.mark.api


def test_health():
    """Test the health endpoint."""
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_status():
    """Test the status endpoint."""
    response = client.get("/api/status")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "running"
    assert data["version"] == "1.0.0"
    assert data["schema"] == "arithdyn/1"


def test_root():
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["documentation"] == "/docs"
    assert "X-Process-Time" in response.headers


def test_list_examples():
    """Test listing the bundled example maps."""
    response = client.get("/api/examples/")
    assert response.status_code == 200
    ids = [entry["id"] for entry in response.json()]
    assert {"skew-product", "small-topological", "henon", "identity"} <= set(ids)


def test_list_examples_by_tag():
    response = client.get("/api/examples/", params={"tag": "monomial"})
    assert response.status_code == 200
    entries = response.json()
    assert len(entries) == 4
    assert all("monomial" in entry["tags"] for entry in entries)


def test_get_example():
    response = client.get("/api/examples/henon")
    assert response.status_code == 200
    data = response.json()
    assert data["expression"] == "y, y^2 - x"
    assert data["expected"]["lambda2"] == 1


def test_get_example_not_found():
    """Test that an unknown example id returns 404."""
    response = client.get("/api/examples/no-such-map")
    assert response.status_code == 404
    assert "no-such-map" in response.json()["detail"]


def test_post_height():
    response = client.post("/api/height", json={"points": ["1/2,3"]})
    assert response.status_code == 200
    data = response.json()
    assert data.pop("meta")["schema"] == "arithdyn/1"
    assert data == {
        "global_log_arg": 6,
        "locals": [{"place": "2", "log_arg": 2}, {"place": "inf", "log_arg": 3}],
    }


def test_post_orbit_detects_fixed_point():
    response = client.post("/api/orbit", json={"example": "henon", "points": ["2,2"]})
    assert response.status_code == 200
    data = response.json()
    assert data["stop_reason"] == "cycle-detected"
    assert data["preperiod"] == 0
    assert data["period"] == 1
    assert [row["x2"] for row in data["rows"]] == ["2", "2"]


def test_post_dyndeg_with_preimages():
    response = client.post("/api/dyndeg", json={"map": "x^2, y", "points": ["4,1"]})
    assert response.status_code == 200
    data = response.json()
    assert data["degrees"]["lambda2"] == 2
    assert data["automorphism"] is False
    assert len(data["preimages"]) == 1


def test_post_degrees():
    response = client.post("/api/degrees", json={"example": "skew-product", "max_iter": 6})
    assert response.status_code == 200
    data = response.json()
    assert data["degree_sequence"]["values"] == [1, 3, 8, 20, 48, 112, 256]
    assert data["meta"]["budgets"]["max_iter"] == 6


def test_post_classify():
    response = client.post("/api/classify", json={"example": "henon", "points": ["3,5"], "max_iter": 10})
    assert response.status_code == 200
    assert response.json()["classification"]["verdict"] == "height-growing"


def test_api_matches_cli(capsys):
    """HTTP responses equal the CLI's JSON documents for the same inputs."""
    import json

    from arithdyn.cli import main

    assert main(["canheight", "--example", "henon", "--point", "3,5", "--max-iter", "8"]) == 0
    cli_document = json.loads(capsys.readouterr().out)
    response = client.post("/api/canheight", json={"example": "henon", "points": ["3,5"], "max_iter": 8})
    assert response.json() == cli_document


def test_parse_error_is_400():
    response = client.post("/api/dyndeg", json={"map": "x^2 +, y"})
    assert response.status_code == 400
    data = response.json()
    assert data["code"] == "parse"
    assert data["details"]["line"] == 1


@pytest.mark.parametrize("body,code", [
    ({"map": "x + y, x + y"}, "non-dominant"),
    ({"example": "no-such-map"}, "precondition"),
    ({}, "precondition"),
])
def test_domain_errors_are_422(body, code):
    response = client.post("/api/dyndeg", json=body)
    assert response.status_code == 422
    assert response.json()["code"] == code


def test_canheight_identity_is_422():
    response = client.post("/api/canheight", json={"example": "identity", "points": ["3,5"]})
    assert response.status_code == 422
    assert response.json()["code"] == "precondition"


@pytest.mark.parametrize("body", [
    {"map": "x, y", "example": "henon"},
    {"map": "x, y", "max_iter": -1},
    {"map": "x, y", "unknown": 1},
])
def test_invalid_options_are_rejected(body):
    response = client.post("/api/degrees", json=body)
    assert response.status_code == 422
