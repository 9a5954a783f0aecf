"""HTTP service endpoints, error mapping, and CLI/HTTP agreement."""

from __future__ import annotations

import numpy as np
import pytest
from fastapi.testclient import TestClient

from chromashift import colorspace as cs, imageio, naming, rotation
from chromashift.service import ServiceConfig, create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _png(pixels) -> bytes:
    return imageio.encode_png_bytes(pixels)


def test_name_endpoint_matches_library(client):
    response = client.get("/api/name", params={"r": 136, "g": 136, "b": 136})
    assert response.status_code == 200
    payload = response.json()
    expected = naming.name_color(cs.srgb_decode(np.array([136, 136, 136])), naming.load_default())
    assert payload["name"] == expected.name
    assert payload["variant"] == expected.variant
    assert payload["distance"] == pytest.approx(expected.distance)


def test_name_endpoint_runner_ups(client):
    response = client.get("/api/name", params={"r": 10, "g": 200, "b": 50, "k": 3})
    assert response.status_code == 200
    nearest = response.json()["nearest"]
    assert len(nearest) == 3
    distances = [n["distance"] for n in nearest]
    assert distances == sorted(distances)


def test_name_endpoint_validates_channels(client):
    response = client.get("/api/name", params={"r": 300, "g": 0, "b": 0})
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "bad_request" and body["message"]


def test_dictionary_endpoint(client):
    response = client.get("/api/dictionary")
    assert response.status_code == 200
    assert len(response.json()["entries"]) == 57


def test_rotate_endpoint_round_trip(client):
    rng = np.random.default_rng(80)
    img = rng.integers(0, 256, size=(9, 14, 3), dtype=np.uint8)
    response = client.post(
        "/api/rotate", params={"theta_deg": 0.0}, content=_png(img),
        headers={"content-type": "image/png"},
    )
    assert response.status_code == 200
    assert response.headers["content-type"] == "image/png"
    assert np.array_equal(imageio.decode_bytes(response.content), img)


def test_rotate_endpoint_matches_core(client):
    rng = np.random.default_rng(81)
    img = rng.integers(0, 256, size=(7, 11, 3), dtype=np.uint8)
    response = client.post(
        "/api/rotate", params={"theta_deg": 90.0}, content=_png(img),
        headers={"content-type": "image/png"},
    )
    expected = rotation.rotate_image(img, np.radians(90.0))
    assert np.array_equal(imageio.decode_bytes(response.content), expected)
    # Byte-identical to what the CLI would write (same encoder, same core).
    assert response.content == imageio.encode_png_bytes(expected)


def test_rotate_requires_png_content_type(client):
    response = client.post(
        "/api/rotate", params={"theta_deg": 10.0}, content=b"junk",
        headers={"content-type": "text/plain"},
    )
    assert response.status_code == 415
    assert response.json()["code"] == "unsupported_media"


def test_rotate_rejects_bad_payload(client):
    response = client.post(
        "/api/rotate", params={"theta_deg": 10.0}, content=b"not a png",
        headers={"content-type": "image/png"},
    )
    assert response.status_code == 400


def test_simulate_endpoint_and_bad_cvd(client):
    img = np.full((6, 6, 3), 136, dtype=np.uint8)
    ok = client.post(
        "/api/simulate", params={"cvd": "deutan"}, content=_png(img),
        headers={"content-type": "image/png"},
    )
    assert ok.status_code == 200
    out = imageio.decode_bytes(ok.content)
    assert np.max(np.abs(out.astype(int) - 136)) <= 1
    bad = client.post(
        "/api/simulate", params={"cvd": "monochrome"}, content=_png(img),
        headers={"content-type": "image/png"},
    )
    assert bad.status_code == 400
    body = bad.json()
    assert body["code"] == "bad_request" and "monochrome" in body["message"]


def test_alpha_passes_through(client):
    rng = np.random.default_rng(82)
    img = rng.integers(0, 256, size=(5, 5, 4), dtype=np.uint8)
    response = client.post(
        "/api/simulate", params={"cvd": "tritan"}, content=_png(img),
        headers={"content-type": "image/png"},
    )
    out = imageio.decode_bytes(response.content)
    assert out.shape == img.shape
    assert np.array_equal(out[:, :, 3], img[:, :, 3])


def test_size_cap():
    app = create_app(ServiceConfig(max_dimension=8))
    small_client = TestClient(app)
    img = np.zeros((16, 4, 3), dtype=np.uint8)
    response = small_client.post(
        "/api/rotate", params={"theta_deg": 5.0}, content=_png(img),
        headers={"content-type": "image/png"},
    )
    assert response.status_code == 413
    assert response.json()["code"] == "too_large"


def test_trajectory_endpoint(client):
    response = client.get("/api/trajectory", params={"r": 10, "g": 200, "b": 50, "samples": 36})
    assert response.status_code == 200
    records = response.json()
    assert len(records) == 36
    assert set(records[0]) == {"theta_deg", "x", "y", "r", "g", "b"}
    black = client.get("/api/trajectory", params={"r": 0, "g": 0, "b": 0})
    assert black.status_code == 400


def test_fig9_endpoint(client):
    response = client.get("/api/fig9", params={"cvd": "protan", "step": 6.0, "count": 5})
    assert response.status_code == 200
    curves = response.json()["curves"]
    assert len(curves) == 4
    assert all(len(c["jnd"]) == 60 for c in curves)
    gamut = client.get(
        "/api/fig9", params={"r": 86, "g": 95, "b": 214, "cvd": "protan", "count": 13}
    )
    assert gamut.status_code == 400


def test_service_is_stateless(client):
    params = {"r": 77, "g": 140, "b": 22}
    first = client.get("/api/name", params=params).content
    client.get("/api/dictionary")
    client.get("/api/trajectory", params={"r": 1, "g": 2, "b": 3, "samples": 4})
    second = client.get("/api/name", params=params).content
    assert first == second


def test_service_config_validation():
    with pytest.raises(ValueError):
        ServiceConfig(port=0)
    with pytest.raises(ValueError):
        ServiceConfig(max_dimension=0)
