"""HTTP service endpoints: render, tile streaming, probe, presets, limits."""

import json
import struct

import numpy as np
import pytest
from fastapi.testclient import TestClient

from starbox import __version__, service
from starbox.dynamics import probe_orbit
from starbox.presets import catalog, preset_document
from starbox.render import TileImage, assemble, decode_png, encode_png, render_scene
from starbox.scene import parse_scene_dict, scene_hash


@pytest.fixture(scope="module")
def client():
    with TestClient(service.create_app()) as c:
        yield c


def small_doc(name="classic2d", w=48, h=48, tile=16):
    doc = preset_document(name)
    doc["image"] = {"width": w, "height": h}
    doc["tile_size"] = tile
    return doc


def parse_frames(data: bytes):
    """Decode the length-prefixed tile/error framing from raw bytes."""
    frames = []
    off = 0
    while off < len(data):
        (length,) = struct.unpack_from(">I", data, off)
        off += 4
        end = off + length
        ftype = data[off]
        if ftype == service.FRAME_TILE:
            x, y, w, h = struct.unpack_from(">IIII", data, off + 1)
            frames.append(("tile", x, y, w, h, data[off + 17 : end]))
        elif ftype == service.FRAME_ERROR:
            frames.append(("error", data[off + 1 : end].decode("utf-8")))
        else:
            raise AssertionError(f"unknown frame type {ftype}")
        off = end
    assert off == len(data), "trailing bytes after the last frame"
    return frames


# --- health and catalog ----------------------------------------------------

def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["version"] == __version__
    assert len(body["build"]) == 12
    int(body["build"], 16)


def test_presets_endpoint_matches_catalog(client):
    body = client.get("/api/v1/presets").json()
    assert body == {"presets": catalog()}
    for entry in body["presets"]:
        parse_scene_dict(entry["scene"])


# --- one-shot render -------------------------------------------------------

def test_render_returns_reference_png(client):
    doc = small_doc()
    resp = client.post("/api/v1/render", json=doc)
    assert resp.status_code == 200
    assert resp.headers["content-type"] == "image/png"
    scene = parse_scene_dict(doc)
    assert resp.headers["x-scene-hash"] == scene_hash(scene)
    image, _ = render_scene(scene)
    assert resp.content == encode_png(image)


def test_render_validation_error_names_path(client):
    doc = small_doc()
    doc["iteration"]["outer_shape"]["radius"] = -1.0
    resp = client.post("/api/v1/render", json=doc)
    assert resp.status_code == 422
    err = resp.json()["error"]
    assert err["path"] == "iteration"
    assert "radius" in err["message"]


def test_render_rejects_invalid_json(client):
    resp = client.post("/api/v1/render", content=b"{nope")
    assert resp.status_code == 422
    assert resp.json()["error"]["path"] == "<document>"


def test_render_body_cap(client):
    padded = json.dumps(small_doc()).encode() + b" " * service.BODY_CAP
    resp = client.post("/api/v1/render", content=padded)
    assert resp.status_code == 413


def test_render_area_cap(client):
    doc = small_doc(w=3000, h=3000)
    resp = client.post("/api/v1/render", json=doc)
    assert resp.status_code == 413
    assert resp.json()["error"]["path"] == "image"


def test_render_queue_full():
    with TestClient(service.create_app(max_jobs=0)) as busy:
        resp = busy.post("/api/v1/render", json=small_doc())
        assert resp.status_code == 429
        resp = busy.post("/api/v1/render/stream", json=small_doc())
        assert resp.status_code == 429


def test_method_and_path_errors(client):
    assert client.get("/api/v1/render").status_code == 405
    assert client.post("/api/v1/nowhere", json={}).status_code == 404


# --- tile stream -----------------------------------------------------------

def test_stream_assembles_to_one_shot_image(client):
    doc = small_doc(w=64, h=48, tile=16)
    one_shot = decode_png(client.post("/api/v1/render", json=doc).content)

    resp = client.post("/api/v1/render/stream", json=doc)
    assert resp.status_code == 200
    frames = parse_frames(resp.content)
    assert len(frames) == 4 * 3
    assert all(f[0] == "tile" for f in frames)
    tiles = [TileImage(x, y, w, h, decode_png(png)) for _, x, y, w, h, png in frames]
    np.testing.assert_array_equal(assemble(tiles, 64, 48), one_shot)


def test_stream_tile_headers_match_png_sizes(client):
    resp = client.post("/api/v1/render/stream", json=small_doc(w=40, h=24, tile=16))
    for _, x, y, w, h, png in parse_frames(resp.content):
        assert decode_png(png).shape == (h, w, 3)
        assert x % 16 == 0 and y % 16 == 0


def test_stream_surfaces_validation_as_error_frame(client):
    doc = small_doc()
    doc["iteration"]["scale"] = 0.0
    resp = client.post("/api/v1/render/stream", json=doc)
    assert resp.status_code == 200
    frames = parse_frames(resp.content)
    assert len(frames) == 1
    kind, message = frames[0]
    assert kind == "error"
    assert "scale" in message


# --- probe -----------------------------------------------------------------

def test_probe_parity_with_library(client):
    doc = small_doc("square2d")
    resp = client.post("/api/v1/probe", json={"scene": doc, "point": [1.5, 0.25]})
    assert resp.status_code == 200
    scene = parse_scene_dict(doc)
    assert resp.json() == probe_orbit([1.5, 0.25], scene.params)


def test_probe_max_iterations(client):
    body = {"scene": small_doc(), "point": [0.1, 0.2], "max_iterations": 2}
    rec = client.post("/api/v1/probe", json=body).json()
    assert len(rec["stages"]) == 2


def test_probe_envelope_errors(client):
    assert client.post("/api/v1/probe", json={"point": [0, 0]}).status_code == 422

    resp = client.post("/api/v1/probe", json={"scene": small_doc(), "point": [1, 2, 3]})
    assert resp.status_code == 422
    assert resp.json()["error"]["path"] == "point"

    resp = client.post(
        "/api/v1/probe", json={"scene": small_doc(), "point": [0, 0], "max_iterations": 0}
    )
    assert resp.status_code == 422

    doc = small_doc()
    doc["iteration"]["scale"] = 0.0
    resp = client.post("/api/v1/probe", json={"scene": doc, "point": [0, 0]})
    assert resp.status_code == 422
    assert resp.json()["error"]["path"].startswith("scene")
