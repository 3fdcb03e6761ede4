"""HTTP render service.

A local companion for interactive clients: it validates scene documents,
renders them whole (``/api/v1/render``) or as a progressive tile stream
(``/api/v1/render/stream``), probes single-point orbits, and serves the
preset catalog.  Requests share one worker pool; at most ``max_jobs``
renders run at once and the rest get 429.  Binding defaults to loopback —
this is not an internet-facing service and has no authentication.

Tile stream framing (big-endian throughout): a 4-byte frame length (the
byte count after the length field), a 1-byte frame type (0 = tile,
1 = error), then for tiles x, y, width, height as four 32-bit unsigned
integers followed by the PNG encoding of that tile; for errors a UTF-8
message.  Tiles arrive in completion order and exactly partition the
image unless an error frame ends the stream early.
"""

from __future__ import annotations

import asyncio
import hashlib
import json
import struct
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from . import __version__
from .dynamics import probe_orbit
from .presets import catalog
from .render import encode_png, render_scene, render_tile, resolve_threads, tile_rects
from .scene import SceneConfig, SceneError, parse_scene_dict, scene_hash

BODY_CAP = 1 << 20  # 1 MiB
AREA_CAP = 4_000_000  # pixels
FRAME_TILE = 0
FRAME_ERROR = 1


def _build_hash() -> str:
    digest = hashlib.sha256()
    root = Path(__file__).parent
    for path in sorted(root.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()[:12]


_BUILD = _build_hash()


def _error_json(status: int, path: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"path": path, "message": message}}
    )


class _JobGate:
    """Counts in-flight render jobs; single-event-loop access, no locking needed."""

    def __init__(self, limit: int):
        self.limit = limit
        self.active = 0

    def acquire(self) -> bool:
        if self.active >= self.limit:
            return False
        self.active += 1
        return True

    def release(self) -> None:
        self.active -= 1


def tile_frame(x: int, y: int, width: int, height: int, png: bytes) -> bytes:
    payload = struct.pack(">BIIII", FRAME_TILE, x, y, width, height) + png
    return struct.pack(">I", len(payload)) + payload


def error_frame(message: str) -> bytes:
    payload = struct.pack(">B", FRAME_ERROR) + message.encode("utf-8")
    return struct.pack(">I", len(payload)) + payload


async def _read_scene(request: Request, area_cap: int):
    """Returns (scene, error response); exactly one is None."""
    body = await request.body()
    if len(body) > BODY_CAP:
        return None, _error_json(413, "<document>", f"request body exceeds {BODY_CAP} bytes")
    try:
        doc = json.loads(body)
    except json.JSONDecodeError as exc:
        return None, _error_json(422, "<document>", f"invalid JSON: {exc}")
    try:
        scene = parse_scene_dict(doc)
    except SceneError as exc:
        return None, _error_json(422, exc.path, exc.message)
    if scene.image_width * scene.image_height > area_cap:
        return None, _error_json(
            413,
            "image",
            f"image area {scene.image_width}x{scene.image_height} exceeds the "
            f"{area_cap}-pixel cap",
        )
    return scene, None


def create_app(max_jobs: int | None = None, area_cap: int = AREA_CAP) -> FastAPI:
    app = FastAPI(title="starbox render service", version=__version__)
    # The explorer page is plain static files and may be served from any
    # origin (or opened from disk); the service itself is loopback-only.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
        expose_headers=["X-Scene-Hash"],
    )
    limit = max_jobs if max_jobs is not None else resolve_threads("auto")
    gate = _JobGate(limit)
    # the gate may be closed entirely (limit 0) but the pool still needs a worker
    pool = ThreadPoolExecutor(max_workers=max(limit, 1), thread_name_prefix="starbox-render")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"version": __version__, "build": _BUILD}

    @app.post("/api/v1/render")
    async def render(request: Request) -> Response:
        scene, err = await _read_scene(request, area_cap)
        if err is not None:
            return err
        if not gate.acquire():
            return _error_json(429, "", "render queue is full, retry shortly")
        try:
            loop = asyncio.get_running_loop()
            png = await loop.run_in_executor(pool, _render_png, scene)
        finally:
            gate.release()
        return Response(
            content=png,
            media_type="image/png",
            headers={"X-Scene-Hash": scene_hash(scene)},
        )

    @app.post("/api/v1/render/stream")
    async def render_stream(request: Request) -> Response:
        scene, err = await _read_scene(request, area_cap)
        if err is not None:
            if err.status_code == 422:
                # Stream consumers read frames, not HTTP errors: surface
                # validation problems as a single error frame.
                detail = json.loads(bytes(err.body))["error"]
                frame = error_frame(f"{detail['path']}: {detail['message']}")
                return Response(content=frame, media_type="application/octet-stream")
            return err
        if not gate.acquire():
            return _error_json(429, "", "render queue is full, retry shortly")

        loop = asyncio.get_running_loop()
        rects = tile_rects(scene.image_width, scene.image_height, scene.tile_size)

        async def frames():
            try:
                tasks = [
                    loop.run_in_executor(pool, _render_tile_frame, scene, rect)
                    for rect in rects
                ]
                for task in asyncio.as_completed(tasks):
                    try:
                        yield await task
                    except Exception as exc:
                        yield error_frame(f"render failed: {exc}")
                        return
            finally:
                gate.release()

        return StreamingResponse(frames(), media_type="application/octet-stream")

    @app.post("/api/v1/probe")
    async def probe(request: Request) -> Response:
        body = await request.body()
        if len(body) > BODY_CAP:
            return _error_json(413, "<document>", f"request body exceeds {BODY_CAP} bytes")
        try:
            doc = json.loads(body)
        except json.JSONDecodeError as exc:
            return _error_json(422, "<document>", f"invalid JSON: {exc}")
        if not isinstance(doc, dict) or "scene" not in doc or "point" not in doc:
            return _error_json(422, "<document>", 'expected {"scene": ..., "point": [...]}')
        try:
            scene = parse_scene_dict(doc["scene"])
        except SceneError as exc:
            return _error_json(422, f"scene.{exc.path}" if exc.path else "scene", exc.message)
        point = doc["point"]
        if (
            not isinstance(point, list)
            or len(point) != scene.dimension
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in point)
        ):
            return _error_json(
                422,
                "point",
                f"expected {scene.dimension} numbers for a {scene.dimension}D scene",
            )
        max_iter = doc.get("max_iterations")
        if max_iter is not None and (not isinstance(max_iter, int) or max_iter < 1):
            return _error_json(422, "max_iterations", "expected a positive integer")
        record = probe_orbit([float(c) for c in point], scene.params, max_iterations=max_iter)
        return JSONResponse(content=record)

    @app.get("/api/v1/presets")
    def presets() -> dict:
        return {"presets": catalog()}

    return app


def _render_png(scene: SceneConfig) -> bytes:
    image, _ = render_scene(scene)
    return encode_png(image)


def _render_tile_frame(scene: SceneConfig, rect: tuple[int, int, int, int]) -> bytes:
    tile, _ = render_tile(scene, rect)
    return tile_frame(tile.x, tile.y, tile.width, tile.height, encode_png(tile.pixels))


app = create_app()
