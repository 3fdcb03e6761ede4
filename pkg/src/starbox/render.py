"""Turn scenes into images.

Two renderers share one shading model:

* ``render_sampled`` — exact membership sampling for 2D windows and planar
  slices of 3D/4D sets: each pixel center maps affinely to a world point,
  the orbit is iterated, and the traps are shaded.
* ``raymarch`` — a sphere-tracing perspective renderer for 3D sets (and
  fixed-w slices of 4D sets) driven by a heuristic running-derivative
  distance estimate.  Candidate hits are refined by membership bisection,
  which restores geometric fidelity where the estimate is only heuristic.

Shading maps the two orbit-trap families (closest approach to the origin
and to the coordinate axes) through exponential ramps onto three control
colors, then gamma-corrects.  Escaped points get the background color
exactly, so membership is recoverable from the image when the control
colors avoid the background.

Everything here is deterministic and tile-decomposition independent: all
per-pixel arithmetic is elementwise, tiles are cut in static row-major
order, and workers write only their own buffers.  A multithreaded tiled
render is bit-identical to a single-tile single-threaded one.
"""

from __future__ import annotations

import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np
from PIL import Image

from .dynamics import (
    IterationParams,
    OrbitBatch,
    OrbitResult,
    distance_rows,
    iterate_batch,
    membership_rows,
)

if TYPE_CHECKING:  # only for annotations; scene.py imports this module
    from .scene import SceneConfig

ORTHO_TOL = 1e-9

# Fixed artifact choices for the 3D lighting model (documented, not configurable):
# one directional light plus ambient, and ambient occlusion from march step count.
_LIGHT_DIR = np.asarray((0.4, 0.5, 0.75)) / math.sqrt(0.4**2 + 0.5**2 + 0.75**2)
_AMBIENT = 0.25
_DIFFUSE = 0.75
_AO_STRENGTH = 0.7


# ---------------------------------------------------------------------------
# views


@dataclass(frozen=True)
class Window2D:
    """Axis-aligned (optionally rotated) rectangle in the plane, for 2D scenes."""

    center: tuple[float, float]
    width: float
    rotation: float = 0.0


@dataclass(frozen=True)
class SliceFrame:
    """Planar slice through a 3D or 4D set, spanned by two orthonormal vectors."""

    origin: tuple[float, ...]
    basis_u: tuple[float, ...]
    basis_v: tuple[float, ...]
    width: float


@dataclass(frozen=True)
class Camera3D:
    """Perspective pinhole camera; w_slice fixes the fourth coordinate for 4D scenes."""

    eye: tuple[float, float, float]
    look_at: tuple[float, float, float]
    up: tuple[float, float, float]
    vertical_fov: float
    w_slice: float | None = None


ViewSpec = Union[Window2D, SliceFrame, Camera3D]


def view_scale(view: ViewSpec) -> float:
    """Characteristic world-space size of a view (used to derive hit_epsilon)."""
    if isinstance(view, Camera3D):
        eye = np.asarray(view.eye, dtype=float)
        look = np.asarray(view.look_at, dtype=float)
        return float(np.sqrt(np.sum((eye - look) ** 2)))
    return float(view.width)


def validate_view(view: ViewSpec, dimension: int) -> list[str]:
    """Fatal diagnostics for a view against a scene dimension; empty means valid."""
    errors: list[str] = []
    if isinstance(view, Window2D):
        if dimension != 2:
            errors.append(f"window2d view needs a 2D scene, dimension is {dimension}")
        if not (np.isfinite(view.width) and view.width > 0):
            errors.append(f"window width must be positive, got {view.width}")
        if len(view.center) != 2 or not all(np.isfinite(c) for c in view.center):
            errors.append(f"window center must be a finite 2-vector, got {view.center}")
        if not np.isfinite(view.rotation):
            errors.append("window rotation must be finite")
    elif isinstance(view, SliceFrame):
        if dimension not in (3, 4):
            errors.append(f"sliceframe view needs a 3D or 4D scene, dimension is {dimension}")
        for label, vec in (
            ("origin", view.origin),
            ("basis_u", view.basis_u),
            ("basis_v", view.basis_v),
        ):
            if len(vec) != dimension or not all(np.isfinite(c) for c in vec):
                errors.append(f"sliceframe {label} must be a finite {dimension}-vector")
        if not errors:
            bu = np.asarray(view.basis_u, dtype=float)
            bv = np.asarray(view.basis_v, dtype=float)
            if abs(float(bu @ bu) - 1.0) > ORTHO_TOL or abs(float(bv @ bv) - 1.0) > ORTHO_TOL:
                errors.append("sliceframe basis vectors must be unit length (within 1e-9)")
            elif abs(float(bu @ bv)) > ORTHO_TOL:
                errors.append("sliceframe basis vectors must be orthogonal (within 1e-9)")
        if not (np.isfinite(view.width) and view.width > 0):
            errors.append(f"sliceframe width must be positive, got {view.width}")
    elif isinstance(view, Camera3D):
        if dimension not in (3, 4):
            errors.append(f"camera3d view needs a 3D or 4D scene, dimension is {dimension}")
        for label, vec in (("eye", view.eye), ("look_at", view.look_at), ("up", view.up)):
            if len(vec) != 3 or not all(np.isfinite(c) for c in vec):
                errors.append(f"camera {label} must be a finite 3-vector")
        if not errors:
            eye = np.asarray(view.eye, dtype=float)
            look = np.asarray(view.look_at, dtype=float)
            if float(np.sum((eye - look) ** 2)) == 0.0:
                errors.append("camera eye and look_at coincide")
            up = np.asarray(view.up, dtype=float)
            if float(np.sum(up * up)) == 0.0:
                errors.append("camera up vector is zero")
        if not (0.0 < view.vertical_fov < math.pi):
            errors.append(f"vertical_fov must lie in (0, pi), got {view.vertical_fov}")
        if dimension == 4 and view.w_slice is None:
            errors.append("4D scene with a camera view needs w_slice")
        if dimension == 3 and view.w_slice is not None:
            errors.append("w_slice is only meaningful for 4D scenes")
        if view.w_slice is not None and not np.isfinite(view.w_slice):
            errors.append("w_slice must be finite")
    else:
        errors.append(f"unknown view type {type(view).__name__}")
    return errors


def pixel_to_world(
    view: ViewSpec, image_width: int, image_height: int, px: float, py: float
) -> np.ndarray:
    """Map continuous pixel coordinates to a world point (sampled views only).

    The center of pixel (i, j) is at (i + 0.5, j + 0.5); (W/2, H/2) maps to
    the view center / slice origin; row 0 is the top of the image; the
    horizontal extent spans exactly the configured world width.
    """
    if isinstance(view, Camera3D):
        raise ValueError("pixel_to_world applies to window2d/sliceframe views only")
    return _world_points(
        view,
        image_width,
        image_height,
        np.asarray([px], dtype=float),
        np.asarray([py], dtype=float),
    )[0]


def _frac_uv(px: np.ndarray, py: np.ndarray, w: int, h: int) -> tuple[np.ndarray, np.ndarray]:
    return px / w - 0.5, 0.5 - py / h


def _world_points(
    view: Window2D | SliceFrame, w: int, h: int, px: np.ndarray, py: np.ndarray
) -> np.ndarray:
    u, v = _frac_uv(px, py, w, h)
    width = view.width
    height_world = width * h / w
    du = u * width
    dv = v * height_world
    if isinstance(view, Window2D):
        c, s = math.cos(view.rotation), math.sin(view.rotation)
        out = np.empty((px.shape[0], 2))
        out[:, 0] = view.center[0] + c * du - s * dv
        out[:, 1] = view.center[1] + s * du + c * dv
        return out
    origin = np.asarray(view.origin, dtype=float)
    bu = np.asarray(view.basis_u, dtype=float)
    bv = np.asarray(view.basis_v, dtype=float)
    return origin[None, :] + du[:, None] * bu[None, :] + dv[:, None] * bv[None, :]


def camera_rays(
    cam: Camera3D, w: int, h: int, px: np.ndarray, py: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Primary-ray origins and unit directions for continuous pixel coordinates."""
    eye = np.asarray(cam.eye, dtype=float)
    look = np.asarray(cam.look_at, dtype=float)
    up = np.asarray(cam.up, dtype=float)
    forward = look - eye
    forward = forward / np.sqrt(np.sum(forward * forward))
    right = np.cross(forward, up)
    rn = np.sqrt(np.sum(right * right))
    if rn < 1e-12:
        raise ValueError("camera up vector is parallel to the viewing direction")
    right = right / rn
    true_up = np.cross(right, forward)
    half_h = math.tan(cam.vertical_fov / 2.0)
    half_w = half_h * w / h
    u, v = _frac_uv(px, py, w, h)
    dirs = (
        forward[None, :]
        + (2.0 * u * half_w)[:, None] * right[None, :]
        + (2.0 * v * half_h)[:, None] * true_up[None, :]
    )
    dirs = dirs / np.sqrt(np.sum(dirs * dirs, axis=-1))[:, None]
    origins = np.broadcast_to(eye, dirs.shape)
    return origins, dirs


# ---------------------------------------------------------------------------
# palette and shading


@dataclass(frozen=True)
class Palette:
    """Orbit-trap shading parameters: three control colors over a background."""

    background: tuple[float, float, float] = (0.0, 0.0, 0.0)
    colors: tuple[tuple[float, float, float], ...] = (
        (0.10, 0.12, 0.35),
        (0.95, 0.85, 0.45),
        (0.30, 0.75, 0.80),
    )
    w_origin: float = 1.0
    w_axis: float = 1.0
    gamma: float = 2.2


def validate_palette(palette: Palette) -> list[str]:
    errors: list[str] = []
    triples = (palette.background, *palette.colors)
    if len(palette.colors) != 3:
        errors.append(f"palette needs exactly 3 control colors, got {len(palette.colors)}")
    for tri in triples:
        if len(tri) != 3 or not all(np.isfinite(c) and 0.0 <= c <= 1.0 for c in tri):
            errors.append(f"palette colors must be RGB triples in [0,1], got {tri}")
            break
    if not (np.isfinite(palette.w_origin) and palette.w_origin >= 0):
        errors.append(f"w_origin must be nonnegative, got {palette.w_origin}")
    if not (np.isfinite(palette.w_axis) and palette.w_axis >= 0):
        errors.append(f"w_axis must be nonnegative, got {palette.w_axis}")
    if not (np.isfinite(palette.gamma) and palette.gamma > 0):
        errors.append(f"gamma must be positive, got {palette.gamma}")
    return errors


def _member_linear(
    trap_origin: np.ndarray, trap_axes: np.ndarray, palette: Palette
) -> np.ndarray:
    """Pre-gamma member colors from the two trap ramps."""
    c0 = np.asarray(palette.colors[0], dtype=float)
    c1 = np.asarray(palette.colors[1], dtype=float)
    c2 = np.asarray(palette.colors[2], dtype=float)
    s_o = np.exp(-palette.w_origin * trap_origin)[:, None]
    s_a = np.exp(-palette.w_axis * np.min(trap_axes, axis=-1))[:, None]
    base = c0[None, :] + (c1 - c0)[None, :] * s_o
    return base + (c2[None, :] - base) * s_a


def _apply_gamma(linear: np.ndarray, gamma: float) -> np.ndarray:
    return np.clip(linear, 0.0, 1.0) ** (1.0 / gamma)


def shade_rows(batch: OrbitBatch, palette: Palette) -> np.ndarray:
    """Display-ready float colors per orbit row; escaped rows are the background exactly."""
    member = _apply_gamma(
        _member_linear(batch.trap_origin, batch.trap_axes, palette), palette.gamma
    )
    bg = np.asarray(palette.background, dtype=float)
    return np.where(batch.escaped[:, None], bg[None, :], member)


def shade(orbit: OrbitResult, palette: Palette) -> tuple[float, float, float]:
    """Color one orbit outcome."""
    batch = OrbitBatch(
        escaped=np.asarray([orbit.escaped]),
        escape_iteration=np.asarray([orbit.escape_iteration]),
        trap_origin=np.asarray([orbit.trap_origin]),
        trap_axes=np.asarray([orbit.trap_axes], dtype=float),
        final_magnitude=np.asarray([orbit.final_magnitude]),
    )
    r, g, b = shade_rows(batch, palette)[0]
    return float(r), float(g), float(b)


def quantize(colors: np.ndarray) -> np.ndarray:
    """Float [0,1] colors to RGB8."""
    return np.rint(np.clip(colors, 0.0, 1.0) * 255.0).astype(np.uint8)


# ---------------------------------------------------------------------------
# tiles


@dataclass(frozen=True)
class TileImage:
    """One rendered rectangle of the full image; pixels are row-major RGB8."""

    x: int
    y: int
    width: int
    height: int
    pixels: np.ndarray  # uint8, shape (height, width, 3)


def tile_rects(width: int, height: int, tile_size: int) -> list[tuple[int, int, int, int]]:
    """Static row-major tile decomposition; identical for any worker count."""
    rects = []
    for y in range(0, height, tile_size):
        for x in range(0, width, tile_size):
            rects.append((x, y, min(tile_size, width - x), min(tile_size, height - y)))
    return rects


class AssemblyError(ValueError):
    pass


def assemble(tiles: list[TileImage], width: int, height: int) -> np.ndarray:
    """Compose tiles into a full row-major RGB8 image; overlap or gap is an error."""
    canvas = np.zeros((height, width, 3), dtype=np.uint8)
    covered = np.zeros((height, width), dtype=bool)
    for t in tiles:
        if t.x < 0 or t.y < 0 or t.x + t.width > width or t.y + t.height > height:
            raise AssemblyError(
                f"tile ({t.x}, {t.y}, {t.width}, {t.height}) lies outside the "
                f"{width}x{height} image"
            )
        if t.pixels.shape != (t.height, t.width, 3):
            raise AssemblyError(
                f"tile at ({t.x}, {t.y}) carries a {t.pixels.shape} buffer for a "
                f"{t.height}x{t.width}x3 rectangle"
            )
        region = covered[t.y : t.y + t.height, t.x : t.x + t.width]
        if region.any():
            raise AssemblyError(
                f"tiles overlap within rectangle ({t.x}, {t.y}, {t.width}, {t.height})"
            )
        region[...] = True
        canvas[t.y : t.y + t.height, t.x : t.x + t.width] = t.pixels
    if not covered.all():
        ys, xs = np.nonzero(~covered)
        x0, x1 = int(xs.min()), int(xs.max())
        y0, y1 = int(ys.min()), int(ys.max())
        raise AssemblyError(
            f"tiles leave a gap within rectangle ({x0}, {y0}, {x1 - x0 + 1}, {y1 - y0 + 1})"
        )
    return canvas


# ---------------------------------------------------------------------------
# tuning


@dataclass(frozen=True)
class RenderTuning:
    """Marcher and sampling knobs; hit_epsilon is stored fully resolved."""

    fudge: float = 0.5
    hit_epsilon: float = 1e-4
    max_steps: int = 512
    max_distance: float = 64.0
    supersample: bool = False


def validate_tuning(tuning: RenderTuning) -> list[str]:
    errors: list[str] = []
    if not (np.isfinite(tuning.fudge) and 0.0 < tuning.fudge <= 1.0):
        errors.append(f"fudge must lie in (0, 1], got {tuning.fudge}")
    if not (np.isfinite(tuning.hit_epsilon) and tuning.hit_epsilon > 0):
        errors.append(f"hit_epsilon must be positive, got {tuning.hit_epsilon}")
    if tuning.max_steps < 1:
        errors.append(f"max_steps must be at least 1, got {tuning.max_steps}")
    if not (np.isfinite(tuning.max_distance) and tuning.max_distance > 0):
        errors.append(f"max_distance must be positive, got {tuning.max_distance}")
    return errors


# ---------------------------------------------------------------------------
# sampled rendering


_SUBPIXEL = ((0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75))


def _pixel_grid(rect: tuple[int, int, int, int]) -> tuple[np.ndarray, np.ndarray]:
    x, y, w, h = rect
    xs = np.arange(x, x + w, dtype=float)
    ys = np.arange(y, y + h, dtype=float)
    px = np.tile(xs, h)
    py = np.repeat(ys, w)
    return px, py


def _sampled_colors(scene: "SceneConfig", px: np.ndarray, py: np.ndarray) -> tuple[np.ndarray, int]:
    points = _world_points(scene.view, scene.image_width, scene.image_height, px, py)
    batch = iterate_batch(points, scene.params)
    colors = shade_rows(batch, scene.palette)
    return colors, int(np.count_nonzero(~batch.escaped))


def render_sampled(scene: "SceneConfig", rect: tuple[int, int, int, int]) -> TileImage:
    """Render one tile of a window2d/sliceframe scene by membership sampling."""
    tile, _ = _render_sampled_tile(scene, rect)
    return tile


def _render_sampled_tile(
    scene: "SceneConfig", rect: tuple[int, int, int, int]
) -> tuple[TileImage, dict]:
    if isinstance(scene.view, Camera3D):
        raise ValueError("render_sampled needs a window2d or sliceframe view")
    x, y, w, h = rect
    px, py = _pixel_grid(rect)
    if scene.tuning.supersample:
        acc = np.zeros((w * h, 3))
        members = 0
        for ox, oy in _SUBPIXEL:
            colors, m = _sampled_colors(scene, px + ox, py + oy)
            acc += colors
            members += m
        colors = acc / len(_SUBPIXEL)
        members = members // len(_SUBPIXEL)
    else:
        colors, members = _sampled_colors(scene, px + 0.5, py + 0.5)
    pixels = quantize(colors).reshape(h, w, 3)
    return TileImage(x, y, w, h, pixels), {"members": members, "pixels": w * h}


# ---------------------------------------------------------------------------
# distance estimation and ray marching


def _lift(points3: np.ndarray, scene: "SceneConfig") -> np.ndarray:
    """3D sample points to iteration space (append the fixed w for 4D scenes)."""
    if scene.dimension == 4:
        w_slice = scene.view.w_slice
        out = np.empty((points3.shape[0], 4))
        out[:, :3] = points3
        out[:, 3] = w_slice
        return out
    return points3


def estimate_distance(p, scene: "SceneConfig") -> float:
    """Heuristic distance estimate at a single 3D point (0 inside the set)."""
    arr = np.asarray(p, dtype=float)[None, :]
    return float(distance_rows(_lift(arr, scene), scene.params, scene.tuning.fudge)[0])


def _de_rows(points3: np.ndarray, scene: "SceneConfig") -> np.ndarray:
    return distance_rows(_lift(points3, scene), scene.params, scene.tuning.fudge)


def _member_rows3(points3: np.ndarray, scene: "SceneConfig") -> np.ndarray:
    return membership_rows(_lift(points3, scene), scene.params)


def _bisect_hits(
    eye: np.ndarray,
    dirs: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    scene: "SceneConfig",
    width_target: float,
) -> np.ndarray:
    """Shrink [outside, member] brackets along rays until below width_target.

    lo rows must be outside the set and hi rows inside; the returned hit
    parameter is the member end of the final bracket.
    """
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(64):
        open_rows = (hi - lo) > width_target
        if not np.any(open_rows):
            break
        idx = np.nonzero(open_rows)[0]
        mid = 0.5 * (lo[idx] + hi[idx])
        pts = eye[idx] + mid[:, None] * dirs[idx]
        mem = _member_rows3(pts, scene)
        hi[idx[mem]] = mid[mem]
        lo[idx[~mem]] = mid[~mem]
    return hi


def _surface_normals(hits: np.ndarray, dirs: np.ndarray, scene: "SceneConfig") -> np.ndarray:
    """Central finite differences of the DE field; falls back to facing the viewer."""
    m = hits.shape[0]
    delta = 2.0 * scene.tuning.hit_epsilon
    grads = np.empty((m, 3))
    for axis in range(3):
        offset = np.zeros(3)
        offset[axis] = delta
        hi = _de_rows(hits + offset[None, :], scene)
        lo = _de_rows(hits - offset[None, :], scene)
        grads[:, axis] = hi - lo
    norms = np.sqrt(np.sum(grads * grads, axis=-1))
    degenerate = norms < 1e-20
    grads[degenerate] = -dirs[degenerate]
    norms = np.where(degenerate, 1.0, norms)
    return grads / norms[:, None]


def raymarch(scene: "SceneConfig", rect: tuple[int, int, int, int]) -> TileImage:
    """Render one tile of a camera3d scene by sphere tracing."""
    tile, _ = _raymarch_tile(scene, rect)
    return tile


def _march_rays(
    scene: "SceneConfig", origins: np.ndarray, dirs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sphere-trace rays; returns (hit mask, t_hit, t_last_outside, steps, hit points)."""
    tuning = scene.tuning
    eps = tuning.hit_epsilon
    min_step = eps / 2.0
    m = dirs.shape[0]

    t = np.zeros(m)
    prev_t = np.zeros(m)
    steps = np.zeros(m, dtype=np.int64)
    hit = np.zeros(m, dtype=bool)
    t_hit = np.zeros(m)
    t_out = np.zeros(m)
    active = np.arange(m)

    for _ in range(tuning.max_steps):
        if active.size == 0:
            break
        pos = origins[active] + t[active, None] * dirs[active]
        de = _de_rows(pos, scene)
        steps[active] += 1
        member = de == 0.0
        if np.any(member):
            rows = active[member]
            hit[rows] = True
            t_hit[rows] = t[rows]
            t_out[rows] = prev_t[rows]
            active = active[~member]
            de = de[~member]
        if active.size == 0:
            break
        prev_t[active] = t[active]
        t[active] = t[active] + np.maximum(de, min_step)
        alive = t[active] <= tuning.max_distance
        active = active[alive]

    hit_pts = origins[hit] + t_hit[hit, None] * dirs[hit]
    return hit, t_hit, t_out, steps, hit_pts


def _check_hits(
    scene: "SceneConfig",
    origins: np.ndarray,
    dirs: np.ndarray,
    t_hit: np.ndarray,
    sample_cap: int = 32,
) -> tuple[int, int]:
    """Fine fixed-step membership oracle on a deterministic subset of hits.

    Walks hit_epsilon/10 steps across [t - eps, t + eps] and requires an
    outside-to-inside flip; returns (checked, valid).
    """
    n = dirs.shape[0]
    if n == 0:
        return 0, 0
    stride = max(1, n // sample_cap)
    idx = np.arange(0, n, stride)
    eps = scene.tuning.hit_epsilon
    offsets = np.linspace(-eps, eps, 21)
    ts = t_hit[idx, None] + offsets[None, :]
    pts = origins[idx, None, :] + ts[:, :, None] * dirs[idx, None, :]
    mem = _member_rows3(pts.reshape(-1, 3), scene).reshape(len(idx), offsets.size)
    flips = np.any(~mem[:, :-1] & mem[:, 1:], axis=1)
    return int(len(idx)), int(np.count_nonzero(flips))


def _raymarch_tile(
    scene: "SceneConfig", rect: tuple[int, int, int, int]
) -> tuple[TileImage, dict]:
    if not isinstance(scene.view, Camera3D):
        raise ValueError("raymarch needs a camera3d view")
    x, y, w, h = rect
    px, py = _pixel_grid(rect)
    if scene.tuning.supersample:
        acc = np.zeros((w * h, 3))
        stats_acc = {"rays": 0, "hits": 0, "hit_checked": 0, "hit_valid": 0}
        for ox, oy in _SUBPIXEL:
            colors, st = _march_colors(scene, px + ox, py + oy)
            acc += colors
            for key in stats_acc:
                stats_acc[key] += st[key]
        pixels = quantize(acc / len(_SUBPIXEL)).reshape(h, w, 3)
        return TileImage(x, y, w, h, pixels), stats_acc
    colors, stats = _march_colors(scene, px + 0.5, py + 0.5)
    pixels = quantize(colors).reshape(h, w, 3)
    return TileImage(x, y, w, h, pixels), stats


def _march_colors(
    scene: "SceneConfig", px: np.ndarray, py: np.ndarray
) -> tuple[np.ndarray, dict]:
    origins, dirs = camera_rays(scene.view, scene.image_width, scene.image_height, px, py)
    origins = np.ascontiguousarray(origins)
    hit, t_hit, t_out, steps, _ = _march_rays(scene, origins, dirs)

    m = dirs.shape[0]
    colors = np.empty((m, 3))
    colors[:] = np.asarray(scene.palette.background, dtype=float)[None, :]
    stats = {"rays": m, "hits": int(np.count_nonzero(hit)), "hit_checked": 0, "hit_valid": 0}
    if stats["hits"] == 0:
        return colors, stats

    h_origins = origins[hit]
    h_dirs = dirs[hit]
    t_refined = _bisect_hits(
        h_origins, h_dirs, t_out[hit], t_hit[hit], scene, scene.tuning.hit_epsilon / 4.0
    )
    hit_pts = h_origins + t_refined[:, None] * h_dirs

    orbit = iterate_batch(_lift(hit_pts, scene), scene.params)
    linear = _member_linear(orbit.trap_origin, orbit.trap_axes, scene.palette)

    normals = _surface_normals(hit_pts, h_dirs, scene)
    ndotl = np.maximum(np.sum(normals * _LIGHT_DIR[None, :], axis=-1), 0.0)
    ao = 1.0 - _AO_STRENGTH * steps[hit] / scene.tuning.max_steps
    shadefac = (_AMBIENT + _DIFFUSE * ndotl) * ao
    colors[hit] = _apply_gamma(linear * shadefac[:, None], scene.palette.gamma)

    checked, valid = _check_hits(scene, h_origins, h_dirs, t_refined)
    stats["hit_checked"] = checked
    stats["hit_valid"] = valid
    return colors, stats


# ---------------------------------------------------------------------------
# PNG I/O


def encode_png(image: np.ndarray) -> bytes:
    """RGB8 array to PNG bytes; decoding returns the input buffer exactly."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.dtype != np.uint8:
        raise ValueError(f"expected an RGB8 array of shape (h, w, 3), got {arr.shape} {arr.dtype}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"image has a zero dimension: {arr.shape[0]}x{arr.shape[1]}")
    buf = io.BytesIO()
    Image.fromarray(arr, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    """PNG bytes back to an RGB8 array."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except ValueError:
        raise
    except Exception as exc:
        raise ValueError(f"not a decodable image: {exc}") from exc


# ---------------------------------------------------------------------------
# full-scene driver


def resolve_threads(threads) -> int:
    if threads == "auto":
        return os.cpu_count() or 1
    return int(threads)


def render_tile(scene: "SceneConfig", rect: tuple[int, int, int, int]) -> tuple[TileImage, dict]:
    """Render one tile with whichever renderer the scene configures."""
    if scene.renderer == "raymarch":
        return _raymarch_tile(scene, rect)
    return _render_sampled_tile(scene, rect)


def render_scene(scene: "SceneConfig") -> tuple[np.ndarray, dict]:
    """Render a full scene to an RGB8 array plus render statistics.

    Tiles are cut row-major and dispatched to a fixed-size worker pool;
    thread count and tile size never change the pixels.
    """
    start = time.perf_counter()
    threads = resolve_threads(scene.threads)
    rects = tile_rects(scene.image_width, scene.image_height, scene.tile_size)
    if threads == 1:
        results = [render_tile(scene, rect) for rect in rects]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda rect: render_tile(scene, rect), rects))
    tiles = [tile for tile, _ in results]
    image = assemble(tiles, scene.image_width, scene.image_height)

    stats: dict = {
        "renderer": scene.renderer,
        "width": scene.image_width,
        "height": scene.image_height,
        "tiles": len(rects),
        "tile_size": scene.tile_size,
        "threads": threads,
        "elapsed_seconds": round(time.perf_counter() - start, 6),
    }
    if scene.renderer == "raymarch":
        rays = sum(st["rays"] for _, st in results)
        hits = sum(st["hits"] for _, st in results)
        checked = sum(st["hit_checked"] for _, st in results)
        valid = sum(st["hit_valid"] for _, st in results)
        stats["rays"] = rays
        stats["hits"] = hits
        stats["hit_rate"] = hits / rays if rays else 0.0
        stats["hit_checked"] = checked
        stats["hit_valid_rate"] = valid / checked if checked else None
    else:
        members = sum(st["members"] for _, st in results)
        pixels = sum(st["pixels"] for _, st in results)
        stats["member_fraction"] = members / pixels if pixels else 0.0
    return image, stats


def reference_render(scene: "SceneConfig") -> tuple[np.ndarray, dict]:
    """Single-threaded single-tile render of the same code path (the test oracle)."""
    from dataclasses import replace

    whole = replace(
        scene, threads=1, tile_size=max(scene.image_width, scene.image_height)
    )
    return render_scene(whole)
