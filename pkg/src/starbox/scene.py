"""Scene documents: a strict, versioned JSON schema for renders.

Scene configs are hand-edited, so the parser is deliberately unforgiving:
unknown fields are errors (a typo never silently disappears), every
diagnostic carries the path of the offending field, and all defaults are
filled in at parse time so the effective configuration can be echoed back
verbatim.  ``parse_scene(scene_to_json(s))`` is the identity on the
canonical form.

Two error layers map to distinct failure modes downstream:

* ``SceneParseError`` — the document is malformed: bad JSON, wrong types,
  missing or unknown fields.
* ``SceneValidationError`` — well-formed but violates an invariant (bad
  parameter range, renderer/view mismatch, non-orthonormal slice basis...).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace

from . import dynamics
from .dynamics import IterationParams, validate_params
from .geometry import (
    Ball,
    Blend,
    Box,
    CrossPolytope,
    FGSquircle,
    Hexagon,
    Intersection,
    Rotated,
    Rotation,
    Shape,
    Superellipsoid,
    Union,
)
from .render import (
    Camera3D,
    Palette,
    RenderTuning,
    SliceFrame,
    ViewSpec,
    Window2D,
    validate_palette,
    validate_tuning,
    validate_view,
    view_scale,
)

SCHEMA_VERSION = 1

DEFAULT_IMAGE_SIZE = 256
DEFAULT_TILE_SIZE = 32
DEFAULT_WINDOW_WIDTH = 8.0

# hit_epsilon defaults to this fraction of the view's characteristic scale.
HIT_EPSILON_SCALE = 1e-4

_ANGLE_COUNT = {2: 1, 3: 3, 4: 6}


class SceneError(ValueError):
    """Base for scene document problems; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class SceneParseError(SceneError):
    """Malformed document: bad JSON, wrong type, missing or unknown field."""


class SceneValidationError(SceneError):
    """Well-formed document that violates a scene invariant."""


@dataclass(frozen=True)
class SceneConfig:
    """Fully resolved render configuration (all defaults applied)."""

    schema_version: int
    dimension: int
    params: IterationParams
    view: ViewSpec
    image_width: int
    image_height: int
    palette: Palette
    renderer: str  # "sampled" | "raymarch"
    tuning: RenderTuning
    threads: int | str  # positive int or "auto"
    tile_size: int

    def with_overrides(self, **kwargs) -> "SceneConfig":
        return replace(self, **kwargs)


# ---------------------------------------------------------------------------
# low-level field access


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


class _Fields:
    """Tracks which keys of one JSON object were consumed; leftovers are errors."""

    def __init__(self, data, path: str):
        if not isinstance(data, dict):
            raise SceneParseError(path or "<document>", "expected a JSON object")
        self.data = data
        self.path = path
        self.seen: set[str] = set()

    def has(self, key: str) -> bool:
        return key in self.data

    def get(self, key: str):
        self.seen.add(key)
        if key not in self.data:
            raise SceneParseError(_join(self.path, key), "missing required field")
        return self.data[key]

    def opt(self, key: str, default):
        self.seen.add(key)
        return self.data.get(key, default)

    def finish(self) -> None:
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            raise SceneParseError(_join(self.path, unknown[0]), "unknown field")


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneParseError(path, f"expected a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise SceneParseError(path, f"expected a finite number, got {value!r}")
    return out


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SceneParseError(path, f"expected an integer, got {value!r}")
    return value


def _boolean(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise SceneParseError(path, f"expected true or false, got {value!r}")
    return value


def _vector(value, path: str, length: int) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise SceneParseError(path, f"expected a list of {length} numbers, got {value!r}")
    return tuple(_real(v, f"{path}[{i}]") for i, v in enumerate(value))


def _color(value, path: str) -> tuple[float, float, float]:
    r, g, b = _vector(value, path, 3)
    return (r, g, b)


# ---------------------------------------------------------------------------
# shapes


def _parse_shape(value, path: str, dimension: int) -> Shape:
    f = _Fields(value, path)
    kind = f.get("kind")
    if not isinstance(kind, str):
        raise SceneParseError(_join(path, "kind"), f"expected a string, got {kind!r}")

    if kind == "ball":
        shape: Shape = Ball(radius=_real(f.get("radius"), _join(path, "radius")))
    elif kind == "box":
        shape = Box(half_side=_real(f.get("half_side"), _join(path, "half_side")))
    elif kind == "cross_polytope":
        shape = CrossPolytope(radius=_real(f.get("radius"), _join(path, "radius")))
    elif kind == "hexagon":
        shape = Hexagon(
            circumradius=_real(f.get("circumradius"), _join(path, "circumradius"))
        )
    elif kind == "fg_squircle":
        shape = FGSquircle(
            radius=_real(f.get("radius"), _join(path, "radius")),
            squareness=_real(f.get("squareness"), _join(path, "squareness")),
        )
    elif kind == "superellipsoid":
        axes = _vector(f.get("semi_axes"), _join(path, "semi_axes"), 3)
        shape = Superellipsoid(
            exponent=_real(f.get("exponent"), _join(path, "exponent")),
            semi_axes=axes,
        )
    elif kind in ("union", "intersection", "blend"):
        children = f.get("children")
        cpath = _join(path, "children")
        if not isinstance(children, list) or len(children) != 2:
            raise SceneParseError(cpath, "expected a list of exactly 2 shapes")
        a = _parse_shape(children[0], f"{cpath}[0]", dimension)
        b = _parse_shape(children[1], f"{cpath}[1]", dimension)
        if kind == "union":
            shape = Union(a, b)
        elif kind == "intersection":
            shape = Intersection(a, b)
        else:
            shape = Blend(a, b, t=_real(f.get("t"), _join(path, "t")))
    elif kind == "rotated":
        child = _parse_shape(f.get("child"), _join(path, "child"), dimension)
        count = _ANGLE_COUNT.get(dimension, 0)
        angles = _vector(f.get("angles"), _join(path, "angles"), count)
        shape = Rotated(child, Rotation(dimension=dimension, angles=angles))
    else:
        raise SceneParseError(
            _join(path, "kind"),
            f"unknown shape kind {kind!r} (expected ball, box, cross_polytope, hexagon, "
            "fg_squircle, superellipsoid, union, intersection, blend or rotated)",
        )
    f.finish()
    return shape


def shape_to_dict(shape: Shape) -> dict:
    """Shape tree back to its JSON form (inverse of the parser)."""
    if isinstance(shape, Ball):
        return {"kind": "ball", "radius": shape.radius}
    if isinstance(shape, Box):
        return {"kind": "box", "half_side": shape.half_side}
    if isinstance(shape, CrossPolytope):
        return {"kind": "cross_polytope", "radius": shape.radius}
    if isinstance(shape, Hexagon):
        return {"kind": "hexagon", "circumradius": shape.circumradius}
    if isinstance(shape, FGSquircle):
        return {"kind": "fg_squircle", "radius": shape.radius, "squareness": shape.squareness}
    if isinstance(shape, Superellipsoid):
        return {
            "kind": "superellipsoid",
            "exponent": shape.exponent,
            "semi_axes": list(shape.semi_axes),
        }
    if isinstance(shape, Union):
        return {"kind": "union", "children": [shape_to_dict(shape.a), shape_to_dict(shape.b)]}
    if isinstance(shape, Intersection):
        return {
            "kind": "intersection",
            "children": [shape_to_dict(shape.a), shape_to_dict(shape.b)],
        }
    if isinstance(shape, Blend):
        return {
            "kind": "blend",
            "children": [shape_to_dict(shape.a), shape_to_dict(shape.b)],
            "t": shape.t,
        }
    if isinstance(shape, Rotated):
        return {
            "kind": "rotated",
            "child": shape_to_dict(shape.child),
            "angles": list(shape.rotation.angles),
        }
    raise TypeError(f"unknown shape node {type(shape).__name__}")


# ---------------------------------------------------------------------------
# iteration block


def _parse_iteration(value, path: str, dimension: int) -> IterationParams:
    f = _Fields(value, path)
    fold = _real(f.get("fold_halfwidth"), _join(path, "fold_halfwidth"))
    outer = _parse_shape(f.get("outer_shape"), _join(path, "outer_shape"), dimension)
    minimum = _parse_shape(f.get("min_shape"), _join(path, "min_shape"), dimension)
    scale = _real(f.get("scale"), _join(path, "scale"))

    mode_raw = f.opt("scale_mode", "ratio")
    mode_path = _join(path, "scale_mode")
    scale_mode = dynamics.SCALE_MODE_RATIO
    scale_constant: float | None = None
    if mode_raw == "ratio":
        pass
    elif isinstance(mode_raw, dict):
        mf = _Fields(mode_raw, mode_path)
        scale_constant = _real(mf.get("constant"), _join(mode_path, "constant"))
        mf.finish()
        scale_mode = dynamics.SCALE_MODE_CONSTANT
    else:
        raise SceneParseError(
            mode_path, f'expected "ratio" or {{"constant": c}}, got {mode_raw!r}'
        )

    offset_raw = f.opt("offset_mode", "mandelbox")
    offset_path = _join(path, "offset_mode")
    julia_offset: tuple[float, ...] | None = None
    if offset_raw == "mandelbox":
        pass
    elif isinstance(offset_raw, dict):
        of = _Fields(offset_raw, offset_path)
        julia_offset = _vector(of.get("julibox"), _join(offset_path, "julibox"), dimension)
        of.finish()
    else:
        raise SceneParseError(
            offset_path, f'expected "mandelbox" or {{"julibox": [...]}}, got {offset_raw!r}'
        )

    escape = _real(f.opt("escape_distance", 1024.0), _join(path, "escape_distance"))
    max_iter = _integer(f.opt("max_iterations", 100), _join(path, "max_iterations"))
    f.finish()
    return IterationParams(
        dimension=dimension,
        fold_halfwidth=fold,
        outer_shape=outer,
        min_shape=minimum,
        scale=scale,
        scale_mode=scale_mode,
        scale_constant=scale_constant,
        julia_offset=julia_offset,
        escape_distance=escape,
        max_iterations=max_iter,
    )


def _iteration_to_dict(params: IterationParams) -> dict:
    if params.scale_mode == dynamics.SCALE_MODE_CONSTANT:
        scale_mode: object = {"constant": params.scale_constant}
    else:
        scale_mode = "ratio"
    if params.julia_offset is None:
        offset_mode: object = "mandelbox"
    else:
        offset_mode = {"julibox": list(params.julia_offset)}
    return {
        "fold_halfwidth": params.fold_halfwidth,
        "outer_shape": shape_to_dict(params.outer_shape),
        "min_shape": shape_to_dict(params.min_shape),
        "scale": params.scale,
        "scale_mode": scale_mode,
        "offset_mode": offset_mode,
        "escape_distance": params.escape_distance,
        "max_iterations": params.max_iterations,
    }


# ---------------------------------------------------------------------------
# views


def _parse_view(value, path: str, dimension: int) -> ViewSpec:
    f = _Fields(value, path)
    kind = f.get("kind")
    if kind == "window2d":
        view: ViewSpec = Window2D(
            center=_vector(f.get("center"), _join(path, "center"), 2),
            width=_real(f.get("width"), _join(path, "width")),
            rotation=_real(f.opt("rotation", 0.0), _join(path, "rotation")),
        )
    elif kind == "sliceframe":
        view = SliceFrame(
            origin=_vector(f.get("origin"), _join(path, "origin"), dimension),
            basis_u=_vector(f.get("basis_u"), _join(path, "basis_u"), dimension),
            basis_v=_vector(f.get("basis_v"), _join(path, "basis_v"), dimension),
            width=_real(f.get("width"), _join(path, "width")),
        )
    elif kind == "camera3d":
        w_slice = None
        if f.has("w_slice"):
            w_slice = _real(f.get("w_slice"), _join(path, "w_slice"))
        view = Camera3D(
            eye=_vector(f.get("eye"), _join(path, "eye"), 3),
            look_at=_vector(f.get("look_at"), _join(path, "look_at"), 3),
            up=_vector(f.get("up"), _join(path, "up"), 3),
            vertical_fov=_real(f.get("vertical_fov"), _join(path, "vertical_fov")),
            w_slice=w_slice,
        )
    else:
        raise SceneParseError(
            _join(path, "kind"),
            f"unknown view kind {kind!r} (expected window2d, sliceframe or camera3d)",
        )
    f.finish()
    return view


def _view_to_dict(view: ViewSpec) -> dict:
    if isinstance(view, Window2D):
        return {
            "kind": "window2d",
            "center": list(view.center),
            "width": view.width,
            "rotation": view.rotation,
        }
    if isinstance(view, SliceFrame):
        return {
            "kind": "sliceframe",
            "origin": list(view.origin),
            "basis_u": list(view.basis_u),
            "basis_v": list(view.basis_v),
            "width": view.width,
        }
    out = {
        "kind": "camera3d",
        "eye": list(view.eye),
        "look_at": list(view.look_at),
        "up": list(view.up),
        "vertical_fov": view.vertical_fov,
    }
    if view.w_slice is not None:
        out["w_slice"] = view.w_slice
    return out


# ---------------------------------------------------------------------------
# palette / tuning


def _parse_palette(value, path: str) -> Palette:
    default = Palette()
    if value is None:
        return default
    f = _Fields(value, path)
    background = _color(
        f.opt("background", list(default.background)), _join(path, "background")
    )
    colors_raw = f.opt("colors", [list(c) for c in default.colors])
    cpath = _join(path, "colors")
    if not isinstance(colors_raw, list) or len(colors_raw) != 3:
        raise SceneParseError(cpath, "expected a list of 3 RGB triples")
    colors = tuple(_color(c, f"{cpath}[{i}]") for i, c in enumerate(colors_raw))
    palette = Palette(
        background=background,
        colors=colors,
        w_origin=_real(f.opt("w_origin", default.w_origin), _join(path, "w_origin")),
        w_axis=_real(f.opt("w_axis", default.w_axis), _join(path, "w_axis")),
        gamma=_real(f.opt("gamma", default.gamma), _join(path, "gamma")),
    )
    f.finish()
    return palette


def _palette_to_dict(palette: Palette) -> dict:
    return {
        "background": list(palette.background),
        "colors": [list(c) for c in palette.colors],
        "w_origin": palette.w_origin,
        "w_axis": palette.w_axis,
        "gamma": palette.gamma,
    }


def _parse_tuning(value, path: str, view: ViewSpec) -> RenderTuning:
    default = RenderTuning()
    f = _Fields(value if value is not None else {}, path)
    eps_raw = f.opt("hit_epsilon", None)
    if eps_raw is None:
        hit_epsilon = HIT_EPSILON_SCALE * view_scale(view)
    else:
        hit_epsilon = _real(eps_raw, _join(path, "hit_epsilon"))
    tuning = RenderTuning(
        fudge=_real(f.opt("fudge", default.fudge), _join(path, "fudge")),
        hit_epsilon=hit_epsilon,
        max_steps=_integer(f.opt("max_steps", default.max_steps), _join(path, "max_steps")),
        max_distance=_real(
            f.opt("max_distance", default.max_distance), _join(path, "max_distance")
        ),
        supersample=_boolean(
            f.opt("supersample", default.supersample), _join(path, "supersample")
        ),
    )
    f.finish()
    return tuning


def _tuning_to_dict(tuning: RenderTuning) -> dict:
    return {
        "fudge": tuning.fudge,
        "hit_epsilon": tuning.hit_epsilon,
        "max_steps": tuning.max_steps,
        "max_distance": tuning.max_distance,
        "supersample": tuning.supersample,
    }


# ---------------------------------------------------------------------------
# whole documents


def parse_scene_dict(doc) -> SceneConfig:
    """Parse an already-deserialized scene document into a SceneConfig."""
    f = _Fields(doc, "")
    version = _integer(f.get("schema_version"), "schema_version")
    if version != SCHEMA_VERSION:
        raise SceneParseError(
            "schema_version", f"unsupported schema version {version} (expected {SCHEMA_VERSION})"
        )
    dimension = _integer(f.get("dimension"), "dimension")
    if dimension not in (2, 3, 4):
        raise SceneValidationError("dimension", f"dimension must be 2, 3 or 4, got {dimension}")

    params = _parse_iteration(f.get("iteration"), "iteration", dimension)

    if f.has("view"):
        view = _parse_view(f.get("view"), "view", dimension)
    elif dimension == 2:
        f.seen.add("view")
        view = Window2D(center=(0.0, 0.0), width=DEFAULT_WINDOW_WIDTH, rotation=0.0)
    else:
        raise SceneParseError("view", "missing required field (no default view beyond 2D)")

    image_raw = f.opt("image", None)
    if image_raw is None:
        image_width = image_height = DEFAULT_IMAGE_SIZE
    else:
        imf = _Fields(image_raw, "image")
        image_width = _integer(imf.get("width"), "image.width")
        image_height = _integer(imf.get("height"), "image.height")
        imf.finish()

    palette = _parse_palette(f.opt("palette", None), "palette")

    renderer = f.opt("renderer", None)
    if renderer is None:
        renderer = "raymarch" if isinstance(view, Camera3D) else "sampled"
    elif renderer not in ("sampled", "raymarch"):
        raise SceneParseError(
            "renderer", f'expected "sampled" or "raymarch", got {renderer!r}'
        )

    tuning = _parse_tuning(f.opt("tuning", None), "tuning", view)

    threads = f.opt("threads", "auto")
    if threads != "auto":
        threads = _integer(threads, "threads")

    tile_size = _integer(f.opt("tile_size", DEFAULT_TILE_SIZE), "tile_size")
    f.finish()

    scene = SceneConfig(
        schema_version=version,
        dimension=dimension,
        params=params,
        view=view,
        image_width=image_width,
        image_height=image_height,
        palette=palette,
        renderer=renderer,
        tuning=tuning,
        threads=threads,
        tile_size=tile_size,
    )
    _validate_scene(scene)
    return scene


def parse_scene(text: str) -> SceneConfig:
    """Parse a scene document from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError("<document>", f"invalid JSON: {exc}") from exc
    return parse_scene_dict(doc)


def _validate_scene(scene: SceneConfig) -> None:
    problems = validate_params(scene.params)
    if problems:
        raise SceneValidationError("iteration", "; ".join(problems))

    problems = validate_view(scene.view, scene.dimension)
    if problems:
        raise SceneValidationError("view", "; ".join(problems))

    problems = validate_palette(scene.palette)
    if problems:
        raise SceneValidationError("palette", "; ".join(problems))

    problems = validate_tuning(scene.tuning)
    if problems:
        raise SceneValidationError("tuning", "; ".join(problems))

    if scene.image_width < 1 or scene.image_height < 1:
        raise SceneValidationError(
            "image", f"image size must be positive, got {scene.image_width}x{scene.image_height}"
        )
    if isinstance(scene.view, Camera3D) and scene.renderer != "raymarch":
        raise SceneValidationError(
            "renderer", "a camera3d view requires the raymarch renderer"
        )
    if not isinstance(scene.view, Camera3D) and scene.renderer == "raymarch":
        raise SceneValidationError(
            "renderer", "the raymarch renderer requires a camera3d view"
        )
    if scene.threads != "auto" and scene.threads < 1:
        raise SceneValidationError("threads", f'expected "auto" or >= 1, got {scene.threads}')
    if scene.tile_size < 1:
        raise SceneValidationError("tile_size", f"tile_size must be >= 1, got {scene.tile_size}")


def scene_to_dict(scene: SceneConfig) -> dict:
    """Canonical document form with every default made explicit."""
    return {
        "schema_version": scene.schema_version,
        "dimension": scene.dimension,
        "iteration": _iteration_to_dict(scene.params),
        "view": _view_to_dict(scene.view),
        "image": {"width": scene.image_width, "height": scene.image_height},
        "palette": _palette_to_dict(scene.palette),
        "renderer": scene.renderer,
        "tuning": _tuning_to_dict(scene.tuning),
        "threads": scene.threads,
        "tile_size": scene.tile_size,
    }


def scene_to_json(scene: SceneConfig) -> str:
    return json.dumps(scene_to_dict(scene), indent=2) + "\n"


def scene_hash(scene: SceneConfig) -> str:
    """Stable content hash of the canonical scene document."""
    text = json.dumps(scene_to_dict(scene), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def scene_warnings(scene: SceneConfig) -> list[str]:
    """Non-fatal advisories (forwarded to CLI stderr and render metadata)."""
    return dynamics.advisory_warnings(scene.params)
