"""Built-in scene catalog.

Each preset is a complete scene document: 2D membership windows, 3D
ray-marched cameras, and 4D slices.  They are starting points for
exploration, chosen for legible structure at their default sizes, not
reproductions of any published image.  ``preset_scene`` returns the parsed
config; ``preset_document`` the canonical JSON form with all defaults made
explicit (what ``presets export`` prints).
"""

from __future__ import annotations

from .scene import SceneConfig, parse_scene_dict, scene_to_dict

# Shared camera for the 3D presets; hyper4d-cube reuses it verbatim so its
# w=0 slice can be compared pixel-for-pixel against cube3d.
_CAMERA = {
    "kind": "camera3d",
    "eye": [16.3, 12.1, 8.4],
    "look_at": [0.0, 0.0, 0.0],
    "up": [0.0, 0.0, 1.0],
    "vertical_fov": 1.0,
}

_RAYMARCH_IMAGE = {"width": 128, "height": 96}


def _ball(radius: float) -> dict:
    return {"kind": "ball", "radius": radius}


def _box(half_side: float) -> dict:
    return {"kind": "box", "half_side": half_side}


def _scene2d(outer: dict, minimum: dict, scale: float = 2.0, width: float = 8.0) -> dict:
    return {
        "schema_version": 1,
        "dimension": 2,
        "iteration": {
            "fold_halfwidth": 1.0,
            "outer_shape": outer,
            "min_shape": minimum,
            "scale": scale,
        },
        "view": {"kind": "window2d", "center": [0.0, 0.0], "width": width, "rotation": 0.0},
        "image": {"width": 256, "height": 256},
    }


# Ray-marched presets cap iterations lower than the 2D ones: high caps leave
# the surface a veil-thin foam no ray can land on, while ~16 iterations give
# the solid walls these sets are usually pictured with.
_RAYMARCH_ITERATIONS = 16


def _scene3d(outer: dict, minimum: dict, scale: float = 2.0) -> dict:
    return {
        "schema_version": 1,
        "dimension": 3,
        "iteration": {
            "fold_halfwidth": 1.0,
            "outer_shape": outer,
            "min_shape": minimum,
            "scale": scale,
            "max_iterations": _RAYMARCH_ITERATIONS,
        },
        "view": dict(_CAMERA),
        "image": dict(_RAYMARCH_IMAGE),
    }


def _hyper4d_cube() -> dict:
    view = dict(_CAMERA)
    view["w_slice"] = 0.0
    return {
        "schema_version": 1,
        "dimension": 4,
        "iteration": {
            "fold_halfwidth": 1.0,
            "outer_shape": _box(1.0),
            "min_shape": _ball(0.5),
            "scale": 2.0,
            "max_iterations": _RAYMARCH_ITERATIONS,
        },
        "view": view,
        "image": dict(_RAYMARCH_IMAGE),
    }


def _hyper4d_blend() -> dict:
    return {
        "schema_version": 1,
        "dimension": 4,
        "iteration": {
            "fold_halfwidth": 1.0,
            "outer_shape": {
                "kind": "blend",
                "children": [_ball(1.0), _box(1.0)],
                "t": 0.5,
            },
            "min_shape": _ball(0.4),
            "scale": -1.5,
        },
        "view": {
            "kind": "sliceframe",
            "origin": [0.0, 0.0, 0.0, 0.0],
            "basis_u": [1.0, 0.0, 0.0, 0.0],
            "basis_v": [0.0, 1.0, 0.0, 0.0],
            "width": 6.0,
        },
        "image": {"width": 256, "height": 256},
    }


_PRESETS: tuple[tuple[str, str, dict], ...] = (
    (
        "classic2d",
        "Classic 2D box: ball-in-ball inversion, scale 2, the reference variant",
        _scene2d(_ball(1.0), _ball(0.5)),
    ),
    (
        "square2d",
        "Square inversion in 2D: the outer ball replaced by a box, scale -1.5",
        _scene2d(_box(1.0), _ball(0.5), scale=-1.5),
    ),
    (
        "squircle-hex2d",
        "FG-squircle outer inversion over a hexagonal minimum shape",
        _scene2d(
            {"kind": "fg_squircle", "radius": 1.0, "squareness": 0.8},
            {"kind": "hexagon", "circumradius": 0.5},
            scale=-1.5,
            width=5.0,
        ),
    ),
    (
        "negscale2d",
        "Classic 2D shapes with a negative scale of -1.5",
        _scene2d(_ball(1.0), _ball(0.5), scale=-1.5),
    ),
    (
        "classic3d",
        "Classic 3D box: spherical inversion, scale 2, ray-marched",
        _scene3d(_ball(1.0), _ball(0.5)),
    ),
    (
        "cube3d",
        "Cube inversion in 3D: box outer shape, ray-marched",
        _scene3d(_box(1.0), _ball(0.5)),
    ),
    (
        "octa3d",
        "Octahedron inversion in 3D (cross-polytope outer shape)",
        _scene3d({"kind": "cross_polytope", "radius": 1.2}, _ball(0.5)),
    ),
    (
        "roundcube3d",
        "Rounded-cube inversion in 3D (superellipsoid, exponent 4)",
        _scene3d(
            {"kind": "superellipsoid", "exponent": 4.0, "semi_axes": [1.0, 1.0, 1.0]},
            _ball(0.5),
        ),
    ),
    (
        "union3d",
        "Inversion in the union of a ball and a box, ray-marched",
        _scene3d({"kind": "union", "children": [_ball(1.15), _box(0.9)]}, _ball(0.5)),
    ),
    (
        "hyper4d-cube",
        "4D hypercube inversion viewed as the w=0 slice with the cube3d camera",
        _hyper4d_cube(),
    ),
    (
        "hyper4d-blend",
        "4D ball-to-box blend (t=0.5) sampled on the xy slice plane",
        _hyper4d_blend(),
    ),
)


class UnknownPresetError(KeyError):
    pass


def preset_names() -> list[str]:
    return [name for name, _, _ in _PRESETS]


def preset_description(name: str) -> str:
    for pname, description, _ in _PRESETS:
        if pname == name:
            return description
    raise UnknownPresetError(name)


def preset_scene(name: str) -> SceneConfig:
    for pname, _, doc in _PRESETS:
        if pname == name:
            return parse_scene_dict(doc)
    raise UnknownPresetError(name)


def preset_document(name: str) -> dict:
    """Canonical (fully defaulted) document for one preset."""
    return scene_to_dict(preset_scene(name))


def catalog() -> list[dict]:
    """All presets as {name, description, scene} records."""
    return [
        {"name": name, "description": description, "scene": scene_to_dict(parse_scene_dict(doc))}
        for name, description, doc in _PRESETS
    ]
