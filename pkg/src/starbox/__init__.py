"""Mandelbox-style escape-time fractals built from shape inversions.

The classic Mandelbox folds space with a box reflection and a spherical
inversion.  This package generalizes the inversion step to any centered
star shape — boxes, cross-polytopes, hexagons, squircles, superellipsoids,
and combinators over them — in 2, 3, and 4 dimensions, then renders the
resulting sets: sampled membership images for 2D windows and planar
slices, and a distance-estimated ray marcher for 3D cameras.
"""

__version__ = "0.1.0"

from .dynamics import (
    IterationParams,
    OrbitResult,
    boxfold,
    iterate,
    membership,
    probe_orbit,
    shapefold,
    spherefold,
)
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
    Superellipsoid,
    Union,
    contains,
    invert_in_shape,
    radial_distance,
    validate_shape,
)
from .presets import catalog, preset_names, preset_scene
from .render import (
    Camera3D,
    Palette,
    RenderTuning,
    SliceFrame,
    TileImage,
    Window2D,
    assemble,
    decode_png,
    encode_png,
    estimate_distance,
    raymarch,
    render_sampled,
    render_scene,
    shade,
)
from .scene import (
    SceneConfig,
    SceneError,
    SceneParseError,
    SceneValidationError,
    parse_scene,
    scene_hash,
    scene_to_dict,
    scene_to_json,
)

__all__ = [
    "__version__",
    "IterationParams",
    "OrbitResult",
    "boxfold",
    "iterate",
    "membership",
    "probe_orbit",
    "shapefold",
    "spherefold",
    "Ball",
    "Blend",
    "Box",
    "CrossPolytope",
    "FGSquircle",
    "Hexagon",
    "Intersection",
    "Rotated",
    "Rotation",
    "Superellipsoid",
    "Union",
    "contains",
    "invert_in_shape",
    "radial_distance",
    "validate_shape",
    "catalog",
    "preset_names",
    "preset_scene",
    "Camera3D",
    "Palette",
    "RenderTuning",
    "SliceFrame",
    "TileImage",
    "Window2D",
    "assemble",
    "decode_png",
    "encode_png",
    "estimate_distance",
    "raymarch",
    "render_sampled",
    "render_scene",
    "shade",
    "SceneConfig",
    "SceneError",
    "SceneParseError",
    "SceneValidationError",
    "parse_scene",
    "scene_hash",
    "scene_to_dict",
    "scene_to_json",
]
