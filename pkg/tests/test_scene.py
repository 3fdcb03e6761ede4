"""Scene document parsing, validation, canonical export, and hashing."""

import json

import pytest

from starbox.presets import preset_document, preset_names, preset_scene
from starbox.render import Camera3D, Window2D
from starbox.scene import (
    HIT_EPSILON_SCALE,
    SceneParseError,
    SceneValidationError,
    parse_scene,
    parse_scene_dict,
    scene_hash,
    scene_to_dict,
    scene_to_json,
    scene_warnings,
)

MINIMAL_2D = {
    "schema_version": 1,
    "dimension": 2,
    "iteration": {
        "fold_halfwidth": 1.0,
        "outer_shape": {"kind": "ball", "radius": 1.0},
        "min_shape": {"kind": "ball", "radius": 0.5},
        "scale": 2.0,
    },
}


def minimal():
    return json.loads(json.dumps(MINIMAL_2D))


# --- defaults --------------------------------------------------------------

def test_minimal_document_gets_defaults():
    scene = parse_scene_dict(minimal())
    assert isinstance(scene.view, Window2D)
    assert scene.view.center == (0.0, 0.0) and scene.view.width == 8.0
    assert scene.image_width == scene.image_height == 256
    assert scene.renderer == "sampled"
    assert scene.tile_size == 32 and scene.threads == "auto"
    assert scene.params.escape_distance == 1024.0
    assert scene.params.max_iterations == 100
    assert scene.params.scale_mode == "ratio"
    assert scene.params.julia_offset is None


def test_hit_epsilon_resolves_from_view_scale():
    scene = parse_scene_dict(minimal())
    assert scene.tuning.hit_epsilon == HIT_EPSILON_SCALE * 8.0
    doc = minimal()
    doc["view"] = {"kind": "window2d", "center": [0.0, 0.0], "width": 2.0}
    assert parse_scene_dict(doc).tuning.hit_epsilon == HIT_EPSILON_SCALE * 2.0
    # an explicit value wins over the derived one
    doc["tuning"] = {"hit_epsilon": 1e-3}
    assert parse_scene_dict(doc).tuning.hit_epsilon == 1e-3


def test_camera_hit_epsilon_uses_eye_distance():
    doc = preset_document("cube3d")
    scene = parse_scene_dict(doc)
    cam = scene.view
    assert isinstance(cam, Camera3D)
    assert scene.tuning.hit_epsilon == pytest.approx(
        HIT_EPSILON_SCALE * (sum((a - b) ** 2 for a, b in zip(cam.eye, cam.look_at)) ** 0.5)
    )


def test_no_default_view_beyond_2d():
    doc = minimal()
    doc["dimension"] = 3
    with pytest.raises(SceneParseError, match="view"):
        parse_scene_dict(doc)


# --- parse errors ----------------------------------------------------------

def test_unknown_fields_are_rejected_with_paths():
    doc = minimal()
    doc["extra"] = 1
    with pytest.raises(SceneParseError) as e:
        parse_scene_dict(doc)
    assert e.value.path == "extra" and e.value.message == "unknown field"

    doc = minimal()
    doc["iteration"]["outer_shape"]["flavor"] = "x"
    with pytest.raises(SceneParseError) as e:
        parse_scene_dict(doc)
    assert e.value.path == "iteration.outer_shape.flavor"


def test_unknown_shape_kind_lists_choices():
    doc = minimal()
    doc["iteration"]["outer_shape"] = {"kind": "pentagon", "radius": 1.0}
    with pytest.raises(SceneParseError) as e:
        parse_scene_dict(doc)
    assert e.value.path == "iteration.outer_shape.kind"
    assert "pentagon" in e.value.message and "cross_polytope" in e.value.message


def test_booleans_are_not_numbers():
    doc = minimal()
    doc["iteration"]["scale"] = True
    with pytest.raises(SceneParseError, match="number"):
        parse_scene_dict(doc)


def test_non_finite_numbers_rejected():
    doc = minimal()
    doc["iteration"]["scale"] = float("nan")
    with pytest.raises(SceneParseError, match="finite"):
        parse_scene_dict(doc)


def test_missing_required_field():
    doc = minimal()
    del doc["iteration"]["scale"]
    with pytest.raises(SceneParseError) as e:
        parse_scene_dict(doc)
    assert e.value.path == "iteration.scale"


def test_schema_version_gate():
    doc = minimal()
    doc["schema_version"] = 9
    with pytest.raises(SceneParseError, match="schema version"):
        parse_scene_dict(doc)


def test_invalid_json_text():
    with pytest.raises(SceneParseError, match="invalid JSON"):
        parse_scene("{not json")


def test_nested_shape_path():
    doc = minimal()
    doc["iteration"]["outer_shape"] = {
        "kind": "union",
        "children": [{"kind": "ball", "radius": 1.0}, {"kind": "ball"}],
    }
    with pytest.raises(SceneParseError) as e:
        parse_scene_dict(doc)
    assert e.value.path == "iteration.outer_shape.children[1].radius"


# --- validation errors -----------------------------------------------------

def test_renderer_view_compatibility():
    doc = minimal()
    doc["renderer"] = "raymarch"
    with pytest.raises(SceneValidationError, match="camera3d"):
        parse_scene_dict(doc)
    doc = preset_document("cube3d")
    doc["renderer"] = "sampled"
    with pytest.raises(SceneValidationError, match="raymarch renderer"):
        parse_scene_dict(doc)


def test_shape_dimension_validation():
    doc = minimal()
    doc["dimension"] = 3
    doc["iteration"]["outer_shape"] = {"kind": "hexagon", "circumradius": 1.0}
    doc["view"] = {
        "kind": "sliceframe",
        "origin": [0.0, 0.0, 0.0],
        "basis_u": [1.0, 0.0, 0.0],
        "basis_v": [0.0, 1.0, 0.0],
        "width": 8.0,
    }
    with pytest.raises(SceneValidationError) as e:
        parse_scene_dict(doc)
    assert "outer_shape" in e.value.message and "hexagon" in e.value.message.lower()


def test_julia_offset_arity_rejected_at_parse():
    doc = minimal()
    doc["iteration"]["offset_mode"] = {"julibox": [0.1, 0.2, 0.3]}
    with pytest.raises(SceneParseError) as e:
        parse_scene_dict(doc)
    assert e.value.path == "iteration.offset_mode.julibox"


def test_image_and_tile_bounds():
    doc = minimal()
    doc["image"] = {"width": 0, "height": 10}
    with pytest.raises(SceneValidationError):
        parse_scene_dict(doc)
    doc = minimal()
    doc["tile_size"] = 0
    with pytest.raises(SceneValidationError):
        parse_scene_dict(doc)
    doc = minimal()
    doc["threads"] = 0
    with pytest.raises(SceneValidationError):
        parse_scene_dict(doc)


# --- round trips and hashing ----------------------------------------------

@pytest.mark.parametrize("name", preset_names())
def test_preset_documents_round_trip(name):
    scene = preset_scene(name)
    doc = scene_to_dict(scene)
    assert parse_scene_dict(doc) == scene
    assert parse_scene(scene_to_json(scene)) == scene


def test_scale_mode_constant_round_trip():
    doc = minimal()
    doc["iteration"]["scale_mode"] = {"constant": 2.5}
    scene = parse_scene_dict(doc)
    assert scene.params.scale_mode == "constant"
    assert scene.params.scale_constant == 2.5
    assert parse_scene_dict(scene_to_dict(scene)) == scene


def test_julibox_round_trip():
    doc = minimal()
    doc["iteration"]["offset_mode"] = {"julibox": [0.1, -0.2]}
    scene = parse_scene_dict(doc)
    assert scene.params.julia_offset == (0.1, -0.2)
    assert parse_scene_dict(scene_to_dict(scene)) == scene


def test_rotated_shape_round_trip():
    doc = minimal()
    doc["iteration"]["outer_shape"] = {
        "kind": "rotated",
        "child": {"kind": "box", "half_side": 1.0},
        "angles": [0.5],
    }
    scene = parse_scene_dict(doc)
    assert parse_scene_dict(scene_to_dict(scene)) == scene


def test_scene_hash_ignores_key_order():
    doc = minimal()
    scrambled = {k: doc[k] for k in reversed(list(doc))}
    a = parse_scene_dict(doc)
    b = parse_scene_dict(scrambled)
    assert scene_hash(a) == scene_hash(b)


def test_scene_hash_tracks_content():
    a = parse_scene_dict(minimal())
    doc = minimal()
    doc["iteration"]["scale"] = 2.5
    b = parse_scene_dict(doc)
    assert scene_hash(a) != scene_hash(b)
    assert len(scene_hash(a)) == 64


def test_with_overrides():
    scene = parse_scene_dict(minimal())
    out = scene.with_overrides(threads=2, tile_size=16)
    assert out.threads == 2 and out.tile_size == 16
    assert out.params == scene.params


def test_scene_warnings_passthrough():
    doc = minimal()
    doc["iteration"]["outer_shape"] = {"kind": "ball", "radius": 0.5}
    doc["iteration"]["min_shape"] = {"kind": "ball", "radius": 1.0}
    warnings = scene_warnings(parse_scene_dict(doc))
    assert warnings and "min_shape" in warnings[0]
    assert scene_warnings(preset_scene("classic2d")) == []


def test_canonical_export_is_stable():
    scene = preset_scene("octa3d")
    assert scene_to_json(scene) == scene_to_json(parse_scene(scene_to_json(scene)))
