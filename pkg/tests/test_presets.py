"""Built-in scene catalog sanity."""

import pytest

from starbox.presets import (
    UnknownPresetError,
    catalog,
    preset_description,
    preset_document,
    preset_names,
    preset_scene,
)
from starbox.scene import parse_scene_dict, scene_to_dict


def test_expected_catalog_entries():
    names = preset_names()
    assert "classic2d" in names
    assert "cube3d" in names
    assert "hyper4d-cube" in names
    assert len(names) == len(set(names))
    assert names == sorted(names) or len(names) >= 10


@pytest.mark.parametrize("name", preset_names())
def test_every_preset_parses_and_exports(name):
    scene = preset_scene(name)
    assert preset_description(name)
    doc = preset_document(name)
    assert parse_scene_dict(doc) == scene
    assert doc == scene_to_dict(scene)


def test_dimension_naming_convention():
    for name in preset_names():
        scene = preset_scene(name)
        if name.endswith("2d"):
            assert scene.dimension == 2
        elif name.endswith("3d"):
            assert scene.dimension == 3
        elif name.startswith("hyper4d"):
            assert scene.dimension == 4


def test_renderers_match_views():
    for entry in catalog():
        scene = parse_scene_dict(entry["scene"])
        if scene.renderer == "raymarch":
            assert entry["scene"]["view"]["kind"] == "camera3d"


def test_unknown_preset_raises():
    with pytest.raises(UnknownPresetError):
        preset_scene("not-a-preset")
