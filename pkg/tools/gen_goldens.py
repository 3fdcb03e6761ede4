#!/usr/bin/env python3
"""Regenerate tests/golden/goldens.json from scalar reference renders.

The pinned numbers are produced by the single-threaded, single-tile
reference path.  The classic 2D fraction is additionally recomputed by the
pure-Python orbit walker in tests/_oracle.py, and generation aborts if the
two disagree — the golden must never encode an artifact of the vectorized
pipeline.

Run from the repository root:  python3 tools/gen_goldens.py
"""

import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import _oracle  # noqa: E402

from starbox.presets import preset_document  # noqa: E402
from starbox.render import reference_render  # noqa: E402
from starbox.scene import parse_scene_dict, scene_hash  # noqa: E402

OUT = ROOT / "tests" / "golden" / "goldens.json"


def main() -> int:
    golden: dict = {"generated_by": "tools/gen_goldens.py", "entries": {}}

    doc = preset_document("classic2d")
    scene = parse_scene_dict(doc)
    print(f"classic2d {scene.image_width}x{scene.image_height} reference render...")
    t0 = time.perf_counter()
    _, stats = reference_render(scene)
    fraction = stats["member_fraction"]
    print(f"  member fraction {fraction!r}  ({time.perf_counter() - t0:.1f}s)")

    print("cross-checking against the pure Python orbit walker (slow)...")
    t0 = time.perf_counter()
    independent = _oracle.member_fraction(doc)
    print(f"  oracle fraction {independent!r}  ({time.perf_counter() - t0:.1f}s)")
    if independent != fraction:
        print("MISMATCH between reference render and independent oracle; not pinning.")
        return 1

    golden["entries"]["classic2d_member_fraction"] = {
        "scene_hash": scene_hash(scene),
        "image": [scene.image_width, scene.image_height],
        "value": fraction,
    }

    doc = preset_document("hyper4d-cube")
    scene = parse_scene_dict(doc)
    print(f"hyper4d-cube {scene.image_width}x{scene.image_height} reference render...")
    t0 = time.perf_counter()
    _, stats = reference_render(scene)
    hit_fraction = stats["hits"] / stats["rays"]
    print(f"  hit fraction {hit_fraction!r}  ({time.perf_counter() - t0:.1f}s)")

    golden["entries"]["hyper4d_cube_hit_fraction"] = {
        "scene_hash": scene_hash(scene),
        "image": [scene.image_width, scene.image_height],
        "value": hit_fraction,
    }

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(golden, indent=2) + "\n")
    print(f"wrote {OUT.relative_to(ROOT)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
