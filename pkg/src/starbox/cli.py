"""Command-line interface.

Subcommands: ``render`` (scene file to PNG plus a metadata sidecar),
``probe`` (instrumented single-point orbit dump), ``presets`` (catalog
listing/export), and ``serve`` (launch the HTTP service).

Exit codes separate failure classes so scripts can react: 0 success,
2 malformed scene or usage, 3 scene validation failure, 4 render failure,
5 file I/O failure.  ``STARBOX_THREADS`` sets the default worker count;
an explicit ``--threads`` flag wins over it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .dynamics import probe_orbit
from .presets import UnknownPresetError, catalog, preset_document, preset_names
from .render import encode_png, render_scene
from .scene import (
    SceneParseError,
    SceneValidationError,
    parse_scene,
    scene_hash,
    scene_to_json,
    scene_warnings,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RENDER = 4
EXIT_IO = 5

THREADS_ENV = "STARBOX_THREADS"


def _fail(code: int, message: str) -> int:
    print(f"starbox: {message}", file=sys.stderr)
    return code


def _read_scene_file(path: str):
    """Returns (exit code, scene) — scene is None when the code is nonzero."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read scene file {path!r}: {exc.strerror or exc}"), None
    try:
        scene = parse_scene(text)
    except SceneParseError as exc:
        return _fail(EXIT_PARSE, f"{path}: {exc}"), None
    except SceneValidationError as exc:
        return _fail(EXIT_VALIDATION, f"{path}: {exc}"), None
    return EXIT_OK, scene


def _env_threads() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        print(f"starbox: ignoring non-integer {THREADS_ENV}={raw!r}", file=sys.stderr)
        return None
    return value if value >= 1 else None


def cmd_render(args) -> int:
    code, scene = _read_scene_file(args.scene)
    if code:
        return code
    if args.threads is not None and args.threads < 1:
        return _fail(EXIT_PARSE, f"--threads must be >= 1, got {args.threads}")
    if args.tile_size is not None and args.tile_size < 1:
        return _fail(EXIT_PARSE, f"--tile-size must be >= 1, got {args.tile_size}")

    overrides: dict = {}
    if args.threads is not None:
        scene = scene.with_overrides(threads=args.threads)
        overrides["threads"] = args.threads
    else:
        env = _env_threads()
        if env is not None:
            scene = scene.with_overrides(threads=env)
            overrides["threads"] = env
    if args.tile_size is not None:
        scene = scene.with_overrides(tile_size=args.tile_size)
        overrides["tile_size"] = args.tile_size

    if args.print_config:
        sys.stdout.write(scene_to_json(scene))
        return EXIT_OK

    for warning in scene_warnings(scene):
        print(f"starbox: warning: {warning}", file=sys.stderr)

    try:
        image, stats = render_scene(scene)
        png = encode_png(image)
    except Exception as exc:  # pure pixel pipeline: anything here is a render bug
        return _fail(EXIT_RENDER, f"render failed: {exc}")

    meta = {
        "scene": args.scene,
        "scene_hash": scene_hash(scene),
        "output": args.output,
        "overrides": overrides,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "stats": stats,
    }
    try:
        with open(args.output, "wb") as fh:
            fh.write(png)
        sidecar = os.path.splitext(args.output)[0] + ".meta.json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write {args.output!r}: {exc.strerror or exc}")
    return EXIT_OK


def _parse_point(raw: str) -> list[float]:
    parts = [part.strip() for part in raw.split(",")]
    try:
        return [float(part) for part in parts]
    except ValueError:
        raise ValueError(f"--point must be comma-separated numbers, got {raw!r}") from None


def cmd_probe(args) -> int:
    code, scene = _read_scene_file(args.scene)
    if code:
        return code
    try:
        point = _parse_point(args.point)
    except ValueError as exc:
        return _fail(EXIT_PARSE, str(exc))
    if len(point) != scene.dimension:
        return _fail(
            EXIT_VALIDATION,
            f"point has {len(point)} components, scene dimension is {scene.dimension}",
        )
    record = probe_orbit(point, scene.params, max_iterations=args.max_iter)
    json.dump(record, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.action == "list":
        for entry in catalog():
            print(f"{entry['name']:16s} {entry['description']}")
        return EXIT_OK
    if not args.name:
        return _fail(EXIT_PARSE, "presets export needs a preset name")
    try:
        doc = preset_document(args.name)
    except UnknownPresetError:
        names = ", ".join(preset_names())
        return _fail(EXIT_VALIDATION, f"unknown preset {args.name!r} (available: {names})")
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starbox",
        description="Render and probe Mandelbox-style fractals built from shape inversions.",
    )
    parser.add_argument("--version", action="version", version=f"starbox {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render a scene file to PNG")
    p_render.add_argument("scene", help="path to a scene JSON document")
    p_render.add_argument("-o", "--output", required=True, help="output PNG path")
    p_render.add_argument("--threads", type=int, help="worker thread count (overrides scene)")
    p_render.add_argument("--tile-size", type=int, help="tile edge length (overrides scene)")
    p_render.add_argument(
        "--print-config",
        action="store_true",
        help="echo the effective configuration and exit without rendering",
    )
    p_render.set_defaults(func=cmd_render)

    p_probe = sub.add_parser("probe", help="dump one point's orbit, stage by stage")
    p_probe.add_argument("scene", help="path to a scene JSON document")
    p_probe.add_argument("--point", required=True, help="seed point, e.g. 1.5,0.25")
    p_probe.add_argument("--max-iter", type=int, help="cap the reported iterations")
    p_probe.set_defaults(func=cmd_probe)

    p_presets = sub.add_parser("presets", help="list or export built-in scenes")
    p_presets.add_argument("action", choices=("list", "export"))
    p_presets.add_argument("name", nargs="?", help="preset name (for export)")
    p_presets.set_defaults(func=cmd_presets)

    p_serve = sub.add_parser("serve", help="start the HTTP render service")
    p_serve.add_argument("--port", type=int, default=8642)
    p_serve.add_argument("--bind", default="127.0.0.1")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
