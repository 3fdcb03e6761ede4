"""Independent scalar reference for orbits and membership images.

Pure Python + math only — no numpy, no imports from the package under
test.  Operations mirror the production arithmetic order exactly (same
association, same branch structure), so for scenes built from the
trig-free shapes (ball, box, cross-polytope, FG squircle) every
intermediate value is bit-identical to the vectorized pipeline, not merely
close.  Shapes with trig or pow (hexagon, superellipsoid, rotated) are
deliberately unsupported here; tests that need them compare with
tolerances instead.

Scenes are described by plain dicts in the same schema the package parses,
so oracle runs need no production types.
"""

from __future__ import annotations

import math

ORIGIN_EPS = 1e-12


def radial(shape: dict, u: tuple) -> float:
    kind = shape["kind"]
    if kind == "ball":
        return float(shape["radius"])
    if kind == "box":
        return shape["half_side"] / max(abs(c) for c in u)
    if kind == "cross_polytope":
        acc = 0.0
        for c in u:
            acc = acc + abs(c)
        return shape["radius"] / acc
    if kind == "fg_squircle":
        s = shape["squareness"]
        prod = u[0] * u[1]
        disc = 1.0 - 4.0 * (s * s) * (prod * prod)
        disc = max(disc, 0.0)
        return shape["radius"] * math.sqrt(2.0 / (1.0 + math.sqrt(disc)))
    if kind == "union":
        return max(radial(shape["children"][0], u), radial(shape["children"][1], u))
    if kind == "intersection":
        return min(radial(shape["children"][0], u), radial(shape["children"][1], u))
    if kind == "blend":
        t = shape["t"]
        a = radial(shape["children"][0], u)
        b = radial(shape["children"][1], u)
        return (1.0 - t) * a + t * b
    raise ValueError(f"oracle does not model shape kind {kind!r}")


def _mag2(p: tuple) -> float:
    acc = 0.0
    for c in p:
        acc = acc + c * c
    return acc


def boxfold(p: tuple, f: float) -> tuple:
    return tuple(2.0 * min(max(c, -f), f) - c for c in p)


def shapefold(p: tuple, iteration: dict) -> tuple:
    mag2 = _mag2(p)
    r = math.sqrt(mag2)
    if r < ORIGIN_EPS:
        return p
    u = tuple(c / r for c in p)
    rho_min = radial(iteration["min_shape"], u)
    rho_out = radial(iteration["outer_shape"], u)
    if r <= rho_min:
        mode = iteration.get("scale_mode", "ratio")
        if mode == "ratio":
            factor = (rho_out * rho_out) / (rho_min * rho_min)
        else:
            factor = float(mode["constant"])
    elif r <= rho_out:
        factor = (rho_out * rho_out) / mag2
    else:
        factor = 1.0
    return tuple(c * factor for c in p)


def _axis_distances(p: tuple) -> tuple:
    out = []
    for k in range(len(p)):
        acc = 0.0
        for j, c in enumerate(p):
            if j != k:
                acc = acc + c * c
        out.append(math.sqrt(acc))
    return tuple(out)


def orbit(seed: tuple, iteration: dict) -> dict:
    """Full orbit record for one seed; mirrors the production trap rules."""
    f = iteration["fold_halfwidth"]
    s = iteration["scale"]
    escape = iteration.get("escape_distance", 1024.0)
    max_iter = iteration.get("max_iterations", 100)
    offset_mode = iteration.get("offset_mode", "mandelbox")
    offset = seed if offset_mode == "mandelbox" else tuple(offset_mode["julibox"])

    p = seed
    mag = math.sqrt(_mag2(seed))
    trap_origin = mag
    trap_axes = list(_axis_distances(seed))
    final_magnitude = mag
    escaped = False
    escape_iteration = max_iter

    for it in range(1, max_iter + 1):
        p = shapefold(boxfold(p, f), iteration)
        p = tuple(c * s + o for c, o in zip(p, offset))
        mag = math.sqrt(_mag2(p))
        final_magnitude = mag
        trap_origin = min(trap_origin, mag)
        for k, d in enumerate(_axis_distances(p)):
            trap_axes[k] = min(trap_axes[k], d)
        if mag > escape:
            escaped = True
            escape_iteration = it
            break

    return {
        "escaped": escaped,
        "escape_iteration": escape_iteration,
        "trap_origin": trap_origin,
        "trap_axes": tuple(trap_axes),
        "final_magnitude": final_magnitude,
    }


def member(seed: tuple, iteration: dict) -> bool:
    return not orbit(seed, iteration)["escaped"]


def window_point(view: dict, width_px: int, height_px: int, ix: int, iy: int) -> tuple:
    """Pixel-center to world-point map for window2d views (production order)."""
    px = ix + 0.5
    py = iy + 0.5
    u = px / width_px - 0.5
    v = 0.5 - py / height_px
    w = view["width"]
    height_world = w * height_px / width_px
    du = u * w
    dv = v * height_world
    rot = view.get("rotation", 0.0)
    c = math.cos(rot)
    s = math.sin(rot)
    cx, cy = view["center"]
    return (cx + c * du - s * dv, cy + s * du + c * dv)


def membership_image(scene: dict) -> list:
    """Row-major membership booleans for a window2d scene document."""
    width_px = scene["image"]["width"]
    height_px = scene["image"]["height"]
    view = scene["view"]
    iteration = scene["iteration"]
    rows = []
    for iy in range(height_px):
        row = []
        for ix in range(width_px):
            row.append(member(window_point(view, width_px, height_px, ix, iy), iteration))
        rows.append(row)
    return rows


def member_fraction(scene: dict) -> float:
    image = membership_image(scene)
    total = sum(len(row) for row in image)
    return sum(sum(row) for row in image) / total
