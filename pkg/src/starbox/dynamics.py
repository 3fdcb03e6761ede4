"""Mandelbox-style orbit dynamics with generalized shape inversion.

One orbit step composes three maps and an affine update:

* ``boxfold``: per-coordinate conditional reflection through the faces of a
  cube of half-side F centered at the origin (exactly one reflection per
  coordinate, never repeated folding),
* ``shapefold``: a three-way conditional built from two centered star
  shapes.  Points inside the minimum shape are scaled (by the squared
  radial ratio of the two shapes, or by a constant); points between the
  shapes are inverted in the outer shape; points outside the outer shape
  pass through unchanged.  With two balls this is exactly the classic
  three-way conditional spherical inversion (``spherefold``),
* scale by S and translate by the seed point (Mandelbox) or by a fixed
  vector (Julibox).

A seed belongs to the set when its orbit has not exceeded the escape
distance after the iteration cap.  Orbits also record two trap families
used for shading: closest approach to the origin and, per coordinate axis,
closest approach to that axis.  Traps include the seed point (iteration 0)
and every iterate up to and including the escaping one.

The batch functions iterate ``(m, n)`` arrays of seeds in lockstep with
per-row early exit; per-row arithmetic is independent of batch
composition, so any tiling of a point set produces bit-identical results.
All double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    ORIGIN_EPS,
    Shape,
    _norm_rows,
    _unit_rows,
    validate_shape,
)

SCALE_MODE_RATIO = "ratio"
SCALE_MODE_CONSTANT = "constant"


@dataclass(frozen=True)
class IterationParams:
    """All knobs of one Mandelbox variant.

    ``julia_offset`` is None in Mandelbox mode (translate by the seed) and a
    fixed vector in Julibox mode.  ``scale_constant`` is only used when
    ``scale_mode`` is "constant".
    """

    dimension: int
    fold_halfwidth: float
    outer_shape: Shape
    min_shape: Shape
    scale: float
    scale_mode: str = SCALE_MODE_RATIO
    scale_constant: float | None = None
    julia_offset: tuple[float, ...] | None = None
    escape_distance: float = 1024.0
    max_iterations: int = 100


def validate_params(params: IterationParams) -> list[str]:
    """Fatal diagnostics for an IterationParams; empty list means valid."""
    errors: list[str] = []
    n = params.dimension
    if n not in (2, 3, 4):
        errors.append(f"dimension must be 2, 3 or 4, got {n}")
        return errors
    if not (np.isfinite(params.fold_halfwidth) and params.fold_halfwidth > 0):
        errors.append(f"fold_halfwidth must be positive, got {params.fold_halfwidth}")
    if not (np.isfinite(params.scale) and params.scale != 0):
        errors.append(f"scale must be nonzero and finite, got {params.scale}")
    if params.scale_mode not in (SCALE_MODE_RATIO, SCALE_MODE_CONSTANT):
        errors.append(f"scale_mode must be 'ratio' or 'constant', got {params.scale_mode!r}")
    elif params.scale_mode == SCALE_MODE_CONSTANT:
        c = params.scale_constant
        if c is None or not (np.isfinite(c) and c > 0):
            errors.append(f"constant scale mode needs a positive finite constant, got {c}")
    if not (np.isfinite(params.escape_distance) and params.escape_distance > 0):
        errors.append(f"escape_distance must be positive, got {params.escape_distance}")
    if params.max_iterations < 1:
        errors.append(f"max_iterations must be at least 1, got {params.max_iterations}")
    if params.julia_offset is not None:
        off = np.asarray(params.julia_offset, dtype=float)
        if off.shape != (n,) or not np.all(np.isfinite(off)):
            errors.append(
                f"julia offset must be a finite {n}-vector, got {params.julia_offset}"
            )
    for label, shape in (("outer_shape", params.outer_shape), ("min_shape", params.min_shape)):
        diag = validate_shape(shape, n)
        if diag:
            errors.append(f"{label}: {diag}")
    return errors


def advisory_warnings(params: IterationParams, samples: int = 256) -> list[str]:
    """Non-fatal advice: the minimum shape should sit inside the outer shape.

    Sampled over fixed pseudorandom directions so the check is deterministic.
    """
    rng = np.random.default_rng(5319)
    u = rng.standard_normal((samples, params.dimension))
    u /= _norm_rows(u)[:, None]
    rho_min = params.min_shape.radial(u)
    rho_out = params.outer_shape.radial(u)
    bad = int(np.count_nonzero(rho_min >= rho_out))
    if bad:
        return [
            f"min_shape is not strictly inside outer_shape along {bad} of {samples} "
            "sampled directions; the scaling branch will shadow the inversion there"
        ]
    return []


def boxfold_rows(p: np.ndarray, fold_halfwidth: float) -> np.ndarray:
    """Row-wise conditional reflection: 2 * clamp(p, -F, F) - p per coordinate."""
    f = fold_halfwidth
    return 2.0 * np.clip(p, -f, f) - p


def boxfold(p, fold_halfwidth: float) -> np.ndarray:
    """Reflect each out-of-range coordinate through the nearest cube face."""
    if fold_halfwidth <= 0:
        raise ValueError(f"fold_halfwidth must be positive, got {fold_halfwidth}")
    return boxfold_rows(np.asarray(p, dtype=float)[None, :], fold_halfwidth)[0]


def spherefold_rows(p: np.ndarray, outer_radius: float, inner_radius: float) -> np.ndarray:
    """Classic three-way conditional spherical inversion, row-wise."""
    h, l = outer_radius, inner_radius
    mag2 = np.sum(p * p, axis=-1)
    r = np.sqrt(mag2)
    inv = (h * h) / np.where(mag2 > 0.0, mag2, 1.0)
    factor = np.where(r >= h, 1.0, np.where(r >= l, inv, (h * h) / (l * l)))
    return p * factor[:, None]


def spherefold(p, outer_radius: float, inner_radius: float) -> np.ndarray:
    """Identity outside H, inversion with radius H between L and H, constant H^2/L^2 inside L."""
    if not 0 < inner_radius < outer_radius:
        raise ValueError(
            f"need 0 < inner_radius < outer_radius, got {inner_radius}, {outer_radius}"
        )
    return spherefold_rows(np.asarray(p, dtype=float)[None, :], outer_radius, inner_radius)[0]


def shapefold_rows(p: np.ndarray, params: IterationParams) -> tuple[np.ndarray, np.ndarray]:
    """Generalized fold; returns (folded rows, per-row radial scale factor).

    Branch order: minimum-shape containment wins over outer-shape
    containment, so overlap pathologies resolve in favor of the scaling
    branch.  Rows within ORIGIN_EPS of the origin pass through unchanged.
    The factor output is what the local distance-estimator derivative is
    multiplied by (identity rows give 1).
    """
    mag2 = np.sum(p * p, axis=-1)
    r = np.sqrt(mag2)
    tiny = r < ORIGIN_EPS
    u = _unit_rows(p, r)
    rho_min = params.min_shape.radial(u)
    rho_out = params.outer_shape.radial(u)
    in_min = r <= rho_min
    in_outer = r <= rho_out
    if params.scale_mode == SCALE_MODE_CONSTANT:
        min_factor = np.full(p.shape[0], float(params.scale_constant))
    else:
        min_factor = (rho_out * rho_out) / (rho_min * rho_min)
    inv_factor = (rho_out * rho_out) / np.where(tiny, 1.0, mag2)
    factor = np.where(
        tiny, 1.0, np.where(in_min, min_factor, np.where(in_outer, inv_factor, 1.0))
    )
    return p * factor[:, None], factor


def shapefold(
    p,
    outer_shape: Shape,
    min_shape: Shape,
    scale_mode: str = SCALE_MODE_RATIO,
    scale_constant: float | None = None,
) -> np.ndarray:
    """Shape-inversion fold of a single point.

    With Ball(H) outer, Ball(L) minimum and ratio scaling this reproduces
    ``spherefold(p, H, L)`` branch for branch.
    """
    arr = np.asarray(p, dtype=float)
    params = IterationParams(
        dimension=arr.shape[0],
        fold_halfwidth=1.0,
        outer_shape=outer_shape,
        min_shape=min_shape,
        scale=1.0,
        scale_mode=scale_mode,
        scale_constant=scale_constant,
    )
    return shapefold_rows(arr[None, :], params)[0][0]


def _axis_distance_rows(p: np.ndarray) -> np.ndarray:
    """Distance from each row to each coordinate axis (norm of the other components)."""
    m, n = p.shape
    sq = p * p
    out = np.empty_like(p)
    for k in range(n):
        acc = np.zeros(m)
        for j in range(n):
            if j != k:
                acc = acc + sq[:, j]
        out[:, k] = np.sqrt(acc)
    return out


@dataclass(frozen=True)
class OrbitResult:
    """Outcome of iterating one seed point."""

    escaped: bool
    escape_iteration: int
    trap_origin: float
    trap_axes: tuple[float, ...]
    final_magnitude: float


@dataclass
class OrbitBatch:
    """Struct-of-arrays orbit outcomes for a batch of seeds."""

    escaped: np.ndarray         # bool (m,)
    escape_iteration: np.ndarray  # int (m,)
    trap_origin: np.ndarray     # float (m,)
    trap_axes: np.ndarray       # float (m, n)
    final_magnitude: np.ndarray  # float (m,)

    def result(self, i: int) -> OrbitResult:
        return OrbitResult(
            escaped=bool(self.escaped[i]),
            escape_iteration=int(self.escape_iteration[i]),
            trap_origin=float(self.trap_origin[i]),
            trap_axes=tuple(float(v) for v in self.trap_axes[i]),
            final_magnitude=float(self.final_magnitude[i]),
        )


def _offsets_for(seeds: np.ndarray, params: IterationParams) -> np.ndarray:
    if params.julia_offset is None:
        return seeds
    return np.broadcast_to(
        np.asarray(params.julia_offset, dtype=float), seeds.shape
    )


def iterate_batch(seeds: np.ndarray, params: IterationParams) -> OrbitBatch:
    """Iterate a batch of seed rows to escape or the iteration cap.

    Escape is tested strictly (> escape_distance) after each full composite
    step, never on the seed itself.  Escaped rows freeze; the loop exits
    early once every row has escaped.
    """
    seeds = np.asarray(seeds, dtype=float)
    m, n = seeds.shape
    cur = seeds.copy()
    offsets = _offsets_for(seeds, params)
    mag0 = _norm_rows(seeds)

    escaped = np.zeros(m, dtype=bool)
    escape_iteration = np.full(m, params.max_iterations, dtype=np.int64)
    trap_origin = mag0.copy()
    trap_axes = _axis_distance_rows(seeds)
    final_magnitude = mag0.copy()

    active = np.arange(m)
    s = params.scale
    f = params.fold_halfwidth
    for it in range(1, params.max_iterations + 1):
        if active.size == 0:
            break
        folded = boxfold_rows(cur[active], f)
        folded, _ = shapefold_rows(folded, params)
        new = folded * s + offsets[active]
        cur[active] = new
        mag = _norm_rows(new)
        final_magnitude[active] = mag
        trap_origin[active] = np.minimum(trap_origin[active], mag)
        trap_axes[active] = np.minimum(trap_axes[active], _axis_distance_rows(new))
        esc = mag > params.escape_distance
        if np.any(esc):
            rows = active[esc]
            escaped[rows] = True
            escape_iteration[rows] = it
            active = active[~esc]
    return OrbitBatch(escaped, escape_iteration, trap_origin, trap_axes, final_magnitude)


def membership_rows(seeds: np.ndarray, params: IterationParams) -> np.ndarray:
    """Row-wise set membership (True = orbit never escaped); traps skipped for speed."""
    seeds = np.asarray(seeds, dtype=float)
    m, _ = seeds.shape
    cur = seeds.copy()
    offsets = _offsets_for(seeds, params)
    escaped = np.zeros(m, dtype=bool)
    active = np.arange(m)
    s = params.scale
    f = params.fold_halfwidth
    for _ in range(params.max_iterations):
        if active.size == 0:
            break
        folded = boxfold_rows(cur[active], f)
        folded, _ = shapefold_rows(folded, params)
        new = folded * s + offsets[active]
        cur[active] = new
        esc = _norm_rows(new) > params.escape_distance
        if np.any(esc):
            escaped[active[esc]] = True
            active = active[~esc]
    return ~escaped


def distance_rows(seeds: np.ndarray, params: IterationParams, fudge: float) -> np.ndarray:
    """Heuristic distance-estimate per seed row; 0 for rows that never escape.

    Tracks a running scalar derivative: the box fold leaves it unchanged,
    the shape fold multiplies it by the local radial scale factor, and the
    affine step maps dr to dr * |S| + 1.  At escape the estimate is
    fudge * |P| / |dr|.
    """
    seeds = np.asarray(seeds, dtype=float)
    m, _ = seeds.shape
    cur = seeds.copy()
    offsets = _offsets_for(seeds, params)
    dr = np.ones(m)
    de = np.zeros(m)
    active = np.arange(m)
    s = params.scale
    f = params.fold_halfwidth
    abs_s = abs(s)
    for _ in range(params.max_iterations):
        if active.size == 0:
            break
        folded = boxfold_rows(cur[active], f)
        folded, factor = shapefold_rows(folded, params)
        new = folded * s + offsets[active]
        cur[active] = new
        dr_a = dr[active] * factor * abs_s + 1.0
        dr[active] = dr_a
        mag = _norm_rows(new)
        esc = mag > params.escape_distance
        if np.any(esc):
            rows = active[esc]
            de[rows] = fudge * mag[esc] / np.abs(dr_a[esc])
            active = active[~esc]
    return de


def iterate(p0, params: IterationParams) -> OrbitResult:
    """Iterate a single seed point; pure and deterministic."""
    arr = np.asarray(p0, dtype=float)
    return iterate_batch(arr[None, :], params).result(0)


def membership(p0, params: IterationParams) -> bool:
    """True iff the seed's orbit never escapes within the iteration cap."""
    return not iterate(p0, params).escaped


def probe_orbit(p0, params: IterationParams, max_iterations: int | None = None) -> dict:
    """Instrumented single-point orbit: every intermediate stage, per iteration.

    Returns a plain dict (JSON-ready) with, for each iteration, the point
    after the box fold, after the shape fold, and after scale-plus-offset,
    ending with the same orbit summary ``iterate`` produces.  Uses the same
    row kernels as the batch iterator, so stage values match rendered
    membership bit for bit.
    """
    arr = np.asarray(p0, dtype=float)
    n = params.dimension
    if arr.shape != (n,):
        raise ValueError(f"point has {arr.shape[0] if arr.ndim == 1 else '?'} components, scene dimension is {n}")
    cap = params.max_iterations if max_iterations is None else max_iterations

    cur = arr[None, :].copy()
    offset = cur if params.julia_offset is None else np.asarray(params.julia_offset, dtype=float)[None, :]
    offset = offset.copy()

    mag0 = float(_norm_rows(cur)[0])
    trap_origin = mag0
    trap_axes = _axis_distance_rows(cur)[0].copy()
    final_magnitude = mag0
    escaped = False
    escape_iteration = cap

    stages = []
    for it in range(1, cap + 1):
        folded = boxfold_rows(cur, params.fold_halfwidth)
        shaped, _ = shapefold_rows(folded, params)
        cur = shaped * params.scale + offset
        mag = float(_norm_rows(cur)[0])
        final_magnitude = mag
        trap_origin = min(trap_origin, mag)
        trap_axes = np.minimum(trap_axes, _axis_distance_rows(cur)[0])
        esc = mag > params.escape_distance
        stages.append(
            {
                "iteration": it,
                "boxfold": [float(v) for v in folded[0]],
                "shapefold": [float(v) for v in shaped[0]],
                "update": [float(v) for v in cur[0]],
                "magnitude": mag,
                "escaped": bool(esc),
            }
        )
        if esc:
            escaped = True
            escape_iteration = it
            break

    return {
        "point": [float(v) for v in arr],
        "dimension": n,
        "scale": params.scale,
        "offset": [float(v) for v in offset[0]],
        "stages": stages,
        "result": {
            "escaped": escaped,
            "escape_iteration": escape_iteration,
            "trap_origin": trap_origin,
            "trap_axes": [float(v) for v in trap_axes],
            "final_magnitude": final_magnitude,
        },
    }
