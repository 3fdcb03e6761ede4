"""Centered star shapes in 2, 3, and 4 dimensions.

A centered star shape is a solid whose centroid (here always the origin) can
see every boundary point: each ray from the origin crosses the boundary
exactly once.  Such a shape is fully described by its radial function
``rho(u)``, the distance from the origin to the boundary along the unit
direction ``u``.  Everything in this module is built on that function:

* ``radial_distance`` evaluates ``rho(u)`` for a shape expression tree,
* ``contains`` tests ``norm(p) <= rho(p / norm(p))``,
* ``invert_in_shape`` generalizes circle inversion: ``p' = p * rho(u)**2 /
  norm(p)**2``, an involution that fixes the boundary and swaps interior
  with exterior.

Shapes form an expression tree: closed-form leaves (ball, box,
cross-polytope, hexagon, FG squircle, superellipsoid) plus combinators
(union, intersection, linear blend of radial functions, rotation).  All
nodes are immutable and all evaluation is pure, so trees can be shared
freely across threads.

Batch entry points take ``(m, n)`` float arrays (one point or direction per
row) and return per-row results; the scalar API wraps single rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Points closer to the origin than this invert to themselves: the ray
# direction is undefined there, and keeping the origin fixed keeps it a
# fixed point of the whole fold pipeline.
ORIGIN_EPS = 1e-12

# Accepted deviation from unit length in radial_distance's contract check.
UNIT_TOL = 1e-9

MAX_TREE_DEPTH = 32

# 4D rotation planes in their fixed application order.
_PLANES_4D = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _plane_rotation(n: int, i: int, j: int, angle: float) -> np.ndarray:
    """Rotation by ``angle`` in the (i, j) coordinate plane, moving axis i toward axis j."""
    m = np.eye(n)
    c = np.cos(angle)
    s = np.sin(angle)
    m[i, i] = c
    m[i, j] = -s
    m[j, i] = s
    m[j, j] = c
    return m


@dataclass(frozen=True)
class Rotation:
    """Orientation given by plane angles, composed once into a matrix.

    n=2: one angle.  n=3: three angles about the x, y, z axes, applied in
    that order (x first).  n=4: six plane angles in the order xy, xz, xw,
    yz, yw, zw, applied in that order.  The composed matrix is orthogonal
    with determinant +1; its inverse is its transpose.
    """

    dimension: int
    angles: tuple[float, ...]
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        angles = tuple(float(a) for a in self.angles)
        object.__setattr__(self, "angles", angles)
        n = self.dimension
        if n == 2:
            planes = ((0, 1),)
        elif n == 3:
            planes = ((1, 2), (2, 0), (0, 1))  # about x, about y, about z
        elif n == 4:
            planes = _PLANES_4D
        else:
            raise ValueError(f"unsupported dimension {n}")
        if len(angles) != len(planes):
            raise ValueError(
                f"dimension {n} takes {len(planes)} rotation angles, got {len(angles)}"
            )
        m = np.eye(n)
        for (i, j), a in zip(planes, angles):
            m = _plane_rotation(n, i, j, a) @ m
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class Ball:
    """Sphere of the given radius; any dimension."""

    radius: float

    def radial(self, u: np.ndarray) -> np.ndarray:
        return np.full(u.shape[0], float(self.radius))


@dataclass(frozen=True)
class Box:
    """Axis-aligned cube/hypercube with half-side ``half_side``; any dimension."""

    half_side: float

    def radial(self, u: np.ndarray) -> np.ndarray:
        return self.half_side / np.max(np.abs(u), axis=-1)


@dataclass(frozen=True)
class CrossPolytope:
    """Diamond / octahedron / 16-cell with circumradius ``radius``; any dimension."""

    radius: float

    def radial(self, u: np.ndarray) -> np.ndarray:
        return self.radius / np.sum(np.abs(u), axis=-1)


@dataclass(frozen=True)
class Hexagon:
    """Regular hexagon with the given circumradius, vertex on the +x axis; 2D only.

    Other orientations come from wrapping in ``Rotated``.
    """

    circumradius: float

    def radial(self, u: np.ndarray) -> np.ndarray:
        theta = np.arctan2(u[:, 1], u[:, 0])
        # Fold the angle into one 60-degree wedge; the apothem direction sits
        # at the wedge center, so the boundary is apothem / cos(offset).
        wedge = np.mod(theta, np.pi / 3.0) - np.pi / 6.0
        return self.circumradius * np.cos(np.pi / 6.0) / np.cos(wedge)


@dataclass(frozen=True)
class FGSquircle:
    """Fernandez-Guasti squircle x^2 + y^2 - (s^2/r^2) x^2 y^2 = r^2; 2D only.

    Morphs from circle (squareness 0) to square (squareness 1).  The radial
    function is the smaller positive root of the boundary quartic along the
    ray, written in a form that stays stable as the quadratic degenerates
    on the axes.
    """

    radius: float
    squareness: float

    def radial(self, u: np.ndarray) -> np.ndarray:
        prod = u[:, 0] * u[:, 1]
        disc = 1.0 - 4.0 * (self.squareness * self.squareness) * (prod * prod)
        # Clamp absorbs rounding at the squareness=1 diagonal where disc -> 0.
        disc = np.maximum(disc, 0.0)
        return self.radius * np.sqrt(2.0 / (1.0 + np.sqrt(disc)))


@dataclass(frozen=True)
class Superellipsoid:
    """Superellipsoid |x/A|^m + |y/B|^m + |z/C|^m = 1; 3D only.

    Exponent 2 with equal axes is a sphere; large exponents approach the box
    with half-sides (A, B, C).
    """

    exponent: float
    semi_axes: tuple[float, float, float]
    _axes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "semi_axes", tuple(float(a) for a in self.semi_axes))
        axes = np.asarray(self.semi_axes, dtype=float)
        axes.setflags(write=False)
        object.__setattr__(self, "_axes", axes)

    def radial(self, u: np.ndarray) -> np.ndarray:
        m = self.exponent
        scaled = np.abs(u) / self._axes
        return np.power(np.sum(np.power(scaled, m), axis=-1), -1.0 / m)


@dataclass(frozen=True)
class Union:
    """Pointwise union: the radial function is the max of the children's."""

    a: "Shape"
    b: "Shape"

    def radial(self, u: np.ndarray) -> np.ndarray:
        return np.maximum(self.a.radial(u), self.b.radial(u))


@dataclass(frozen=True)
class Intersection:
    """Pointwise intersection: the radial function is the min of the children's."""

    a: "Shape"
    b: "Shape"

    def radial(self, u: np.ndarray) -> np.ndarray:
        return np.minimum(self.a.radial(u), self.b.radial(u))


@dataclass(frozen=True)
class Blend:
    """Linear interpolation of the children's radial functions at parameter t."""

    a: "Shape"
    b: "Shape"
    t: float

    def radial(self, u: np.ndarray) -> np.ndarray:
        return (1.0 - self.t) * self.a.radial(u) + self.t * self.b.radial(u)


@dataclass(frozen=True)
class Rotated:
    """Child shape rotated by the given rotation; evaluates the child at R^-1 u."""

    child: "Shape"
    rotation: Rotation

    def radial(self, u: np.ndarray) -> np.ndarray:
        # R^-1 u as row vectors is u @ M (transpose of M applied from the left).
        return self.child.radial(u @ self.rotation.matrix)


Shape = (
    Ball
    | Box
    | CrossPolytope
    | Hexagon
    | FGSquircle
    | Superellipsoid
    | Union
    | Intersection
    | Blend
    | Rotated
)


def _norm_rows(p: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(p * p, axis=-1))


def _unit_rows(p: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Row directions p / r with rows below ORIGIN_EPS mapped to e_1."""
    tiny = r < ORIGIN_EPS
    denom = np.where(tiny, 1.0, r)
    u = p / denom[:, None]
    if np.any(tiny):
        u = u.copy()
        u[tiny] = 0.0
        u[tiny, 0] = 1.0
    return u


def radial_distance(shape: Shape, direction) -> float:
    """Distance from the origin to the shape boundary along a unit direction."""
    u = np.asarray(direction, dtype=float)
    if u.ndim != 1 or u.shape[0] not in (2, 3, 4):
        raise ValueError(f"direction must be a 2/3/4-vector, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("direction components must be finite")
    norm = float(np.sqrt(np.sum(u * u)))
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"direction must be unit length within {UNIT_TOL}, got norm {norm!r}")
    return float(shape.radial(u[None, :])[0])


def contains_rows(shape: Shape, p: np.ndarray) -> np.ndarray:
    """Row-wise membership: norm(row) <= rho(row direction); the origin is inside."""
    r = _norm_rows(p)
    u = _unit_rows(p, r)
    rho = shape.radial(u)
    return (r <= rho) | (r < ORIGIN_EPS)


def contains(shape: Shape, p) -> bool:
    """True iff p lies inside the shape or on its boundary."""
    arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("point components must be finite")
    return bool(contains_rows(shape, arr[None, :])[0])


def invert_rows(shape: Shape, p: np.ndarray) -> np.ndarray:
    """Row-wise shape inversion p * rho(u)^2 / |p|^2; rows at the origin are fixed."""
    mag2 = np.sum(p * p, axis=-1)
    r = np.sqrt(mag2)
    tiny = r < ORIGIN_EPS
    u = _unit_rows(p, r)
    rho = shape.radial(u)
    factor = np.where(tiny, 1.0, (rho * rho) / np.where(tiny, 1.0, mag2))
    return p * factor[:, None]


def invert_in_shape(shape: Shape, p) -> np.ndarray:
    """Shape inversion of a single point; an involution fixing the boundary."""
    arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("point components must be finite")
    return invert_rows(shape, arr[None, :])[0]


def validate_shape(shape: Shape, dimension: int) -> str | None:
    """Check dimension compatibility and parameter ranges of every node.

    Returns None when the tree is valid, otherwise a diagnostic naming the
    path of the first offending node (children are ``children[i]`` path
    segments; root-level problems carry no path prefix).
    """
    if dimension not in (2, 3, 4):
        return f"dimension must be 2, 3 or 4, got {dimension}"
    return _validate_node(shape, dimension, "", 0)


def _pos(value: float) -> bool:
    return np.isfinite(value) and value > 0


def _validate_node(shape: Shape, dim: int, path: str, depth: int) -> str | None:
    def fail(msg: str) -> str:
        return f"{path}: {msg}" if path else msg

    if depth > MAX_TREE_DEPTH:
        return fail(f"shape tree exceeds maximum depth {MAX_TREE_DEPTH}")

    def child(i: int) -> str:
        return f"{path}.children[{i}]" if path else f"children[{i}]"

    if isinstance(shape, Ball):
        if not _pos(shape.radius):
            return fail(f"ball radius must be positive and finite, got {shape.radius}")
    elif isinstance(shape, Box):
        if not _pos(shape.half_side):
            return fail(f"box half_side must be positive and finite, got {shape.half_side}")
    elif isinstance(shape, CrossPolytope):
        if not _pos(shape.radius):
            return fail(f"cross-polytope radius must be positive and finite, got {shape.radius}")
    elif isinstance(shape, Hexagon):
        if dim != 2:
            return fail(f"hexagon is 2D only, scene dimension is {dim}")
        if not _pos(shape.circumradius):
            return fail(
                f"hexagon circumradius must be positive and finite, got {shape.circumradius}"
            )
    elif isinstance(shape, FGSquircle):
        if dim != 2:
            return fail(f"fg_squircle is 2D only, scene dimension is {dim}")
        if not _pos(shape.radius):
            return fail(f"fg_squircle radius must be positive and finite, got {shape.radius}")
        if not (np.isfinite(shape.squareness) and 0.0 <= shape.squareness <= 1.0):
            return fail(f"fg_squircle squareness must lie in [0, 1], got {shape.squareness}")
    elif isinstance(shape, Superellipsoid):
        if dim != 3:
            return fail(f"superellipsoid is 3D only, scene dimension is {dim}")
        if not (np.isfinite(shape.exponent) and shape.exponent >= 1.0):
            return fail(f"superellipsoid exponent must be >= 1, got {shape.exponent}")
        if len(shape.semi_axes) != 3 or not all(_pos(a) for a in shape.semi_axes):
            return fail(
                f"superellipsoid semi_axes must be three positive numbers, got {shape.semi_axes}"
            )
    elif isinstance(shape, (Union, Intersection)):
        err = _validate_node(shape.a, dim, child(0), depth + 1)
        if err:
            return err
        return _validate_node(shape.b, dim, child(1), depth + 1)
    elif isinstance(shape, Blend):
        if not (np.isfinite(shape.t) and 0.0 <= shape.t <= 1.0):
            return fail(f"blend parameter t must lie in [0, 1], got {shape.t}")
        err = _validate_node(shape.a, dim, child(0), depth + 1)
        if err:
            return err
        return _validate_node(shape.b, dim, child(1), depth + 1)
    elif isinstance(shape, Rotated):
        if shape.rotation.dimension != dim:
            return fail(
                f"rotation dimension {shape.rotation.dimension} does not match "
                f"scene dimension {dim}"
            )
        return _validate_node(shape.child, dim, child(0), depth + 1)
    else:
        return fail(f"unknown shape node {type(shape).__name__}")
    return None
