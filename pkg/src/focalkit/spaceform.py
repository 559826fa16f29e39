"""Model geometry of the simply-connected space forms.

kappa = 0 is R^n, kappa = +1 the unit sphere in R^{n+1}, kappa = -1 the
upper hyperboloid sheet in Minkowski R^{n+1} with signature (-, +, ..., +).
The hyperboloid is used (rather than a ball model) because distance-sphere
and second-fundamental-form computations are linear there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_CLAMP = 1e-12  # slack admitted when clamping arccos/arccosh arguments


class InfiniteType:
    """Sentinel for an infinite focal distance (never a large float)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"


INFINITE = InfiniteType()


def is_infinite(value) -> bool:
    return value is INFINITE


@dataclass(frozen=True)
class SpaceForm:
    """Ambient model: curvature kappa in {0, 1, -1} and dimension n >= 2."""

    kappa: int
    n: int

    def __post_init__(self):
        if self.kappa not in (0, 1, -1):
            raise DomainError(f"kappa must be 0, +1 or -1, got {self.kappa}")
        if self.n < 2:
            raise DomainError(f"ambient dimension must be >= 2, got {self.n}")

    @property
    def model_dim(self) -> int:
        """Length of model coordinate vectors (n for flat, n+1 otherwise)."""
        return self.n if self.kappa == 0 else self.n + 1

    def base_point(self) -> np.ndarray:
        p = np.zeros(self.model_dim)
        if self.kappa != 0:
            p[0] = 1.0
        return p


def mink_dot(x, y):
    """Minkowski inner product with signature (-, +, ..., +); batched."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.sum(x * y, axis=-1) - 2.0 * x[..., 0] * y[..., 0]


def ambient_dot(space: SpaceForm, x, y):
    """Inner product of the linear space the model sits in."""
    if space.kappa == -1:
        return mink_dot(x, y)
    return np.sum(np.asarray(x) * np.asarray(y), axis=-1)


def constraint_residual(space: SpaceForm, coords) -> np.ndarray:
    """Deviation from the model constraint; zero array for kappa=0."""
    coords = np.asarray(coords, dtype=np.float64)
    if space.kappa == 0:
        return np.zeros(coords.shape[:-1])
    if space.kappa == 1:
        return np.abs(np.sum(coords * coords, axis=-1) - 1.0)
    res = np.abs(mink_dot(coords, coords) + 1.0)
    return np.where(coords[..., 0] > 0.0, res, np.inf)


def check_on_model(space: SpaceForm, coords, tol=1e-10):
    res = constraint_residual(space, coords)
    worst = float(np.max(res)) if np.size(res) else 0.0
    if worst > tol:
        raise DomainError(f"point violates the kappa={space.kappa} model constraint by {worst:.3e}")


def project_to_model(space: SpaceForm, coords) -> np.ndarray:
    """Rescale onto the model surface (identity for kappa=0)."""
    coords = np.asarray(coords, dtype=np.float64)
    if space.kappa == 0:
        return coords
    if space.kappa == 1:
        return coords / np.linalg.norm(coords, axis=-1, keepdims=True)
    q = -mink_dot(coords, coords)
    return coords / np.sqrt(q)[..., None]


class AmbientPoint:
    """A point of a space form, validated against the model constraint."""

    __slots__ = ("space", "coords")

    def __init__(self, space: SpaceForm, coords, tol=1e-10):
        c = np.asarray(coords, dtype=np.float64)
        if c.shape != (space.model_dim,):
            raise DomainError(
                f"expected coordinate vector of length {space.model_dim}, got shape {c.shape}"
            )
        check_on_model(space, c, tol)
        self.space = space
        self.coords = c

    def __repr__(self):
        return f"AmbientPoint(kappa={self.space.kappa}, {np.round(self.coords, 6).tolist()})"


def _as_coords(space, x):
    if isinstance(x, AmbientPoint):
        if x.space != space:
            raise DomainError("point belongs to a different space form")
        return x.coords
    return np.asarray(x, dtype=np.float64)


def dist_batch(space: SpaceForm, x, y) -> np.ndarray:
    """Model distance, broadcasting over leading axes."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if space.kappa == 0:
        return np.linalg.norm(x - y, axis=-1)
    if space.kappa == 1:
        c = np.clip(np.sum(x * y, axis=-1), -1.0 - _CLAMP, 1.0 + _CLAMP)
        return np.arccos(np.clip(c, -1.0, 1.0))
    c = -mink_dot(x, y)
    if np.any(c < 1.0 - 1e-9):
        raise DomainError("hyperbolic distance of points off the model sheet")
    return np.arccosh(np.maximum(c, 1.0))


def sf_distance(x, y) -> float:
    """Distance in the shared space form of two points."""
    if isinstance(x, AmbientPoint):
        space = x.space
    elif isinstance(y, AmbientPoint):
        space = y.space
    else:
        raise DomainError("sf_distance needs at least one AmbientPoint to fix the model")
    xc = _as_coords(space, x)
    yc = _as_coords(space, y)
    check_on_model(space, xc)
    check_on_model(space, yc)
    return float(dist_batch(space, xc, yc))


def tangent_residual(space: SpaceForm, p, v) -> float:
    if space.kappa == 0:
        return 0.0
    return float(np.abs(ambient_dot(space, p, v)))


def tangent_norm(space: SpaceForm, p, v):
    g = ambient_dot(space, v, v)
    return np.sqrt(np.maximum(g, 0.0))


def exp_batch(space: SpaceForm, p, v, t):
    """Geodesic from p with initial velocity v evaluated at parameter t."""
    p = np.asarray(p, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)[..., None]
    if space.kappa == 0:
        return p + t * v
    speed = tangent_norm(space, p, v)
    safe = np.where(speed == 0.0, 1.0, speed)[..., None]
    u = v / safe
    a = t * speed[..., None]
    if space.kappa == 1:
        return np.cos(a) * p + np.sin(a) * u
    return np.cosh(a) * p + np.sinh(a) * u


def sf_exp(p: AmbientPoint, v, t: float) -> AmbientPoint:
    """Exponential map; v must be tangent at p (within 1e-8 for kappa != 0)."""
    space = p.space
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (space.model_dim,):
        raise DomainError("tangent vector has wrong length")
    if tangent_residual(space, p.coords, v) > 1e-8:
        raise DomainError("v is not tangent to the model at p")
    out = exp_batch(space, p.coords, v, float(t))
    return AmbientPoint(space, project_to_model(space, out))


def sf_log(p: AmbientPoint, q: AmbientPoint) -> np.ndarray:
    """Initial velocity of the unit-speed-scaled geodesic from p to q."""
    space = p.space
    d = sf_distance(p, q)
    if d == 0.0:
        return np.zeros(space.model_dim)
    if space.kappa == 0:
        return q.coords - p.coords
    if space.kappa == 1:
        u = q.coords - math.cos(d) * p.coords
    else:
        u = q.coords - math.cosh(d) * p.coords
    nu = tangent_norm(space, p.coords, u)
    return d * u / nu


def geodesic_interpolate(space: SpaceForm, a, b, frac):
    """Point a fraction of the way along the geodesic from a to b."""
    pa = AmbientPoint(space, a)
    pb = AmbientPoint(space, b)
    v = sf_log(pa, pb)
    if not np.any(v):
        return np.array(a, dtype=np.float64)
    return sf_exp(pa, v, float(frac)).coords


@dataclass(frozen=True)
class GeodesicCircle:
    """Circle of radius r in M^2(kappa): curvature and length per model."""

    kappa: int
    radius: float
    curvature: float
    length: float


def circle_curvature(kappa: int, r: float) -> float:
    if r <= 0.0:
        raise DomainError("circle radius must be positive")
    if kappa == 0:
        return 1.0 / r
    if kappa == 1:
        if r >= math.pi:
            raise DomainError("spherical circle radius must be below pi")
        if r == math.pi / 2.0:
            return 0.0
        return abs(1.0 / math.tan(r))
    return 1.0 / math.tanh(r)


def circle_length(kappa: int, r: float) -> float:
    if kappa == 0:
        return 2.0 * math.pi * r
    if kappa == 1:
        return 2.0 * math.pi * math.sin(r)
    return 2.0 * math.pi * math.sinh(r)


def circle_from_radius(kappa: int, r: float) -> GeodesicCircle:
    """Geodesic circle of the given radius (r < pi when kappa=+1)."""
    if kappa not in (0, 1, -1):
        raise DomainError(f"kappa must be 0, +1 or -1, got {kappa}")
    return GeodesicCircle(kappa, float(r), circle_curvature(kappa, r), circle_length(kappa, r))


def focal_distance_from_curvature(kappa: int, c: float):
    """Smallest positive focal distance for normal curvature c, or INFINITE.

    Inverts c = 1/t, cot(t), coth(t) for kappa = 0, +1, -1.  For kappa=-1
    the coth image is (1, inf), so c <= 1 has no focal point; for kappa=+1
    a flat direction (c = 0) focuses at pi/2.
    """
    if kappa not in (0, 1, -1):
        raise DomainError(f"kappa must be 0, +1 or -1, got {kappa}")
    if c < 0.0:
        raise DomainError("normal curvature must be nonnegative")
    if kappa == 0:
        return INFINITE if c == 0.0 else 1.0 / c
    if kappa == 1:
        return math.pi / 2.0 - math.atan(c)
    if c <= 1.0:
        return INFINITE
    return math.atanh(1.0 / c)


def umbilical_sphere(kappa: int, n: int, m: int, rho: float):
    """Standard umbilical m-sphere of radius rho in M^n(kappa) as an immersion.

    Euclidean radius for kappa=0, intrinsic radius otherwise (rho < pi/2 on
    the sphere so the minimal focal distance stays on the sphere side).
    """
    from .manifold import umbilical_sphere_manifold

    return umbilical_sphere_manifold(kappa, n, m, rho)


def random_isometry(space: SpaceForm, rng) -> np.ndarray:
    """Random isometry matrix of the linear model (orthogonal or Lorentz)."""
    dim = space.model_dim
    a = rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    q *= np.sign(np.diag(r))
    if space.kappa == 0:
        return q
    if space.kappa == 1:
        return q
    # Lorentz: rotation of the spatial block composed with a boost
    rot = np.eye(dim)
    qs, rs = np.linalg.qr(rng.normal(size=(dim - 1, dim - 1)))
    qs *= np.sign(np.diag(rs))
    rot[1:, 1:] = qs
    t = rng.uniform(-0.8, 0.8)
    boost = np.eye(dim)
    boost[0, 0] = math.cosh(t)
    boost[0, 1] = boost[1, 0] = math.sinh(t)
    boost[1, 1] = math.cosh(t)
    return rot @ boost


def apply_isometry(space: SpaceForm, iso: np.ndarray, coords, shift=None):
    """Apply a linear model isometry (plus a translation when kappa=0)."""
    out = np.asarray(coords) @ iso.T
    if space.kappa == 0 and shift is not None:
        out = out + shift
    return out


__all__ = [
    "SpaceForm",
    "AmbientPoint",
    "GeodesicCircle",
    "INFINITE",
    "InfiniteType",
    "is_infinite",
    "sf_distance",
    "dist_batch",
    "sf_exp",
    "sf_log",
    "exp_batch",
    "geodesic_interpolate",
    "circle_from_radius",
    "circle_curvature",
    "circle_length",
    "focal_distance_from_curvature",
    "umbilical_sphere",
    "mink_dot",
    "ambient_dot",
    "constraint_residual",
    "check_on_model",
    "project_to_model",
    "tangent_norm",
    "tangent_residual",
    "random_isometry",
    "apply_isometry",
]
