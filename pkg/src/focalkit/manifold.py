"""Parametrized immersions: chart families, domains, sampling, derivatives.

A chart family evaluates batches of parameter vectors into ambient model
coordinates, optionally with analytic first/second directional derivatives.
Two domain styles exist: a box (with an optional periodicity lattice, the
torus style) and an atlas over a round manifold (sphere or projective
style), where points may move between numbered charts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, ImmersionError
from .numutil import sphere_directions
from .spaceform import SpaceForm

_JAC_STEP = 1e-5
_CURV_STEP = 1e-4


@dataclass
class SampleConfig:
    """Budgets for sampling and refinement; every run is seeded from outside."""

    grid_per_axis: int = 64
    grid_cap: int = 2**20
    curv_points: int = 1024
    curv_dirs: int = 32
    diam_points: int = 2048
    refine_top: int = 5
    refine_sweeps: int = 30
    diam_iters: int = 200
    fd_step: float = _CURV_STEP
    jac_step: float = _JAC_STEP
    geodesic_count: int = 20
    geodesic_step: float = 0.02

    def scaled(self, factor):
        """Return a config with sample counts scaled by ``factor``."""
        return replace(
            self,
            grid_per_axis=max(8, int(self.grid_per_axis * factor)),
            curv_points=max(64, int(self.curv_points * factor)),
            diam_points=max(64, int(self.diam_points * factor)),
        )


@dataclass
class BoxDomain:
    """Box in parameter space; ``lattice`` rows generate the periodicity."""

    lows: np.ndarray
    highs: np.ndarray
    lattice: np.ndarray | None = None

    @classmethod
    def from_lattice(cls, lattice):
        lattice = np.asarray(lattice, dtype=np.float64)
        m = lattice.shape[0]
        return cls(lows=np.zeros(m), highs=np.ones(m), lattice=lattice)

    @property
    def closed(self):
        return self.lattice is not None

    def to_params(self, fractions):
        if self.lattice is not None:
            return fractions @ self.lattice
        return self.lows + fractions * (self.highs - self.lows)

    def wrap(self, x):
        if self.lattice is None:
            return x
        f = x @ np.linalg.inv(self.lattice)
        return (f - np.floor(f)) @ self.lattice


class AtlasDomain:
    """Marker for atlas-style domains; sampling is owned by the family."""

    closed = True


def _stereo(chart, X):
    """Stereographic chart of the unit m-sphere; chart 1 flips the pole."""
    n2 = np.sum(X * X, axis=-1, keepdims=True)
    w = 1.0 + n2
    out = np.concatenate([2.0 * X, 1.0 - n2], axis=-1) / w
    if chart == 1:
        out[..., -1] *= -1.0
    return out


def _stereo_derivs(chart, X, U):
    """Value and first/second t-derivatives of sigma(X + t U) at t = 0."""
    m = X.shape[-1]
    n2 = np.sum(X * X, axis=-1, keepdims=True)
    s = np.sum(X * U, axis=-1, keepdims=True)
    q = np.sum(U * U, axis=-1, keepdims=True)
    w = 1.0 + n2
    N = np.concatenate([2.0 * X, 2.0 - w], axis=-1)
    N1 = np.concatenate([2.0 * U, -2.0 * s], axis=-1)
    N2 = np.concatenate([np.zeros_like(U), -2.0 * q], axis=-1)
    wp = 2.0 * s
    wpp = 2.0 * q
    val = N / w
    d1 = N1 / w - N * (wp / w**2)
    d2 = N2 / w - 2.0 * N1 * (wp / w**2) + N * (2.0 * wp**2 / w**3 - wpp / w**2)
    if chart == 1:
        val = val.copy()
        val[..., -1] *= -1.0
        d1[..., -1] *= -1.0
        d2[..., -1] *= -1.0
    return val, d1, d2


def _charts_from_sphere(Y):
    """Preferred chart ids and coordinates for unit sphere points."""
    last = Y[..., -1]
    ids = (last < 0.0).astype(np.int64)
    denom = 1.0 + np.abs(last)
    X = Y[..., :-1] / denom[..., None]
    return ids, X


class PostAffineSphereFamily:
    """Image b + W sigma(x) of the round unit m-sphere under an affine map.

    Covers umbilical spheres in all three models (W orthogonal-scaled
    columns) and ellipsoids (W diagonal); two stereographic charts.
    """

    has_analytic = True
    num_charts = 2
    quality_bound = 2.0

    def __init__(self, W, b):
        self.W = np.asarray(W, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.m = self.W.shape[1] - 1
        self._pinv = np.linalg.pinv(self.W)

    def evaluate(self, chart, X):
        return self.b + _stereo(chart, X) @ self.W.T

    def dirderiv(self, chart, X, U):
        val, d1, d2 = _stereo_derivs(chart, X, U)
        return self.b + val @ self.W.T, d1 @ self.W.T, d2 @ self.W.T

    def preferred_chart(self, P):
        s = (P - self.b) @ self._pinv.T
        s /= np.linalg.norm(s, axis=-1, keepdims=True)
        return _charts_from_sphere(s)

    def chart_quality(self, chart, X):
        return np.linalg.norm(X, axis=-1)

    def sample_params(self, count, rng):
        y = rng.normal(size=(count, self.m + 1))
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        ids, X = _charts_from_sphere(y)
        return [(c, X[ids == c]) for c in (0, 1) if np.any(ids == c)]


class TrigBlockFamily:
    """Blocks amp*(cos(omega*phi_j), sin(omega*phi_j)) with phi = L x.

    The flat-torus immersion family; one global periodic chart.
    """

    has_analytic = True
    num_charts = 1
    quality_bound = math.inf

    def __init__(self, L, omega, amp):
        self.L = np.asarray(L, dtype=np.float64)
        self.omega = float(omega)
        self.amp = float(amp)
        self.blocks = self.L.shape[0]

    def _trig(self, X):
        phi = self.omega * (X @ self.L.T)
        return np.cos(phi), np.sin(phi)

    def evaluate(self, chart, X):
        c, s = self._trig(X)
        out = np.empty(X.shape[:-1] + (2 * self.blocks,))
        out[..., 0::2] = self.amp * c
        out[..., 1::2] = self.amp * s
        return out

    def dirderiv(self, chart, X, U):
        c, s = self._trig(X)
        w = U @ self.L.T
        val = np.empty(X.shape[:-1] + (2 * self.blocks,))
        d1 = np.empty_like(val)
        d2 = np.empty_like(val)
        a = self.amp
        om = self.omega
        val[..., 0::2] = a * c
        val[..., 1::2] = a * s
        d1[..., 0::2] = -a * om * w * s
        d1[..., 1::2] = a * om * w * c
        d2[..., 0::2] = -a * om**2 * w**2 * c
        d2[..., 1::2] = -a * om**2 * w**2 * s
        return val, d1, d2

    def chart_quality(self, chart, X):
        return np.zeros(X.shape[:-1])


class CallableFamily:
    """Wraps user-supplied evaluation (and optional derivative) callbacks."""

    num_charts = 1
    quality_bound = math.inf

    def __init__(self, func, dirderiv=None):
        self._func = func
        self._dirderiv = dirderiv
        self.has_analytic = dirderiv is not None

    def evaluate(self, chart, X):
        return np.asarray(self._func(X), dtype=np.float64)

    def dirderiv(self, chart, X, U):
        if self._dirderiv is None:
            raise DomainError("no analytic derivatives supplied")
        return self._dirderiv(X, U)

    def chart_quality(self, chart, X):
        return np.zeros(X.shape[:-1])


class ImmersedManifold:
    """A parametrized immersion into a space form.

    ``family`` evaluates charts, ``domain`` describes the parameter region
    (BoxDomain) or defers to the family's atlas (AtlasDomain).
    """

    def __init__(self, ambient: SpaceForm, m: int, family, domain, sample_config=None, name=""):
        self.ambient = ambient
        self.m = int(m)
        self.family = family
        self.domain = domain
        self.config = sample_config or SampleConfig()
        self.name = name

    # -- evaluation ----------------------------------------------------

    @property
    def has_analytic(self):
        return getattr(self.family, "has_analytic", False)

    def eval(self, chart, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return self.family.evaluate(chart, X)

    def eval_point(self, chart, x):
        return self.eval(chart, x)[0]

    def dirderiv(self, chart, X, U, mode="auto", fd_step=None, richardson=False):
        """(value, d/dt, d2/dt2) of chart(X + tU) at t=0, batched."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        U = np.atleast_2d(np.asarray(U, dtype=np.float64))
        if mode == "auto":
            mode = "analytic" if self.has_analytic else "fd"
        if mode == "analytic":
            return self.family.dirderiv(chart, X, U)
        h = fd_step or self.config.fd_step

        def stencil(step):
            pp = self.family.evaluate(chart, X + step * U)
            pm = self.family.evaluate(chart, X - step * U)
            return pp, pm

        p0 = self.family.evaluate(chart, X)
        pp, pm = stencil(h)
        d1 = (pp - pm) / (2.0 * h)
        d2 = (pp + pm - 2.0 * p0) / h**2
        if richardson:
            pp2, pm2 = stencil(h / 2.0)
            d1h = (pp2 - pm2) / h
            d2h = (pp2 + pm2 - 2.0 * p0) / (h / 2.0) ** 2
            d1 = (4.0 * d1h - d1) / 3.0
            d2 = (4.0 * d2h - d2) / 3.0
        return p0, d1, d2

    def jacobian(self, chart, X, mode="auto"):
        """Differential as an array (N, D, m)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        n, m = X.shape
        if mode == "auto":
            mode = "analytic" if self.has_analytic else "fd"
        if mode == "analytic":
            Xr = np.repeat(X, m, axis=0)
            Ur = np.tile(np.eye(m), (n, 1))
            _, d1, _ = self.family.dirderiv(chart, Xr, Ur)
            return d1.reshape(n, m, -1).transpose(0, 2, 1)
        h = self.config.jac_step
        cols = []
        for k in range(m):
            e = np.zeros(m)
            e[k] = h
            cols.append((self.family.evaluate(chart, X + e) - self.family.evaluate(chart, X - e)) / (2.0 * h))
        return np.stack(cols, axis=2)

    def metric(self, chart, X, jac=None, mode="auto"):
        """Pulled-back metric g = J^t G J with G the ambient linear form."""
        J = self.jacobian(chart, X, mode) if jac is None else jac
        GJ = J.copy()
        if self.ambient.kappa == -1:
            GJ[:, 0, :] *= -1.0
        return np.einsum("ndi,ndj->nij", J, GJ)

    def unit_directions(self, chart, X, U, jac=None):
        """Normalize chart directions to unit length in the induced metric."""
        g = self.metric(chart, X, jac=jac)
        nrm2 = np.einsum("nij,ni,nj->n", g, U, U)
        if np.any(nrm2 <= 0.0):
            raise ImmersionError("degenerate direction: zero induced norm")
        return U / np.sqrt(nrm2)[:, None]

    # -- sampling ------------------------------------------------------

    @property
    def closed(self):
        return self.domain.closed

    def grid_count(self):
        return min(self.config.grid_per_axis**self.m, self.config.grid_cap)

    def sample(self, count, rng):
        """Sample parameter points; returns a list of (chart, X) groups."""
        if isinstance(self.domain, AtlasDomain):
            return self.family.sample_params(count, rng)
        m = self.m
        per_axis = max(2, int(round(count ** (1.0 / m))))
        if per_axis**m <= count * 1.05 and per_axis**m <= self.config.grid_cap and m <= 3:
            axes = [np.linspace(0.0, 1.0, per_axis, endpoint=False) for _ in range(m)]
            mesh = np.meshgrid(*axes, indexing="ij")
            fractions = np.stack([g.ravel() for g in mesh], axis=1)
            fractions += 0.5 / per_axis
        else:
            # latin hypercube fill beyond the mesh cap
            fractions = np.empty((count, m))
            for k in range(m):
                fractions[:, k] = (rng.permutation(count) + rng.uniform(size=count)) / count
        return [(0, self.domain.to_params(fractions))]

    def sample_flat(self, count, rng):
        """Sampled charts/params/ambient coords as flat arrays."""
        groups = self.sample(count, rng)
        charts, params, points = [], [], []
        for chart, X in groups:
            charts.append(np.full(X.shape[0], chart, dtype=np.int64))
            params.append(X)
            points.append(self.eval(chart, X))
        return np.concatenate(charts), np.vstack(params), np.vstack(points)

    def direction_set(self, count=None):
        return sphere_directions(self.m, count or self.config.curv_dirs)

    # -- atlas services ------------------------------------------------

    def preferred_chart(self, P):
        if hasattr(self.family, "preferred_chart"):
            return self.family.preferred_chart(np.atleast_2d(P))
        raise DomainError("manifold has a single global chart")

    def chart_quality(self, chart, X):
        return self.family.chart_quality(chart, np.atleast_2d(X))

    @property
    def quality_bound(self):
        return getattr(self.family, "quality_bound", math.inf)

    @property
    def num_charts(self):
        return getattr(self.family, "num_charts", 1)

    # -- validation ----------------------------------------------------

    def validate(self, rng=None, points=64, min_sv=1e-7, model_tol=1e-9):
        """Check model containment and the immersion (full-rank) property."""
        from .spaceform import constraint_residual

        rng = rng or np.random.default_rng(0)
        for chart, X in self.sample(points, rng):
            P = self.eval(chart, X)
            res = constraint_residual(self.ambient, P)
            if np.max(res) > model_tol:
                raise ImmersionError(
                    f"chart {chart} leaves the ambient model by {float(np.max(res)):.2e}"
                )
            J = self.jacobian(chart, X)
            sv = np.linalg.svd(J, compute_uv=False)
            smallest = sv[:, -1] if sv.ndim == 2 else sv[-1]
            bad = np.flatnonzero(smallest <= min_sv)
            if bad.size:
                loc = X[bad[0]]
                raise ImmersionError(
                    f"rank-deficient differential at chart {chart}, params {np.round(loc, 5).tolist()}"
                    f" (smallest singular value {float(smallest[bad[0]]):.2e})"
                )
        return True


# -- constructors -------------------------------------------------------


def umbilical_sphere_manifold(kappa, n, m, rho, sample_config=None):
    """Umbilical m-sphere of radius rho in M^n(kappa), based at the pole."""
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    if rho <= 0.0:
        raise DomainError("radius must be positive")
    if kappa == 1 and rho >= math.pi / 2.0:
        raise DomainError("spherical radius must be below pi/2")
    ambient = SpaceForm(kappa, n)
    D = ambient.model_dim
    if kappa == 0:
        W = np.zeros((D, m + 1))
        W[: m + 1, :] = rho * np.eye(m + 1)
        b = np.zeros(D)
    else:
        stretch = math.sin(rho) if kappa == 1 else math.sinh(rho)
        offset = math.cos(rho) if kappa == 1 else math.cosh(rho)
        W = np.zeros((D, m + 1))
        W[1 : m + 2, :] = stretch * np.eye(m + 1)
        b = np.zeros(D)
        b[0] = offset
    fam = PostAffineSphereFamily(W, b)
    return ImmersedManifold(
        ambient, m, fam, AtlasDomain(), sample_config, name=f"umbilical-sphere(k={kappa}, m={m}, n={n}, rho={rho})"
    )


def ellipsoid_manifold(semi_axes, sample_config=None):
    """Ellipsoid with the given semi axes in R^len(axes)."""
    axes = np.asarray(semi_axes, dtype=np.float64)
    n = axes.size
    if n < 3:
        raise DomainError("ellipsoid needs at least 3 semi axes")
    ambient = SpaceForm(0, n)
    fam = PostAffineSphereFamily(np.diag(axes), np.zeros(n))
    return ImmersedManifold(
        ambient, n - 1, fam, AtlasDomain(), sample_config, name=f"ellipsoid{tuple(axes.tolist())}"
    )


def clifford_torus_manifold(sample_config=None):
    """Flat 2-torus in R^6: trig blocks restricted to the plane x+y+z=0."""
    u1 = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
    u2 = np.array([1.0, 1.0, -2.0]) / math.sqrt(6.0)
    L = np.stack([u1, u2], axis=1)  # maps (s, t) -> R^3
    fam = TrigBlockFamily(L, math.sqrt(3.0), 1.0 / math.sqrt(3.0))
    # periodicity: (s,t) with L(s,t) in (2*pi/sqrt(3)) * {integer vectors summing to 0}
    g1 = (2.0 * math.pi / math.sqrt(3.0)) * np.array([np.dot([1, -1, 0], u1), np.dot([1, -1, 0], u2)])
    g2 = (2.0 * math.pi / math.sqrt(3.0)) * np.array([np.dot([0, 1, -1], u1), np.dot([0, 1, -1], u2)])
    domain = BoxDomain.from_lattice(np.stack([g1, g2]))
    return ImmersedManifold(SpaceForm(0, 6), 2, fam, domain, sample_config, name="clifford-torus")


def parametric_manifold(ambient, m, func, dirderiv=None, lows=None, highs=None, lattice=None, sample_config=None, name="custom"):
    """Manifold from a user callback (N, m) -> (N, model_dim)."""
    fam = CallableFamily(func, dirderiv)
    if lattice is not None:
        domain = BoxDomain.from_lattice(lattice)
    else:
        lows = np.zeros(m) if lows is None else np.asarray(lows, dtype=np.float64)
        highs = np.ones(m) if highs is None else np.asarray(highs, dtype=np.float64)
        domain = BoxDomain(lows, highs)
    return ImmersedManifold(ambient, m, fam, domain, sample_config, name=name)
