"""Projective spaces over R, C, H, O as rank-1 Hermitian idempotents.

A line F*v with |v| = 1 is identified with the projection matrix
P_ij = v_i conj(v_j).  Every such P is Hermitian, idempotent, has real trace
one, and lies on the sphere of radius sqrt(l/(l+1)) about Id/(l+1) inside
the trace-one Hermitian slice.  Compositions with affine isometries move
those spheres into flat space or onto umbilical spheres of the curved
models.

Octonionic caveat: products of three generic octonions do not associate, so
line representatives must have at least one real coordinate (every point of
OP^1 and OP^2 has one); all products then live in associative two-generator
subalgebras.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import FMatrix
from .errors import ChartError, DomainError
from .kernels import conj_arrays, field_dim, mul_arrays
from .manifold import AtlasDomain, ImmersedManifold
from .spaceform import SpaceForm

_REAL_SLOT_TOL = 1e-12


def _as_vector(v, field):
    """Coerce input to an (l+1, d) coordinate array."""
    d = field_dim(field)
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 1:
        if field == "R":
            arr = arr[:, None]
        elif arr.size % d == 0:
            arr = arr.reshape(-1, d)
        else:
            raise DomainError(f"cannot reshape length-{arr.size} vector for field {field}")
    if arr.ndim != 2 or arr.shape[1] != d:
        raise DomainError(f"expected (l+1, {d}) coordinates, got {arr.shape}")
    return arr


def projector_batch(V):
    """P[n, i, j] = v_i conj(v_j) for batched unit vectors V (N, l+1, d)."""
    return mul_arrays(V[..., :, None, :], conj_arrays(V[..., None, :, :]))


def canonicalize_line(v, field):
    """Scale a line representative so its largest slot is real positive.

    For associative fields this fixes the projector's gauge; for the
    octonions it is required before forming the projector at all.
    """
    V = _as_vector(v, field)
    return canonicalize_batch(V[None], field)[0]


def canonicalize_batch(V, field):
    """Vectorized ``canonicalize_line`` over a batch (N, l+1, d)."""
    V = np.asarray(V, dtype=np.float64)
    norms = np.linalg.norm(V, axis=2)
    k = np.argmax(norms, axis=1)
    rows = np.arange(V.shape[0])
    vk = V[rows, k]
    scale = conj_arrays(vk) / norms[rows, k][:, None]
    return mul_arrays(V, scale[:, None, :])


@dataclass
class Certification:
    """Residuals of the defining conditions of a projective point."""

    hermitian: float
    idempotent: float
    trace: float
    rank: float
    sphere: float
    tol: float
    rank_tol: float

    @property
    def passed(self) -> bool:
        return (
            self.hermitian <= self.tol
            and self.idempotent <= self.tol
            and self.trace <= self.tol
            and self.rank <= self.rank_tol
            and self.sphere <= self.tol
        )

    def as_dict(self):
        return {
            "hermitian": self.hermitian,
            "idempotent": self.idempotent,
            "trace": self.trace,
            "rank": self.rank,
            "sphere": self.sphere,
            "passed": self.passed,
        }


class ProjectivePoint:
    """Point of FP^l stored as its projection FMatrix."""

    __slots__ = ("field", "l", "matrix")

    def __init__(self, matrix: FMatrix, tol: float = 1e-9):
        cert = certify_point(matrix, tol=tol, rank_tol=1e-8)
        if not cert.passed:
            raise DomainError(f"matrix is not a projective point: {cert.as_dict()}")
        self.field = matrix.field
        self.l = matrix.size - 1
        self.matrix = matrix

    def coords(self) -> np.ndarray:
        return self.matrix.data

    def __repr__(self):
        return f"ProjectivePoint({self.field}P^{self.l})"


def projector_from_line(v, field: str) -> ProjectivePoint:
    """Orthogonal projection matrix onto the line F*v (v a unit vector).

    Octonionic input must carry at least one exactly real coordinate (use
    ``canonicalize_line`` first if needed).
    """
    V = _as_vector(v, field)
    total = float(np.sum(V * V))
    if abs(total - 1.0) > 1e-10:
        raise DomainError(f"line representative must be a unit vector, |v|^2 = {total:.12f}")
    if field == "O":
        # zero slots count: all products then involve at most two generators
        imag = np.linalg.norm(V[:, 1:], axis=1)
        if not np.any(imag <= _REAL_SLOT_TOL):
            raise ChartError(
                "octonionic representative has no real coordinate; "
                "apply canonicalize_line(v, 'O') before projecting"
            )
    P = projector_batch(V[None])[0]
    return ProjectivePoint(FMatrix(field, P))


def certify_point(m: FMatrix, tol: float = 1e-9, rank_tol: float = 1e-8) -> Certification:
    """Residuals of hermiticity, idempotency, trace, rank and sphere containment."""
    from .algebra import jordan_product, real_representation

    herm = m.hermitian_defect()
    idem = (jordan_product(m, m) - m).max_abs()
    trace = abs(m.trace_real() - 1.0)
    d = field_dim(m.field)
    sv = np.linalg.svd(real_representation(m), compute_uv=False)
    rank = float(sv[d]) if sv.size > d else 0.0
    lp1 = m.size
    center = FMatrix.identity(m.field, lp1).scale(1.0 / lp1)
    diff = m - center
    sphere = abs(float(np.sum(diff.data * diff.data)) - (lp1 - 1.0) / lp1)
    return Certification(herm, idem, trace, rank, sphere, tol, rank_tol)


def chordal_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """Distance sqrt(<P-Q, P-Q>) in the matrix inner product; range [0, sqrt(2)]."""
    if p.field != q.field or p.l != q.l:
        raise DomainError("projective points live in different spaces")
    diff = p.matrix.data - q.matrix.data
    return math.sqrt(float(np.sum(diff * diff)))


def random_lines(field: str, l: int, count: int, rng) -> np.ndarray:
    """Random unit line representatives (canonicalized so octonions chart)."""
    d = field_dim(field)
    V = rng.normal(size=(count, l + 1, d))
    V /= np.sqrt(np.sum(V * V, axis=(1, 2)))[:, None, None]
    if field == "O":
        V = canonicalize_batch(V, field)
        V[:, :, :] = V / np.sqrt(np.sum(V * V, axis=(1, 2)))[:, None, None]
    return V


def hermitian_slice_basis(field: str, l: int) -> np.ndarray:
    """Orthonormal basis (w.r.t. the matrix inner product) of trace-0 Hermitian matrices."""
    d = field_dim(field)
    s = l + 1
    mats = []
    for i in range(1, s):  # traceless diagonal
        m = np.zeros((s, s, d))
        m[0, 0, 0] = 1.0
        m[i, i, 0] = -1.0
        mats.append(m)
    for i in range(s):
        for j in range(i + 1, s):
            for a in range(d):
                m = np.zeros((s, s, d))
                m[i, j, a] = 1.0
                sign = 1.0 if a == 0 else -1.0
                m[j, i, a] = sign
                mats.append(m)
    flat = np.stack([m.ravel() for m in mats])
    q, _ = np.linalg.qr(flat.T)
    return q.T  # rows: orthonormal basis of the slice directions


class _VeroneseFamily:
    """Affine charts of FP^l composed with a linear placement map.

    Chart k sends x in R^{l*d} to the line through the vector with slot k
    fixed to 1 and the remaining slots given by x; the projector coordinates
    are then mapped into the ambient model by p = offset + flat(P) @ place.T.
    """

    has_analytic = True

    def __init__(self, field, l, place, offset):
        self.field = field
        self.l = l
        self.d = field_dim(field)
        self.num_charts = l + 1
        self.quality_bound = 2.0
        self.place = np.asarray(place, dtype=np.float64)
        self.offset = np.asarray(offset, dtype=np.float64)
        self._pinv = np.linalg.pinv(self.place)

    def _lift(self, chart, X):
        """Raw homogeneous vectors r(x) with slot ``chart`` set to 1."""
        n = X.shape[0]
        R = np.zeros((n, self.l + 1, self.d))
        body = X.reshape(n, self.l, self.d)
        idx = [i for i in range(self.l + 1) if i != chart]
        R[:, idx, :] = body
        R[:, chart, 0] = 1.0
        return R

    def _lift_dir(self, chart, U):
        n = U.shape[0]
        Rd = np.zeros((n, self.l + 1, self.d))
        body = U.reshape(n, self.l, self.d)
        idx = [i for i in range(self.l + 1) if i != chart]
        Rd[:, idx, :] = body
        return Rd

    def _flatten(self, P):
        return P.reshape(P.shape[0], -1)

    def _embed(self, Pflat):
        return self.offset + Pflat @ self.place.T

    def evaluate(self, chart, X):
        R = self._lift(chart, X)
        nrm = np.sqrt(np.sum(R * R, axis=(1, 2)))
        V = R / nrm[:, None, None]
        return self._embed(self._flatten(projector_batch(V)))

    def dirderiv(self, chart, X, U):
        R = self._lift(chart, X)
        Rd = self._lift_dir(chart, U)
        q0 = np.sum(R * R, axis=(1, 2))
        n0 = np.sqrt(q0)
        a = np.sum(R * Rd, axis=(1, 2))
        b = np.sum(Rd * Rd, axis=(1, 2))
        np1 = a / n0
        np2 = (b - np1**2) / n0
        V = R / n0[:, None, None]
        V1 = Rd / n0[:, None, None] - R * (np1 / q0)[:, None, None]
        V2 = (
            -2.0 * Rd * (np1 / q0)[:, None, None]
            - R * (np2 / q0)[:, None, None]
            + 2.0 * R * (np1**2 / (q0 * n0))[:, None, None]
        )
        conjV = conj_arrays(V)
        conjV1 = conj_arrays(V1)
        conjV2 = conj_arrays(V2)

        def outer(A, B):
            return mul_arrays(A[:, :, None, :], B[:, None, :, :])

        P = outer(V, conjV)
        P1 = outer(V1, conjV) + outer(V, conjV1)
        P2 = outer(V2, conjV) + 2.0 * outer(V1, conjV1) + outer(V, conjV2)
        return (
            self._embed(self._flatten(P)),
            self._flatten(P1) @ self.place.T,
            self._flatten(P2) @ self.place.T,
        )

    def chart_quality(self, chart, X):
        return np.linalg.norm(X, axis=-1)

    def _charts_from_vectors(self, V):
        """Preferred chart ids and coordinates from line representatives."""
        norms = np.linalg.norm(V, axis=2)
        ids = np.argmax(norms, axis=1)
        n = V.shape[0]
        X = np.empty((n, self.l * self.d))
        for k in range(self.l + 1):
            sel = np.flatnonzero(ids == k)
            if sel.size == 0:
                continue
            Vk = V[sel]
            # representative with slot k real positive: w = v * conj(v_k)/|v_k|
            scale = conj_arrays(Vk[:, k, :]) / norms[sel, k][:, None]
            W = mul_arrays(Vk, scale[:, None, :])
            idx = [i for i in range(self.l + 1) if i != k]
            X[sel] = (W[:, idx, :] / W[:, k, 0][:, None, None]).reshape(sel.size, -1)
        return ids, X

    def preferred_chart(self, P):
        """Invert ambient points: read a representative off the largest column."""
        flat = (np.atleast_2d(P) - self.offset) @ self._pinv.T
        M = flat.reshape(-1, self.l + 1, self.l + 1, self.d)
        diag = np.einsum("niik->nik", M)[..., 0]
        k = np.argmax(diag, axis=1)
        n = M.shape[0]
        V = np.empty((n, self.l + 1, self.d))
        for kk in range(self.l + 1):
            sel = np.flatnonzero(k == kk)
            if sel.size == 0:
                continue
            col = M[sel][:, :, kk, :]
            nc = np.sqrt(np.sum(col * col, axis=(1, 2)))
            V[sel] = col / nc[:, None, None]
        return self._charts_from_vectors(V)

    def sample_params(self, count, rng):
        V = random_lines(self.field, self.l, count, rng)
        ids, X = self._charts_from_vectors(V)
        return [(k, X[ids == k]) for k in range(self.l + 1) if np.any(ids == k)]


@dataclass
class VeroneseEmbedding:
    """Record of the composed placement of FP^l into a space form."""

    field: str
    l: int
    target: SpaceForm
    scale: float
    place: np.ndarray  # (model_dim, (l+1)^2 d) linear part on flattened matrices
    offset: np.ndarray
    manifold: ImmersedManifold

    def push(self, matrices):
        """Map flattened matrix coordinates (N, (l+1)^2 d) into the target model."""
        return self.offset + np.atleast_2d(matrices) @ self.place.T

    def pull_back(self, points) -> np.ndarray:
        """Invert the placement back to flattened matrix coordinates."""
        pinv = np.linalg.pinv(self.place)
        flat = (np.atleast_2d(points) - self.offset) @ pinv.T
        kernel_dim = self.place.shape[1] - np.linalg.matrix_rank(self.place, tol=1e-10)
        if kernel_dim:
            # the placement drops the trace direction; restore the center
            lp1 = self.l + 1
            d = field_dim(self.field)
            center = np.zeros((lp1, lp1, d))
            for i in range(lp1):
                center[i, i, 0] = 1.0 / lp1
            flat = flat + center.ravel()
        return flat

    def pull_back_matrix(self, point) -> FMatrix:
        lp1 = self.l + 1
        d = field_dim(self.field)
        return FMatrix(self.field, self.pull_back(point)[0].reshape(lp1, lp1, d))


def veronese_into(field: str, l: int, target: SpaceForm | None = None, scale: float = 1.0, sample_config=None):
    """Veronese embedding of FP^l into a space form.

    ``target=None`` keeps raw flattened matrix coordinates (the flat ambient
    of dimension (l+1)^2 d).  Flat targets receive the sphere of radius
    scale*sqrt(l/(l+1)) centered at the origin via an orthonormal basis of
    the trace-zero Hermitian slice; kappa=+1 targets place the rescaled
    sphere as an umbilical distance sphere (totally geodesic for scale
    making the radius one), and kappa=-1 analogously.

    Returns (VeroneseEmbedding, ImmersedManifold).
    """
    d = field_dim(field)
    if field == "O" and l not in (1, 2):
        raise DomainError("octonionic projective spaces exist only for l in {1, 2}")
    if l < 1:
        raise DomainError("l must be at least 1")
    lp1 = l + 1
    flat_dim = lp1 * lp1 * d
    radius0 = math.sqrt(l / (l + 1.0))
    center = np.zeros((lp1, lp1, d))
    for i in range(lp1):
        center[i, i, 0] = 1.0 / lp1

    if target is None:
        target = SpaceForm(0, flat_dim)
        place = np.eye(flat_dim)
        offset = np.zeros(flat_dim)
        scale = 1.0
    else:
        basis = hermitian_slice_basis(field, l)  # (slice_dim, flat_dim)
        slice_dim = basis.shape[0]
        if target.kappa == 0:
            if target.n < slice_dim:
                raise DomainError(
                    f"flat target needs dimension >= {slice_dim}, got {target.n}"
                )
            place = np.zeros((target.n, flat_dim))
            place[:slice_dim, :] = scale * basis
            offset = place @ (-center.ravel())
        else:
            # the matrix-space sphere has radius radius0; rescale it to
            # Euclidean radius rho_e inside the model and sit it umbilically
            if target.n < slice_dim:
                raise DomainError(
                    f"curved target needs dimension >= {slice_dim}, got {target.n}"
                )
            rho_e = scale * radius0
            if target.kappa == 1 and rho_e > 1.0:
                raise DomainError("rescaled sphere does not fit inside the unit sphere model")
            D = target.model_dim
            lift = np.zeros((D, slice_dim))
            lift[1 : slice_dim + 1, :] = np.eye(slice_dim)
            place = (lift @ basis) * scale
            offset = place @ (-center.ravel())
            base = np.zeros(D)
            base[0] = math.sqrt(1.0 - rho_e**2) if target.kappa == 1 else math.sqrt(1.0 + rho_e**2)
            offset = offset + base

    fam = _VeroneseFamily(field, l, place, offset)
    manifold = ImmersedManifold(
        target,
        l * d,
        fam,
        AtlasDomain(),
        sample_config,
        name=f"veronese({field}, l={l}, kappa={target.kappa})",
    )
    emb = VeroneseEmbedding(field, l, target, float(scale), place, offset, manifold)
    return emb, manifold


__all__ = [
    "ProjectivePoint",
    "Certification",
    "VeroneseEmbedding",
    "projector_from_line",
    "projector_batch",
    "canonicalize_line",
    "certify_point",
    "chordal_distance",
    "random_lines",
    "hermitian_slice_basis",
    "veronese_into",
]
