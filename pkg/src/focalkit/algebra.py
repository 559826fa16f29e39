"""Arithmetic over the four normed division algebras and matrices above them.

Field tags are "R", "C", "H", "O" with coordinate vectors of length 1, 2, 4, 8
in the standard Cayley-Dickson basis (see ``_cdtables`` for the doubling
convention).  Matrices carry the real inner product

    <M1, M2> = 1/2 tr(M1 conj(M2)^t + M2 conj(M1)^t)

which, coordinatewise, is the Euclidean inner product of the coefficient
tensors; ``mat_inner`` uses that identity and the test suite checks it against
the trace form evaluated with actual algebra products.
"""

from __future__ import annotations

import numbers

import numpy as np

from . import kernels
from .errors import DomainError
from .kernels import FIELD_DIMS, conj_arrays, field_dim, mul_arrays, norm_arrays


class AlgebraElement:
    """Element of R, C, H, or O as a real coordinate vector."""

    __slots__ = ("field", "coords")

    def __init__(self, field: str, coords):
        d = field_dim(field)
        c = np.asarray(coords, dtype=np.float64)
        if c.shape != (d,):
            raise DomainError(f"field {field} needs {d} coordinates, got shape {c.shape}")
        self.field = field
        self.coords = c

    @classmethod
    def from_real(cls, field: str, value: float) -> "AlgebraElement":
        c = np.zeros(field_dim(field))
        c[0] = value
        return cls(field, c)

    @classmethod
    def basis(cls, field: str, index: int) -> "AlgebraElement":
        d = field_dim(field)
        if not 0 <= index < d:
            raise DomainError(f"basis index {index} out of range for {field}")
        c = np.zeros(d)
        c[index] = 1.0
        return cls(field, c)

    def conj(self) -> "AlgebraElement":
        return AlgebraElement(self.field, conj_arrays(self.coords))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    @property
    def real(self) -> float:
        return float(self.coords[0])

    def _check_tag(self, other):
        if self.field != other.field:
            raise DomainError(f"field tag mismatch: {self.field} vs {other.field}")

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check_tag(other)
            return AlgebraElement(self.field, mul_arrays(self.coords, other.coords))
        if isinstance(other, numbers.Real):
            return AlgebraElement(self.field, self.coords * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return AlgebraElement(self.field, self.coords * float(other))
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_tag(other)
        return AlgebraElement(self.field, self.coords + other.coords)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_tag(other)
        return AlgebraElement(self.field, self.coords - other.coords)

    def __neg__(self):
        return AlgebraElement(self.field, -self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.field == other.field
            and np.array_equal(self.coords, other.coords)
        )

    def isclose(self, other, tol=1e-12):
        self._check_tag(other)
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=tol))

    def __repr__(self):
        return f"AlgebraElement({self.field!r}, {self.coords.tolist()})"


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in the Cayley-Dickson algebra shared by ``a`` and ``b``."""
    if not isinstance(a, AlgebraElement) or not isinstance(b, AlgebraElement):
        raise DomainError("alg_mul expects two AlgebraElement values")
    return a * b


def alg_conj(a: AlgebraElement) -> AlgebraElement:
    """Conjugation: negates every imaginary coordinate."""
    return a.conj()


def alg_norm(a: AlgebraElement) -> float:
    """Euclidean norm of the coordinate vector (multiplicative for R,C,H,O)."""
    return a.norm()


class FMatrix:
    """Square matrix over one of the four algebras.

    Stored as a real array of shape (size, size, d).  Octonionic sizes are
    capped at 3x3; beyond that the rank-1 idempotent picture breaks down and
    nothing in this toolkit needs it.
    """

    __slots__ = ("field", "size", "data")

    def __init__(self, field: str, data):
        d = field_dim(field)
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != d:
            raise DomainError(f"expected (s, s, {d}) coordinate array, got {arr.shape}")
        size = arr.shape[0]
        if size < 1:
            raise DomainError("matrix size must be positive")
        if field == "O" and size > 3:
            raise DomainError("octonionic matrices are limited to size <= 3")
        self.field = field
        self.size = size
        self.data = arr

    @classmethod
    def zeros(cls, field: str, size: int) -> "FMatrix":
        return cls(field, np.zeros((size, size, field_dim(field))))

    @classmethod
    def identity(cls, field: str, size: int) -> "FMatrix":
        m = np.zeros((size, size, field_dim(field)))
        for i in range(size):
            m[i, i, 0] = 1.0
        return cls(field, m)

    @classmethod
    def matrix_unit(cls, field: str, size: int, i: int, j: int) -> "FMatrix":
        m = np.zeros((size, size, field_dim(field)))
        m[i, j, 0] = 1.0
        return cls(field, m)

    @classmethod
    def from_elements(cls, rows) -> "FMatrix":
        field = rows[0][0].field
        data = np.stack([np.stack([e.coords for e in row]) for row in rows])
        return cls(field, data)

    def entry(self, i: int, j: int) -> AlgebraElement:
        return AlgebraElement(self.field, self.data[i, j].copy())

    def conj_transpose(self) -> "FMatrix":
        return FMatrix(self.field, conj_arrays(np.swapaxes(self.data, 0, 1)).copy())

    def hermitian_defect(self) -> float:
        """Max coordinate deviation from M = conj(M^t)."""
        return float(np.max(np.abs(self.data - conj_arrays(np.swapaxes(self.data, 0, 1)))))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return self.hermitian_defect() <= tol

    def trace_real(self) -> float:
        return float(np.einsum("iik->k", self.data)[0])

    def _check_compatible(self, other):
        if self.field != other.field or self.size != other.size:
            raise DomainError(
                f"matrix mismatch: ({self.field},{self.size}) vs ({other.field},{other.size})"
            )

    def matmul(self, other: "FMatrix") -> "FMatrix":
        """Plain matrix product; each entry product is a single algebra product."""
        self._check_compatible(other)
        # prod[i, k, j] = A[i, k] * B[k, j]
        prod = mul_arrays(self.data[:, :, None, :], other.data[None, :, :, :])
        return FMatrix(self.field, prod.sum(axis=1))

    def __add__(self, other):
        self._check_compatible(other)
        return FMatrix(self.field, self.data + other.data)

    def __sub__(self, other):
        self._check_compatible(other)
        return FMatrix(self.field, self.data - other.data)

    def scale(self, t: float) -> "FMatrix":
        return FMatrix(self.field, self.data * float(t))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data)))

    def __repr__(self):
        return f"FMatrix(field={self.field!r}, size={self.size})"


def mat_inner(m1: FMatrix, m2: FMatrix) -> float:
    """Real inner product 1/2 tr(M1 conj(M2)^t + M2 conj(M1)^t).

    Since Re(a conj(b)) is the Euclidean inner product of coordinate vectors,
    this equals the Frobenius product of the coefficient tensors.
    """
    m1._check_compatible(m2)
    return float(np.sum(m1.data * m2.data))


def jordan_product(m1: FMatrix, m2: FMatrix) -> FMatrix:
    """Symmetrized product (M1 M2 + M2 M1) / 2."""
    return (m1.matmul(m2) + m2.matmul(m1)).scale(0.5)


def jordan_square(m: FMatrix, tol: float = 1e-10) -> FMatrix:
    """Jordan square of a Hermitian matrix (equals the plain square)."""
    if not m.is_hermitian(tol):
        raise DomainError(f"jordan_square needs a Hermitian matrix (defect {m.hermitian_defect():.3e})")
    return m.matmul(m)


def real_representation(m: FMatrix) -> np.ndarray:
    """Real block matrix of left multiplications: entry a -> L_a in R^{d x d}.

    Used for the numerical rank test: a rank-1 matrix over the algebra has
    exactly d = dim(field) nonzero singular values here, so "rank one"
    reads as sigma_{d+1} below threshold.
    """
    d = FIELD_DIMS[m.field]
    s = m.size
    basis = np.eye(d)
    # columns of L_a are a * e_k
    blocks = mul_arrays(m.data[:, :, None, :], basis[None, None, :, :])  # (s, s, d, d)
    lm = np.swapaxes(blocks, 2, 3)  # L[a][row, col] = (a*e_col)_row
    return lm.transpose(0, 2, 1, 3).reshape(s * d, s * d)


__all__ = [
    "AlgebraElement",
    "FMatrix",
    "alg_mul",
    "alg_conj",
    "alg_norm",
    "mat_inner",
    "jordan_product",
    "jordan_square",
    "real_representation",
]
