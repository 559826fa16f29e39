"""Multiplication tables for the four normed division algebras.

The algebras R, C, H, O are realized by Cayley-Dickson doubling with the
convention

    (a, b) * (c, d) = (a*c - conj(d)*b,  d*a + b*conj(c))

fixed once and for all; every product table below derives from it.  Basis
products are always +/- a single basis element, so each table is stored as
an index matrix ``mu`` (e_i * e_j = sg[i,j] * e_{mu[i,j]}) plus a sign
matrix ``sg``.
"""

from functools import lru_cache

import numpy as np

FIELD_DIMS = {"R": 1, "C": 2, "H": 4, "O": 8}
FIELD_TAGS = ("R", "C", "H", "O")


def _double(mu, sg):
    """One Cayley-Dickson doubling step applied to a basis table."""
    d = mu.shape[0]
    # conjugation sign of basis element j in the smaller algebra
    cj = np.full(d, -1.0)
    cj[0] = 1.0
    mu2 = np.zeros((2 * d, 2 * d), dtype=np.int64)
    sg2 = np.zeros((2 * d, 2 * d), dtype=np.float64)
    for i in range(d):
        for j in range(d):
            # (e_i, 0)(e_j, 0) = (e_i e_j, 0)
            mu2[i, j] = mu[i, j]
            sg2[i, j] = sg[i, j]
            # (e_i, 0)(0, e_j) = (0, e_j e_i)
            mu2[i, d + j] = d + mu[j, i]
            sg2[i, d + j] = sg[j, i]
            # (0, e_i)(e_j, 0) = (0, e_i conj(e_j))
            mu2[d + i, j] = d + mu[i, j]
            sg2[d + i, j] = cj[j] * sg[i, j]
            # (0, e_i)(0, e_j) = (-conj(e_j) e_i, 0)
            mu2[d + i, d + j] = mu[j, i]
            sg2[d + i, d + j] = -cj[j] * sg[j, i]
    return mu2, sg2


@lru_cache(maxsize=None)
def tables(dim):
    """Return (mu, sg) for the algebra of the given coordinate dimension."""
    if dim not in (1, 2, 4, 8):
        raise ValueError(f"no division algebra of dimension {dim}")
    mu = np.zeros((1, 1), dtype=np.int64)
    sg = np.ones((1, 1), dtype=np.float64)
    while mu.shape[0] < dim:
        mu, sg = _double(mu, sg)
    return mu, sg


@lru_cache(maxsize=None)
def conj_signs(dim):
    """Coordinate signs of conjugation: +1 on the real slot, -1 elsewhere."""
    c = np.full(dim, -1.0)
    c[0] = 1.0
    return c


def field_dim(field):
    try:
        return FIELD_DIMS[field]
    except KeyError:
        raise ValueError(f"unknown field tag {field!r}; expected one of R, C, H, O") from None
