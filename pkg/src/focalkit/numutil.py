"""Shared numerical helpers: derivative-free refinement, direction sets,
smallest enclosing ball."""

from __future__ import annotations

import math
from statistics import NormalDist

import numpy as np

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_NORMAL = NormalDist()


def golden_max_1d(f, lo, hi, iters=40):
    """Golden-section maximization of f on [lo, hi]."""
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def coordinate_golden_refine(f, x0, span, sweeps=25, shrink=0.55, inner_iters=24):
    """Maximize f by coordinate-wise golden-section sweeps around x0.

    Brackets shrink geometrically between sweeps; robust near chart seams
    since no derivatives are taken.  Returns (x, f(x), converged).
    """
    x = np.array(x0, dtype=np.float64)
    best = f(x)
    width = float(span)
    converged = False
    for _ in range(sweeps):
        improved = 0.0
        for k in range(x.size):
            xk = x[k]

            def slice_f(t, k=k):
                x[k] = t
                val = f(x)
                return val

            t, val = golden_max_1d(slice_f, xk - width, xk + width, inner_iters)
            if val > best:
                improved += val - best
                best = val
                x[k] = t
            else:
                x[k] = xk
        width *= shrink
        if width < 1e-10 and improved < 1e-13:
            converged = True
            break
    return x, best, converged


def halton(count, dims, skip=20):
    """Halton sequence in [0,1)^dims (first ``skip`` points dropped)."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61]
    if dims > len(primes):
        raise ValueError("halton supports at most 18 dimensions")
    out = np.empty((count, dims))
    for j in range(dims):
        base = primes[j]
        for i in range(count):
            n = i + 1 + skip
            value, f = 0.0, 1.0 / base
            while n > 0:
                value += f * (n % base)
                n //= base
                f /= base
            out[i, j] = value
    return out


def sphere_directions(dim, count):
    """Deterministic low-discrepancy set of unit directions in R^dim."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])[:count]
    u = halton(count, dim)
    z = np.vectorize(_NORMAL.inv_cdf)(np.clip(u, 1e-9, 1.0 - 1e-9))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z


def min_enclosing_ball(points, movement_tol=1e-7, max_iter=20000):
    """Smallest enclosing ball via an iterative center-pull scheme.

    Frank-Wolfe with away steps on the simplex weights: the center is pulled
    toward the current farthest point (or away from an over-weighted support
    point) with an exact line search.  Stops when the center moves less than
    ``movement_tol``.  Returns (center, radius, iterations).
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    sq = np.sum(pts * pts, axis=1)
    lam = np.full(n, 1.0 / n)
    center = pts.mean(axis=0)
    s1 = float(sq.mean())
    it = 0
    for it in range(1, max_iter + 1):
        cc = float(center @ center)
        d2 = sq - 2.0 * (pts @ center) + cc
        far = int(np.argmax(d2))
        support = np.flatnonzero(lam > 1e-14)
        near = support[int(np.argmin(d2[support]))]
        fw_gain = d2[far] + cc - s1
        aw_gain = s1 - cc - d2[near]
        if fw_gain >= aw_gain:
            j, away = far, False
            gmax = 1.0
        else:
            j, away = int(near), True
            gmax = lam[j] / (1.0 - lam[j]) if lam[j] < 1.0 else np.inf
        d = pts[j] - center
        denom = 2.0 * float(d @ d)
        if denom < 1e-30:
            break
        num = float(sq[j] - s1 - 2.0 * (d @ center))
        gamma = (-num if away else num) / denom
        gamma = min(max(gamma, 0.0), gmax)
        if gamma <= 0.0:
            break
        if away:
            lam *= 1.0 + gamma
            lam[j] -= gamma
            s1 = (1.0 + gamma) * s1 - gamma * sq[j]
            move = -gamma * d
        else:
            lam *= 1.0 - gamma
            lam[j] += gamma
            s1 = (1.0 - gamma) * s1 + gamma * sq[j]
            move = gamma * d
        center = center + move
        if float(np.linalg.norm(move)) < movement_tol:
            break
    radius = float(np.sqrt(np.max(np.sum((pts - center) ** 2, axis=1))))
    return center, radius, it


def lex_argsort(values, keys):
    """Stable argsort by -values with lexicographic key tie-break."""
    order = sorted(range(len(values)), key=lambda i: (-values[i], tuple(keys[i])))
    return order
