"""Pure-numpy fallback for the Cayley-Dickson product kernel."""

import numpy as np


def mul_batch(a, b, mu, sg, out):
    """out[n] += a[n] * b[n] entrywise in the algebra; ``out`` must be zeroed."""
    d = a.shape[1]
    for i in range(d):
        ai = a[:, i]
        for j in range(d):
            out[:, mu[i, j]] += sg[i, j] * ai * b[:, j]
    return out
