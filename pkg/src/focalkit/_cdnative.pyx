# Compiled Cayley-Dickson product kernel.  Same contract as _cdpure.mul_batch;
# the table arrays (mu, sg) come from _cdtables at call time so a single
# kernel serves all four algebras.

def mul_batch(const double[:, ::1] a, const double[:, ::1] b,
              const long long[:, ::1] mu, const double[:, ::1] sg,
              double[:, ::1] out):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t d = a.shape[1]
    cdef Py_ssize_t t, i, j
    cdef double ai
    for t in range(n):
        for i in range(d):
            ai = a[t, i]
            if ai == 0.0:
                continue
            for j in range(d):
                out[t, mu[i, j]] += sg[i, j] * ai * b[t, j]
    return out
