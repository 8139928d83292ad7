# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled banded walk step; same contract as ``_kernels_py.walk_evolve``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def walk_evolve(amps, psi, Py_ssize_t steps):
    cdef double complex[:, ::1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef double complex[:, ::1] cur = np.array(psi, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = cur.shape[0]
    cdef double complex[:, ::1] nxt = np.zeros((n, 2), dtype=np.complex128)
    out = np.zeros((steps + 1, n), dtype=np.float64)
    cdef double[:, ::1] probs = out
    cdef Py_ssize_t t, k, lo, hi
    cdef double complex x, y
    cdef double complex[:, ::1] tmp

    # support of the state; it grows by at most one site per step
    nz = np.flatnonzero(np.any(np.asarray(cur) != 0, axis=1))
    if nz.size == 0:
        return np.asarray(cur), out
    lo, hi = nz[0], nz[-1]
    for k in range(lo, hi + 1):
        probs[0, k] = _abs2(cur[k, 0]) + _abs2(cur[k, 1])
    with nogil:
        for t in range(1, steps + 1):
            for k in range(max(lo - 1, 0), min(hi + 2, n)):
                nxt[k, 0] = 0
                nxt[k, 1] = 0
            for k in range(lo, hi + 1):
                x = cur[k, 0]
                y = cur[k, 1]
                if k > 0:
                    nxt[k - 1, 0] = a[k, 0] * x + a[k, 1] * y
                if k < n - 1:
                    nxt[k + 1, 1] = a[k, 2] * x + a[k, 3] * y
            tmp = cur
            cur = nxt
            nxt = tmp
            lo = max(lo - 1, 0)
            hi = min(hi + 1, n - 1)
            for k in range(lo, hi + 1):
                probs[t, k] = _abs2(cur[k, 0]) + _abs2(cur[k, 1])
    return np.asarray(cur), out
