"""Numpy implementation of the banded walk step (fallback for ``_kernels``)."""

import numpy as np


def walk_evolve(amps, psi, steps):
    """Apply the window walk ``steps`` times.

    ``amps`` is the ``(n_sites, 4)`` array of per-site ``(A, B, C, D)`` and
    ``psi`` the ``(n_sites, 2)`` initial amplitudes.  Returns the final
    amplitudes and the ``(steps + 1, n_sites)`` site probabilities along the
    way.  Hops that would leave the window are dropped.
    """
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    psi = np.array(psi, dtype=np.complex128, copy=True)
    n = psi.shape[0]
    probs = np.zeros((steps + 1, n))
    nz = np.flatnonzero(np.any(psi != 0, axis=1))
    if nz.size == 0:
        return psi, probs
    # only the light cone of the initial support is touched
    lo, hi = int(nz[0]), int(nz[-1]) + 1
    probs[0] = np.sum(np.abs(psi) ** 2, axis=1)
    A, B, C, D = amps.T
    for t in range(1, steps + 1):
        new = np.zeros_like(psi)
        s0, s1 = max(lo, 1), min(hi, n - 1)
        new[s0 - 1:hi - 1, 0] = A[s0:hi] * psi[s0:hi, 0] + B[s0:hi] * psi[s0:hi, 1]
        new[lo + 1:s1 + 1, 1] = C[lo:s1] * psi[lo:s1, 0] + D[lo:s1] * psi[lo:s1, 1]
        psi = new
        lo, hi = max(lo - 1, 0), min(hi + 1, n)
        probs[t, lo:hi] = np.sum(np.abs(psi[lo:hi]) ** 2, axis=1)
    return psi, probs
