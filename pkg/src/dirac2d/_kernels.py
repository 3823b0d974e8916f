"""Hot inner loops for the oscillatory-average quadrature.

The Cesaro machinery needs all power moments  m_nu = mean_j w_j z_j^nu  for
nu = 1..n_max over large sample grids.  The numba kernel keeps the running
power of each point in a register and accumulates into per-chunk rows, which
is an order of magnitude faster than repeated whole-array passes; the numpy
fallback implements the identical recurrence.
"""

from __future__ import annotations

import warnings

import numpy as np

try:
    import numba

    # The sandboxed TBB runtime can be too old for numba's TBB layer; the
    # fallback layer is selected automatically, so the probe warning is noise.
    warnings.filterwarnings("ignore", message=".*TBB.*", category=numba.NumbaWarning)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the explicit fallback test
    HAVE_NUMBA = False

_N_CHUNKS = 64


def _power_moments_numpy(w: np.ndarray, z: np.ndarray, n_max: int) -> np.ndarray:
    p = w.astype(np.complex128).copy()
    out = np.empty(n_max, dtype=np.complex128)
    for nu in range(n_max):
        p *= z
        out[nu] = p.mean()
    return out


if HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _power_moments_numba(w, z, n_max, nchunks):  # pragma: no cover - compiled
        npts = w.size
        partial = np.zeros((nchunks, n_max), dtype=np.complex128)
        for c in numba.prange(nchunks):
            start = c * npts // nchunks
            stop = (c + 1) * npts // nchunks
            for j in range(start, stop):
                p = w[j]
                zz = z[j]
                for nu in range(n_max):
                    p *= zz
                    partial[c, nu] += p
        return partial.sum(axis=0) / npts


def power_moments(w: np.ndarray, z: np.ndarray, n_max: int,
                  force_numpy: bool = False) -> np.ndarray:
    """mean(w * z**nu) for nu = 1..n_max, evaluated by a running product."""
    if HAVE_NUMBA and not force_numpy:
        return _power_moments_numba(
            np.ascontiguousarray(w, dtype=np.complex128).ravel(),
            np.ascontiguousarray(z, dtype=np.complex128).ravel(),
            int(n_max), _N_CHUNKS,
        )
    return _power_moments_numpy(np.asarray(w).ravel(), np.asarray(z).ravel(), int(n_max))
