# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled deletion-update kernels.

Same contract as _kernels_py: rank-1 pivots on the pseudoinverse centered
similarity matrix together with the normalized weighting and the inverse
magnitude. The subset-lattice walk keeps one scratch level per recursion
depth, so no allocation happens inside the hot loops.
"""

import numpy as np


BACKEND = "cython"


def delete_index(double[:, ::1] kdag, double[::1] p, double inv_mag, Py_ssize_t k):
    """Remove local index k from the state triple; returns the new triple."""
    cdef Py_ssize_t m = kdag.shape[0]
    cdef double cbar = kdag[k, k]
    cdef double px = p[k]
    out_k = np.empty((m - 1, m - 1), dtype=np.float64)
    out_p = np.empty(m - 1, dtype=np.float64)
    cdef double[:, ::1] ok = out_k
    cdef double[::1] op = out_p
    cdef Py_ssize_t i, j, ii, jj
    cdef double fik
    ii = 0
    for i in range(m):
        if i == k:
            continue
        fik = kdag[i, k] / cbar
        op[ii] = p[i] - fik * px
        jj = 0
        for j in range(m):
            if j == k:
                continue
            ok[ii, jj] = kdag[i, j] - fik * kdag[j, k]
            jj += 1
        ii += 1
    return out_k, out_p, inv_mag + 2.0 * px * px / cbar


def subset_inverse_magnitudes(kdag, p, inv_mag):
    """Inverse magnitude of every nonempty subset, indexed by bitmask."""
    cdef Py_ssize_t n = kdag.shape[0]
    out = np.full(1 << n, np.nan)
    kd = np.zeros((n + 1, n, n), dtype=np.float64)
    pv = np.zeros((n + 1, n), dtype=np.float64)
    ids = np.zeros((n + 1, n), dtype=np.int64)
    kd[0, :, :] = kdag
    pv[0, :] = p
    ids[0, :] = np.arange(n, dtype=np.int64)
    cdef double[:, :, ::1] kd_v = kd
    cdef double[:, ::1] pv_v = pv
    cdef long long[:, ::1] ids_v = ids
    cdef double[::1] out_v = out
    _dfs(0, n, 0, (1 << n) - 1, float(inv_mag), kd_v, pv_v, ids_v, out_v)
    return out


cdef void _dfs(Py_ssize_t level, Py_ssize_t m, Py_ssize_t start,
               unsigned long long mask, double inv_mag,
               double[:, :, ::1] kd, double[:, ::1] pv,
               long long[:, ::1] ids, double[::1] out) noexcept:
    out[mask] = inv_mag
    if m == 1:
        return
    cdef Py_ssize_t k, i, j, ii, jj
    cdef double cbar, px, fik, inv_child
    for k in range(start, m):
        cbar = kd[level, k, k]
        px = pv[level, k]
        inv_child = inv_mag + 2.0 * px * px / cbar
        ii = 0
        for i in range(m):
            if i == k:
                continue
            fik = kd[level, i, k] / cbar
            ids[level + 1, ii] = ids[level, i]
            pv[level + 1, ii] = pv[level, i] - fik * px
            jj = 0
            for j in range(m):
                if j == k:
                    continue
                kd[level + 1, ii, jj] = kd[level, i, j] - fik * kd[level, j, k]
                jj += 1
            ii += 1
        _dfs(level + 1, m - 1, k,
             mask & ~(1ULL << <unsigned long long>ids[level, k]),
             inv_child, kd, pv, ids, out)
