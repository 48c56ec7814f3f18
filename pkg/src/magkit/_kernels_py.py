"""Pure numpy implementations of the deletion-update kernels.

Reference fallback for the compiled module. Semantics of the state triple:
``kdag`` is the pseudoinverse centered similarity matrix of the current
subset, ``p`` the normalized weighting w/|Y|, ``inv_mag`` the inverse
magnitude 1/|Y|. Removing point x is a rank-1 pivot on kdag plus a vector
and scalar correction; the divisor is the diagonal entry kdag[x, x].
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def delete_index(kdag, p, inv_mag, k):
    """Remove local index k from the state triple; returns the new triple."""
    cbar = kdag[k, k]
    px = p[k]
    keep = np.arange(kdag.shape[0]) != k
    col = kdag[keep, k]
    kdag2 = kdag[np.ix_(keep, keep)] - np.outer(col, col) / cbar
    p2 = p[keep] - col * (px / cbar)
    inv2 = inv_mag + 2.0 * px * px / cbar
    return kdag2, p2, inv2


def subset_inverse_magnitudes(kdag, p, inv_mag):
    """Inverse magnitude of every nonempty subset, indexed by bitmask.

    Walks the subset lattice depth-first, one rank-1 pivot per subset, so
    the whole table costs O(2^n n^2). Entry 0 (the empty set) is NaN.
    """
    n = kdag.shape[0]
    out = np.full(1 << n, np.nan)
    ids = np.arange(n)
    _dfs(np.array(kdag, dtype=np.float64), np.array(p, dtype=np.float64),
         float(inv_mag), ids, 0, (1 << n) - 1, out)
    return out


def _dfs(kdag, p, inv_mag, ids, start, mask, out):
    out[mask] = inv_mag
    m = len(ids)
    if m == 1:
        return
    for k in range(start, m):
        kdag2, p2, inv2 = delete_index(kdag, p, inv_mag, k)
        _dfs(kdag2, p2, inv2, np.delete(ids, k), k,
             mask & ~(1 << int(ids[k])), out)
