"""Schur complements and incremental subspace magnitude formulas.

The performance core of the package. Deleting one point from a space with
known pseudoinverse centered similarity matrix, normalized weighting, and
inverse magnitude is a rank-1 pivot costing O(n^2), against O(n^3) for a
restart from the distance matrix. General subsets go through a block Schur
complement on the pivot, and the table of all 2^n subset magnitudes walks
the subset lattice with one pivot per subset. Every incremental path has a
recompute-from-scratch twin used as its oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .errors import (
    ConditioningWarning,
    EmptySubset,
    IndexOutOfRange,
    InputError,
    LastPoint,
    NotPositiveDefinite,
    SingularPivotBlock,
    TooManyPoints,
)
from .identities import CoefficientData, coefficient_data, pseudoinverse_centered
from .embedding import centered_similarity
from .magnitude import (
    Definiteness,
    SimilarityData,
    eigenvalue_cutoff,
    similarity_data,
    similarity_matrix,
    weighting,
)
from .metric import MetricSpace, as_indices, restrict

# Relative disagreement between incremental and recomputed magnitudes that
# triggers a ConditioningWarning.
CHECK_REL_TOL = 1e-6

# Subset-table enumeration cap (2^n entries).
TABLE_MAX_POINTS = 20


@dataclass(frozen=True)
class SubspaceResult:
    """Magnitude, weighting and coefficient block of one subspace."""

    subset: tuple[int, ...]
    magnitude: float
    weighting: np.ndarray
    pinv: np.ndarray
    derivation: str  # "incremental" or "recomputed"


@dataclass(frozen=True)
class SchurComplementQuery:
    """A matrix partitioned by a pivot subset whose block gets eliminated."""

    base: np.ndarray
    pivot: tuple[int, ...]


def schur_complement(matrix: np.ndarray, pivot) -> np.ndarray:
    """Eliminate the pivot block: M_YY - M_Yp (M_pp)^{-1} M_pY.

    Y is the complement of the pivot, kept in its original order. Raises
    SingularPivotBlock when the pivot block is singular within the
    scale-aware cutoff. Composing single-point pivots in any order equals
    the one-shot block form.
    """
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    piv = as_indices(pivot, n)
    keep = np.setdiff1d(np.arange(n), piv)
    if keep.size == 0:
        raise EmptySubset("pivot covers the whole matrix; nothing remains")
    block = m[np.ix_(piv, piv)]
    sv = np.linalg.svd(block, compute_uv=False)
    if sv[-1] <= eigenvalue_cutoff(sv):
        raise SingularPivotBlock(
            f"pivot block singular within tolerance (smallest sv {sv[-1]:.3e})"
        )
    solved = np.linalg.solve(block, m[np.ix_(piv, keep)])
    return m[np.ix_(keep, keep)] - m[np.ix_(keep, piv)] @ solved


def _require_pd(data: SimilarityData) -> None:
    if data.definiteness is not Definiteness.POSITIVE_DEFINITE:
        raise NotPositiveDefinite("subspace formulas require a positive definite space")


def recompute_subspace(space: MetricSpace, subset) -> SubspaceResult:
    """Oracle path: restrict the space and recompute everything from scratch."""
    idx = as_indices(subset, space.n)
    sub = restrict(space, idx)
    z = similarity_matrix(sub)
    w = weighting(z)
    pinv = pseudoinverse_centered(centered_similarity(z))
    return SubspaceResult(
        subset=tuple(int(i) for i in idx),
        magnitude=float(w.sum()),
        weighting=w,
        pinv=pinv,
        derivation="recomputed",
    )


def subspace_magnitude_weighting(
    space: MetricSpace, subset, *, check: bool = True
) -> SubspaceResult:
    """Subset magnitude and weighting through the block pivot on the
    pseudoinverse centered similarity matrix.

    With ``check`` enabled (the default for this one-shot operation) the
    result is compared against the recomputation oracle and a
    ConditioningWarning reports both values when they disagree beyond
    CHECK_REL_TOL relative; the incremental values are returned either way.
    Pass ``check=False`` for pure incremental timing or oracle-free runs.
    """
    data = similarity_data(space)
    _require_pd(data)
    n = space.n
    idx = as_indices(subset, n)
    w_frac = data.weighting / data.magnitude
    inv_mag = 1.0 / data.magnitude
    if idx.size == n:
        coeffs = coefficient_data(space)
        return SubspaceResult(
            subset=tuple(int(i) for i in idx),
            magnitude=float(data.magnitude),
            weighting=data.weighting.copy(),
            pinv=coeffs.pinv,
            derivation="incremental",
        )

    pivot = np.setdiff1d(np.arange(n), idx)
    pinv_full = coefficient_data(space).pinv
    block = pinv_full[np.ix_(pivot, pivot)]
    sv = np.linalg.svd(block, compute_uv=False)
    if sv[-1] <= eigenvalue_cutoff(sv):
        raise SingularPivotBlock(
            f"coefficient pivot block singular within tolerance ({sv[-1]:.3e})"
        )
    rhs = np.column_stack([w_frac[pivot], pinv_full[np.ix_(pivot, idx)]])
    try:
        factor = scipy.linalg.cho_factor(block, lower=True, check_finite=False)
        solved = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    except np.linalg.LinAlgError:
        solved = np.linalg.solve(block, rhs)
    solved_w = solved[:, 0]
    solved_pinv = solved[:, 1:]

    inv_sub = inv_mag + 2.0 * float(w_frac[pivot] @ solved_w)
    w_frac_sub = w_frac[idx] - pinv_full[np.ix_(idx, pivot)] @ solved_w
    pinv_sub = pinv_full[np.ix_(idx, idx)] - pinv_full[np.ix_(idx, pivot)] @ solved_pinv
    magnitude_sub = 1.0 / inv_sub
    result = SubspaceResult(
        subset=tuple(int(i) for i in idx),
        magnitude=float(magnitude_sub),
        weighting=w_frac_sub * magnitude_sub,
        pinv=pinv_sub,
        derivation="incremental",
    )
    if check:
        oracle = recompute_subspace(space, idx)
        rel = abs(result.magnitude - oracle.magnitude) / max(1.0, abs(oracle.magnitude))
        if rel > CHECK_REL_TOL:
            warnings.warn(
                f"incremental subset magnitude {result.magnitude!r} vs "
                f"recomputed {oracle.magnitude!r} (relative {rel:.3e}); "
                "near-singular pivot suspected",
                ConditioningWarning,
                stacklevel=2,
            )
    return result


def _pivot_guard(pinv: np.ndarray, local: int, scale: float) -> None:
    cbar = pinv[local, local]
    if cbar <= 1e-10 * max(1.0, scale):
        raise SingularPivotBlock(
            f"coefficient total {cbar!r} at the deleted point is not safely positive"
        )


def delete_point(
    data: SimilarityData, coeffs: CoefficientData, x: int
) -> SubspaceResult:
    """One-point deletion as a rank-1 update of the full-space data.

    Takes the precomputed similarity bundle and coefficient block of the
    full space; the update itself is O(n^2).
    """
    _require_pd(data)
    if coeffs.n <= 1:
        raise LastPoint("cannot delete the only point")
    local = coeffs.local(x)
    _pivot_guard(coeffs.pinv, local, float(np.max(np.abs(data.eigenvalues))))
    p = data.weighting / data.magnitude
    pinv2, p2, inv2 = kernels.delete_index(
        np.ascontiguousarray(coeffs.pinv), np.ascontiguousarray(p),
        1.0 / data.magnitude, local,
    )
    remaining = tuple(i for i in coeffs.indices if i != int(x))
    mag2 = 1.0 / inv2
    return SubspaceResult(
        subset=remaining,
        magnitude=float(mag2),
        weighting=np.asarray(p2) * mag2,
        pinv=np.asarray(pinv2),
        derivation="incremental",
    )


def delete_point_coefficients(coeffs: CoefficientData, x: int) -> CoefficientData:
    """Rank-1 update of the coefficient block after deleting one point.

    Equals the pseudoinverse centered similarity matrix of the restricted
    space. The gamma vector is not reconstructible from coefficients alone,
    so the result carries None there.
    """
    if coeffs.n <= 1:
        raise LastPoint("cannot delete the only point")
    local = coeffs.local(x)
    _pivot_guard(coeffs.pinv, local, float(np.max(np.diag(coeffs.pinv))))
    col = np.delete(coeffs.pinv[:, local], local)
    reduced = np.delete(np.delete(coeffs.pinv, local, axis=0), local, axis=1)
    pinv2 = reduced - np.outer(col, col) / coeffs.pinv[local, local]
    return CoefficientData(
        pinv=pinv2,
        gamma=None,
        indices=tuple(i for i in coeffs.indices if i != int(x)),
    )


def delete_chain(space: MetricSpace, order) -> list[SubspaceResult]:
    """Apply a sequence of single-point deletions, one O(m^2) pivot each.

    ``order`` lists global point ids in deletion order; at least one point
    must remain at the end.
    """
    order = [int(x) for x in order]
    if len(set(order)) != len(order):
        raise InputError("deletion order repeats a point")
    n = space.n
    for x in order:
        if x < 0 or x >= n:
            raise IndexOutOfRange(f"point {x} outside 0..{n - 1}")
    if len(order) >= n:
        raise LastPoint("deletion chain would remove every point")
    data = similarity_data(space)
    _require_pd(data)
    coeffs = coefficient_data(space)
    scale = float(np.max(np.abs(data.eigenvalues)))
    pinv = np.ascontiguousarray(coeffs.pinv)
    p = np.ascontiguousarray(data.weighting / data.magnitude)
    inv_mag = 1.0 / data.magnitude
    indices = list(coeffs.indices)
    results: list[SubspaceResult] = []
    for x in order:
        local = indices.index(x)
        _pivot_guard(pinv, local, scale)
        pinv, p, inv_mag = kernels.delete_index(pinv, p, inv_mag, local)
        pinv = np.ascontiguousarray(pinv)
        p = np.ascontiguousarray(p)
        indices.pop(local)
        mag = 1.0 / inv_mag
        results.append(
            SubspaceResult(
                subset=tuple(indices),
                magnitude=float(mag),
                weighting=np.asarray(p) * mag,
                pinv=np.asarray(pinv).copy(),
                derivation="incremental",
            )
        )
    return results


def subset_magnitude_table(
    space: MetricSpace, method: str = "incremental"
) -> np.ndarray:
    """Magnitude of every nonempty subset, indexed by bitmask over points.

    ``method="incremental"`` walks the subset lattice with rank-1 pivots
    (O(2^n n^2) total); ``method="recompute"`` solves each subset from its
    restricted similarity matrix (O(2^n n^3)), serving as the oracle. Entry
    0 (the empty set) is NaN; set functions decide their own value there.
    """
    n = space.n
    if n > TABLE_MAX_POINTS:
        raise TooManyPoints(f"{n} points means 2^{n} subsets; cap is {TABLE_MAX_POINTS}")
    data = similarity_data(space)
    _require_pd(data)
    if method == "incremental":
        coeffs = coefficient_data(space)
        inv = kernels.subset_inverse_magnitudes(
            np.ascontiguousarray(coeffs.pinv),
            np.ascontiguousarray(data.weighting / data.magnitude),
            1.0 / data.magnitude,
        )
        return 1.0 / inv
    if method == "recompute":
        z = data.matrix
        out = np.full(1 << n, np.nan)
        for mask in range(1, 1 << n):
            idx = [i for i in range(n) if mask >> i & 1]
            if len(idx) == 1:
                out[mask] = 1.0
                continue
            sub = z[np.ix_(idx, idx)]
            out[mask] = float(weighting(sub).sum())
        return out
    raise ValueError(f"unknown method {method!r}")
