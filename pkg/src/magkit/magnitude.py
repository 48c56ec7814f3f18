"""Similarity matrices, weightings, magnitude, definiteness classification.

The similarity matrix has entries exp(-d(i,j)). A weighting is any solution
w of Z w = 1 (all-ones); the magnitude is sum(w). For a positive definite
similarity matrix the weighting is unique and the magnitude equals the sum
of all entries of the inverse of Z. Nonexistence of a weighting is a value,
not an exception: solve routines return None.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import SingularZ
from .metric import MetricSpace

# Residual bound below which a candidate solution of Z w = 1 is accepted.
RESIDUAL_TOL = 1e-9

# Relative eigenvalue cutoff for definiteness classification; scale-aware
# so well-conditioned large-n spaces are not misclassified.
_PD_CUTOFF_SCALE = 1e-10


def set_pd_cutoff_scale(scale: float) -> float:
    """Override the relative eigenvalue cutoff (returns the previous value)."""
    global _PD_CUTOFF_SCALE
    previous = _PD_CUTOFF_SCALE
    _PD_CUTOFF_SCALE = float(scale)
    return previous


def eigenvalue_cutoff(eigenvalues: np.ndarray) -> float:
    """Threshold under which an eigenvalue counts as zero."""
    top = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return _PD_CUTOFF_SCALE * max(1.0, top)


class Definiteness(Enum):
    POSITIVE_DEFINITE = "positive_definite"
    INVERTIBLE_INDEFINITE = "invertible_indefinite"
    SINGULAR = "singular"


@dataclass(frozen=True)
class SimilarityData:
    """Similarity matrix bundle: eigenvalues, weighting, magnitude, class.

    ``weighting`` and ``magnitude`` are None when no weighting exists.
    Eigenvalues are sorted in descending order.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    definiteness: Definiteness
    weighting: np.ndarray | None
    magnitude: float | None


def similarity_matrix(space: MetricSpace) -> np.ndarray:
    """Entrywise exp(-distance); symmetric with unit diagonal."""
    z = np.exp(-space.dist)
    np.fill_diagonal(z, 1.0)
    return z


def classify_definiteness(
    z: np.ndarray, eigenvalues: np.ndarray | None = None
) -> Definiteness:
    """Classify a symmetric matrix by its spectrum.

    Positive definite when the smallest eigenvalue clears the scale-aware
    cutoff, singular when any eigenvalue sits within the cutoff of zero,
    invertible indefinite otherwise.
    """
    if eigenvalues is None:
        eigenvalues = np.linalg.eigvalsh(z)
    cutoff = eigenvalue_cutoff(eigenvalues)
    if eigenvalues.min() > cutoff:
        return Definiteness.POSITIVE_DEFINITE
    if np.min(np.abs(eigenvalues)) <= cutoff:
        return Definiteness.SINGULAR
    return Definiteness.INVERTIBLE_INDEFINITE


def _solve_cholesky(z: np.ndarray) -> np.ndarray:
    factor = scipy.linalg.cho_factor(z, lower=True, check_finite=False)
    return scipy.linalg.cho_solve(factor, np.ones(z.shape[0]), check_finite=False)


def _solve_eigen(z: np.ndarray, drop_small: bool) -> np.ndarray:
    vals, vecs = np.linalg.eigh(z)
    inv = np.zeros_like(vals)
    if drop_small:
        keep = np.abs(vals) > eigenvalue_cutoff(vals)
    else:
        keep = np.ones_like(vals, dtype=bool)
    inv[keep] = 1.0 / vals[keep]
    coeffs = vecs.T @ np.ones(z.shape[0])
    return vecs @ (inv * coeffs)


def weighting(z: np.ndarray) -> np.ndarray | None:
    """Solve Z w = 1.

    Cholesky for the positive definite case, an eigendecomposition solve for
    invertible indefinite matrices, and a minimum-norm solve for singular
    ones. Returns None when the singular system is inconsistent (no
    weighting exists).
    """
    eigenvalues = np.linalg.eigvalsh(z)
    kind = classify_definiteness(z, eigenvalues)
    if kind is Definiteness.POSITIVE_DEFINITE:
        try:
            return _solve_cholesky(z)
        except np.linalg.LinAlgError:
            return _solve_eigen(z, drop_small=False)
    if kind is Definiteness.INVERTIBLE_INDEFINITE:
        return _solve_eigen(z, drop_small=False)
    w = _solve_eigen(z, drop_small=True)
    residual = np.max(np.abs(z @ w - 1.0))
    if residual > RESIDUAL_TOL:
        return None
    return w


def magnitude(space: MetricSpace) -> float | None:
    """Sum of a weighting, or None when no weighting exists.

    For positive definite spaces this equals the total of the inverse
    similarity matrix and exceeds 1 whenever the space has two or more
    points.
    """
    w = weighting(similarity_matrix(space))
    if w is None:
        return None
    return float(w.sum())


def similarity_data(space: MetricSpace) -> SimilarityData:
    """Compute the full similarity bundle for a space in one pass."""
    z = similarity_matrix(space)
    eigenvalues = np.linalg.eigvalsh(z)
    kind = classify_definiteness(z, eigenvalues)
    w = weighting(z)
    mag = float(w.sum()) if w is not None else None
    return SimilarityData(
        matrix=z,
        eigenvalues=eigenvalues[::-1].copy(),
        definiteness=kind,
        weighting=w,
        magnitude=mag,
    )


def require_invertible(data: SimilarityData) -> None:
    """Raise SingularZ unless the similarity matrix is invertible."""
    if data.definiteness is Definiteness.SINGULAR:
        raise SingularZ("similarity matrix is singular within tolerance")
