"""Similarity embedding, circumradius, and the magnitude-circumradius link.

A positive definite space embeds as the vertex set of a simplex in
(n-1)-dimensional space with squared edge lengths 1 - exp(-d(i,j)). The
circumradius R of that simplex determines the magnitude through
|X| = 1 / (1 - 2 R^2), and the same relation restricted to arbitrary
subsets of the embedded points characterizes the embedding.

Embeddings are only defined up to rigid transformation, so comparisons
should go through Gram or distance matrices, never raw coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from .errors import DegenerateSimplex, NotPositiveDefinite
from .magnitude import (
    Definiteness,
    classify_definiteness,
    similarity_matrix,
    weighting,
)
from .metric import MetricSpace, restrict
from . import magnitude as _magnitude_mod

# Affine dependence threshold on singular values of the edge-vector matrix,
# relative to the largest singular value.
DEGENERATE_SV_SCALE = 1e-12


@dataclass(frozen=True)
class EmbeddingData:
    """The similarity embedding of a positive definite space.

    gram: the centered similarity matrix (Gram matrix about the centroid).
    factor: (n-1) x n square root with factor.T @ factor == gram.
    points: n rows, point i is the i-th column of factor.
    circumradius / circumcenter_bary: radius and barycentric coordinate of
    the circumscribing sphere; the barycentric coordinate sums to one.
    spectrum: eigenvalues of gram in descending order, centering kernel
    eigenvalue dropped.
    """

    gram: np.ndarray
    factor: np.ndarray
    points: np.ndarray
    circumradius: float
    circumcenter_bary: np.ndarray
    spectrum: np.ndarray


def centered_similarity(z: np.ndarray) -> np.ndarray:
    """Conjugate the similarity matrix by the centering projection, halved.

    Rows and columns of the result sum to zero; the all-ones vector is
    always in the kernel.
    """
    n = z.shape[0]
    row = z.mean(axis=1)
    total = row.mean()
    k = 0.5 * (z - row[:, None] - row[None, :] + total)
    return 0.5 * (k + k.T)


def _require_pd(z: np.ndarray, eigenvalues: np.ndarray | None = None) -> None:
    if classify_definiteness(z, eigenvalues) is not Definiteness.POSITIVE_DEFINITE:
        raise NotPositiveDefinite(
            "operation requires a positive definite similarity matrix"
        )


def circumradius_equilibrium(z: np.ndarray) -> tuple[float, np.ndarray]:
    """Circumradius and barycentric circumcenter from the equilibrium solve.

    The circumcenter's barycentric coordinate p solves Z p proportional to
    the all-ones vector with coordinates summing to one; p equals the
    weighting normalized by the magnitude, and 1 - 2 R^2 is the inverse
    magnitude.
    """
    _require_pd(z)
    w = weighting(z)
    total = float(w.sum())
    p = w / total
    r_squared = max(0.0, 0.5 * (1.0 - 1.0 / total))
    return float(np.sqrt(r_squared)), p


def circumradius_geometric(points: np.ndarray) -> tuple[float, np.ndarray]:
    """Circumradius and circumcenter of affinely independent points.

    Solves the equidistance system within the affine hull, so the ambient
    dimension may exceed the simplex dimension (restricted subsets of an
    embedding stay in the big space). Raises DegenerateSimplex when the
    edge-vector matrix is numerically rank deficient.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    m = pts.shape[0]
    if m == 1:
        return 0.0, pts[0].copy()
    edges = pts[1:] - pts[0]
    sv = np.linalg.svd(edges, compute_uv=False)
    if sv[-1] <= DEGENERATE_SV_SCALE * sv[0]:
        raise DegenerateSimplex(
            f"edge vectors are affinely dependent (sv ratio {sv[-1] / sv[0]:.2e})"
        )
    gram = edges @ edges.T
    rhs = 0.5 * np.diag(gram)
    coeffs = np.linalg.solve(gram, rhs)
    center = pts[0] + edges.T @ coeffs
    return float(np.linalg.norm(center - pts[0])), center


def similarity_embedding(space: MetricSpace) -> EmbeddingData:
    """Embed a positive definite space as simplex vertices.

    The square-root factor comes from the eigendecomposition of the
    centered similarity matrix with the centering kernel direction dropped,
    which is stable near singularity and fixes one representative of the
    rigid-transformation class.
    """
    z = similarity_matrix(space)
    eigenvalues = np.linalg.eigvalsh(z)
    _require_pd(z, eigenvalues)
    k = centered_similarity(z)
    mu, vecs = np.linalg.eigh(k)
    kernel = int(np.argmin(np.abs(mu)))
    keep = [i for i in range(len(mu)) if i != kernel]
    keep.sort(key=lambda i: -mu[i])
    spectrum = mu[keep]
    factor = np.sqrt(np.clip(spectrum, 0.0, None))[:, None] * vecs[:, keep].T
    radius, bary = circumradius_equilibrium(z)
    return EmbeddingData(
        gram=k,
        factor=factor,
        points=factor.T.copy(),
        circumradius=radius,
        circumcenter_bary=bary,
        spectrum=spectrum,
    )


def magnitude_via_circumradius(space: MetricSpace) -> float:
    """Magnitude computed as 1 / (1 - 2 R^2) from the equilibrium solve."""
    radius, _ = circumradius_equilibrium(similarity_matrix(space))
    return 1.0 / (1.0 - 2.0 * radius * radius)


@dataclass(frozen=True)
class SubspaceCharacterizationReport:
    """Result of checking |Y| = 1/(1-2R^2) over subsets of the embedding."""

    n_checked: int
    exhaustive: bool
    max_deviation: float
    worst_subset: tuple[int, ...]
    seed: int


def verify_subspace_characterization(
    space: MetricSpace, max_subsets: int = 4096, seed: int = 0
) -> SubspaceCharacterizationReport:
    """Cross-check subset magnitudes against restricted-embedding circumradii.

    For each nonempty subset Y (all of them when 2^n is within max_subsets,
    otherwise a uniform fixed-seed sample), computes the circumradius of the
    restricted embedded points, converts it to a magnitude, and compares
    against the dense linear solve on the restricted space. The embedding is
    computed once for the full space; subsets reuse its points.
    """
    emb = similarity_embedding(space)
    n = space.n
    total = (1 << n) - 1
    if total <= max_subsets:
        masks = range(1, total + 1)
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        masks = sorted(set(rng.integers(1, total + 1, size=max_subsets).tolist()))
        exhaustive = False

    def deviation(mask: int) -> float:
        idx = [i for i in range(n) if mask >> i & 1]
        radius, _ = circumradius_geometric(emb.points[idx])
        via_radius = 1.0 / (1.0 - 2.0 * radius * radius)
        direct = _magnitude_mod.magnitude(restrict(space, idx))
        return abs(via_radius - direct)

    devs = ordered_map(deviation, masks)
    worst_pos = int(np.argmax(devs))
    worst_mask = list(masks)[worst_pos]
    return SubspaceCharacterizationReport(
        n_checked=len(devs),
        exhaustive=exhaustive,
        max_deviation=float(devs[worst_pos]),
        worst_subset=tuple(i for i in range(n) if worst_mask >> i & 1),
        seed=seed,
    )


def embedding_to_dict(emb: EmbeddingData) -> dict:
    """Plot-ready export: points, circumradius, barycentric circumcenter."""
    return {
        "points": emb.points,
        "circumradius": emb.circumradius,
        "circumcenter_barycentric": emb.circumcenter_bary,
    }
