"""Finite metric spaces: validation, rescaling, restriction, ingestion.

Every other module consumes the :class:`MetricSpace` produced here, so all
metric invariants (symmetry, zero diagonal, positive off-diagonal entries,
triangle inequality up to tolerance) are enforced at construction time and
never rechecked downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
import numpy as np

from .errors import (
    AsymmetricInput,
    DimensionMismatch,
    DuplicatePoint,
    EmptySubset,
    IndexOutOfRange,
    InputError,
    NegativeDistance,
    NonFiniteInput,
    NonpositiveScale,
    NonzeroDiagonal,
    TriangleViolation,
    ZeroOffDiagonal,
)

# Additive triangle-inequality slack, relative to the largest distance.
# Point-cloud ingestion must not fail on floating rounding.
TRIANGLE_TOL_SCALE = 1e-9


@dataclass(frozen=True)
class MetricSpace:
    """A validated finite metric space on points 0..n-1.

    ``dist`` is a symmetric float64 matrix with zero diagonal and strictly
    positive off-diagonal entries; distances are dimensionless. Instances
    are immutable (the array's writeable flag is cleared) and safe to share
    across threads. Use :func:`from_distance_matrix` or
    :func:`from_points_euclidean` to construct with full validation.
    """

    dist: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.float64)
        d = np.ascontiguousarray(d)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n

    def scale(self, t: float) -> "MetricSpace":
        return scale(self, t)

    def restrict(self, subset) -> "MetricSpace":
        return restrict(self, subset)


@dataclass(frozen=True)
class SubsetSelector:
    """A sorted, duplicate-free selection of point indices."""

    members: tuple[int, ...]

    def __post_init__(self):
        normalized = tuple(sorted({int(i) for i in self.members}))
        object.__setattr__(self, "members", normalized)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def as_indices(subset, n: int) -> np.ndarray:
    """Normalize a SubsetSelector or iterable of indices against a space of n points."""
    if isinstance(subset, SubsetSelector):
        members = subset.members
    else:
        members = tuple(sorted({int(i) for i in subset}))
    if len(members) == 0:
        raise EmptySubset("subset must contain at least one point")
    if members[0] < 0 or members[-1] >= n:
        bad = members[0] if members[0] < 0 else members[-1]
        raise IndexOutOfRange(f"index {bad} outside 0..{n - 1}")
    return np.asarray(members, dtype=np.intp)


def _check_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput(f"{what} contains NaN or infinity")


def from_distance_matrix(matrix, tolerance: float | None = None) -> MetricSpace:
    """Validate a full distance matrix and wrap it as a MetricSpace.

    Parameters
    ----------
    matrix : array_like, shape (n, n)
        Symmetric matrix of pairwise distances.
    tolerance : float, optional
        Additive slack for the triangle inequality. Defaults to
        ``TRIANGLE_TOL_SCALE * max(matrix)``.

    Raises
    ------
    AsymmetricInput, NegativeDistance, NonzeroDiagonal, ZeroOffDiagonal,
    TriangleViolation, NonFiniteInput
    """
    d = np.asarray(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise AsymmetricInput(f"expected a square matrix, got shape {d.shape}")
    _check_finite(d, "distance matrix")
    if not np.array_equal(d, d.T):
        i, j = np.argwhere(d != d.T)[0]
        raise AsymmetricInput(
            f"matrix[{i}][{j}]={d[i, j]!r} != matrix[{j}][{i}]={d[j, i]!r}"
        )
    if np.any(d < 0):
        i, j = np.argwhere(d < 0)[0]
        raise NegativeDistance(f"matrix[{i}][{j}]={d[i, j]!r} is negative")
    if np.any(np.diag(d) != 0):
        i = int(np.argwhere(np.diag(d) != 0)[0][0])
        raise NonzeroDiagonal(f"matrix[{i}][{i}]={d[i, i]!r} must be zero")
    n = d.shape[0]
    off = d + np.eye(n)
    if np.any(off == 0):
        i, j = np.argwhere(off == 0)[0]
        raise ZeroOffDiagonal(
            f"points {i} and {j} are at distance zero; distinct points required"
        )
    if tolerance is None:
        tolerance = TRIANGLE_TOL_SCALE * float(d.max(initial=0.0))
    _check_triangle(d, tolerance)
    return MetricSpace(dist=d)


def _check_triangle(d: np.ndarray, tol: float) -> None:
    n = d.shape[0]
    for j in range(n):
        detour = d[:, j, None] + d[None, j, :]
        excess = d - detour
        worst = np.unravel_index(np.argmax(excess), excess.shape)
        if excess[worst] > tol:
            i, k = (int(worst[0]), int(worst[1]))
            raise TriangleViolation(i, j, k, float(excess[worst]))


def from_points_euclidean(points) -> MetricSpace:
    """Build the metric space of a Euclidean point cloud.

    Accepts a sequence of equal-dimension coordinate vectors (a scalar per
    point is allowed for 1-d input). The result is of negative type, so the
    similarity matrix of any rescaling is positive definite.
    """
    try:
        p = np.asarray(points, dtype=np.float64)
    except ValueError as exc:
        raise DimensionMismatch(str(exc)) from exc
    if p.ndim == 1:
        p = p[:, None]
    if p.ndim != 2 or p.shape[0] < 1:
        raise DimensionMismatch(f"expected a 2-d point array, got shape {p.shape}")
    _check_finite(p, "points")
    diff = p[:, None, :] - p[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    n = d.shape[0]
    dup = np.argwhere((d + np.eye(n)) == 0)
    if dup.size:
        i, j = dup[0]
        raise DuplicatePoint(f"points {i} and {j} coincide")
    return from_distance_matrix(d)


def scale(space: MetricSpace, t: float) -> MetricSpace:
    """Rescale all distances by t > 0. Metric invariants are preserved."""
    t = float(t)
    if not np.isfinite(t) or t <= 0:
        raise NonpositiveScale(f"scale factor must be a positive real, got {t!r}")
    return MetricSpace(dist=space.dist * t, labels=space.labels)


def restrict(space: MetricSpace, subset) -> MetricSpace:
    """Restrict to a nonempty subset of points (principal submatrix of dist)."""
    idx = as_indices(subset, space.n)
    sub = space.dist[np.ix_(idx, idx)]
    labels = None
    if space.labels is not None:
        labels = tuple(space.labels[i] for i in idx)
    return MetricSpace(dist=sub, labels=labels)


# --- ingestion from files -----------------------------------------------------

def space_from_csv_text(text: str, tolerance: float | None = None) -> MetricSpace:
    """Parse a CSV of the full symmetric distance matrix (n rows, n reals each)."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = [float(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        rows.append(row)
    if not rows:
        raise InputError("empty CSV input")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise AsymmetricInput("rows have differing lengths")
    return from_distance_matrix(np.asarray(rows), tolerance=tolerance)


def _reject_constant(token: str):
    raise NonFiniteInput(f"JSON contains non-finite constant {token!r}")


def space_from_json_obj(obj: dict) -> MetricSpace:
    """Build a space from a parsed JSON object.

    Either ``{"points": [[x, ...], ...]}`` for Euclidean ingestion or
    ``{"dist": [[...], ...], "labels": [...]}`` for an explicit matrix.
    """
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    if "points" in obj:
        return from_points_euclidean(obj["points"])
    if "dist" in obj:
        space = from_distance_matrix(obj["dist"])
        labels = obj.get("labels")
        if labels is not None:
            if len(labels) != space.n:
                raise InputError(
                    f"{len(labels)} labels for {space.n} points"
                )
            space = MetricSpace(dist=space.dist, labels=tuple(labels))
        return space
    raise InputError('JSON object must contain "points" or "dist"')


def space_from_json_text(text: str) -> MetricSpace:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return space_from_json_obj(obj)


def load_space(path) -> MetricSpace:
    """Load a space from a .csv distance matrix or .json file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    suffix = path.suffix.lower()
    if suffix == ".json":
        return space_from_json_text(text)
    if suffix == ".csv":
        return space_from_csv_text(text)
    raise InputError(f"unsupported input extension {suffix!r} (use .csv or .json)")


# --- convenience constructors --------------------------------------------------

def two_point_space(d: float) -> MetricSpace:
    """The metric space of two points at distance d > 0."""
    d = float(d)
    if not np.isfinite(d) or d <= 0:
        raise InputError(f"distance must be a positive real, got {d!r}")
    return MetricSpace(dist=np.array([[0.0, d], [d, 0.0]]))


def three_point_demo() -> MetricSpace:
    """Three points: a close pair at distance 2, both far (100) from the third.

    A standard demonstration space: sweeping the scale shows the effective
    point count move through plateaus near 1, 2, and 3.
    """
    return from_distance_matrix(
        [[0.0, 2.0, 100.0], [2.0, 0.0, 100.0], [100.0, 100.0, 0.0]]
    )
