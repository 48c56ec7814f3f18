"""Exception hierarchy and warning categories.

Two families: :class:`InputError` covers malformed or invalid inputs
(asymmetric matrices, bad subsets, unparsable files) and maps to exit
code 1 in the command line tool; :class:`MathError` covers mathematical
hypothesis failures (similarity matrix not positive definite, singular
pivot blocks, nonexistent thresholds) and maps to exit code 2.

A nonexistent weighting is not an error: the solve routines return
``None`` in that case, because nonexistence is a legitimate outcome of
the definition rather than a failure of the caller.
"""


class MagkitError(Exception):
    """Base class for all magkit errors."""


class InputError(MagkitError):
    """Invalid input data or parameters."""


class MathError(MagkitError):
    """A mathematical hypothesis of the requested operation fails."""


# --- input validation -------------------------------------------------------

class AsymmetricInput(InputError):
    """Distance matrix is not square or not equal to its transpose."""


class NegativeDistance(InputError):
    """Distance matrix contains a negative entry."""


class NonzeroDiagonal(InputError):
    """Distance matrix has a nonzero diagonal entry."""


class ZeroOffDiagonal(InputError):
    """Two distinct points are at distance zero."""


class TriangleViolation(InputError):
    """Triangle inequality fails beyond tolerance.

    Carries the witnessing triple (i, j, k) with d(i,k) > d(i,j) + d(j,k).
    """

    def __init__(self, i, j, k, excess):
        self.triple = (i, j, k)
        self.excess = excess
        super().__init__(
            f"triangle inequality violated by {excess:.3e} "
            f"on triple (i={i}, j={j}, k={k})"
        )


class DuplicatePoint(InputError):
    """Two input points coincide."""


class DimensionMismatch(InputError):
    """Input points do not all have the same dimension."""


class NonFiniteInput(InputError):
    """Input contains NaN or infinity."""


class NonpositiveScale(InputError):
    """Scale factor must be strictly positive."""


class EmptySubset(InputError):
    """Subset of points must be nonempty."""


class IndexOutOfRange(InputError):
    """Point index outside 0..n-1."""


class InvalidGrid(InputError):
    """Scale grid must be nonempty, finite and strictly increasing."""


class UnknownTarget(InputError):
    """Unrecognized reproduction target name."""


# --- mathematical hypotheses ------------------------------------------------

class NotPositiveDefinite(MathError):
    """The similarity matrix is not positive definite."""


class DegenerateSimplex(MathError):
    """Embedded points are affinely dependent within tolerance."""


class SingularZ(MathError):
    """The similarity matrix is singular within tolerance."""


class ZeroMagnitude(MathError):
    """Magnitude is zero within tolerance, identity does not apply."""


class SingularPivotBlock(MathError):
    """Schur complement pivot block is singular within tolerance."""


class LastPoint(MathError):
    """Cannot delete the only remaining point."""


class ThresholdNotFound(MathError):
    """No strongly positive definite scale found below the given bound."""


class TooManyPoints(MathError):
    """Exhaustive subset enumeration limit exceeded."""


class DegenerateRemainder(MathError):
    """Remainder n - |tX| is below the numeric floor."""


# --- warnings ----------------------------------------------------------------

class ConditioningWarning(UserWarning):
    """Incremental and recomputed subspace values disagree noticeably."""


class NotStronglyPositiveDefiniteWarning(UserWarning):
    """Submodularity hypothesis fails; the report is still produced."""
