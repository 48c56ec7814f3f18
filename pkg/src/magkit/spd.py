"""Strong positive definiteness: certificates, scale thresholds, submodularity.

A space is strongly positive definite when it is positive definite, its
weighting is strictly positive, and every pair coefficient is strictly
positive. The certificate also evaluates four equivalent characterizations
(sign pattern of the pseudoinverse, M-matrix test, Laplacian-of-a-complete-
positively-weighted-graph test, circumcenter strictly interior), which must
agree with the definitional checks.

The submodularity reports evaluate set functions over all 2^n subsets and
record every strict-inequality failure, exhaustively up to N_EXHAUSTIVE
points.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    NotPositiveDefinite,
    NotStronglyPositiveDefiniteWarning,
    SingularZ,
    ThresholdNotFound,
    TooManyPoints,
)
from .identities import coefficient_data, upper_pairs
from .magnitude import (
    Definiteness,
    classify_definiteness,
    eigenvalue_cutoff,
    similarity_data,
)
from .metric import MetricSpace, scale
from .subspace import subset_magnitude_table

# Strict positivity margin: values within +-EPS_STRICT of zero count as
# boundary and fail the strict verdict with the boundary flag raised.
EPS_STRICT = 1e-12

# Exhaustive subset enumeration cap for the submodularity checks.
N_EXHAUSTIVE = 16


@dataclass(frozen=True)
class SpdCertificate:
    """Definitional strict-positivity checks plus four characterizations.

    verdict == is_pd and w_positive and c_positive. ``boundary`` flags
    values that sat within EPS_STRICT of zero, where the strict verdict is
    not trustworthy either way. ``characterizations`` holds the four named
    equivalent tests; on positive definite spaces they agree with the
    definitional flags.
    """

    is_pd: bool
    w_positive: bool
    c_positive: bool
    verdict: bool
    boundary: bool
    characterizations: dict[str, bool]
    w_min: float | None
    c_min: float | None

    def to_dict(self) -> dict:
        return {
            "is_positive_definite": self.is_pd,
            "weighting_positive": self.w_positive,
            "coefficients_positive": self.c_positive,
            "verdict": self.verdict,
            "boundary": self.boundary,
            "characterizations": dict(self.characterizations),
            "weighting_min": self.w_min,
            "coefficient_min": self.c_min,
        }


def spd_certificate(space: MetricSpace) -> SpdCertificate:
    """Total classification; never raises on mathematical grounds."""
    data = similarity_data(space)
    is_pd = data.definiteness is Definiteness.POSITIVE_DEFINITE
    n = space.n
    coeffs = coefficient_data(space)
    pinv = coeffs.pinv
    ii, jj = upper_pairs(n)
    pair_c = -pinv[ii, jj] if n >= 2 else np.array([])

    boundary = False
    if data.weighting is not None:
        w = data.weighting
        w_min = float(w.min())
        boundary = boundary or bool(np.any(np.abs(w) <= EPS_STRICT))
        w_positive = bool(np.all(w > EPS_STRICT))
    else:
        w_min = None
        w_positive = False
    if n >= 2:
        c_min = float(pair_c.min())
        boundary = boundary or bool(np.any(np.abs(pair_c) <= EPS_STRICT))
        c_positive = bool(np.all(pair_c > EPS_STRICT))
    else:
        c_min = None
        c_positive = True

    # (i) strictly negative off-diagonal entries of the pseudoinverse
    offdiag_negative = bool(np.all(pair_c > EPS_STRICT)) if n >= 2 else True
    # (ii) strict M-matrix: positive semidefinite with negative off-diagonals
    mu = np.linalg.eigvalsh(pinv)
    psd = bool(mu.min() >= -eigenvalue_cutoff(mu))
    m_matrix = psd and offdiag_negative
    # (iii) Laplacian of a connected, completely positively weighted graph:
    # positive coefficients and kernel exactly the all-ones line
    kernel_resid = float(np.max(np.abs(pinv @ np.ones(n)))) if n >= 1 else 0.0
    near_zero = int(np.sum(np.abs(mu) <= eigenvalue_cutoff(mu)))
    laplacian = offdiag_negative and kernel_resid <= 1e-10 * max(
        1.0, float(np.max(np.abs(mu)))
    ) and near_zero == 1
    # (iv) circumcenter strictly interior: normalized weighting positive
    if data.weighting is not None and data.magnitude and data.magnitude > 0:
        bary = data.weighting / data.magnitude
        circumcenter_interior = bool(np.all(bary > EPS_STRICT))
    else:
        circumcenter_interior = False

    if n == 1:
        laplacian = True  # 1x1 zero matrix: trivially the Laplacian of K_1

    return SpdCertificate(
        is_pd=is_pd,
        w_positive=w_positive,
        c_positive=c_positive,
        verdict=bool(is_pd and w_positive and c_positive),
        boundary=boundary,
        characterizations={
            "pinv_offdiagonal_negative": offdiag_negative,
            "m_matrix": m_matrix,
            "laplacian_complete_positive": laplacian,
            "circumcenter_interior": circumcenter_interior,
        },
        w_min=w_min,
        c_min=c_min,
    )


def spd_semialgebraic_check(z: np.ndarray) -> bool:
    """Strong positive definiteness straight from the inverse similarity matrix.

    True iff the magnitude is positive and for all distinct i, j both
    u_i u_j > |X| (Z^{-1})_ij and u_i u_j > 0 hold, with u the row sums of
    the inverse. Thresholds are scaled to match the definitional strictness
    margin, so the two routes agree away from exact boundaries.
    """
    z = np.asarray(z, dtype=np.float64)
    if classify_definiteness(z) is Definiteness.SINGULAR:
        raise SingularZ("semialgebraic check needs an invertible similarity matrix")
    zinv = np.linalg.inv(z)
    u = zinv @ np.ones(z.shape[0])
    mag = float(u.sum())
    if not mag > 0:
        return False
    n = z.shape[0]
    if n == 1:
        return True
    ii, jj = upper_pairs(n)
    prod = u[ii] * u[jj]
    # 2(u_i u_j - mag * zinv_ij)/mag is exactly the pair coefficient
    coeff_margin = 2.0 * (prod - mag * zinv[ii, jj]) / mag
    return bool(np.all(coeff_margin > EPS_STRICT) and np.all(prod > 0))


def spd_scale_threshold(
    space: MetricSpace,
    t_max: float,
    rel_precision: float = 1e-6,
    persistence_samples: int = 8,
) -> tuple[float, list[tuple[float, bool]]]:
    """Smallest scale found (doubling then bisection) at which the space
    certifies strongly positive definite, with sampled persistence above.

    The trace records every certificate evaluation as (t, verdict).
    Persistence is sampled, not proved: strong positive definiteness is not
    known to be monotone in the scale, so the returned value is the first
    certified scale whose sampled continuation up to t_max also certifies.
    Raises ThresholdNotFound when no scale up to t_max certifies.
    """
    if not t_max > 0:
        raise ThresholdNotFound("t_max must be positive")
    trace: list[tuple[float, bool]] = []

    def ok(t: float) -> bool:
        verdict = spd_certificate(scale(space, t)).verdict
        trace.append((float(t), verdict))
        return verdict

    floor = 0.0
    for _ in range(64):
        # doubling phase from the current floor
        t = min(1.0, t_max) if floor == 0.0 else min(2.0 * floor, t_max)
        hi = None
        while True:
            if t > floor and ok(t):
                hi = t
                break
            if t >= t_max:
                raise ThresholdNotFound(
                    f"no strongly positive definite scale found at or below {t_max}"
                )
            t = min(2.0 * t, t_max)
        lo = floor
        while hi - lo > rel_precision * hi and hi > 1e-12:
            mid = 0.5 * (hi + lo)
            if ok(mid):
                hi = mid
            else:
                lo = mid
        # sampled persistence above the candidate
        if hi < t_max:
            samples = np.geomspace(hi, t_max, persistence_samples + 1)[1:]
        else:
            samples = []
        failed = None
        for t_sample in samples:
            if not ok(float(t_sample)):
                failed = float(t_sample)
                break
        if failed is None:
            return float(hi), trace
        floor = failed
    raise ThresholdNotFound("persistence scan did not stabilize")


# --- submodularity -------------------------------------------------------------


@dataclass(frozen=True)
class SetFunctionReport:
    """Evaluations of a magnitude-based set function over all subsets.

    ``violations`` lists quadruples (Y, x, y) where the strict
    submodularity inequality fails; ``monotonicity_violations`` lists
    covering pairs (Y_without, Y) where the function decreases. The F/G/H
    records back the proof-style difference families for the shifted
    function; for the inverse function they stay empty. All subsets are
    tuples of global point ids, sorted, and the record lists are sorted for
    deterministic output.
    """

    kind: str
    alpha: float
    t: float | None
    submodular_ok: bool
    increasing_ok: bool
    violations: list
    monotonicity_violations: list
    f_records: list
    g_records: list
    h_records: list
    reference: dict
    spd_ok: bool | None
    notes: list

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "alpha": self.alpha,
            "t": self.t,
            "submodular_ok": self.submodular_ok,
            "increasing_ok": self.increasing_ok,
            "violations": [
                {"subset": list(s), "x": x, "y": y, "lhs": lhs, "rhs": rhs}
                for (s, x, y, lhs, rhs) in self.violations
            ],
            "monotonicity_violations": [
                {"smaller": list(a), "larger": list(b), "f_smaller": fa, "f_larger": fb}
                for (a, b, fa, fb) in self.monotonicity_violations
            ],
            "summary": {
                "violation_count": len(self.violations),
                "monotonicity_violation_count": len(self.monotonicity_violations),
                "f_count": len(self.f_records),
                "g_count": len(self.g_records),
                "h_count": len(self.h_records),
            },
            "reference": self.reference,
            "spd_ok": self.spd_ok,
            "notes": list(self.notes),
        }


def _members(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if mask >> i & 1)


def _require_exhaustible(n: int) -> None:
    if n > N_EXHAUSTIVE:
        raise TooManyPoints(
            f"{n} points exceeds the exhaustive enumeration cap of {N_EXHAUSTIVE}"
        )


def _quadruple_scan(f: np.ndarray, n: int):
    """Yield (mask, x, y, lhs, rhs) for every subset and unordered pair in it.

    lhs < rhs is the strict submodularity requirement in difference form,
    symmetric under swapping x and y.
    """
    for mask in range(1, 1 << n):
        members = _members(mask, n)
        if len(members) < 2:
            continue
        for a in range(len(members)):
            x = members[a]
            for b in range(a + 1, len(members)):
                y = members[b]
                lhs = f[mask] - f[mask & ~(1 << y)]
                rhs = f[mask & ~(1 << x)] - f[mask & ~(1 << x) & ~(1 << y)]
                yield mask, x, y, lhs, rhs


def _cover_scan(f: np.ndarray, n: int):
    """Yield (smaller_mask, mask, f_smaller, f_larger) over covering pairs,
    including the empty set below every singleton."""
    for mask in range(1, 1 << n):
        for y in _members(mask, n):
            smaller = mask & ~(1 << y)
            yield smaller, mask, f[smaller], f[mask]


def check_inverse_submodularity(space: MetricSpace, alpha: float) -> SetFunctionReport:
    """Exhaustive strict-submodularity and monotonicity check of the
    negated inverse magnitude with value alpha on the empty set.

    Strongly positive definite input is the hypothesis under which zero
    violations are expected; when the certificate fails the check still
    runs (the converse direction is informative) and a warning is issued.
    """
    n = space.n
    _require_exhaustible(n)
    cert = spd_certificate(space)
    notes = []
    if not cert.verdict:
        warnings.warn(
            "space is not strongly positive definite; submodularity is not guaranteed",
            NotStronglyPositiveDefiniteWarning,
            stacklevel=2,
        )
        notes.append("hypothesis_failed: not strongly positive definite")
    mags = subset_magnitude_table(space)
    f = np.empty(1 << n)
    f[0] = alpha
    f[1:] = -1.0 / mags[1:]

    violations = []
    for mask, x, y, lhs, rhs in _quadruple_scan(f, n):
        if not lhs < rhs:
            violations.append((_members(mask, n), x, y, float(lhs), float(rhs)))
    monotonicity = []
    for smaller, mask, fs, fl in _cover_scan(f, n):
        if fs > fl:
            monotonicity.append((_members(smaller, n), _members(mask, n), float(fs), float(fl)))
    violations.sort()
    monotonicity.sort()
    return SetFunctionReport(
        kind="inverse_magnitude",
        alpha=float(alpha),
        t=None,
        submodular_ok=not violations,
        increasing_ok=not monotonicity,
        violations=violations,
        monotonicity_violations=monotonicity,
        f_records=[],
        g_records=[],
        h_records=[],
        reference={},
        spd_ok=cert.verdict,
        notes=notes,
    )


def _shifted_values(space: MetricSpace, t: float, alpha: float) -> np.ndarray:
    scaled = scale(space, t)
    mags = subset_magnitude_table(scaled)
    n = space.n
    f = np.empty(1 << n)
    f[0] = alpha
    for mask in range(1, 1 << n):
        m = bin(mask).count("1")
        f[mask] = (m - mags[mask]) / (m * m) + (m - 1) / m
    return f


def check_shifted_submodularity(
    space: MetricSpace, t: float, alpha: float
) -> SetFunctionReport:
    """Difference-family check of the shifted remainder set function at scale t.

    Evaluates the three proof-style families: second differences F over
    every subset and pair inside it, the two-point family G (F restricted
    to two-point subsets against the empty set), and first differences H
    over covering pairs plus every (empty set, Y) pair. All must be
    strictly negative in the large-scale regime. The report carries the
    discrete-limit reference values for F (by subset size) and G.
    """
    n = space.n
    _require_exhaustible(n)
    f = _shifted_values(space, t, alpha)

    f_records = []
    violations = []
    for mask, x, y, lhs, rhs in _quadruple_scan(f, n):
        second_diff = lhs - rhs
        f_records.append((_members(mask, n), x, y, float(second_diff)))
        if not second_diff < 0:
            violations.append((_members(mask, n), x, y, float(lhs), float(rhs)))
    g_records = []
    for x in range(n):
        for y in range(x + 1, n):
            pair_mask = (1 << x) | (1 << y)
            g = f[pair_mask] - f[1 << x] - f[1 << y] + f[0]
            g_records.append(((x, y), float(g)))
    h_records = []
    monotonicity = []
    for smaller, mask, fs, fl in _cover_scan(f, n):
        h = fs - fl
        h_records.append((_members(smaller, n), _members(mask, n), float(h)))
        if not h < 0:
            monotonicity.append((_members(smaller, n), _members(mask, n), float(fs), float(fl)))
    for mask in range(1, 1 << n):
        if bin(mask).count("1") >= 2:  # covers already handle singletons
            h = f[0] - f[mask]
            h_records.append(((), _members(mask, n), float(h)))
            if not h < 0:
                monotonicity.append(((), _members(mask, n), float(f[0]), float(f[mask])))

    violations.sort()
    monotonicity.sort()
    f_records.sort()
    h_records.sort()
    reference = {
        "f_discrete_limit_by_size": {
            m: -2.0 / (m * (m - 1) * (m - 2)) for m in range(3, n + 1)
        },
        "g_discrete_limit": 0.5 + float(alpha),
    }
    return SetFunctionReport(
        kind="shifted_remainder",
        alpha=float(alpha),
        t=float(t),
        submodular_ok=not violations,
        increasing_ok=not monotonicity,
        violations=violations,
        monotonicity_violations=monotonicity,
        f_records=f_records,
        g_records=g_records,
        h_records=h_records,
        reference=reference,
        spd_ok=None,
        notes=[],
    )


def shifted_violation_onset(
    space: MetricSpace, t_grid, alpha: float
) -> float | None:
    """Largest sampled scale at which the shifted families still violate.

    Makes the empirical onset of the large-scale regime visible; returns
    None when no sampled scale violates.
    """
    worst = None
    for t in t_grid:
        report = check_shifted_submodularity(space, float(t), alpha)
        if report.violations or report.monotonicity_violations:
            worst = float(t)
    return worst
