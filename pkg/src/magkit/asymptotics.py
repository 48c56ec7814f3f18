"""Scale sweeps, the large-scale remainder, and the two-point approximation.

As the scale grows the magnitude approaches the point count n; the
remainder q = n - |tX| is asymptotically n^2 ((n-1)/n - 2 R_t^2), with R_t
the circumradius of the embedding at scale t. The ratio of the two sides
is computed with the circumradius taken from the geometric equidistance
solve, which keeps the two routes independent: the remainder comes from
the linear solve, the denominator from embedded coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jsonutil import fmt
from ._parallel import ordered_map
from .embedding import circumradius_geometric, similarity_embedding
from .errors import (
    DegenerateRemainder,
    InvalidGrid,
    MathError,
    NotPositiveDefinite,
)
from .magnitude import Definiteness, similarity_data
from .metric import MetricSpace, scale

# Below q = Q_FLOOR_SCALE * n the subtraction n - |tX| has lost every
# significant digit in double precision.
Q_FLOOR_SCALE = 1e-13

# Guard against zero/underflowed remainders in the ratio.
Q_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class SweepPoint:
    """One scale sample: magnitude, remainder, circumradius, asymptote term.

    ``magnitude`` (and with it q) is None when no weighting exists at this
    scale; ``r_squared`` and ``asymptote`` are present only on positive
    definite points. ``q_below_floor`` flags remainders smaller than
    Q_FLOOR_SCALE * n, where the reported digits are pure cancellation
    noise.
    """

    t: float
    magnitude: float | None
    q: float | None
    r_squared: float | None
    asymptote: float | None
    definiteness: str
    q_below_floor: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "magnitude": self.magnitude,
            "q": self.q,
            "R_squared": self.r_squared,
            "asymptote": self.asymptote,
            "definiteness": self.definiteness,
            "q_below_floor": self.q_below_floor,
        }


def default_log_grid(t_min: float, t_max: float, per_decade: int = 32) -> np.ndarray:
    """Log-spaced grid with a fixed density per decade."""
    if not (np.isfinite(t_min) and np.isfinite(t_max)) or t_min <= 0 or t_max <= t_min:
        raise InvalidGrid(f"need 0 < t_min < t_max, got ({t_min!r}, {t_max!r})")
    decades = np.log10(t_max) - np.log10(t_min)
    count = max(2, int(np.ceil(decades * per_decade)) + 1)
    return np.geomspace(t_min, t_max, count)


def _validate_grid(t_grid) -> np.ndarray:
    grid = np.asarray(list(t_grid), dtype=np.float64)
    if grid.size == 0:
        raise InvalidGrid("empty scale grid")
    if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
        raise InvalidGrid("scales must be finite and positive")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise InvalidGrid("scales must be strictly increasing")
    return grid


def _sweep_point(space: MetricSpace, t: float) -> SweepPoint:
    n = space.n
    scaled = scale(space, t)
    data = similarity_data(scaled)
    mag = data.magnitude
    q = None if mag is None else n - mag
    below = q is not None and abs(q) < Q_FLOOR_SCALE * n
    r_squared = None
    asymptote = None
    if data.definiteness is Definiteness.POSITIVE_DEFINITE:
        try:
            emb = similarity_embedding(scaled)
            radius, _ = circumradius_geometric(emb.points)
        except MathError:
            pass  # near-degenerate embedding: leave the fields absent
        else:
            r_squared = radius * radius
            asymptote = n * n * ((n - 1) / n - 2.0 * r_squared)
    return SweepPoint(
        t=float(t),
        magnitude=mag,
        q=q,
        r_squared=r_squared,
        asymptote=asymptote,
        definiteness=data.definiteness.value,
        q_below_floor=below,
    )


def magnitude_sweep(space: MetricSpace, t_grid) -> list[SweepPoint]:
    """Evaluate the sweep on a strictly increasing grid of scales.

    Per-point failures (no weighting at some scale) are recorded in the
    point, never abort the sweep.
    """
    grid = _validate_grid(t_grid)
    return ordered_map(lambda t: _sweep_point(space, float(t)), grid)


def asymptotic_ratio(space: MetricSpace, t: float) -> float:
    """Remainder over its circumradius asymptote; approaches 1 at large scale.

    The numerator q = n - |tX| comes from the linear solve; the denominator
    uses the geometric circumradius of the embedded points. Raises
    DegenerateRemainder when q is below the underflow guard, where the
    ratio would be noise over noise.
    """
    n = space.n
    scaled = scale(space, t)
    data = similarity_data(scaled)
    if data.definiteness is not Definiteness.POSITIVE_DEFINITE:
        raise NotPositiveDefinite(f"space at scale {t} is not positive definite")
    q = n - data.magnitude
    if abs(q) < Q_UNDERFLOW:
        raise DegenerateRemainder(f"remainder {q!r} below the numeric floor")
    emb = similarity_embedding(scaled)
    radius, _ = circumradius_geometric(emb.points)
    denom = n * n * ((n - 1) / n - 2.0 * radius * radius)
    if denom == 0.0:
        raise DegenerateRemainder("asymptote term vanished in double precision")
    return float(q / denom)


@dataclass(frozen=True)
class TwoPointRow:
    t: float
    magnitude: float
    exact_q: float
    approx_q: float
    relative_error: float


def two_point_approximation(d: float, t_grid) -> list[TwoPointRow]:
    """Exact two-point remainder against the single-exponential approximation.

    Exact q is 2 / (1 + exp(t d)); the approximation is 2 exp(-t d). Their
    relative error is exp(-t d) exactly, so it decays to zero; small scales
    are reported as-is with their large error visible. Scales may start at
    zero here (the closed form is global).
    """
    d = float(d)
    if not np.isfinite(d) or d <= 0:
        raise InvalidGrid(f"distance must be positive, got {d!r}")
    grid = np.asarray(list(t_grid), dtype=np.float64)
    if grid.size == 0:
        raise InvalidGrid("empty scale grid")
    if not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise InvalidGrid("scales must be finite and nonnegative")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise InvalidGrid("scales must be strictly increasing")
    rows = []
    for t in grid:
        x = t * d
        exact = 2.0 / (1.0 + np.exp(x))
        approx = 2.0 * np.exp(-x)
        rel = abs(approx - exact) / exact
        rows.append(
            TwoPointRow(
                t=float(t),
                magnitude=float(2.0 - exact),
                exact_q=float(exact),
                approx_q=float(approx),
                relative_error=float(rel),
            )
        )
    return rows


SWEEP_CSV_HEADER = "t,magnitude,q,R_squared,asymptote,definiteness"


def sweep_to_csv(points: list[SweepPoint]) -> str:
    """Render sweep points as CSV with the fixed six-column header.

    Missing values print as empty cells; a remainder below the numeric
    floor prints empty rather than reporting cancellation noise.
    """
    lines = [SWEEP_CSV_HEADER]
    for p in points:
        q_cell = "" if (p.q is None or p.q_below_floor) else fmt(p.q)
        cells = [
            fmt(p.t),
            "" if p.magnitude is None else fmt(p.magnitude),
            q_cell,
            "" if p.r_squared is None else fmt(p.r_squared),
            "" if p.asymptote is None else fmt(p.asymptote),
            p.definiteness,
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def two_point_csv(rows: list[TwoPointRow]) -> str:
    lines = ["t,magnitude,exact_q,approx_q,relative_error"]
    for r in rows:
        lines.append(
            ",".join(
                fmt(v)
                for v in (r.t, r.magnitude, r.exact_q, r.approx_q, r.relative_error)
            )
        )
    return "\n".join(lines) + "\n"
