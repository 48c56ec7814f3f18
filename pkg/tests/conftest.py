"""Shared generators for random metric space instances."""

from __future__ import annotations

import numpy as np
import pytest

import magkit as mk


def random_cloud_space(rng, n, dim=3, spread=1.0):
    """Euclidean cloud: negative type, hence positive definite at any scale."""
    pts = rng.normal(size=(n, dim)) * spread
    return mk.from_points_euclidean(pts)


def k32_space():
    """Complete bipartite K_{3,2} shortest-path metric.

    Loses positive definiteness below roughly t = 0.3, which makes it the
    standard probe for the singular crossing and indefinite behavior.
    """
    d = np.full((5, 5), 2.0)
    np.fill_diagonal(d, 0.0)
    for a in range(3):
        for b in range(3, 5):
            d[a, b] = d[b, a] = 1.0
    return mk.from_distance_matrix(d)


def spd_space(rng, n, dim=3):
    """A strongly positive definite instance: scale a cloud up until the
    certificate passes."""
    space = random_cloud_space(rng, n, dim)
    t = 1.0
    for _ in range(40):
        if mk.spd_certificate(mk.scale(space, t)).verdict:
            return mk.scale(space, t)
        t *= 1.5
    raise AssertionError("no SPD scale found; generator misconfigured")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
