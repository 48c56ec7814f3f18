"""Metric space construction, validation, rescaling, restriction, parsing."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import magkit as mk
from magkit import errors
from magkit.metric import (
    SubsetSelector,
    space_from_csv_text,
    space_from_json_text,
)


class TestFromDistanceMatrix:
    def test_smallest_valid_metric(self):
        sp = mk.from_distance_matrix([[0, 1], [1, 0]])
        assert sp.n == 2
        assert sp.dist[0, 1] == 1.0

    def test_three_point_demo_matrix(self):
        sp = mk.from_distance_matrix([[0, 2, 100], [2, 0, 100], [100, 100, 0]])
        assert sp.dist[0, 1] == 2.0
        assert sp.dist[2, 0] == 100.0

    def test_asymmetric_rejected(self):
        with pytest.raises(errors.AsymmetricInput):
            mk.from_distance_matrix([[0, 1], [2, 0]])

    def test_non_square_rejected(self):
        with pytest.raises(errors.AsymmetricInput):
            mk.from_distance_matrix([[0, 1, 2], [1, 0, 2]])

    def test_negative_rejected(self):
        with pytest.raises(errors.NegativeDistance):
            mk.from_distance_matrix([[0, -1], [-1, 0]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(errors.NonzeroDiagonal):
            mk.from_distance_matrix([[1, 1], [1, 0]])

    def test_zero_off_diagonal_rejected(self):
        with pytest.raises(errors.ZeroOffDiagonal):
            mk.from_distance_matrix([[0, 0], [0, 0]])

    def test_triangle_violation_reports_triple(self):
        with pytest.raises(errors.TriangleViolation) as exc:
            mk.from_distance_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        i, j, k = exc.value.triple
        d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
        assert d[i, k] > d[i, j] + d[j, k]

    def test_nan_rejected(self):
        with pytest.raises(errors.NonFiniteInput):
            mk.from_distance_matrix([[0, math.nan], [math.nan, 0]])

    def test_matrix_is_immutable(self):
        sp = mk.from_distance_matrix([[0, 1], [1, 0]])
        with pytest.raises(ValueError):
            sp.dist[0, 1] = 5.0


class TestFromPoints:
    def test_two_points_on_line(self):
        sp = mk.from_points_euclidean([(0,), (1,)])
        assert sp.dist[0, 1] == pytest.approx(1.0)

    def test_pythagorean_triangle(self):
        sp = mk.from_points_euclidean([(0, 0), (3, 0), (0, 4)])
        got = sorted([sp.dist[0, 1], sp.dist[0, 2], sp.dist[1, 2]])
        assert got == pytest.approx([3.0, 4.0, 5.0])

    def test_unit_square_pd_across_scales(self):
        sp = mk.from_points_euclidean([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert sp.dist[0, 2] == pytest.approx(math.sqrt(2))
        for t in (0.1, 1.0, 10.0):
            z = mk.similarity_matrix(mk.scale(sp, t))
            # eigenvalue oracle: every eigenvalue strictly positive
            assert np.linalg.eigvalsh(z).min() > 0
            assert (
                mk.classify_definiteness(z) is mk.Definiteness.POSITIVE_DEFINITE
            )

    def test_duplicate_points_rejected(self):
        with pytest.raises(errors.DuplicatePoint):
            mk.from_points_euclidean([(1, 2), (1, 2), (3, 4)])

    def test_ragged_points_rejected(self):
        with pytest.raises(errors.DimensionMismatch):
            mk.from_points_euclidean([(0, 0), (1,)])

    def test_scalar_coordinates_accepted(self):
        sp = mk.from_points_euclidean([0.0, 2.5])
        assert sp.dist[0, 1] == pytest.approx(2.5)

    @settings(max_examples=30, deadline=None, derandomize=True)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_cloud_triangle_holds_with_default_tolerance(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(6, 3)) * rng.uniform(0.1, 50)
        mk.from_points_euclidean(pts)  # must not raise


class TestScaleRestrict:
    def test_scale_two_point(self):
        sp = mk.scale(mk.two_point_space(1.0), 3.0)
        assert sp.dist[0, 1] == pytest.approx(3.0)

    def test_scale_identity(self):
        sp = mk.two_point_space(1.0)
        assert np.array_equal(mk.scale(sp, 1.0).dist, sp.dist)

    def test_scale_round_trip(self):
        sp = mk.three_point_demo()
        back = mk.scale(mk.scale(sp, 2.0), 0.5)
        np.testing.assert_allclose(back.dist, sp.dist, rtol=1e-15)

    def test_nonpositive_scale_rejected(self):
        sp = mk.two_point_space(1.0)
        for t in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(errors.NonpositiveScale):
                mk.scale(sp, t)

    def test_restrict_close_pair(self):
        sp = mk.restrict(mk.three_point_demo(), [0, 1])
        assert sp.n == 2
        assert sp.dist[0, 1] == 2.0

    def test_restrict_full_set_is_identity(self):
        sp = mk.three_point_demo()
        assert np.array_equal(mk.restrict(sp, [0, 1, 2]).dist, sp.dist)

    def test_restrict_singleton(self):
        sp = mk.restrict(mk.three_point_demo(), [1])
        assert sp.n == 1 and sp.dist[0, 0] == 0.0

    def test_restrict_empty_rejected(self):
        with pytest.raises(errors.EmptySubset):
            mk.restrict(mk.three_point_demo(), [])

    def test_restrict_out_of_range_rejected(self):
        with pytest.raises(errors.IndexOutOfRange):
            mk.restrict(mk.three_point_demo(), [0, 3])

    def test_labels_follow_restriction(self):
        sp = mk.MetricSpace(
            dist=np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.5], [2.0, 1.5, 0.0]]),
            labels=("a", "b", "c"),
        )
        assert mk.restrict(sp, [0, 2]).labels == ("a", "c")

    @settings(max_examples=25, deadline=None, derandomize=True)
    @given(
        st.integers(min_value=0, max_value=2**32 - 1),
        st.floats(min_value=0.01, max_value=100.0),
    )
    def test_scale_then_restrict_commutes(self, seed, t):
        rng = np.random.default_rng(seed)
        sp = mk.from_points_euclidean(rng.normal(size=(5, 2)))
        subset = [0, 2, 4]
        a = mk.restrict(mk.scale(sp, t), subset)
        b = mk.scale(mk.restrict(sp, subset), t)
        np.testing.assert_array_equal(a.dist, b.dist)

    def test_subset_selector_normalizes(self):
        sel = SubsetSelector((3, 1, 1, 2))
        assert sel.members == (1, 2, 3)
        assert len(sel) == 3


class TestParsers:
    def test_csv_round_trip(self):
        sp = space_from_csv_text("0,1\n1,0\n")
        assert sp.dist[0, 1] == 1.0

    def test_csv_rejects_nan(self):
        with pytest.raises(errors.NonFiniteInput):
            space_from_csv_text("0,nan\nnan,0\n")

    def test_csv_rejects_garbage(self):
        with pytest.raises(errors.InputError):
            space_from_csv_text("0,x\nx,0\n")

    def test_json_points(self):
        sp = space_from_json_text('{"points": [[0, 0], [3, 4]]}')
        assert sp.dist[0, 1] == pytest.approx(5.0)

    def test_json_dist_with_labels(self):
        sp = space_from_json_text('{"dist": [[0, 1], [1, 0]], "labels": ["p", "q"]}')
        assert sp.labels == ("p", "q")

    def test_json_rejects_infinity(self):
        with pytest.raises(errors.NonFiniteInput):
            space_from_json_text('{"dist": [[0, Infinity], [Infinity, 0]]}')

    def test_json_requires_points_or_dist(self):
        with pytest.raises(errors.InputError):
            space_from_json_text('{"matrix": [[0]]}')
