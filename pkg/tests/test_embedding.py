"""Centered similarity matrix, similarity embedding, circumradius routes."""

import math

import numpy as np
import pytest

import magkit as mk
from magkit import errors
from magkit.embedding import embedding_to_dict

from conftest import random_cloud_space

SECTION_2_3 = mk.from_distance_matrix(
    [
        [0.0, math.log(2.0), math.log(10.0)],
        [math.log(2.0), 0.0, math.log(10.0)],
        [math.log(10.0), math.log(10.0), 0.0],
    ]
)

K_REFERENCE = (
    np.array(
        [[1.9, -0.35, -1.55], [-0.35, 1.9, -1.55], [-1.55, -1.55, 3.1]]
    )
    / 9.0
)


class TestCenteredSimilarity:
    def test_printed_three_point_values(self):
        k = mk.centered_similarity(mk.similarity_matrix(SECTION_2_3))
        np.testing.assert_allclose(k, K_REFERENCE, atol=1e-12)

    def test_two_point_identity_projection(self):
        k = mk.centered_similarity(np.eye(2))
        np.testing.assert_allclose(
            k, np.array([[0.25, -0.25], [-0.25, 0.25]]), atol=1e-15
        )

    def test_centering_kernel(self, rng):
        z = mk.similarity_matrix(random_cloud_space(rng, 7))
        k = mk.centered_similarity(z)
        assert np.max(np.abs(k @ np.ones(7))) < 1e-14
        assert np.max(np.abs(k.sum(axis=0))) < 1e-14

    def test_rank_drops_by_one(self, rng):
        z = mk.similarity_matrix(random_cloud_space(rng, 6))
        k = mk.centered_similarity(z)
        rank_z = np.linalg.matrix_rank(z)
        rank_k = np.linalg.matrix_rank(k)
        assert rank_k == rank_z - 1


class TestSimilarityEmbedding:
    def test_three_point_gram_matches_printed_factor(self):
        # the printed factor has first row (sqrt(2)/4, -sqrt(2)/4, 0);
        # embeddings match up to rigid transformation, so compare Grams
        emb = mk.similarity_embedding(SECTION_2_3)
        np.testing.assert_allclose(emb.factor.T @ emb.factor, K_REFERENCE, atol=1e-12)
        sq = [
            float(np.sum((emb.points[i] - emb.points[j]) ** 2))
            for i, j in ((0, 1), (0, 2), (1, 2))
        ]
        np.testing.assert_allclose(sq, [0.5, 0.9, 0.9], atol=1e-12)

    def test_two_point_embedding_length(self):
        d = 1.3
        emb = mk.similarity_embedding(mk.two_point_space(d))
        length = np.linalg.norm(emb.points[0] - emb.points[1])
        assert length == pytest.approx(math.sqrt(1.0 - math.exp(-d)), rel=1e-13)

    def test_isometry_property(self, rng):
        sp = random_cloud_space(rng, 8)
        z = mk.similarity_matrix(sp)
        emb = mk.similarity_embedding(sp)
        gram = emb.points @ emb.points.T
        for i in range(8):
            for j in range(8):
                sq = gram[i, i] + gram[j, j] - 2 * gram[i, j]
                assert abs(sq - (1.0 - z[i, j])) <= 1e-10

    def test_large_scale_edges_near_unit(self):
        sp = mk.scale(mk.two_point_space(1.0), 40.0)
        emb = mk.similarity_embedding(sp)
        length = np.linalg.norm(emb.points[0] - emb.points[1])
        # exp(-40) bounds the defect of the unit edge
        assert abs(length - 1.0) < 1e-10

    def test_factor_has_full_row_rank(self, rng):
        sp = random_cloud_space(rng, 6)
        emb = mk.similarity_embedding(sp)
        assert emb.factor.shape == (5, 6)
        assert np.linalg.matrix_rank(emb.factor) == 5

    def test_rejects_indefinite(self):
        from conftest import k32_space

        with pytest.raises(errors.NotPositiveDefinite):
            mk.similarity_embedding(mk.scale(k32_space(), 0.1))

    def test_one_point_space(self):
        sp = mk.MetricSpace(dist=np.zeros((1, 1)))
        emb = mk.similarity_embedding(sp)
        assert emb.circumradius == 0.0
        assert emb.points.shape == (1, 0)


class TestCircumradius:
    def test_two_point_equilibrium(self):
        d = 0.9
        radius, bary = mk.circumradius_equilibrium(
            mk.similarity_matrix(mk.two_point_space(d))
        )
        assert radius == pytest.approx(0.5 * math.sqrt(1 - math.exp(-d)), rel=1e-13)
        np.testing.assert_allclose(bary, [0.5, 0.5], atol=1e-13)

    def test_identity_regular_simplex(self):
        for n in (2, 3, 5, 8):
            radius, bary = mk.circumradius_equilibrium(np.eye(n))
            assert radius**2 == pytest.approx((n - 1) / (2 * n), rel=1e-13)
            np.testing.assert_allclose(bary, np.full(n, 1.0 / n), atol=1e-13)

    def test_geometric_two_points(self):
        radius, center = mk.circumradius_geometric(np.array([[0.0], [3.0]]))
        assert radius == pytest.approx(1.5)
        np.testing.assert_allclose(center, [1.5])

    def test_geometric_equilateral_triangle(self):
        pts = np.array([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
        radius, _ = mk.circumradius_geometric(pts)
        assert radius == pytest.approx(1 / math.sqrt(3), rel=1e-12)

    def test_methods_agree_three_point(self):
        emb = mk.similarity_embedding(SECTION_2_3)
        r_eq, bary = mk.circumradius_equilibrium(mk.similarity_matrix(SECTION_2_3))
        r_geo, center = mk.circumradius_geometric(emb.points)
        assert abs(r_eq - r_geo) < 1e-10
        np.testing.assert_allclose(emb.factor @ bary, center, atol=1e-10)

    def test_methods_agree_random(self, rng):
        sp = random_cloud_space(rng, 6)
        emb = mk.similarity_embedding(sp)
        r_eq, _ = mk.circumradius_equilibrium(mk.similarity_matrix(sp))
        r_geo, _ = mk.circumradius_geometric(emb.points)
        assert abs(r_eq - r_geo) <= 1e-9 * max(1.0, r_eq)

    def test_circumcenter_equidistance(self, rng):
        sp = random_cloud_space(rng, 7)
        emb = mk.similarity_embedding(sp)
        center = emb.factor @ emb.circumcenter_bary
        dists = np.linalg.norm(emb.points - center, axis=1)
        assert dists.max() - dists.min() <= 1e-10
        assert abs(emb.circumcenter_bary.sum() - 1.0) < 1e-12

    def test_degenerate_simplex_rejected(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        with pytest.raises(errors.DegenerateSimplex):
            mk.circumradius_geometric(pts)


class TestMagnitudeViaCircumradius:
    def test_two_point_closed_form(self):
        d = 2.2
        assert mk.magnitude_via_circumradius(mk.two_point_space(d)) == pytest.approx(
            1.0 + math.tanh(d / 2.0), rel=1e-13
        )

    def test_discrete_matrix_value(self):
        # identity similarity: radius of the regular simplex gives exactly n
        radius, _ = mk.circumradius_equilibrium(np.eye(6))
        assert 1.0 / (1.0 - 2.0 * radius**2) == pytest.approx(6.0, rel=1e-12)

    def test_three_point_against_dense_inverse(self):
        z = mk.similarity_matrix(SECTION_2_3)
        oracle = float(np.ones(3) @ np.linalg.inv(z) @ np.ones(3))
        assert mk.magnitude_via_circumradius(SECTION_2_3) == pytest.approx(
            oracle, abs=1e-10
        )

    def test_agreement_on_random_instances(self, rng):
        for _ in range(10):
            sp = random_cloud_space(rng, int(rng.integers(2, 9)))
            a = mk.magnitude(sp)
            b = mk.magnitude_via_circumradius(sp)
            assert abs(a - b) <= 1e-9 * abs(a)


class TestSubspaceCharacterization:
    def test_two_point_subsets_reduce_to_isometry(self, rng):
        sp = random_cloud_space(rng, 5)
        z = mk.similarity_matrix(sp)
        emb = mk.similarity_embedding(sp)
        for i in range(5):
            for j in range(i + 1, 5):
                radius, _ = mk.circumradius_geometric(emb.points[[i, j]])
                sq = float(np.sum((emb.points[i] - emb.points[j]) ** 2))
                assert sq == pytest.approx(1.0 - z[i, j], abs=1e-12)
                assert 2 * radius == pytest.approx(math.sqrt(sq), rel=1e-12)

    def test_full_subset_matches_whole_space(self, rng):
        sp = random_cloud_space(rng, 5)
        report = mk.verify_subspace_characterization(sp, max_subsets=31)
        assert report.exhaustive
        assert report.max_deviation <= 1e-9

    def test_eight_point_cloud_exhaustive(self, rng):
        sp = random_cloud_space(rng, 8)
        report = mk.verify_subspace_characterization(sp, max_subsets=255)
        assert report.exhaustive and report.n_checked == 255
        assert report.max_deviation <= 1e-9

    def test_sampling_kicks_in(self, rng):
        sp = random_cloud_space(rng, 8)
        report = mk.verify_subspace_characterization(sp, max_subsets=40, seed=7)
        assert not report.exhaustive
        assert report.n_checked <= 40
        assert report.max_deviation <= 1e-9

    def test_restriction_functoriality(self, rng):
        # restricted embedding, re-centered, has the Gram matrix of the
        # restricted space's own centered similarity matrix
        sp = random_cloud_space(rng, 6)
        emb = mk.similarity_embedding(sp)
        subset = [0, 2, 3, 5]
        pts = emb.points[subset]
        centered = pts - pts.mean(axis=0)
        k_direct = mk.centered_similarity(
            mk.similarity_matrix(mk.restrict(sp, subset))
        )
        np.testing.assert_allclose(centered @ centered.T, k_direct, atol=1e-10)


def test_embedding_export_keys(rng):
    emb = mk.similarity_embedding(random_cloud_space(rng, 4))
    out = embedding_to_dict(emb)
    assert set(out) == {"points", "circumradius", "circumcenter_barycentric"}
