import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldrp import DistanceKind, distance, distance_matrix

ALL_KINDS = list(DistanceKind)

# histogram-like magnitudes; avoids subnormals whose squared norm underflows
nonneg_vectors = st.lists(
    st.integers(min_value=0, max_value=1000).map(lambda v: v / 1000.0),
    min_size=1,
    max_size=16,
)


class TestDistanceExamples:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_identical_vectors(self, kind):
        q = np.array([0.25, 0.5, 0.25])
        assert distance(q, q, kind) == pytest.approx(0.0, abs=1e-12)

    def test_disjoint_indicators(self):
        q = np.array([1.0, 0.0])
        t = np.array([0.0, 1.0])
        assert distance(q, t, DistanceKind.L1) == 2.0
        assert distance(q, t, DistanceKind.CHI_SQUARE) == 2.0

    def test_d1_hand_value(self):
        q = np.array([0.5, 0.5])
        t = np.array([1.0, 0.0])
        # 0.5/2.5 + 0.5/1.5
        assert distance(q, t, DistanceKind.D1) == pytest.approx(0.5 / 2.5 + 0.5 / 1.5, rel=1e-12)

    def test_euclidean_hand_value(self):
        assert distance(np.array([3.0, 0.0]), np.array([0.0, 4.0]), DistanceKind.EUCLIDEAN) == 5.0

    def test_cosine_orthogonal(self):
        q = np.array([1.0, 0.0])
        t = np.array([0.0, 1.0])
        assert distance(q, t, DistanceKind.COSINE) == pytest.approx(1.0)

    def test_chi_square_zero_bins_contribute_nothing(self):
        q = np.array([0.5, 0.5, 0.0])
        t = np.array([0.5, 0.5, 0.0])
        assert distance(q, t, DistanceKind.CHI_SQUARE) == 0.0

    def test_default_is_chi_square(self):
        q = np.array([1.0, 0.0])
        t = np.array([0.0, 1.0])
        assert distance(q, t) == distance(q, t, DistanceKind.CHI_SQUARE)


class TestDistanceErrors:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            distance(np.ones(3), np.ones(4))

    def test_cosine_zero_vector(self):
        with pytest.raises(ValueError):
            distance(np.zeros(3), np.ones(3), DistanceKind.COSINE)

    def test_matrix_dimension_mismatch(self):
        with pytest.raises(ValueError):
            distance_matrix(np.ones((2, 3)), np.ones((2, 4)))


class TestDistanceProperties:
    @settings(max_examples=60, deadline=None)
    @given(nonneg_vectors, nonneg_vectors)
    def test_symmetry_and_nonnegativity(self, a, b):
        size = min(len(a), len(b))
        q = np.asarray(a[:size])
        t = np.asarray(b[:size])
        for kind in ALL_KINDS:
            if kind is DistanceKind.COSINE and (not q.any() or not t.any()):
                continue
            forward = distance(q, t, kind)
            assert forward >= 0.0
            assert forward == pytest.approx(distance(t, q, kind), rel=1e-12, abs=1e-12)

    def test_chi_square_of_normalized_histograms_at_most_two(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            q = rng.random(32)
            t = rng.random(32)
            q /= q.sum()
            t /= t.sum()
            assert 0.0 <= distance(q, t, DistanceKind.CHI_SQUARE) <= 2.0

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_matrix_matches_pairwise(self, kind):
        rng = np.random.default_rng(1)
        queries = rng.random((5, 8))
        gallery = rng.random((7, 8))
        matrix = distance_matrix(queries, gallery, kind)
        assert matrix.shape == (5, 7)
        for i in range(5):
            for j in range(7):
                assert matrix[i, j] == pytest.approx(
                    distance(queries[i], gallery[j], kind), rel=1e-12, abs=1e-12
                )

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_gallery_permutation_permutes_values(self, kind):
        rng = np.random.default_rng(2)
        queries = rng.random((3, 6))
        gallery = rng.random((9, 6))
        perm = rng.permutation(9)
        base = distance_matrix(queries, gallery, kind)
        shuffled = distance_matrix(queries, gallery[perm], kind)
        assert np.array_equal(base[:, perm], shuffled)

    def test_cosine_scale_invariant(self):
        q = np.array([0.2, 0.3, 0.5])
        t = np.array([0.1, 0.6, 0.3])
        assert distance(q, 7.0 * t, DistanceKind.COSINE) == pytest.approx(
            distance(q, t, DistanceKind.COSINE), rel=1e-12
        )

    def test_triangle_like_sanity_euclidean(self):
        a = np.array([1.0, 0.0])
        b = np.array([0.0, 1.0])
        c = np.array([1.0, 1.0])
        ab = distance(a, b, DistanceKind.EUCLIDEAN)
        ac = distance(a, c, DistanceKind.EUCLIDEAN)
        cb = distance(c, b, DistanceKind.EUCLIDEAN)
        assert ab <= ac + cb
        assert math.isclose(ab, math.sqrt(2.0))
