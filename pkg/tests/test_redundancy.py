import numpy as np
import pytest

from ballast.errors import DataError
from ballast.redundancy import (
    average_ranks,
    correlation_filter,
    correlation_matrix,
    cosine_similarity,
    iou,
    js_divergence,
)
from helpers import bf_iou, bf_js_bits


class TestCorrelationMatrix:
    def test_self_correlation_is_one(self):
        X = np.random.default_rng(0).normal(size=(50, 2))
        cm = correlation_matrix(X)
        assert cm.values[0, 0] == pytest.approx(1.0)

    def test_negation_is_minus_one(self):
        x = np.random.default_rng(1).normal(size=40)
        cm = correlation_matrix(np.column_stack([x, -x]))
        assert cm.values[0, 1] == pytest.approx(-1.0)

    def test_spearman_invariant_under_monotone_transform(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=60)
        y = rng.normal(size=60)
        base = correlation_matrix(np.column_stack([x, y]), "spearman").values[0, 1]
        for transform in (np.exp, lambda v: v**3, lambda v: 5 * v + 2):
            warped = correlation_matrix(np.column_stack([transform(x), y]), "spearman")
            assert warped.values[0, 1] == pytest.approx(base, abs=1e-12)

    def test_strictly_monotone_transform_gives_spearman_one(self):
        x = np.random.default_rng(3).normal(size=30)
        cm = correlation_matrix(np.column_stack([x, np.exp(x)]), "spearman")
        assert cm.values[0, 1] == pytest.approx(1.0)

    def test_degenerate_pair_marked_invalid(self):
        X = np.column_stack([np.ones(10), np.arange(10.0)])
        cm = correlation_matrix(X)
        assert not cm.valid[0, 1]
        assert cm.values[0, 1] == 0.0

    def test_pairwise_complete_rows(self):
        x = np.array([1.0, 2, 3, 4, np.nan])
        y = np.array([2.0, 4, 6, np.nan, 10])
        cm = correlation_matrix(np.column_stack([x, y]))
        assert cm.values[0, 1] == pytest.approx(1.0)  # first three rows align exactly

    def test_average_ranks_ties(self):
        np.testing.assert_allclose(average_ranks(np.array([1.0, 1.0, 2.0])), [1.5, 1.5, 3.0])


class TestCorrelationFilter:
    def test_duplicate_pair_drops_exactly_one(self):
        x = np.arange(20.0)
        cm = correlation_matrix(np.column_stack([x, x + 0.0, np.random.default_rng(0).normal(size=20)]))
        kept, dropped = correlation_filter(cm, 0.95)
        assert len(dropped) == 1
        assert dropped[0] in ("f0", "f1")

    def test_three_mutual_duplicates_keep_one(self):
        x = np.arange(30.0)
        cm = correlation_matrix(np.column_stack([x, x, x]))
        kept, dropped = correlation_filter(cm, 0.95)
        assert kept == ["f0"]
        assert dropped == ["f1", "f2"]

    def test_threshold_is_strict(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(100, 4))
        cm = correlation_matrix(X)
        kept, dropped = correlation_filter(cm, 1.0)
        assert dropped == []
        assert kept == cm.names

    def test_partition_and_no_violating_kept_pair(self):
        rng = np.random.default_rng(5)
        base = rng.normal(size=(80, 4))
        X = np.column_stack([base, base[:, 0] + 1e-6 * rng.normal(size=80), base[:, 2]])
        cm = correlation_matrix(X)
        kept, dropped = correlation_filter(cm, 0.9)
        assert sorted(kept + dropped) == sorted(cm.names)
        idx = {n: i for i, n in enumerate(cm.names)}
        for a in kept:
            for b in kept:
                if a < b and cm.valid[idx[a], idx[b]]:
                    assert abs(cm.values[idx[a], idx[b]]) <= 0.9

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(60, 5))
        X[:, 3] = X[:, 1]
        cm = correlation_matrix(X)
        assert correlation_filter(cm, 0.95) == correlation_filter(cm, 0.95)


class TestCosine:
    def test_identical(self):
        assert cosine_similarity([1.0, 2.0], [1.0, 2.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)

    def test_analytic(self):
        assert cosine_similarity([1.0, 1.0], [1.0, 0.0]) == pytest.approx(0.7071, abs=1e-4)

    def test_zero_vector_raises(self):
        with pytest.raises(DataError, match="zero vector"):
            cosine_similarity([0.0, 0.0], [1.0, 0.0])


class TestIou:
    def test_equal_sets(self):
        assert iou({"a", "b"}, {"a", "b"}) == 1.0

    def test_disjoint(self):
        assert iou({"a"}, {"b"}) == 0.0

    def test_partial_overlap(self):
        assert iou({"a", "b"}, {"b", "c"}) == pytest.approx(1 / 3)

    def test_both_empty_defined_zero(self):
        assert iou(set(), set()) == 0.0

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(7)
        universe = list(range(30))
        for _ in range(50):
            a = set(rng.choice(universe, size=int(rng.integers(0, 12)), replace=False).tolist())
            b = set(rng.choice(universe, size=int(rng.integers(0, 12)), replace=False).tolist())
            assert iou(a, b) == pytest.approx(bf_iou(a, b), abs=1e-12)


class TestJsDivergence:
    def test_identity_is_zero(self):
        p = np.array([0.2, 0.3, 0.5])
        assert js_divergence(p, p) == 0.0

    def test_disjoint_point_masses_hit_one(self):
        assert js_divergence([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)

    def test_derived_value(self):
        assert js_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.3113, abs=1e-4)

    def test_symmetry_and_range_on_random_simplex_pairs(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            k = int(rng.integers(2, 6))
            p = rng.dirichlet(np.ones(k))
            q = rng.dirichlet(np.ones(k))
            forward = js_divergence(p, q)
            assert forward == js_divergence(q, p)
            assert 0.0 <= forward <= 1.0
            assert forward == pytest.approx(bf_js_bits(p, q), abs=1e-12)

    def test_validation(self):
        with pytest.raises(DataError, match="sum to 1"):
            js_divergence([0.9, 0.0], [0.5, 0.5])
        with pytest.raises(DataError, match="negative"):
            js_divergence([1.5, -0.5], [0.5, 0.5])
