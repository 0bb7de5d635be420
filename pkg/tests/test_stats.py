import numpy as np
import pytest

from ballast.core.dataset import categorical_column, numeric_column
from ballast.errors import DataError
from ballast.stats import (
    mi_from_table,
    mutual_information,
    normalized_entropy,
    profile_column,
    quantile_bins,
    shannon_entropy,
    sparsity,
    variance,
)
from helpers import bf_entropy_bits, bf_mi_bits


class TestEntropy:
    def test_analytic_value(self):
        col = categorical_column("c", ["a", "a", "b", "c"])
        assert shannon_entropy(col) == pytest.approx(1.5, abs=1e-12)

    def test_uniform_four_values(self):
        col = categorical_column("c", ["a", "b", "c", "d"])
        assert shannon_entropy(col) == pytest.approx(2.0, abs=1e-12)

    def test_constant_is_zero(self):
        assert shannon_entropy(numeric_column("c", [5.0] * 10)) == 0.0

    def test_all_missing_raises(self):
        col = numeric_column("c", [np.nan, np.nan])
        with pytest.raises(DataError, match="empty support"):
            shannon_entropy(col)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(0)
        values = rng.normal(size=200)
        col = numeric_column("c", values)
        shuffled = numeric_column("c", rng.permutation(values))
        assert shannon_entropy(col) == pytest.approx(shannon_entropy(shuffled), abs=1e-12)

    def test_matches_bruteforce_on_categories(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            labels = rng.choice(list("abcdef"), size=int(rng.integers(2, 60))).tolist()
            col = categorical_column("c", labels)
            assert shannon_entropy(col) == pytest.approx(bf_entropy_bits(labels), abs=1e-12)


class TestNormalizedEntropy:
    def test_uniform_is_one(self):
        assert normalized_entropy(categorical_column("c", list("abcd"))) == pytest.approx(1.0)

    def test_constant_is_zero(self):
        assert normalized_entropy(numeric_column("c", [1.0, 1.0])) == 0.0

    def test_derived_value(self):
        col = categorical_column("c", ["a", "a", "b", "c"])
        assert normalized_entropy(col) == pytest.approx(1.5 / np.log2(3), abs=1e-12)


class TestQuantileBins:
    def test_balanced_populations_for_distinct_values(self):
        rng = np.random.default_rng(2)
        for n in [16, 17, 100, 257]:
            bins = quantile_bins(rng.permutation(np.arange(n, dtype=float)), 16)
            counts = np.bincount(bins, minlength=16)
            assert counts.max() - counts.min() <= 1

    def test_ties_share_a_bin(self):
        values = np.array([0.0] * 50 + [1.0, 2.0, 3.0])
        bins = quantile_bins(values, 4)
        assert len(set(bins[:50].tolist())) == 1


class TestMutualInformation:
    def test_perfect_dependence_is_one_bit(self):
        y = np.array([0, 1] * 50, dtype=np.int64)
        col = categorical_column("c", ["a" if v == 0 else "b" for v in y])
        assert mutual_information(col, y) == pytest.approx(1.0, abs=1e-12)

    def test_exact_independence_is_zero(self):
        # product joint: every (x, y) cell appears equally often
        xs, ys = [], []
        for a in range(3):
            for b in range(2):
                xs += [f"v{a}"] * 5
                ys += [b] * 5
        col = categorical_column("c", xs)
        assert mutual_information(col, np.array(ys, dtype=np.int64)) == 0.0

    def test_derived_joint_table(self):
        assert mi_from_table([[0.4, 0.1], [0.1, 0.4]]) == pytest.approx(0.2781, abs=1e-4)

    def test_degenerate_target_raises(self):
        col = categorical_column("c", list("ab") * 5)
        with pytest.raises(DataError, match="degenerate target"):
            mutual_information(col, np.zeros(10, dtype=np.int64))

    def test_missing_rows_dropped_pairwise(self):
        values = [1.0, 2.0, np.nan, 4.0]
        col = numeric_column("c", values)
        y = np.array([0, 1, 0, 1], dtype=np.int64)
        assert mutual_information(col, y, bins=2) >= 0.0

    def test_matches_bruteforce_on_random_tables(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            table = rng.integers(0, 8, size=(int(rng.integers(2, 5)), int(rng.integers(2, 5))))
            table[0, 0] += 1  # nonempty
            assert mi_from_table(table) == pytest.approx(
                max(bf_mi_bits(table), 0.0), abs=1e-12
            )

    def test_bounded_by_marginal_entropies(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            table = rng.integers(0, 6, size=(3, 3)) + 1
            mi = mi_from_table(table)
            hx = bf_entropy_bits(np.repeat(np.arange(3), table.sum(axis=1)).tolist())
            hy = bf_entropy_bits(np.repeat(np.arange(3), table.sum(axis=0)).tolist())
            assert mi <= min(hx, hy) + 1e-12

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        table = rng.integers(1, 9, size=(4, 3))
        assert mi_from_table(table) == pytest.approx(mi_from_table(table.T), abs=1e-12)


class TestVarianceSparsity:
    def test_constant_column(self):
        col = numeric_column("c", [1.0, 1.0, 1.0])
        assert variance(col) == 0.0
        assert sparsity(col) == 0.0

    def test_mostly_zero_column(self):
        assert sparsity(numeric_column("c", [0.0, 0.0, 0.0, 5.0])) == 0.75

    def test_population_variance(self):
        assert variance(numeric_column("c", [1, 2, 3, 4])) == pytest.approx(1.25)

    def test_missing_counts_toward_sparsity(self):
        col = numeric_column("c", [np.nan, 0.0, 1.0, 1.0])
        assert sparsity(col) == 0.5

    def test_all_missing_raises(self):
        with pytest.raises(DataError):
            variance(numeric_column("c", [np.nan]))


class TestProfile:
    def test_profile_includes_mi_only_with_target(self):
        col = numeric_column("c", np.random.default_rng(0).normal(size=40))
        assert profile_column(col).mi_bits is None
        y = np.array([0, 1] * 20, dtype=np.int64)
        assert profile_column(col, y).mi_bits is not None
