import numpy as np
import pytest

from ballast.core import SparseMatrix, flatten_jsonl, ingest_signals, load_csv, storage_bytes
from ballast.core.io import write_csv
from ballast.errors import DataError


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_numeric_and_categorical_inference(self, tmp_path):
        ds = load_csv(write(tmp_path, "t.csv", "a,b\n1,x\n2,y\n,z\n"))
        a, b = ds.columns
        assert a.kind == "numeric" and a.n_missing == 1
        assert b.kind == "categorical" and b.n_missing == 0
        assert ds.n_rows == 3

    def test_empty_file_is_no_header(self, tmp_path):
        with pytest.raises(DataError, match="no header"):
            load_csv(write(tmp_path, "e.csv", ""))

    def test_stray_token_becomes_missing_under_majority_rule(self, tmp_path):
        rows = "\n".join(str(i) for i in range(19))
        ds = load_csv(write(tmp_path, "m.csv", f"a\n{rows}\nNA\n"))
        col = ds.columns[0]
        assert col.kind == "numeric"
        assert col.n_missing == 1
        assert col.missing_mask[-1]

    def test_mostly_text_column_goes_categorical(self, tmp_path):
        ds = load_csv(write(tmp_path, "c.csv", "a\n1\nx\ny\nz\n"))
        assert ds.columns[0].kind == "categorical"

    def test_duplicate_header_rejected(self, tmp_path):
        with pytest.raises(DataError, match="duplicate"):
            load_csv(write(tmp_path, "d.csv", "a,a\n1,2\n"))

    def test_ragged_row_rejected(self, tmp_path):
        with pytest.raises(DataError, match="expected 2 fields"):
            load_csv(write(tmp_path, "r.csv", "a,b\n1\n"))

    def test_schema_override(self, tmp_path):
        ds = load_csv(write(tmp_path, "s.csv", "a\n1\n2\n"), schema={"a": "categorical"})
        assert ds.columns[0].kind == "categorical"

    def test_roundtrip_through_write_csv(self, tmp_path):
        ds = load_csv(write(tmp_path, "t.csv", "a,b\n1,x\n2,y\n,z\n"))
        out = tmp_path / "out.csv"
        write_csv(ds, out)
        again = load_csv(out)
        assert again.feature_names == ds.feature_names
        assert again.columns[0].n_missing == 1
        np.testing.assert_array_equal(
            again.columns[0].present_values(), ds.columns[0].present_values()
        )


class TestFlattenJsonl:
    def test_nested_keys_become_dotted_columns(self, tmp_path):
        ds = flatten_jsonl(write(tmp_path, "a.jsonl", '{"a":{"b":1}}\n{"a":{"b":2}}\n'))
        assert ds.feature_names == ["a.b"]
        assert ds.columns[0].kind == "numeric"

    def test_absent_key_is_missing(self, tmp_path):
        ds = flatten_jsonl(write(tmp_path, "b.jsonl", '{"price":1.5}\n{"other":2}\n'))
        price = ds.column("price")
        assert price.n_missing == 1
        assert not price.missing_mask[0] and price.missing_mask[1]

    def test_join_tokens_list_policy(self, tmp_path):
        ds = flatten_jsonl(write(tmp_path, "c.jsonl", '{"tags":["x","y"]}\n'), "join_tokens")
        col = ds.column("tags")
        assert col.kind == "text"
        assert col.values[0] == "x y"

    def test_count_and_drop_policies(self, tmp_path):
        path = write(tmp_path, "d.jsonl", '{"tags":["x","y"],"n":1}\n')
        counted = flatten_jsonl(path, "count")
        assert counted.column("tags").values[0] == 2.0
        dropped = flatten_jsonl(path, "drop")
        assert dropped.feature_names == ["n"]

    def test_column_order_is_first_appearance(self, tmp_path):
        ds = flatten_jsonl(write(tmp_path, "e.jsonl", '{"z":1,"a":2}\n{"m":3}\n'))
        assert ds.feature_names == ["z", "a", "m"]

    def test_malformed_line_fatal_or_skipped(self, tmp_path):
        path = write(tmp_path, "f.jsonl", '{"a":1}\nnot json\n{"a":2}\n')
        with pytest.raises(DataError, match=":2"):
            flatten_jsonl(path)
        ds = flatten_jsonl(path, strict=False)
        assert ds.n_rows == 2


class TestIngestSignals:
    def test_load_utility_and_redundancy_rows(self, tmp_path):
        path = write(
            tmp_path,
            "s.csv",
            "feature_id,signal,kind,value\nf1,shap,utility,0.012\nf2,cosine_max,redundancy,0.97\n",
        )
        table = ingest_signals(path)
        assert table.get("f1", "shap").raw == pytest.approx(0.012)
        assert table.get("f2", "cosine_max").kind == "redundancy"

    def test_duplicate_pair_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "dup.csv",
            "feature_id,signal,kind,value\nf1,shap,utility,1\nf1,shap,utility,2\n",
        )
        with pytest.raises(DataError, match="duplicate"):
            ingest_signals(path)

    def test_unknown_kind_rejected(self, tmp_path):
        path = write(tmp_path, "k.csv", "feature_id,signal,kind,value\nf1,shap,bogus,1\n")
        with pytest.raises(DataError, match="unknown kind"):
            ingest_signals(path)


class TestSparse:
    def test_empty_matrix_bytes(self):
        rep = storage_bytes(np.zeros((100, 100)))
        assert rep.dense_bytes == 80_000
        assert rep.csr_bytes == 404

    def test_fully_dense_savings_negative(self):
        rep = storage_bytes(np.ones((100, 100)))
        assert rep.csr_bytes > rep.dense_bytes
        assert rep.savings_percent < 0

    def test_sparse_savings_formula(self):
        dense = np.zeros((100, 100))
        dense.flat[np.random.default_rng(0).choice(10_000, 254, replace=False)] = 1.0
        rep = storage_bytes(dense)
        assert rep.csr_bytes == 254 * 12 + 101 * 4
        assert rep.savings_percent == pytest.approx(95.685)

    def test_dense_roundtrip_exact(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            dense = rng.normal(size=(8, 11))
            dense[rng.random(dense.shape) < 0.1] = 0.0  # explicit zeros become structural
            again = SparseMatrix.from_dense(dense).to_dense()
            np.testing.assert_array_equal(again, dense)

    def test_savings_strictly_decreasing_in_nnz(self):
        rng = np.random.default_rng(1)
        prev = None
        for nnz in [0, 10, 100, 500, 2000]:
            dense = np.zeros((50, 60))
            idx = rng.choice(3000, nnz, replace=False)
            dense.flat[idx] = 1.0
            savings = storage_bytes(dense).savings_percent
            if prev is not None:
                assert savings < prev
            prev = savings

    def test_structure_validation(self):
        with pytest.raises(DataError):
            SparseMatrix(2, 2, np.array([0, 1]), np.array([0], np.int32), np.array([1.0]))
        with pytest.raises(DataError, match="strictly increasing"):
            SparseMatrix(
                1, 3, np.array([0, 2]), np.array([1, 1], np.int32), np.array([1.0, 2.0])
            )
