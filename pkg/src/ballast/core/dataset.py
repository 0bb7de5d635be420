"""Column-major dataset model with per-cell missingness.

A dataset is a list of typed feature columns sharing one row count, plus an
optional prediction target. Numeric columns store float64 values, categorical
columns store integer codes (with a side table of labels), text columns store
Python strings. Missing cells are tracked by a boolean mask per column; the
payload under a masked cell is meaningless.

Datasets are immutable after construction: every transformation returns a new
Dataset sharing the untouched column objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ballast.errors import DataError

NUMERIC = "numeric"
CATEGORICAL = "categorical"
TEXT = "text"

COLUMN_KINDS = (NUMERIC, CATEGORICAL, TEXT)


@dataclass(frozen=True, eq=False)
class FeatureColumn:
    """One named feature: typed values plus a missingness mask."""

    name: str
    kind: str
    values: np.ndarray
    missing_mask: np.ndarray
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in COLUMN_KINDS:
            raise DataError(f"unknown column kind {self.kind!r} for {self.name!r}")
        if len(self.values) != len(self.missing_mask):
            raise DataError(f"column {self.name!r}: mask length != value length")
        if self.kind == NUMERIC:
            present = np.asarray(self.values, dtype=float)[~self.missing_mask]
            if present.size and not np.all(np.isfinite(present)):
                raise DataError(f"column {self.name!r}: non-finite numeric values")
        if self.kind == CATEGORICAL:
            codes = np.asarray(self.values)[~self.missing_mask]
            if codes.size and codes.min() < 0:
                raise DataError(f"column {self.name!r}: negative categorical code")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_missing(self) -> int:
        return int(self.missing_mask.sum())

    def present_values(self) -> np.ndarray:
        """Values at non-missing rows."""
        return self.values[~self.missing_mask]


def numeric_column(name: str, values, missing_mask=None) -> FeatureColumn:
    """Build a numeric column; NaNs in `values` are folded into the mask."""
    arr = np.asarray(values, dtype=float)
    mask = np.zeros(arr.shape, dtype=bool) if missing_mask is None else np.asarray(missing_mask, dtype=bool)
    mask = mask | np.isnan(arr)
    arr = np.where(mask, 0.0, arr)
    return FeatureColumn(name, NUMERIC, arr, mask)


def categorical_column(name: str, labels, missing_mask=None) -> FeatureColumn:
    """Build a categorical column from string labels, coding by first appearance."""
    labels = list(labels)
    mask = np.zeros(len(labels), dtype=bool) if missing_mask is None else np.asarray(missing_mask, dtype=bool)
    table: dict[str, int] = {}
    codes = np.zeros(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if mask[i]:
            continue
        codes[i] = table.setdefault(str(lab), len(table))
    cats = tuple(sorted(table, key=table.get))
    return FeatureColumn(name, CATEGORICAL, codes, mask, cats)


def text_column(name: str, texts, missing_mask=None) -> FeatureColumn:
    texts = list(texts)
    mask = np.zeros(len(texts), dtype=bool) if missing_mask is None else np.asarray(missing_mask, dtype=bool)
    arr = np.array(["" if m else str(t) for t, m in zip(texts, mask)], dtype=object)
    return FeatureColumn(name, TEXT, arr, mask)


@dataclass(frozen=True, eq=False)
class Target:
    """Prediction target: integer class codes or real values."""

    name: str
    kind: str  # "binary" | "multiclass" | "real"
    values: np.ndarray
    classes: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class Dataset:
    columns: tuple[FeatureColumn, ...]
    n_rows: int
    target: Target | None = None
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate feature names: {dupes}")
        for c in self.columns:
            if len(c) != self.n_rows:
                raise DataError(f"column {c.name!r} has {len(c)} rows, dataset has {self.n_rows}")
        if self.target is not None and len(self.target) != self.n_rows:
            raise DataError("target length != n_rows")
        self._index.update({c.name: c for c in self.columns})

    @property
    def n_features(self) -> int:
        return len(self.columns)

    @property
    def feature_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> FeatureColumn:
        try:
            return self._index[name]
        except KeyError:
            raise DataError(f"no such feature: {name!r}") from None

    def select(self, names) -> "Dataset":
        """New dataset keeping `names`, in the original column order."""
        keep = set(names)
        unknown = keep - set(self.feature_names)
        if unknown:
            raise DataError(f"unknown features: {sorted(unknown)}")
        cols = tuple(c for c in self.columns if c.name in keep)
        return Dataset(cols, self.n_rows, self.target)

    def with_target(self, name: str, kind: str | None = None) -> "Dataset":
        """Move feature column `name` out of the feature set and use it as target."""
        col = self.column(name)
        if col.missing_mask.any():
            raise DataError(f"target column {name!r} has missing cells")
        if kind is None:
            if col.kind == NUMERIC:
                vals = np.asarray(col.values, dtype=float)
                distinct = np.unique(vals)
                # an integer column with two levels is a binary label
                is_binary = distinct.size == 2 and np.all(distinct == np.round(distinct))
                kind = "binary" if is_binary else "real"
            else:
                k = len(set(col.values.tolist()))
                kind = "binary" if k == 2 else "multiclass"
        if kind == "real":
            values = np.asarray(col.values, dtype=float)
            target = Target(name, kind, values)
        else:
            if col.kind == NUMERIC:
                # integer-coded labels stored in a numeric column
                codes_raw = np.asarray(col.values)
                uniq = np.unique(codes_raw)
                remap = {v: i for i, v in enumerate(uniq.tolist())}
                values = np.array([remap[v] for v in codes_raw.tolist()], dtype=np.int64)
                classes = tuple(str(v) for v in uniq.tolist())
            else:
                values = np.asarray(col.values, dtype=np.int64)
                classes = col.categories
            k = len(set(values.tolist()))
            if k < 2:
                raise DataError(f"target column {name!r} has a single class")
            kind = "binary" if k == 2 else "multiclass"
            target = Target(name, kind, values, classes)
        cols = tuple(c for c in self.columns if c.name != name)
        return Dataset(cols, self.n_rows, target)

    def numeric_matrix(
        self,
        include=(NUMERIC,),
        fill_missing: float | None = None,
    ) -> tuple[np.ndarray, list[str]]:
        """Dense float matrix over the included column kinds.

        Categorical columns contribute their integer codes. Missing cells
        become NaN unless `fill_missing` is given.
        """
        cols = [c for c in self.columns if c.kind in include]
        X = np.empty((self.n_rows, len(cols)), dtype=float)
        for j, c in enumerate(cols):
            X[:, j] = np.asarray(c.values, dtype=float)
            X[c.missing_mask, j] = np.nan if fill_missing is None else fill_missing
        return X, [c.name for c in cols]
