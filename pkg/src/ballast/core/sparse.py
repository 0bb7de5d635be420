"""CSR matrix storage and byte accounting.

The byte model is fixed: 8-byte float values, 4-byte column indices and row
offsets. This keeps storage-savings figures bit-exact:

    dense_bytes = n_rows * n_cols * 8
    csr_bytes   = nnz * (8 + 4) + (n_rows + 1) * 4

Explicit zeros are never stored; converting dense -> CSR drops them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ballast.errors import DataError


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Compressed-sparse-row matrix (float64 values, int32 structure)."""

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        off = np.asarray(self.row_offsets)
        if len(off) != self.n_rows + 1:
            raise DataError("row_offsets length must be n_rows + 1")
        if off[0] != 0 or np.any(np.diff(off) < 0):
            raise DataError("row_offsets must start at 0 and be nondecreasing")
        nnz = int(off[-1])
        if len(self.col_indices) != nnz or len(self.values) != nnz:
            raise DataError("col_indices/values length must equal nnz")
        ci = np.asarray(self.col_indices)
        if nnz and (ci.min() < 0 or ci.max() >= self.n_cols):
            raise DataError("column index out of range")
        for r in range(self.n_rows):
            row = ci[off[r]:off[r + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise DataError(f"row {r}: column indices not strictly increasing")

    @property
    def nnz(self) -> int:
        return int(self.row_offsets[-1])

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrix":
        """Convert a dense matrix, dropping exact zeros (structural)."""
        dense = np.asarray(dense, dtype=float)
        if dense.ndim != 2:
            raise DataError("expected a 2-D matrix")
        if not np.all(np.isfinite(dense)):
            raise DataError("dense matrix contains non-finite values")
        n_rows, n_cols = dense.shape
        rows, cols = np.nonzero(dense)
        values = dense[rows, cols]
        offsets = np.zeros(n_rows + 1, dtype=np.int32)
        np.add.at(offsets, rows + 1, 1)
        offsets = np.cumsum(offsets, dtype=np.int32)
        return cls(n_rows, n_cols, offsets, cols.astype(np.int32), values.astype(float))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=float)
        off = self.row_offsets
        for r in range(self.n_rows):
            sl = slice(int(off[r]), int(off[r + 1]))
            out[r, self.col_indices[sl]] = self.values[sl]
        return out

    def row(self, r: int) -> np.ndarray:
        """Single row as a dense vector."""
        out = np.zeros(self.n_cols, dtype=float)
        sl = slice(int(self.row_offsets[r]), int(self.row_offsets[r + 1]))
        out[self.col_indices[sl]] = self.values[sl]
        return out


@dataclass(frozen=True)
class StorageBytes:
    dense_bytes: int
    csr_bytes: int
    savings_percent: float


def storage_bytes(matrix) -> StorageBytes:
    """Byte footprint of a matrix stored dense vs CSR.

    Accepts a dense ndarray (NaN cells count as not stored) or a SparseMatrix.
    """
    if isinstance(matrix, SparseMatrix):
        n_rows, n_cols, nnz = matrix.n_rows, matrix.n_cols, matrix.nnz
    else:
        dense = np.asarray(matrix, dtype=float)
        if dense.ndim != 2:
            raise DataError("expected a 2-D matrix")
        n_rows, n_cols = dense.shape
        with np.errstate(invalid="ignore"):
            nnz = int(np.count_nonzero(np.nan_to_num(dense, nan=0.0)))
    dense_bytes = n_rows * n_cols * 8
    csr_bytes = nnz * (8 + 4) + (n_rows + 1) * 4
    savings = 100.0 * (1.0 - csr_bytes / dense_bytes) if dense_bytes else 0.0
    return StorageBytes(dense_bytes, csr_bytes, savings)
