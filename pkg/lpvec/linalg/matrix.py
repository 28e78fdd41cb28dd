"""
Sparse program matrices

``SparseMatrix`` wraps a canonical ``scipy.sparse.csr_matrix``: float64
weights, sorted column indices, no duplicates and no stored zeros. All
operations return new matrices.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from lpvec.config import DROP_TOLERANCE
from lpvec.errors import DimensionMismatchError

logger = logging.getLogger(__name__)


class SparseMatrix:
    """Immutable row-major sparse matrix with positive weights."""

    __slots__ = ("_csr",)

    def __init__(self, csr: sparse.spmatrix | sparse.sparray):
        matrix = sparse.csr_matrix(csr, dtype=np.float64, copy=True)
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        matrix.sort_indices()
        if matrix.nnz and matrix.data.min() < 0:
            raise ValueError("program matrix weights must be positive")
        self._csr = matrix

    @classmethod
    def from_entries(
        cls, rows: int, cols: int, entries: Iterable[Tuple[int, int, float]]
    ) -> "SparseMatrix":
        triples = list(entries)
        if not triples:
            return cls.zeros(rows, cols)
        r, c, w = zip(*triples)
        return cls(sparse.coo_matrix((w, (r, c)), shape=(rows, cols)))

    @classmethod
    def from_rows(
        cls, rows: Sequence[Mapping[int, float]], cols: int
    ) -> "SparseMatrix":
        """One ``{column: weight}`` mapping per row."""
        return cls.from_entries(
            len(rows),
            cols,
            ((i, j, w) for i, row in enumerate(rows) for j, w in row.items()),
        )

    @classmethod
    def from_dense(cls, dense: NDArray[np.float64]) -> "SparseMatrix":
        return cls(sparse.csr_matrix(np.asarray(dense, dtype=np.float64)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(sparse.csr_matrix((rows, cols), dtype=np.float64))

    @classmethod
    def identity(cls, dim: int) -> "SparseMatrix":
        return cls(sparse.identity(dim, dtype=np.float64, format="csr"))

    @property
    def csr(self) -> sparse.csr_matrix:
        return self._csr

    @property
    def shape(self) -> Tuple[int, int]:
        rows, cols = self._csr.shape
        return int(rows), int(cols)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def nnz(self) -> int:
        return int(self._csr.nnz)

    @property
    def density(self) -> float:
        cells = self.rows * self.cols
        return self.nnz / cells if cells else 0.0

    def to_dense(self) -> NDArray[np.float64]:
        return self._csr.toarray()

    def row(self, i: int) -> Dict[int, float]:
        start, stop = self._csr.indptr[i], self._csr.indptr[i + 1]
        return {
            int(j): float(w)
            for j, w in zip(self._csr.indices[start:stop], self._csr.data[start:stop])
        }

    def row_nnz(self) -> NDArray[np.int64]:
        return np.diff(self._csr.indptr).astype(np.int64)

    def row_sums(self) -> NDArray[np.float64]:
        return np.asarray(self._csr.sum(axis=1)).ravel()

    def truncate_columns(self, n: int) -> "SparseMatrix":
        """Keep the first ``n`` columns."""
        if not 0 <= n <= self.cols:
            raise DimensionMismatchError(
                f"cannot keep {n} columns of a {self.rows}x{self.cols} matrix"
            )
        return SparseMatrix(self._csr[:, :n])

    def drop_rows(self, ids: Iterable[int]) -> "SparseMatrix":
        """Zero the given rows; the shape is unchanged."""
        keep = np.ones(self.rows, dtype=np.float64)
        keep[list(ids)] = 0.0
        return SparseMatrix(sparse.diags(keep, format="csr") @ self._csr)

    def close_zero_rows(self) -> Tuple["SparseMatrix", Tuple[int, ...]]:
        """Put weight 1 on the diagonal of every all-zero row.

        Returns the closed matrix and the ids of the rows that were closed.
        """
        if self.rows != self.cols:
            raise DimensionMismatchError(
                f"close_zero_rows needs a square matrix, got {self.rows}x{self.cols}"
            )
        empty = np.flatnonzero(self.row_nnz() == 0)
        if not empty.size:
            return self, ()
        loops = sparse.csr_matrix(
            (np.ones(empty.size), (empty, empty)), shape=self.shape
        )
        return SparseMatrix(self._csr + loops), tuple(int(i) for i in empty)

    def allclose(self, other: "SparseMatrix", atol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        diff = abs(self._csr - other._csr)
        return diff.nnz == 0 or float(diff.max()) <= atol

    def dumps(self) -> str:
        """Debug dump: ``rows cols nnz`` then one ``row col weight`` per line."""
        coo = self._csr.tocoo()
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines.extend(
            f"{int(i)} {int(j)} {w:.17g}" for i, j, w in zip(coo.row, coo.col, coo.data)
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SparseMatrix":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty matrix dump")
        try:
            rows, cols, nnz = (int(x) for x in lines[0].split())
        except ValueError:
            raise ValueError(
                f"matrix dump header must be 'rows cols nnz', got '{lines[0]}'"
            ) from None
        if len(lines) - 1 != nnz:
            raise ValueError(
                f"matrix dump declares {nnz} entries but has {len(lines) - 1}"
            )
        entries = []
        for line in lines[1:]:
            i, j, w = line.split()
            entries.append((int(i), int(j), float(w)))
        return cls.from_entries(rows, cols, entries)

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


def _check_vector(m: SparseMatrix, v: NDArray) -> NDArray[np.float64]:
    vector = np.asarray(v, dtype=np.float64).ravel()
    if vector.shape[0] != m.cols:
        raise DimensionMismatchError(
            f"vector of length {vector.shape[0]} cannot multiply a "
            f"{m.rows}x{m.cols} matrix"
        )
    return vector


def matvec(m: SparseMatrix, v: NDArray) -> NDArray[np.float64]:
    """Real matrix-vector product."""
    return np.asarray(m.csr @ _check_vector(m, v), dtype=np.float64)


def matmul(
    a: SparseMatrix, b: SparseMatrix, drop_tolerance: Optional[float] = DROP_TOLERANCE
) -> SparseMatrix:
    """Sparse product; stored weights below ``drop_tolerance`` are pruned."""
    if a.cols != b.rows:
        raise DimensionMismatchError(
            f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}"
        )
    product = sparse.csr_matrix(a.csr @ b.csr)
    if drop_tolerance:
        small = product.data < drop_tolerance
        if small.any():
            logger.debug("matmul pruned %d entries", int(small.sum()))
            product.data[small] = 0.0
    return SparseMatrix(product)


def add_matrices(
    a: SparseMatrix, b: SparseMatrix, require_disjoint_rows: bool = False
) -> SparseMatrix:
    """Entrywise sum.

    With ``require_disjoint_rows`` no row may be nonempty in both operands.
    """
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot add {a.shape} and {b.shape} matrices")
    if require_disjoint_rows:
        both = np.flatnonzero((a.row_nnz() > 0) & (b.row_nnz() > 0))
        if both.size:
            raise ValueError(
                f"operands share nonempty rows {both[:10].tolist()}; "
                "expected disjoint row supports"
            )
    return SparseMatrix(a.csr + b.csr)
