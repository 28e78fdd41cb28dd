"""Repeated squaring of program matrices."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from scipy import sparse

from lpvec.config import DROP_TOLERANCE
from lpvec.errors import DimensionMismatchError
from lpvec.linalg.matrix import SparseMatrix, matmul

logger = logging.getLogger(__name__)


def floor_support(matrix: SparseMatrix, floor: float) -> SparseMatrix:
    """Raise stored weights below ``floor`` and rescale each row.

    Every row keeps its support and its row sum.
    """
    csr = matrix.csr.copy()
    if not csr.nnz or csr.data.min() >= floor:
        return matrix
    before = np.asarray(csr.sum(axis=1)).ravel()
    np.maximum(csr.data, floor, out=csr.data)
    after = np.asarray(csr.sum(axis=1)).ravel()
    scale = np.divide(before, after, out=np.ones_like(before), where=after > 0)
    owners = np.repeat(np.arange(csr.shape[0]), np.diff(csr.indptr))
    csr.data *= scale[owners]
    return SparseMatrix(sparse.csr_matrix(csr))


def gamma_k(
    mq: SparseMatrix,
    k: int,
    support_floor: Optional[float] = None,
    drop_tolerance: Optional[float] = DROP_TOLERANCE,
) -> SparseMatrix:
    """``mq ** (2 ** k)`` by ``k`` squarings; ``k = 0`` returns ``mq``.

    With ``support_floor`` set, every squaring is followed by
    ``floor_support`` so that thresholding stays exact for large ``k``.
    """
    if mq.rows != mq.cols:
        raise DimensionMismatchError(
            f"gamma_k needs a square matrix, got {mq.rows}x{mq.cols}"
        )
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    current = mq
    for step in range(k):
        squared = matmul(current, current, drop_tolerance)
        if support_floor is not None:
            squared = floor_support(squared, support_floor)
        if squared.nnz == current.nnz and squared.allclose(current, atol=0.0):
            logger.debug("gamma_k stabilized after %d of %d squarings", step + 1, k)
            return squared
        current = squared
    return current
