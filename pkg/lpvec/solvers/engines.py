"""
Matrix fixpoint engines

Each loop iterates a thresholded product from the initial vector until two
consecutive bit vectors agree. The iteration count includes the final
product that confirms the fixpoint.
"""

from __future__ import annotations

import logging
import time
from typing import Callable, List, Tuple

import numpy as np
from numpy.typing import NDArray

from lpvec.config import SUPPORT_FLOOR
from lpvec.errors import DimensionMismatchError, FixpointDivergenceError
from lpvec.linalg import (
    DRuleIndex,
    SparseMatrix,
    add_matrices,
    d_rule_index,
    d_rule_matrix,
    encode_d_program,
    encode_sd,
    gamma_k,
    initial_vector,
    matvec,
    theta,
    theta_d,
)
from lpvec.solvers.models import FixpointResult, PevalStats
from lpvec.transform.dprogram import DProgram

logger = logging.getLogger(__name__)

Step = Callable[[NDArray[np.uint8]], NDArray[np.uint8]]


def _iterate(
    step: Step, v0: NDArray[np.uint8], bound: int, record_trace: bool, name: str
) -> FixpointResult:
    current = np.asarray(v0, dtype=np.uint8)
    trace: List[NDArray[np.uint8]] = [current] if record_trace else []
    iterations = 0
    while True:
        following = step(current)
        iterations += 1
        if record_trace:
            trace.append(following)
        if np.array_equal(following, current):
            break
        if iterations > bound:
            raise FixpointDivergenceError(
                f"{name} did not stabilize within {bound} products"
            )
        current = following
    logger.debug("%s: fixpoint after %d products", name, iterations)
    return FixpointResult(vector=current, iterations=iterations, trace=tuple(trace))


def fixpoint_matrix(
    m: SparseMatrix, v0: NDArray[np.uint8], record_trace: bool = False
) -> FixpointResult:
    """Iterate ``v <- theta(M v)`` from ``v0``."""
    if m.rows != m.cols or m.cols != len(v0):
        raise DimensionMismatchError(
            f"fixpoint_matrix needs a square matrix matching |v0|={len(v0)}, "
            f"got {m.rows}x{m.cols}"
        )
    return _iterate(
        lambda v: theta(matvec(m, v)), v0, m.rows + 1, record_trace, "matrix"
    )


def fixpoint_colreduct(
    nmat: SparseMatrix,
    v0: NDArray[np.uint8],
    idx: DRuleIndex,
    record_trace: bool = False,
) -> FixpointResult:
    """Iterate ``v <- theta_D(max(N v[:n], v0))`` over the m x n submatrix.

    ``v0`` is merged in before d-rule propagation: facts on fresh atoms
    lose their diagonal entry to the truncated columns, and their d-rule
    heads must still fire.
    """
    n = nmat.cols
    if nmat.rows != len(v0):
        raise DimensionMismatchError(
            f"submatrix has {nmat.rows} rows but |v0|={len(v0)}"
        )
    start = np.asarray(v0, dtype=np.uint8)

    def step(v: NDArray[np.uint8]) -> NDArray[np.uint8]:
        return theta_d(np.maximum(matvec(nmat, v[:n]), start), idx)

    return _iterate(step, start, nmat.rows + 1, record_trace, "col_reduct")


def peval_matrix(dp: DProgram, k: int) -> Tuple[SparseMatrix, int]:
    """Gamma^k of the d-program, with M_D added back.

    Rows of M_Q with no entries (d-rule heads and undefined atoms) are
    closed with a diagonal 1 before squaring, so unfolding stops at them.
    The d-head rows are then replaced by M_D. Returns the matrix and the
    number of squarings.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return encode_d_program(dp), 0
    mq, closed = encode_sd(dp.q, dp.m).close_zero_rows()
    logger.debug(
        "peval: closed %d empty rows (%d d-rule heads)", len(closed), len(dp.d)
    )
    squared = gamma_k(mq, k, support_floor=SUPPORT_FLOOR)
    squared = squared.drop_rows(dp.d_heads)
    return add_matrices(squared, d_rule_matrix(dp), require_disjoint_rows=True), k


def fixpoint_peval(
    dp: DProgram, k: int, col_reduct: bool, record_trace: bool = False
) -> Tuple[FixpointResult, PevalStats, SparseMatrix]:
    start = time.perf_counter()
    gamma, squarings = peval_matrix(dp, k)
    gamma_time = time.perf_counter() - start
    stats = PevalStats(
        gamma_time=gamma_time, squarings=squarings, shape=gamma.shape, nnz=gamma.nnz
    )
    logger.debug(
        "peval k=%d: Gamma %s with %d entries in %.4fs",
        k,
        gamma.shape,
        gamma.nnz,
        gamma_time,
    )
    v0 = initial_vector(dp)
    if col_reduct:
        nmat = gamma.truncate_columns(dp.n)
        result = fixpoint_colreduct(nmat, v0, d_rule_index(dp), record_trace)
        return result, stats, nmat
    return fixpoint_matrix(gamma, v0, record_trace), stats, gamma
