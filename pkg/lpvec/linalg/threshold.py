from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from lpvec.config import THETA_TOLERANCE
from lpvec.linalg.encode import DRuleIndex
from lpvec.linalg.matrix import SparseMatrix, matvec
from lpvec.program.model import ConstraintCheck


def theta(v: NDArray, tolerance: float = THETA_TOLERANCE) -> NDArray[np.uint8]:
    """1 where ``v >= 1``, within ``tolerance``."""
    return (np.asarray(v, dtype=np.float64) >= 1.0 - tolerance).astype(np.uint8)


def theta_d(
    v: NDArray, idx: DRuleIndex, tolerance: float = THETA_TOLERANCE
) -> NDArray[np.uint8]:
    """theta, then every fired fresh atom also sets its d-rule head."""
    bits = theta(v, tolerance)
    if len(idx):
        fired = bits[idx.sources] == 1
        bits[idx.targets[fired]] = 1
    return bits


def check_constraints_vec(mc: SparseMatrix, v: NDArray) -> ConstraintCheck:
    """A constraint row whose product reaches 1 is violated."""
    hits = theta(matvec(mc, v))
    return ConstraintCheck(tuple(int(i) for i in np.flatnonzero(hits)))
