"""Least-model engines behind one ``solve`` interface."""

from .engines import fixpoint_colreduct, fixpoint_matrix, fixpoint_peval, peval_matrix
from .models import (
    METHOD_CHOICES,
    FixpointResult,
    Method,
    MethodKind,
    PevalStats,
    SolveResult,
)
from .solve import solve

__all__ = [
    "METHOD_CHOICES",
    "FixpointResult",
    "Method",
    "MethodKind",
    "PevalStats",
    "SolveResult",
    "fixpoint_colreduct",
    "fixpoint_matrix",
    "fixpoint_peval",
    "peval_matrix",
    "solve",
]
