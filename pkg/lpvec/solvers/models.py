from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Literal, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from lpvec.linalg.matrix import SparseMatrix
from lpvec.program.model import Interpretation


class MethodKind(str, Enum):
    TP = "tp"
    MATRIX = "matrix"
    COL_REDUCT = "col_reduct"
    PEVAL = "peval"
    PEVAL_COL_REDUCT = "peval_col_reduct"

    @property
    def uses_k(self) -> bool:
        return self in (MethodKind.PEVAL, MethodKind.PEVAL_COL_REDUCT)


_ALIASES = {
    "tp": MethodKind.TP,
    "matrix": MethodKind.MATRIX,
    "col-reduct": MethodKind.COL_REDUCT,
    "col_reduct": MethodKind.COL_REDUCT,
    "peval": MethodKind.PEVAL,
    "peval-cr": MethodKind.PEVAL_COL_REDUCT,
    "peval_cr": MethodKind.PEVAL_COL_REDUCT,
    "peval_col_reduct": MethodKind.PEVAL_COL_REDUCT,
}
METHOD_CHOICES = ("tp", "matrix", "col-reduct", "peval", "peval-cr")


class Method(BaseModel):
    """A solver engine; ``k`` only matters for the peval kinds."""

    model_config = ConfigDict(frozen=True)

    kind: MethodKind
    k: int = Field(default=0, ge=0)

    @classmethod
    def parse(cls, name: str, k: int = 0) -> "Method":
        try:
            kind = _ALIASES[name.strip().lower()]
        except KeyError:
            raise ValueError(
                f"unknown method '{name}'; expected one of {', '.join(METHOD_CHOICES)}"
            ) from None
        return cls.of(kind, k)

    @classmethod
    def of(cls, kind: MethodKind, k: int = 0) -> "Method":
        return cls(kind=kind, k=k if kind.uses_k else 0)

    @property
    def uses_k(self) -> bool:
        return self.kind.uses_k

    @property
    def label(self) -> str:
        if self.uses_k:
            return f"{self.kind.value}(k={self.k})"
        return self.kind.value


@dataclass(frozen=True)
class FixpointResult:
    """Final bit vector of a fixpoint loop.

    ``trace`` holds every iterate, starting with the initial vector, when
    the loop was asked to record it.
    """

    vector: NDArray[np.uint8]
    iterations: int
    trace: Tuple[NDArray[np.uint8], ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class PevalStats:
    gamma_time: float
    squarings: int
    shape: Tuple[int, int]
    nnz: int


class SolveResult(BaseModel):
    """Least model plus the metrics of one solver run."""

    method: str
    k: int = 0
    model: List[str]
    model_ids: List[int]
    iterations: int = Field(ge=1)
    transform_time: float = 0.0
    encode_time: float = 0.0
    peval_time: float = 0.0
    fixpoint_time: float = 0.0
    total_time: float = 0.0
    matrix_shape: Tuple[int, int] = (0, 0)
    nnz: int = 0
    density: float = 0.0
    compression: float = Field(default=0.0, ge=0.0, lt=1.0)
    original_base_size: int
    extended_base_size: int
    consistency: Optional[Literal["consistent", "inconsistent"]] = None
    violated_constraints: List[str] = Field(default_factory=list)

    _matrix: Optional[SparseMatrix] = PrivateAttr(default=None)

    @property
    def matrix(self) -> Optional[SparseMatrix]:
        """The matrix the fixpoint loop iterated, when one was used."""
        return self._matrix

    @property
    def interpretation(self) -> Interpretation:
        return Interpretation.of(self.model_ids)

    @property
    def model_size(self) -> int:
        return len(self.model_ids)
