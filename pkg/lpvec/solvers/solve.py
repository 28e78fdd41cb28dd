"""Single entry point over every least-model engine."""

from __future__ import annotations

import logging
from typing import Optional

from lpvec.linalg import (
    check_constraints_vec,
    d_rule_index,
    encode_constraints,
    encode_d_program,
    encode_submatrix,
    initial_vector,
)
from lpvec.linalg.matrix import SparseMatrix
from lpvec.program.model import ConstraintSet, DefiniteProgram, Interpretation
from lpvec.program.tp import tp_least_model
from lpvec.solvers.engines import (
    fixpoint_colreduct,
    fixpoint_matrix,
    fixpoint_peval,
)
from lpvec.solvers.models import FixpointResult, Method, MethodKind, SolveResult
from lpvec.transform.dprogram import restrict_model, to_d_program
from lpvec.utils.timing import Stopwatch

logger = logging.getLogger(__name__)


def solve(
    program: DefiniteProgram,
    method: Method,
    constraints: Optional[ConstraintSet] = None,
) -> SolveResult:
    """Compute the least model of ``program`` with ``method``.

    The model is restricted to the original atoms. Constraints, when
    given, are checked against it afterwards.
    """
    watch = Stopwatch()
    n = program.n
    matrix: Optional[SparseMatrix] = None

    if method.kind is MethodKind.TP:
        with watch.phase("fixpoint"):
            model, iterations = tp_least_model(program)
        m = n
        compression = 0.0
    else:
        with watch.phase("transform"):
            dp = to_d_program(program)
        m = dp.m
        compression = dp.compression
        fixpoint: FixpointResult
        if method.kind is MethodKind.MATRIX:
            with watch.phase("encode"):
                matrix = encode_d_program(dp)
                v0 = initial_vector(dp)
            with watch.phase("fixpoint"):
                fixpoint = fixpoint_matrix(matrix, v0)
        elif method.kind is MethodKind.COL_REDUCT:
            with watch.phase("encode"):
                matrix = encode_submatrix(dp)
                v0 = initial_vector(dp)
                idx = d_rule_index(dp)
            with watch.phase("fixpoint"):
                fixpoint = fixpoint_colreduct(matrix, v0, idx)
        else:
            with watch.phase("fixpoint"):
                fixpoint, stats, matrix = fixpoint_peval(
                    dp, method.k, col_reduct=method.kind is MethodKind.PEVAL_COL_REDUCT
                )
            # squaring time is reported on its own
            watch.phases["fixpoint"] -= stats.gamma_time
            watch.phases["peval"] = stats.gamma_time
        model = restrict_model(Interpretation.from_bitvector(fixpoint.vector), n)
        iterations = fixpoint.iterations

    result = SolveResult(
        method=method.kind.value,
        k=method.k,
        model=model.names(program.atoms),
        model_ids=sorted(model.members),
        iterations=iterations,
        transform_time=watch.get("transform"),
        encode_time=watch.get("encode"),
        peval_time=watch.get("peval"),
        fixpoint_time=watch.get("fixpoint"),
        total_time=watch.total(),
        matrix_shape=matrix.shape if matrix is not None else (0, 0),
        nnz=matrix.nnz if matrix is not None else 0,
        density=matrix.density if matrix is not None else 0.0,
        compression=compression,
        original_base_size=n,
        extended_base_size=m,
    )
    result._matrix = matrix

    if constraints is not None and len(constraints):
        check = check_constraints_vec(
            encode_constraints(constraints, n), model.to_bitvector(n)
        )
        result.consistency = "consistent" if check.consistent else "inconsistent"
        result.violated_constraints = check.describe(constraints, program.atoms)
    elif constraints is not None:
        result.consistency = "consistent"

    logger.debug(
        "%s: %d atoms in the model, %d iterations, %.4fs",
        method.label,
        len(model),
        iterations,
        result.total_time,
    )
    return result
