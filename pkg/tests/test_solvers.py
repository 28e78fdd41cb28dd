import numpy as np
import pytest
from pydantic import ValidationError

from lpvec.config import SUPPORT_FLOOR
from lpvec.errors import DimensionMismatchError
from lpvec.genbench import GenSpec, generate_program
from lpvec.linalg import (
    SparseMatrix,
    d_rule_index,
    encode_d_program,
    encode_sd,
    encode_submatrix,
    gamma_k,
    initial_vector,
    matmul,
    matvec,
    theta,
)
from lpvec.program import (
    ConstraintSet,
    parse_constraints,
    parse_program,
    tp_least_model,
)
from lpvec.solvers import (
    Method,
    MethodKind,
    fixpoint_colreduct,
    fixpoint_matrix,
    peval_matrix,
    solve,
)
from lpvec.transform import to_d_program

CHAIN = "p :- q.\nq :- p, r.\nr :- s.\ns.\n"
TWO_DEFS = "p :- q.\nq :- p, r.\nq :- s.\ns.\n"
UNFOLDABLE = "p :- q, s, t.\nq :- p, t.\ns :- t.\nt.\n"

ALL_METHODS = [
    Method.of(MethodKind.TP),
    Method.of(MethodKind.MATRIX),
    Method.of(MethodKind.COL_REDUCT),
    *(Method.of(MethodKind.PEVAL, k) for k in (1, 2, 3)),
    *(Method.of(MethodKind.PEVAL_COL_REDUCT, k) for k in (1, 2, 3)),
]


def _program(text):
    return parse_program(text)[0]


def _sd_program(seed, n=12):
    program = generate_program(GenSpec(n=n, m=3 * n, seed=seed))
    seen = set()
    kept = []
    for rule in program.rules:
        if rule.head not in seen:
            seen.add(rule.head)
            kept.append(rule)
    return type(program)(program.atoms, tuple(kept))


def test_method_parse():
    assert Method.parse("col-reduct").kind is MethodKind.COL_REDUCT
    assert Method.parse("peval-cr", 2) == Method.of(MethodKind.PEVAL_COL_REDUCT, 2)
    assert Method.parse(" Matrix ", 3).k == 0
    assert Method.parse("peval", 2).label == "peval(k=2)"
    assert Method.parse("tp").label == "tp"


def test_method_parse_rejects_unknown_name():
    with pytest.raises(ValueError, match="unknown method 'bogus'"):
        Method.parse("bogus")


def test_method_rejects_negative_k():
    with pytest.raises(ValidationError):
        Method(kind=MethodKind.PEVAL, k=-1)


def test_solve_chain_with_every_method():
    program = _program(CHAIN)

    for method in ALL_METHODS:
        result = solve(program, method)
        assert result.model == ["r", "s"], method.label
        assert result.iterations == 2, method.label


def test_solve_two_defs_iteration_counts():
    program = _program(TWO_DEFS)

    matrix = solve(program, Method.of(MethodKind.MATRIX))
    col = solve(program, Method.of(MethodKind.COL_REDUCT))

    assert matrix.model == col.model == ["p", "q", "s"]
    assert matrix.iterations == 4
    assert col.iterations == 3
    assert matrix.matrix_shape == (6, 6)
    assert col.matrix_shape == (6, 4)
    assert col.compression == pytest.approx(2 / 6)
    assert (col.original_base_size, col.extended_base_size) == (4, 6)


def test_solve_unfoldable_peval():
    program = _program(UNFOLDABLE)

    result = solve(program, Method.of(MethodKind.PEVAL, 1))

    assert result.model == ["s", "t"]
    assert result.iterations == 2
    assert result.peval_time >= 0.0
    assert result.matrix is not None


def test_tp_result_has_no_matrix():
    result = solve(_program(CHAIN), Method.of(MethodKind.TP))

    assert result.matrix is None
    assert result.matrix_shape == (0, 0)
    assert result.extended_base_size == result.original_base_size == 4
    assert result.consistency is None


def test_fresh_fact_fires_its_d_rule_head():
    program = _program("p.\np :- q.\n")

    for method in ALL_METHODS:
        assert solve(program, method).model == ["p"], method.label


def test_methods_agree_with_tp_on_generated_programs():
    for seed in range(40):
        program = generate_program(GenSpec(n=12, m=36, seed=seed))
        expected = sorted(tp_least_model(program)[0].members)
        for method in ALL_METHODS:
            assert solve(program, method).model_ids == expected, (seed, method.label)


def test_peval_preserves_least_model_on_sd_programs():
    for seed in range(40):
        program = _sd_program(seed)
        expected = sorted(tp_least_model(program)[0].members)
        for k in range(4):
            for kind in (MethodKind.PEVAL, MethodKind.PEVAL_COL_REDUCT):
                result = solve(program, Method.of(kind, k))
                assert result.model_ids == expected, (seed, kind, k)


def test_col_reduct_never_needs_more_iterations_than_matrix():
    for seed in range(40):
        program = generate_program(GenSpec(n=15, m=60, seed=seed))
        matrix = solve(program, Method.of(MethodKind.MATRIX))
        col = solve(program, Method.of(MethodKind.COL_REDUCT))
        assert col.iterations <= matrix.iterations


def test_matrix_trace_is_monotone():
    dp = to_d_program(generate_program(GenSpec(n=15, m=45, seed=4)))

    result = fixpoint_matrix(
        encode_d_program(dp), initial_vector(dp), record_trace=True
    )

    assert len(result.trace) == result.iterations + 1
    for before, after in zip(result.trace, result.trace[1:]):
        assert np.all(before <= after)
    assert np.array_equal(result.trace[-1], result.vector)


def test_colreduct_trace_starts_at_initial_vector():
    dp = to_d_program(_program(TWO_DEFS))
    v0 = initial_vector(dp)

    result = fixpoint_colreduct(
        encode_submatrix(dp), v0, d_rule_index(dp), record_trace=True
    )

    assert np.array_equal(result.trace[0], v0)
    assert result.iterations == 3


def test_fixpoint_matrix_rejects_mismatched_vector():
    with pytest.raises(DimensionMismatchError):
        fixpoint_matrix(SparseMatrix.identity(3), np.zeros(2, dtype=np.uint8))


def test_fixpoint_colreduct_rejects_mismatched_vector():
    dp = to_d_program(_program(TWO_DEFS))

    with pytest.raises(DimensionMismatchError):
        fixpoint_colreduct(
            encode_submatrix(dp), np.zeros(3, dtype=np.uint8), d_rule_index(dp)
        )


def test_peval_matrix():
    program = _program(UNFOLDABLE)
    dp = to_d_program(program)
    m = encode_sd(program)

    gamma, squarings = peval_matrix(dp, 1)
    assert squarings == 1
    assert gamma.allclose(matmul(m, m))

    gamma, squarings = peval_matrix(dp, 0)
    assert squarings == 0
    assert gamma.allclose(encode_d_program(dp))

    with pytest.raises(ValueError):
        peval_matrix(dp, -1)


def test_peval_matrix_keeps_d_rule_rows():
    dp = to_d_program(_program(TWO_DEFS))

    gamma, _ = peval_matrix(dp, 2)

    assert gamma.row(dp.atoms.id_of("q")) == {4: 1.0, 5: 1.0}


def test_solve_with_constraints():
    program, constraints = parse_program(CHAIN + ":- r.\n")

    result = solve(program, Method.of(MethodKind.COL_REDUCT), constraints)

    assert result.consistency == "inconsistent"
    assert result.violated_constraints == [":- r."]


def test_solve_consistent_constraints():
    program = _program(CHAIN)
    constraints = parse_constraints(":- p, q.\n", program.atoms)

    assert solve(program, Method.of(MethodKind.MATRIX), constraints).consistency == (
        "consistent"
    )
    empty = solve(program, Method.of(MethodKind.TP), ConstraintSet())
    assert empty.consistency == "consistent"
    assert empty.violated_constraints == []


def test_solve_result_json_dump():
    result = solve(_program(TWO_DEFS), Method.of(MethodKind.PEVAL_COL_REDUCT, 1))

    payload = result.model_dump(mode="json")

    assert payload["method"] == "peval_col_reduct"
    assert payload["k"] == 1
    assert payload["model"] == ["p", "q", "s"]
    assert "_matrix" not in payload


def test_squared_matrix_skips_ahead_on_sd_programs():
    for seed in range(200):
        program = _sd_program(seed)
        matrix = encode_sd(program)
        v0 = initial_vector(program)
        steps = [v0]
        for _ in range(8):
            steps.append(theta(matvec(matrix, steps[-1])))
        for k in (1, 2, 3):
            gamma = gamma_k(matrix, k, support_floor=SUPPORT_FLOOR)
            assert np.array_equal(theta(matvec(gamma, v0)), steps[2**k]), (seed, k)
