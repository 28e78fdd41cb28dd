"""Cross-validation of every engine against the T_P oracle."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from lpvec.config import DEFAULT_CHECK_KS
from lpvec.genbench.generator import GenSpec, generate_program
from lpvec.program.model import DefiniteProgram
from lpvec.program.tp import tp_least_model
from lpvec.solvers import Method, MethodKind, SolveResult, solve

logger = logging.getLogger(__name__)

SolveFn = Callable[[DefiniteProgram, Method], SolveResult]


class Disagreement(BaseModel):
    instance: int
    n: int
    m: int
    seed: int
    facts: int
    method: str
    missing: List[str]
    extra: List[str]


class OrderingViolation(BaseModel):
    instance: int
    seed: int
    matrix_iterations: int
    col_reduct_iterations: int


# per instance: disagreements, ordering violation, oracle model size, fact count
CheckOutcome = Tuple[List[Disagreement], Optional[OrderingViolation], int, int]


class CrossValidationReport(BaseModel):
    instances: int
    methods: List[str]
    disagreements: List[Disagreement] = Field(default_factory=list)
    ordering_violations: List[OrderingViolation] = Field(default_factory=list)
    oracle_sizes: List[int] = Field(default_factory=list)
    fact_counts: List[int] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.ordering_violations


def default_methods(ks: Sequence[int] = DEFAULT_CHECK_KS) -> List[Method]:
    methods = [
        Method.of(MethodKind.TP),
        Method.of(MethodKind.MATRIX),
        Method.of(MethodKind.COL_REDUCT),
    ]
    for k in ks:
        methods.append(Method.of(MethodKind.PEVAL, k))
        methods.append(Method.of(MethodKind.PEVAL_COL_REDUCT, k))
    return methods


def _check_one(
    index: int, spec: GenSpec, methods: Sequence[Method], solve_fn: SolveFn
) -> CheckOutcome:
    program = generate_program(spec)
    facts = len(program.facts)
    oracle, _ = tp_least_model(program)
    expected = oracle.members
    disagreements: List[Disagreement] = []
    iterations: Dict[MethodKind, int] = {}
    for method in methods:
        result = solve_fn(program, method)
        got = frozenset(result.model_ids)
        if method.kind in (MethodKind.MATRIX, MethodKind.COL_REDUCT):
            iterations[method.kind] = result.iterations
        if got != expected:
            name = program.atoms.name_of
            disagreement = Disagreement(
                instance=index,
                n=spec.n,
                m=spec.m,
                seed=spec.seed,
                facts=facts,
                method=method.label,
                missing=sorted(name(i) for i in expected - got),
                extra=sorted(name(i) for i in got - expected),
            )
            logger.warning(
                "instance %d (seed %d, %d facts): %s disagrees with T_P "
                "(missing %s, extra %s)",
                index,
                spec.seed,
                facts,
                method.label,
                disagreement.missing,
                disagreement.extra,
            )
            disagreements.append(disagreement)
    violation = None
    if (
        len(iterations) == 2
        and iterations[MethodKind.COL_REDUCT] > iterations[MethodKind.MATRIX]
    ):
        violation = OrderingViolation(
            instance=index,
            seed=spec.seed,
            matrix_iterations=iterations[MethodKind.MATRIX],
            col_reduct_iterations=iterations[MethodKind.COL_REDUCT],
        )
        logger.warning(
            "instance %d (seed %d): col_reduct took %d iterations, matrix %d",
            index,
            spec.seed,
            violation.col_reduct_iterations,
            violation.matrix_iterations,
        )
    return disagreements, violation, len(expected), facts


def cross_validate(
    specs: Sequence[GenSpec],
    methods: Sequence[Method],
    solve_fn: SolveFn = solve,
    workers: int = 1,
) -> CrossValidationReport:
    """Solve every instance with every method and compare to T_P.

    Disagreements are collected, never raised. Results keep input order
    regardless of ``workers``.
    """
    if not specs or not methods:
        raise ValueError("cross_validate needs at least one spec and one method")
    report = CrossValidationReport(
        instances=len(specs), methods=[m.label for m in methods]
    )

    def run(item: Tuple[int, GenSpec]) -> CheckOutcome:
        return _check_one(item[0], item[1], methods, solve_fn)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, enumerate(specs)))
    else:
        outcomes = [run(item) for item in enumerate(specs)]

    for index, (disagreements, violation, size, facts) in enumerate(outcomes):
        report.disagreements.extend(disagreements)
        if violation is not None:
            report.ordering_violations.append(violation)
        report.oracle_sizes.append(size)
        report.fact_counts.append(facts)
        if (index + 1) % 100 == 0:
            logger.info("Checked %d/%d instances", index + 1, len(specs))

    logger.info(
        "Cross-validation: %d instances, %d methods, %d disagreements, "
        "%d ordering violations",
        report.instances,
        len(methods),
        len(report.disagreements),
        len(report.ordering_violations),
    )
    return report
