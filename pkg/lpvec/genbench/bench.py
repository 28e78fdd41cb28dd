"""
Benchmark harness

For every grid point (n, m, k-list) one instance is generated from the
base seed; each rep runs tp, matrix and col_reduct once and both peval
methods once per k. Runs are sequential and pinned to a single CPU.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from contextlib import contextmanager
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import psutil
from pydantic import BaseModel, Field

from lpvec.genbench.generator import GenSpec, generate_program
from lpvec.program.model import DefiniteProgram
from lpvec.solvers import Method, MethodKind, SolveResult, solve

logger = logging.getLogger(__name__)

SolveFn = Callable[[DefiniteProgram, Method], SolveResult]

CSV_HEADER = (
    "n",
    "m",
    "method",
    "k",
    "rep",
    "iterations",
    "peval_s",
    "fixpoint_s",
    "total_s",
    "nnz",
    "compression",
    "model_size",
)


class GridPoint(BaseModel):
    n: int = Field(ge=1)
    m: int = Field(ge=1)
    ks: List[int] = Field(default_factory=list)


class BenchRow(BaseModel):
    n: int
    m: int
    method: str
    k: int
    rep: int
    facts: int
    iterations: int
    peval_s: float
    fixpoint_s: float
    total_s: float
    nnz: int
    compression: float
    model_size: int

    @property
    def series(self) -> Tuple[str, int]:
        return self.method, self.k


class BenchAverage(BaseModel):
    n: int
    m: int
    method: str
    k: int
    runs: int
    facts: int
    iterations: float
    peval_s: float
    fixpoint_s: float
    total_s: float
    nnz: int
    compression: float
    model_size: int


class TrendCheck(BaseModel):
    """col_reduct fixpoint time against matrix fixpoint time at m = 50n."""

    n: int
    m: int
    matrix_fixpoint_s: float
    col_reduct_fixpoint_s: float

    @property
    def holds(self) -> bool:
        return self.col_reduct_fixpoint_s < self.matrix_fixpoint_s


class BenchReport(BaseModel):
    rows: List[BenchRow] = Field(default_factory=list)

    def averages(self) -> List[BenchAverage]:
        groups: Dict[Tuple[int, int, str, int], List[BenchRow]] = defaultdict(list)
        for row in self.rows:
            groups[(row.n, row.m, row.method, row.k)].append(row)
        averaged = []
        for (n, m, method, k), rows in groups.items():
            count = len(rows)
            averaged.append(
                BenchAverage(
                    n=n,
                    m=m,
                    method=method,
                    k=k,
                    runs=count,
                    facts=rows[0].facts,
                    iterations=sum(r.iterations for r in rows) / count,
                    peval_s=sum(r.peval_s for r in rows) / count,
                    fixpoint_s=sum(r.fixpoint_s for r in rows) / count,
                    total_s=sum(r.total_s for r in rows) / count,
                    nnz=rows[0].nnz,
                    compression=rows[0].compression,
                    model_size=rows[0].model_size,
                )
            )
        return averaged

    def trend(self) -> List[TrendCheck]:
        fixpoint = {
            (a.n, a.m, a.method): a.fixpoint_s
            for a in self.averages()
            if a.m == 50 * a.n
        }
        checks = []
        for (n, m, method), value in fixpoint.items():
            if method != MethodKind.MATRIX.value:
                continue
            other = fixpoint.get((n, m, MethodKind.COL_REDUCT.value))
            if other is not None:
                checks.append(
                    TrendCheck(
                        n=n, m=m, matrix_fixpoint_s=value, col_reduct_fixpoint_s=other
                    )
                )
        return checks

    def model_size_mismatches(self) -> List[Tuple[int, int, int]]:
        """(n, m, rep) triples whose methods reported different model sizes."""
        sizes: Dict[Tuple[int, int, int], set] = defaultdict(set)
        for row in self.rows:
            sizes[(row.n, row.m, row.rep)].add(row.model_size)
        return sorted(key for key, values in sizes.items() if len(values) > 1)


@contextmanager
def pinned_to_one_cpu() -> Iterator[Optional[int]]:
    """Restrict this process to one CPU for the duration of the block."""
    process = psutil.Process()
    previous: Optional[List[int]] = None
    try:
        previous = process.cpu_affinity()
        if previous:
            process.cpu_affinity([previous[0]])
            logger.debug("Pinned benchmark to CPU %d", previous[0])
    except (AttributeError, NotImplementedError, psutil.Error, OSError) as exc:
        logger.info("CPU pinning unavailable, timing unpinned: %s", exc)
        previous = None
    try:
        yield previous[0] if previous else None
    finally:
        if previous:
            try:
                process.cpu_affinity(previous)
            except (psutil.Error, OSError):
                logger.debug("Could not restore CPU affinity %s", previous)


def _methods_for(point: GridPoint) -> List[Method]:
    methods = [
        Method.of(MethodKind.TP),
        Method.of(MethodKind.MATRIX),
        Method.of(MethodKind.COL_REDUCT),
    ]
    for k in point.ks:
        methods.append(Method.of(MethodKind.PEVAL, k))
        methods.append(Method.of(MethodKind.PEVAL_COL_REDUCT, k))
    return methods


def _row(point: GridPoint, rep: int, facts: int, result: SolveResult) -> BenchRow:
    return BenchRow(
        n=point.n,
        m=point.m,
        method=result.method,
        k=result.k,
        rep=rep,
        facts=facts,
        iterations=result.iterations,
        peval_s=result.peval_time,
        fixpoint_s=result.fixpoint_time,
        total_s=result.total_time,
        nnz=result.nnz,
        compression=result.compression,
        model_size=result.model_size,
    )


def run_benchmark(
    grid: Sequence[GridPoint],
    reps: int,
    seed: int = 0,
    solve_fn: SolveFn = solve,
    pin_cpu: bool = True,
) -> BenchReport:
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    report = BenchReport()

    def run_all() -> None:
        for point in grid:
            program = generate_program(GenSpec(n=point.n, m=point.m, seed=seed))
            facts = len(program.facts)
            methods = _methods_for(point)
            logger.info(
                "Benchmarking n=%d m=%d (%d facts): %d methods x %d reps",
                point.n,
                point.m,
                facts,
                len(methods),
                reps,
            )
            for rep in range(reps):
                for method in methods:
                    report.rows.append(
                        _row(point, rep, facts, solve_fn(program, method))
                    )

    if pin_cpu:
        with pinned_to_one_cpu():
            run_all()
    else:
        run_all()

    for mismatch in report.model_size_mismatches():
        logger.warning("Model sizes differ across methods at (n, m, rep)=%s", mismatch)
    for check in report.trend():
        logger.info(
            "Trend at n=%d m=%d: col_reduct fixpoint %.4fs vs matrix %.4fs (%s)",
            check.n,
            check.m,
            check.col_reduct_fixpoint_s,
            check.matrix_fixpoint_s,
            "holds" if check.holds else "does not hold",
        )
    return report
