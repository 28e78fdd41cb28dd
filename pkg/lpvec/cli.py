"""
Command-line front-end

    lpvec solve FILE --method {tp,matrix,col-reduct,peval,peval-cr} [--k K]
    lpvec transform FILE [-o OUT]
    lpvec peval FILE --k K [-o OUT]
    lpvec gen --atoms N --rules M --seed S [-o OUT]
    lpvec check --instances COUNT --atoms-list ... --seed S
    lpvec bench --atoms-list ... --rules-list ... --k-list ... --reps R --csv OUT

Exit codes: 0 success, 1 usage or input error, 2 inconsistent program,
3 I/O error. Results go to stdout; logs, timings and tables to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from functools import wraps
from typing import Any, Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from rich.console import Console
from rich.table import Table

from lpvec import __version__
from lpvec.config import (
    DEFAULT_CHECK_ATOMS,
    DEFAULT_CHECK_KS,
    DEFAULT_K_TOKENS,
    DEFAULT_RULE_FACTORS,
    DEFAULT_WORKERS,
)
from lpvec.errors import LpvecError, ProgramSyntaxError, UsageError
from lpvec.genbench import (
    GenSpec,
    GridPoint,
    build_specs,
    cross_validate,
    default_methods,
    describe_program,
    emit_plot_data,
    generate_program,
    resolve_k_tokens,
    run_benchmark,
    summary_tables,
    write_csv,
)
from lpvec.logger import setup_logging
from lpvec.program import (
    ConstraintSet,
    DefiniteProgram,
    parse_constraints,
    parse_program,
    serialize_program,
)
from lpvec.solvers import METHOD_CHOICES, Method, SolveResult, solve
from lpvec.transform import peval_symbolic_iter, to_d_program
from lpvec.utils.paths import read_input_file, resolve_output_path

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_IO = 3

OutputFormat = Literal["human", "csv", "json-lines"]


class CliConfig(BaseModel):
    """Validated flags of one invocation."""

    model_config = ConfigDict(extra="ignore")

    command: Literal["solve", "transform", "peval", "gen", "check", "bench"]
    format: OutputFormat = "human"
    file: Optional[str] = None
    output: Optional[str] = None
    method: str = "matrix"
    k: Optional[int] = Field(default=None, ge=0)
    constraints: Optional[str] = None
    stats: bool = False
    dump_matrix: Optional[str] = None
    atoms: Optional[int] = Field(default=None, ge=1)
    rules: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)
    fact_bound: Optional[float] = Field(default=None, gt=0, le=1)
    instances: int = Field(default=1000, ge=1)
    atoms_list: List[int] = Field(default_factory=lambda: list(DEFAULT_CHECK_ATOMS))
    rule_factors: List[int] = Field(
        default_factory=lambda: list(DEFAULT_RULE_FACTORS)
    )
    methods: Optional[List[str]] = None
    ks: List[int] = Field(default_factory=lambda: list(DEFAULT_CHECK_KS))
    workers: int = Field(default=DEFAULT_WORKERS, ge=1)
    rules_list: List[int] = Field(default_factory=list)
    k_list: List[str] = Field(default_factory=lambda: list(DEFAULT_K_TOKENS))
    reps: int = Field(default=3, ge=1)
    csv: Optional[str] = None
    plot_dir: Optional[str] = None
    pin: bool = True

    @model_validator(mode="after")
    def _check_combinations(self) -> "CliConfig":
        if self.command in ("solve", "transform", "peval") and not self.file:
            raise ValueError(f"'{self.command}' needs a program FILE")
        if self.command == "solve":
            method = Method.parse(self.method)
            if self.k is not None and not method.uses_k:
                raise ValueError("--k only applies to --method peval or peval-cr")
        if self.command == "peval" and self.k is None:
            raise ValueError("'peval' needs --k")
        if self.command == "gen" and (self.atoms is None or self.rules is None):
            raise ValueError("'gen' needs --atoms and --rules")
        if self.command in ("check", "bench"):
            lists = {
                "--atoms-list": self.atoms_list,
                "--rule-factors": self.rule_factors,
            }
            if self.command == "bench":
                lists = {
                    "--atoms-list": self.atoms_list,
                    "--rules-list": self.rules_list,
                }
            for flag, values in lists.items():
                if not values or any(v < 1 for v in values):
                    raise ValueError(f"{flag} needs one or more positive integers")
            if any(k < 0 for k in self.ks):
                raise ValueError("--ks values must be >= 0")
            for method in self.methods or []:
                Method.parse(method)
            resolve_k_tokens(self.k_list, 1)
        return self

    def solve_method(self) -> Method:
        method = Method.parse(self.method)
        if method.uses_k:
            return Method.of(method.kind, 1 if self.k is None else self.k)
        return method

    def check_methods(self) -> List[Method]:
        if not self.methods:
            return default_methods(self.ks)
        methods: List[Method] = []
        for name in self.methods:
            base = Method.parse(name)
            if base.uses_k:
                methods.extend(Method.of(base.kind, k) for k in self.ks)
            else:
                methods.append(base)
        return methods


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as exceptions instead of exiting with 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _stderr() -> Console:
    return Console(stderr=True)


def catch_errors(fn: Callable[..., int]) -> Callable[..., int]:
    """Map exceptions raised by a subcommand to exit codes."""

    @wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            for error in exc.errors():
                where = ".".join(str(p) for p in error["loc"]) or "arguments"
                logger.error("invalid %s: %s", where, error["msg"])
            return EXIT_USAGE
        except UsageError as exc:
            logger.error("%s", exc)
            return EXIT_USAGE
        except OSError as exc:
            logger.error("%s", exc)
            return EXIT_IO
        except (LpvecError, ValueError) as exc:
            logger.error("%s", exc)
            return EXIT_USAGE
        except Exception:
            logger.exception("unexpected error in %s", fn.__name__)
            return EXIT_USAGE

    return wrapper


def _read_program(path: str) -> tuple[DefiniteProgram, ConstraintSet]:
    text = read_input_file(path, "program file")
    try:
        return parse_program(text)
    except ProgramSyntaxError as exc:
        raise exc.with_path(path) from None


def _read_constraints(path: str, program: DefiniteProgram) -> ConstraintSet:
    text = read_input_file(path, "constraint file")
    try:
        return parse_constraints(text, program.atoms)
    except ProgramSyntaxError as exc:
        raise exc.with_path(path) from None


def _emit(text: str, output: Optional[str], kind: str) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    target = resolve_output_path(output, kind=kind)
    with open(target, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info("Wrote %s to %s", kind, target)


def _merge_constraints(left: ConstraintSet, right: ConstraintSet) -> ConstraintSet:
    return ConstraintSet(left.bodies + right.bodies)


def _print_stats(result: SolveResult) -> None:
    table = Table(title=f"{result.method} (k={result.k})", show_header=False)
    table.add_column("metric")
    table.add_column("value", justify="right")
    rows = [
        ("iterations", str(result.iterations)),
        ("transform s", f"{result.transform_time:.6f}"),
        ("encode s", f"{result.encode_time:.6f}"),
        ("Gamma^k s", f"{result.peval_time:.6f}"),
        ("fixpoint s", f"{result.fixpoint_time:.6f}"),
        ("total s", f"{result.total_time:.6f}"),
        ("matrix shape", f"{result.matrix_shape[0]}x{result.matrix_shape[1]}"),
        ("nnz", str(result.nnz)),
        ("density", f"{result.density:.6f}"),
        ("n", str(result.original_base_size)),
        ("m", str(result.extended_base_size)),
        ("compression (m-n)/m", f"{result.compression:.6f}"),
    ]
    for name, value in rows:
        table.add_row(name, value)
    _stderr().print(table)


def _solve_payload(result: SolveResult, with_timings: bool) -> Dict[str, Any]:
    exclude = set()
    if not with_timings:
        exclude = {
            "transform_time",
            "encode_time",
            "peval_time",
            "fixpoint_time",
            "total_time",
        }
    return result.model_dump(mode="json", exclude=exclude)


def cmd_solve(config: CliConfig) -> int:
    program, inline = _read_program(config.file or "")
    constraints: Optional[ConstraintSet] = inline if len(inline) else None
    if config.constraints:
        extra = _read_constraints(config.constraints, program)
        if constraints is None:
            constraints = extra
        else:
            constraints = _merge_constraints(constraints, extra)

    method = config.solve_method()
    result = solve(program, method, constraints)

    if config.dump_matrix:
        if result.matrix is None:
            raise UsageError("--dump-matrix needs a matrix method; tp uses none")
        _emit(result.matrix.dumps(), config.dump_matrix, "matrix dump")

    if config.format == "json-lines":
        print(json.dumps(_solve_payload(result, config.stats), sort_keys=True))
    elif config.format == "csv":
        print("method,k,iterations,consistency,model")
        print(
            f"{result.method},{result.k},{result.iterations},"
            f"{result.consistency or ''},{' '.join(result.model)}"
        )
    else:
        for atom in result.model:
            print(atom)
        print(f"% iterations: {result.iterations}")
        if result.consistency == "inconsistent":
            print("% inconsistent")
            for text in result.violated_constraints:
                print(f"% violated {text}")

    if config.stats:
        _print_stats(result)

    if result.consistency == "inconsistent":
        logger.error(
            "inconsistent: the least model violates %s",
            ", ".join(result.violated_constraints),
        )
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_transform(config: CliConfig) -> int:
    program, constraints = _read_program(config.file or "")
    dp = to_d_program(program)
    logger.info(
        "d-program: %d rules in Q, %d d-rules, base %d -> %d",
        len(dp.q.rules),
        len(dp.d),
        dp.n,
        dp.m,
    )
    _emit(
        serialize_program(dp.flatten(), constraints if len(constraints) else None),
        config.output,
        "d-program",
    )
    return EXIT_OK


def cmd_peval(config: CliConfig) -> int:
    program, constraints = _read_program(config.file or "")
    if len(constraints):
        raise UsageError(
            "partial evaluation does not apply to programs with constraints; "
            "remove the ':- ...' clauses and check them with 'solve --constraints'"
        )
    evaluated = peval_symbolic_iter(program, config.k or 0)
    logger.info(
        "peval k=%d: %d rules -> %d rules",
        config.k,
        len(program.rules),
        len(evaluated.rules),
    )
    _emit(
        serialize_program(evaluated),
        config.output,
        "program",
    )
    return EXIT_OK


def cmd_gen(config: CliConfig) -> int:
    fields: Dict[str, Any] = {"n": config.atoms, "m": config.rules, "seed": config.seed}
    if config.fact_bound is not None:
        fields["fact_fraction_bound"] = config.fact_bound
    program = generate_program(GenSpec(**fields))
    stats = describe_program(program)
    logger.info(
        "Generated %d rules over %d atoms: %d facts, body sizes %s, head "
        "multiplicity %s",
        stats.rules,
        stats.atoms,
        stats.facts,
        stats.body_sizes,
        stats.head_multiplicity,
    )
    _emit(serialize_program(program), config.output, "program")
    return EXIT_OK


def cmd_check(config: CliConfig) -> int:
    specs = build_specs(
        config.instances, config.atoms_list, config.rule_factors, config.seed
    )
    methods = config.check_methods()
    report = cross_validate(specs, methods, workers=config.workers)
    if config.format == "json-lines":
        print(report.model_dump_json())
    else:
        print(f"instances: {report.instances}")
        print(f"methods: {' '.join(report.methods)}")
        print(f"disagreements: {len(report.disagreements)}")
        print(f"ordering violations: {len(report.ordering_violations)}")
        for d in report.disagreements:
            print(
                f"  instance {d.instance} (n={d.n} m={d.m} seed={d.seed} "
                f"facts={d.facts}) {d.method}: missing {d.missing} extra {d.extra}"
            )
    return EXIT_OK if report.ok else EXIT_USAGE


def cmd_bench(config: CliConfig) -> int:
    grid = [
        GridPoint(n=n, m=m, ks=resolve_k_tokens(config.k_list, n))
        for n in config.atoms_list
        for m in config.rules_list
    ]
    report = run_benchmark(grid, config.reps, seed=config.seed, pin_cpu=config.pin)
    console = _stderr()
    for table in summary_tables(report):
        console.print(table)
    if config.format == "json-lines":
        for row in report.rows:
            print(row.model_dump_json())
    if config.csv:
        print(write_csv(report, config.csv))
    if config.plot_dir:
        for path in emit_plot_data(report, config.plot_dir):
            print(path)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[CliConfig], int]] = {
    "solve": cmd_solve,
    "transform": cmd_transform,
    "peval": cmd_peval,
    "gen": cmd_gen,
    "check": cmd_check,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lpvec", description="Least models of definite programs via matrices"
    )
    parser.add_argument("--version", action="version", version=f"lpvec {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="count", default=0)
    parser.add_argument(
        "--format",
        choices=("human", "csv", "json-lines"),
        default="human",
        help="Result format on stdout (default: human)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="Compute the least model of a program")
    p.add_argument("file")
    p.add_argument("--method", default="matrix", choices=METHOD_CHOICES)
    p.add_argument("--k", type=int, default=None, help="Squarings for peval methods")
    p.add_argument("--constraints", default=None, help="Constraint file")
    p.add_argument("--stats", action="store_true", help="Print metrics to stderr")
    p.add_argument("--dump-matrix", default=None, help="Write the iterated matrix")

    p = sub.add_parser("transform", help="Emit the d-program of a program")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("peval", help="Symbolic partial evaluation of an SD program")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("gen", help="Generate a random program")
    p.add_argument("--atoms", type=int, default=None)
    p.add_argument("--rules", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fact-bound", type=float, default=None)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("check", help="Cross-validate every method against T_P")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument(
        "--atoms-list", type=int, nargs="+", default=list(DEFAULT_CHECK_ATOMS)
    )
    p.add_argument(
        "--rule-factors", type=int, nargs="+", default=list(DEFAULT_RULE_FACTORS)
    )
    p.add_argument("--methods", nargs="+", default=None, choices=METHOD_CHOICES)
    p.add_argument("--ks", type=int, nargs="+", default=list(DEFAULT_CHECK_KS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=DEFAULT_WORKERS)

    p = sub.add_parser("bench", help="Run the benchmark grid")
    p.add_argument("--atoms-list", type=int, nargs="+", default=[50])
    p.add_argument("--rules-list", type=int, nargs="+", default=[100, 1250, 2500])
    p.add_argument("--k-list", nargs="+", default=list(DEFAULT_K_TOKENS))
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.add_argument("--plot-dir", default=None)
    p.add_argument("--no-pin", dest="pin", action="store_false")
    return parser


@catch_errors
def run(args: argparse.Namespace) -> int:
    config = CliConfig.model_validate(vars(args))
    return COMMANDS[config.command](config)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    setup_logging(args.verbose - args.quiet)
    return run(args)
