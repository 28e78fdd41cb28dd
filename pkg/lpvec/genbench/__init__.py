"""Random programs, cross-validation campaigns and the benchmark harness."""

from .bench import (
    CSV_HEADER,
    BenchAverage,
    BenchReport,
    BenchRow,
    GridPoint,
    TrendCheck,
    pinned_to_one_cpu,
    run_benchmark,
)
from .crossval import (
    CrossValidationReport,
    Disagreement,
    OrderingViolation,
    cross_validate,
    default_methods,
)
from .generator import (
    GenSpec,
    ProgramStats,
    build_specs,
    describe_program,
    generate_program,
    resolve_k_tokens,
)
from .output import emit_plot_data, summary_tables, write_csv

__all__ = [
    "CSV_HEADER",
    "BenchAverage",
    "BenchReport",
    "BenchRow",
    "CrossValidationReport",
    "Disagreement",
    "GenSpec",
    "GridPoint",
    "OrderingViolation",
    "ProgramStats",
    "TrendCheck",
    "build_specs",
    "cross_validate",
    "default_methods",
    "describe_program",
    "emit_plot_data",
    "generate_program",
    "pinned_to_one_cpu",
    "resolve_k_tokens",
    "run_benchmark",
    "summary_tables",
    "write_csv",
]
