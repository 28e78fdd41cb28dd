"""CSV, plot-data and table output for benchmark reports."""

from __future__ import annotations

import csv
import logging
import os
from collections import defaultdict
from typing import Dict, List, Tuple

from rich.table import Table

from lpvec.genbench.bench import CSV_HEADER, BenchAverage, BenchReport
from lpvec.utils.paths import resolve_output_dir, resolve_output_path

logger = logging.getLogger(__name__)


def _series_label(method: str, k: int) -> str:
    return f"{method}_k{k}" if method.startswith("peval") else method


def _io_error(exc: OSError, kind: str, path: str) -> OSError:
    return type(exc)(exc.errno, f"cannot write {kind} '{path}': {exc.strerror}")


def write_csv(report: BenchReport, path: str) -> str:
    """Write one row per run. Returns the resolved path."""
    target = resolve_output_path(path, kind="CSV path")
    try:
        with open(target, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in report.rows:
                writer.writerow(
                    [
                        row.n,
                        row.m,
                        row.method,
                        row.k,
                        row.rep,
                        row.iterations,
                        f"{row.peval_s:.6f}",
                        f"{row.fixpoint_s:.6f}",
                        f"{row.total_s:.6f}",
                        row.nnz,
                        f"{row.compression:.6f}",
                        row.model_size,
                    ]
                )
    except OSError as exc:
        raise _io_error(exc, "CSV", target) from exc
    logger.info("Wrote %d benchmark rows to %s", len(report.rows), target)
    return target


def emit_plot_data(report: BenchReport, directory: str) -> List[str]:
    """One ``fixpoint_n<N>.dat`` per n: ``m`` then averaged fixpoint times."""
    target_dir = resolve_output_dir(directory, kind="plot directory")
    by_n: Dict[int, List[BenchAverage]] = defaultdict(list)
    for average in report.averages():
        by_n[average.n].append(average)

    written = []
    for n in sorted(by_n):
        averages = by_n[n]
        series: List[Tuple[str, int]] = []
        for a in averages:
            if (a.method, a.k) not in series:
                series.append((a.method, a.k))
        table: Dict[int, Dict[Tuple[str, int], float]] = defaultdict(dict)
        for a in averages:
            table[a.m][(a.method, a.k)] = a.fixpoint_s
        labels = [_series_label(method, k) for method, k in series]
        lines = [
            f"# fixpoint time in seconds for n={n}, averaged over reps",
            "# " + " ".join(["m", *labels]),
        ]
        for m in sorted(table):
            values = [table[m].get(key) for key in series]
            cells = ["nan" if v is None else f"{v:.6f}" for v in values]
            lines.append(" ".join([str(m), *cells]))
        path = os.path.join(target_dir, f"fixpoint_n{n}.dat")
        try:
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("\n".join(lines) + "\n")
        except OSError as exc:
            raise _io_error(exc, "plot data", path) from exc
        written.append(path)
    logger.info("Wrote %d plot-data files to %s", len(written), target_dir)
    return written


def summary_tables(report: BenchReport) -> List[Table]:
    """One table per n, rows by m, mirroring the usual runtime layout."""
    by_n: Dict[int, Dict[int, Dict[Tuple[str, int], BenchAverage]]] = defaultdict(
        lambda: defaultdict(dict)
    )
    for a in report.averages():
        by_n[a.n][a.m][(a.method, a.k)] = a

    tables = []
    for n in sorted(by_n):
        rows = by_n[n]
        ks = sorted(
            {
                k
                for cells in rows.values()
                for (method, k) in cells
                if method.startswith("peval")
            }
        )
        table = Table(title=f"n = {n}  (seconds, averaged)")
        table.add_column("m", justify="right")
        table.add_column("T_P", justify="right")
        table.add_column("matrix fixpoint", justify="right")
        table.add_column("matrix all", justify="right")
        table.add_column("col.reduct fixpoint", justify="right")
        table.add_column("col.reduct all", justify="right")
        table.add_column("compression", justify="right")
        for k in ks:
            table.add_column(f"k={k} Gamma", justify="right")
            table.add_column(f"k={k} matrix", justify="right")
            table.add_column(f"k={k} col.reduct", justify="right")

        def fmt(cell: BenchAverage | None, attr: str) -> str:
            return "-" if cell is None else f"{getattr(cell, attr):.4f}"

        for m in sorted(rows):
            cells = rows[m]
            matrix = cells.get(("matrix", 0))
            col = cells.get(("col_reduct", 0))
            line = [
                str(m),
                fmt(cells.get(("tp", 0)), "total_s"),
                fmt(matrix, "fixpoint_s"),
                fmt(matrix, "total_s"),
                fmt(col, "fixpoint_s"),
                fmt(col, "total_s"),
                fmt(col, "compression"),
            ]
            for k in ks:
                peval = cells.get(("peval", k))
                peval_cr = cells.get(("peval_col_reduct", k))
                line += [
                    fmt(peval, "peval_s"),
                    fmt(peval, "fixpoint_s"),
                    fmt(peval_cr, "fixpoint_s"),
                ]
            table.add_row(*line)
        tables.append(table)
    return tables
