import os
from collections import Counter

import psutil
import pytest
from pydantic import ValidationError
from scipy.stats import chisquare

from lpvec.config import DEFAULT_BODY_DISTRIBUTION
from lpvec.errors import InfeasibleSpecError
from lpvec.genbench import (
    CSV_HEADER,
    BenchReport,
    BenchRow,
    GenSpec,
    GridPoint,
    build_specs,
    cross_validate,
    default_methods,
    describe_program,
    emit_plot_data,
    generate_program,
    pinned_to_one_cpu,
    resolve_k_tokens,
    run_benchmark,
    summary_tables,
    write_csv,
)
from lpvec.program import serialize_program
from lpvec.solvers import Method, MethodKind, solve


def _row(method, m=20, k=0, fixpoint_s=0.5, rep=0, model_size=3):
    return BenchRow(
        n=10,
        m=m,
        method=method,
        k=k,
        rep=rep,
        facts=2,
        iterations=2,
        peval_s=0.0,
        fixpoint_s=fixpoint_s,
        total_s=fixpoint_s,
        nnz=40,
        compression=0.25,
        model_size=model_size,
    )


def test_generate_program_is_deterministic():
    spec = GenSpec(n=20, m=60, seed=7)

    first = generate_program(spec)
    second = generate_program(spec)

    assert first.rules == second.rules
    assert serialize_program(first) == serialize_program(second)
    assert generate_program(GenSpec(n=20, m=60, seed=8)).rules != first.rules


def test_generate_program_shape():
    for seed in range(20):
        spec = GenSpec(n=30, m=90, seed=seed)
        program = generate_program(spec)

        assert program.atoms.names == tuple(f"p{i}" for i in range(30))
        assert len(program.rules) == 90
        facts = [rule.head for rule in program.rules if rule.is_fact]
        assert 1 <= len(facts) <= 9
        assert facts == sorted(set(facts))
        assert all(rule.is_fact for rule in program.rules[: len(facts)])
        keys = set()
        for rule in program.rules[len(facts) :]:
            assert 1 <= len(rule.body) <= 8
            assert rule.head not in rule.body
            assert len(set(rule.body)) == len(rule.body)
            keys.add((rule.head, frozenset(rule.body)))
        assert len(keys) == 90 - len(facts)


def test_fact_range():
    assert GenSpec(n=30, m=90).fact_range() == (1, 9)
    assert GenSpec(n=2, m=5).fact_range() == (1, 1)
    assert GenSpec(n=30, m=4).fact_range() == (1, 4)
    assert GenSpec(n=10, m=20, fact_fraction_bound=1.0).fact_range() == (1, 9)


def test_single_atom_single_rule():
    program = generate_program(GenSpec(n=1, m=1))

    assert serialize_program(program) == "p0.\n"


def test_generate_rejects_bodies_larger_than_the_base():
    with pytest.raises(InfeasibleSpecError, match="needs at least 9 atoms"):
        generate_program(GenSpec(n=5, m=20))


def test_generate_gives_up_when_rules_run_out():
    spec = GenSpec(n=3, m=50, body_dist={1: 1.0})

    with pytest.raises(InfeasibleSpecError, match="more rules than exist"):
        generate_program(spec)


def test_small_base_with_small_bodies():
    program = generate_program(GenSpec(n=3, m=6, seed=1, body_dist={1: 0.5, 2: 0.5}))

    assert len(program.rules) == 6


@pytest.mark.parametrize(
    "body_dist",
    [{0: 1.0}, {9: 1.0}, {2: -0.5, 3: 1.0}, {2: 0.0}],
)
def test_gen_spec_rejects_bad_body_distribution(body_dist):
    with pytest.raises(ValidationError):
        GenSpec(n=10, m=20, body_dist=body_dist)


def test_gen_spec_rejects_bad_sizes():
    with pytest.raises(ValidationError):
        GenSpec(n=0, m=1)
    with pytest.raises(ValidationError):
        GenSpec(n=10, m=10, fact_fraction_bound=0.0)


def test_describe_program():
    program = generate_program(GenSpec(n=12, m=40, seed=2))

    stats = describe_program(program)

    assert stats.atoms == 12
    assert stats.rules == 40
    assert stats.facts + sum(stats.body_sizes.values()) == 40
    assert sum(size * count for size, count in stats.head_multiplicity.items()) == 40
    assert stats.single_defined == (set(stats.head_multiplicity) == {1})


@pytest.mark.slow
def test_body_size_histogram_follows_distribution():
    program = generate_program(GenSpec(n=100, m=10_000, seed=0))

    sizes = Counter(len(rule.body) for rule in program.rules if rule.body)
    total = sum(sizes.values())

    for size, share in DEFAULT_BODY_DISTRIBUTION.items():
        assert abs(sizes[size] / total - share) < 0.02
    assert set(sizes) <= set(DEFAULT_BODY_DISTRIBUTION)
    shares = [DEFAULT_BODY_DISTRIBUTION[size] for size in sorted(sizes)]
    observed = [sizes[size] for size in sorted(sizes)]
    expected = [total * share / sum(shares) for share in shares]
    assert chisquare(observed, expected).pvalue > 0.01


def test_build_specs():
    specs = build_specs(4, [10, 20], [2, 3], seed=5)

    assert [(s.n, s.m, s.seed) for s in specs] == [
        (10, 20, 5),
        (20, 40, 6),
        (10, 30, 7),
        (20, 60, 8),
    ]
    with pytest.raises(ValueError):
        build_specs(0, [10], [2])
    with pytest.raises(ValueError):
        build_specs(3, [], [2])


def test_resolve_k_tokens():
    assert resolve_k_tokens(["1", "5", "n/2", "n"], 50) == [1, 5, 25, 50]
    assert resolve_k_tokens(["1", "n/100", "N"], 50) == [1, 50]
    assert resolve_k_tokens(["n/4"], 2) == [1]
    with pytest.raises(ValueError, match="divides by zero"):
        resolve_k_tokens(["n/0"], 10)
    with pytest.raises(ValueError, match="must be an integer"):
        resolve_k_tokens(["half"], 10)


def test_default_methods():
    labels = [m.label for m in default_methods([1, 2])]

    assert labels == [
        "tp",
        "matrix",
        "col_reduct",
        "peval(k=1)",
        "peval_col_reduct(k=1)",
        "peval(k=2)",
        "peval_col_reduct(k=2)",
    ]


def test_cross_validate_agrees_on_small_campaign():
    specs = build_specs(30, [10, 12], [2, 3], seed=11)

    report = cross_validate(specs, default_methods())

    assert report.ok
    assert report.instances == 30
    assert len(report.oracle_sizes) == 30
    assert all(size >= 1 for size in report.oracle_sizes)
    assert report.fact_counts == [
        len(generate_program(spec).facts) for spec in specs
    ]
    for spec, facts in zip(specs, report.fact_counts):
        low, high = spec.fact_range()
        assert low <= facts <= high


def test_cross_validate_reports_corrupted_engine():
    specs = build_specs(5, [10], [2], seed=3)

    def broken(program, method):
        result = solve(program, method)
        if method.kind is MethodKind.MATRIX:
            return result.model_copy(update={"model_ids": []})
        return result

    report = cross_validate(specs, default_methods([1]), solve_fn=broken)

    assert not report.ok
    assert len(report.disagreements) == 5
    assert {d.method for d in report.disagreements} == {"matrix"}
    assert all(d.missing and not d.extra for d in report.disagreements)
    assert [d.instance for d in report.disagreements] == list(range(5))
    assert [d.facts for d in report.disagreements] == report.fact_counts
    assert all(d.facts >= 1 for d in report.disagreements)


def test_cross_validate_reports_ordering_violations():
    specs = build_specs(3, [10], [2], seed=0)

    def slow_col_reduct(program, method):
        result = solve(program, method)
        if method.kind is MethodKind.COL_REDUCT:
            return result.model_copy(update={"iterations": 10_000})
        return result

    report = cross_validate(specs, default_methods([]), solve_fn=slow_col_reduct)

    assert report.disagreements == []
    assert len(report.ordering_violations) == 3
    assert report.ordering_violations[0].col_reduct_iterations == 10_000


def test_cross_validate_with_tp_only_and_workers():
    specs = build_specs(12, [10, 15], [2], seed=1)
    methods = [Method.of(MethodKind.TP)]

    serial = cross_validate(specs, methods)
    threaded = cross_validate(specs, methods, workers=4)

    assert serial.ok and threaded.ok
    assert serial.oracle_sizes == threaded.oracle_sizes
    with pytest.raises(ValueError):
        cross_validate([], methods)


@pytest.mark.slow
def test_thousand_instance_campaign():
    specs = build_specs(1000, [10, 25, 50], [2, 10, 50], seed=0)

    report = cross_validate(specs, default_methods())

    assert report.disagreements == []
    assert report.ordering_violations == []


def test_pinned_to_one_cpu_restores_affinity():
    process = psutil.Process()
    before = process.cpu_affinity() if hasattr(process, "cpu_affinity") else None

    with pinned_to_one_cpu() as cpu:
        if cpu is not None:
            assert process.cpu_affinity() == [cpu]

    if before is not None:
        assert process.cpu_affinity() == before


def test_run_benchmark_rows():
    grid = [GridPoint(n=10, m=20, ks=[1, 2])]

    report = run_benchmark(grid, reps=2, seed=4, pin_cpu=False)

    assert len(report.rows) == 2 * 7
    assert {row.rep for row in report.rows} == {0, 1}
    assert {(row.method, row.k) for row in report.rows} == {
        ("tp", 0),
        ("matrix", 0),
        ("col_reduct", 0),
        ("peval", 1),
        ("peval_col_reduct", 1),
        ("peval", 2),
        ("peval_col_reduct", 2),
    }
    facts = len(generate_program(GenSpec(n=10, m=20, seed=4)).facts)
    assert {row.facts for row in report.rows} == {facts}
    assert report.model_size_mismatches() == []
    averages = report.averages()
    assert len(averages) == 7
    assert all(a.runs == 2 for a in averages)
    assert all(a.facts == facts for a in averages)
    assert report.trend() == []


def test_run_benchmark_trend_at_fifty_rules_per_atom():
    report = run_benchmark([GridPoint(n=10, m=500)], reps=1, pin_cpu=False)

    checks = report.trend()

    assert len(checks) == 1
    assert (checks[0].n, checks[0].m) == (10, 500)


def test_run_benchmark_rejects_zero_reps():
    with pytest.raises(ValueError):
        run_benchmark([GridPoint(n=10, m=20)], reps=0, pin_cpu=False)


def test_model_size_mismatches():
    report = BenchReport(rows=[_row("matrix"), _row("col_reduct", model_size=4)])

    assert report.model_size_mismatches() == [(10, 20, 0)]


def test_write_csv(tmp_path):
    report = BenchReport(rows=[_row("matrix"), _row("col_reduct", fixpoint_s=0.25)])

    path = write_csv(report, str(tmp_path / "out" / "bench.csv"))

    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "10,20,matrix,0,0,2,0.000000,0.500000,0.500000,40,0.250000,3"
    assert len(lines) == 3


def test_write_csv_empty_report(tmp_path):
    path = write_csv(BenchReport(), str(tmp_path / "empty.csv"))

    with open(path, encoding="utf-8") as handle:
        assert handle.read() == ",".join(CSV_HEADER) + "\n"


def test_emit_plot_data(tmp_path):
    report = BenchReport(
        rows=[
            _row("matrix", m=20, fixpoint_s=0.5),
            _row("matrix", m=20, fixpoint_s=0.3, rep=1),
            _row("col_reduct", m=20, fixpoint_s=0.2),
            _row("matrix", m=100, fixpoint_s=1.0),
        ]
    )

    paths = emit_plot_data(report, str(tmp_path / "plots"))

    assert [os.path.basename(p) for p in paths] == ["fixpoint_n10.dat"]
    with open(paths[0], encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "# m matrix col_reduct"
    assert lines[2] == "20 0.400000 0.200000"
    assert lines[3] == "100 1.000000 nan"


def test_plot_series_labels_carry_k(tmp_path):
    report = BenchReport(rows=[_row("peval", k=3), _row("peval_col_reduct", k=3)])

    (path,) = emit_plot_data(report, str(tmp_path))

    with open(path, encoding="utf-8") as handle:
        assert "# m peval_k3 peval_col_reduct_k3" in handle.read()


def test_summary_tables():
    report = run_benchmark([GridPoint(n=10, m=20, ks=[1])], reps=1, pin_cpu=False)

    tables = summary_tables(report)

    assert len(tables) == 1
    assert tables[0].row_count == 1
    assert len(tables[0].columns) == 7 + 3
