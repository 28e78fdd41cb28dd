"""Encoders between programs and matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from lpvec.errors import DimensionMismatchError, NotSingleDefinedError
from lpvec.linalg.matrix import SparseMatrix, add_matrices
from lpvec.program.model import (
    AtomTable,
    ConstraintSet,
    DefiniteProgram,
    Rule,
    RuleKind,
)
from lpvec.transform.dprogram import DProgram


@dataclass(frozen=True)
class DRuleIndex:
    """Fresh atom id -> head of the d-rule whose body mentions it.

    Stored as parallel arrays so theta_d can propagate in one step.
    """

    sources: NDArray[np.int64]
    targets: NDArray[np.int64]

    def __len__(self) -> int:
        return int(self.sources.size)

    def as_dict(self) -> Dict[int, int]:
        return {int(j): int(i) for j, i in zip(self.sources, self.targets)}

    @classmethod
    def empty(cls) -> "DRuleIndex":
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))


def encode_sd(q: DefiniteProgram, dim: int | None = None) -> SparseMatrix:
    """Square program matrix of an SD program.

    A rule with ``l`` body atoms puts ``1/l`` at (head, body atom); a fact
    puts 1 on its diagonal.
    """
    size = q.n if dim is None else dim
    if size < q.n:
        raise DimensionMismatchError(
            f"dimension {size} is smaller than the {q.n} atoms of the program"
        )
    entries: List[Tuple[int, int, float]] = []
    seen = set()
    for rule in q.rules:
        if rule.kind is not RuleKind.CONJUNCTIVE:
            raise ValueError(
                f"encode_sd expects conjunctive rules, got '{q.rule_text(rule)}'"
            )
        if rule.head in seen:
            raise NotSingleDefinedError(
                q.atoms.name_of(rule.head),
                len(q.rules_by_head[rule.head]),
                "matrix encoding",
            )
        seen.add(rule.head)
        if rule.is_fact:
            entries.append((rule.head, rule.head, 1.0))
        else:
            weight = 1.0 / len(rule.body)
            entries.extend((rule.head, b, weight) for b in rule.body)
    return SparseMatrix.from_entries(size, size, entries)


def d_rule_matrix(dp: DProgram) -> SparseMatrix:
    """M_D: weight 1 at every body column of each d-rule row."""
    return SparseMatrix.from_entries(
        dp.m, dp.m, ((rule.head, j, 1.0) for rule in dp.d for j in rule.body)
    )


def encode_d_program(dp: DProgram) -> SparseMatrix:
    return add_matrices(
        encode_sd(dp.q, dp.m), d_rule_matrix(dp), require_disjoint_rows=True
    )


def encode_submatrix(dp: DProgram) -> SparseMatrix:
    """The m x n submatrix: original-atom columns of the d-program matrix."""
    return encode_d_program(dp).truncate_columns(dp.n)


def encode_constraints(constraints: ConstraintSet, n: int) -> SparseMatrix:
    """One row per constraint, ``1/|body|`` at each body column."""
    entries: List[Tuple[int, int, float]] = []
    for i, body in enumerate(constraints.bodies):
        if max(body) >= n:
            raise DimensionMismatchError(
                f"constraint {i} mentions atom id {max(body)} outside base size {n}"
            )
        weight = 1.0 / len(body)
        entries.extend((i, b, weight) for b in body)
    return SparseMatrix.from_entries(len(constraints), n, entries)


def d_rule_index(dp: DProgram) -> DRuleIndex:
    pairs = [(j, rule.head) for rule in dp.d for j in rule.body]
    if not pairs:
        return DRuleIndex.empty()
    sources, targets = zip(*pairs)
    return DRuleIndex(
        np.asarray(sources, dtype=np.int64), np.asarray(targets, dtype=np.int64)
    )


def initial_vector(program: Union[DefiniteProgram, DProgram]) -> NDArray[np.uint8]:
    """Bit vector with 1 exactly at fact heads."""
    if isinstance(program, DProgram):
        facts, dim = program.q.facts, program.m
    else:
        facts, dim = program.facts, program.n
    bits = np.zeros(dim, dtype=np.uint8)
    if facts:
        bits[sorted(facts)] = 1
    return bits


def decode_sd(matrix: SparseMatrix, atoms: AtomTable) -> DefiniteProgram:
    """Read a square program matrix back as an SD program.

    A row whose only entry is its own diagonal is a fact; any other
    nonempty row is a conjunctive rule over the row's support. A rule
    ``h :- h`` encodes like a fact and is read back as one.
    """
    if matrix.rows != matrix.cols or matrix.rows != len(atoms):
        raise DimensionMismatchError(
            f"cannot decode a {matrix.rows}x{matrix.cols} matrix over "
            f"{len(atoms)} atoms"
        )
    rules: List[Rule] = []
    for i in range(matrix.rows):
        support = sorted(matrix.row(i))
        if not support:
            continue
        if support == [i]:
            rules.append(Rule(i))
        else:
            rules.append(Rule(i, tuple(support)))
    return DefiniteProgram(atoms, tuple(rules))
