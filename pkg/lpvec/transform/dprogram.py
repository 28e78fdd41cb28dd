"""
Non-SD to d-program transformation

Every atom defined by two or more rules gets one fresh atom per defining
rule; the original atom is then defined by a single disjunctive rule over
the fresh atoms. The result P^delta = Q + D has an SD part Q and a d-rule
part D, and its least model restricted to the original atoms is the least
model of the input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from lpvec.program.model import (
    AtomTable,
    DefiniteProgram,
    Interpretation,
    Rule,
    RuleKind,
    dedupe_rules,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DProgram:
    """A transformed program over an extended atom table of size ``m``.

    ``origin`` maps each fresh atom id (``n <= id < m``) to the position of
    the input rule it names.
    """

    q: DefiniteProgram
    d: Tuple[Rule, ...]
    n: int
    m: int
    origin: Dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def atoms(self) -> AtomTable:
        return self.q.atoms

    @property
    def d_heads(self) -> Tuple[int, ...]:
        return tuple(rule.head for rule in self.d)

    @property
    def compression(self) -> float:
        """Share of the extended base dropped by column reduction."""
        return (self.m - self.n) / self.m if self.m else 0.0

    def flatten(self) -> DefiniteProgram:
        return flatten(self)

    def validate(self) -> None:
        """Raise ValueError when a structural invariant does not hold."""
        if len(self.q.atoms) != self.m or not 0 <= self.n <= self.m:
            raise ValueError(
                f"inconsistent sizes: table {len(self.q.atoms)}, n={self.n}, m={self.m}"
            )
        if not is_sd(self.q):
            raise ValueError("SD part Q has two rules with the same head")
        q_heads = self.q.heads
        for rule in self.q.rules:
            if rule.kind is not RuleKind.CONJUNCTIVE:
                raise ValueError("SD part Q must be conjunctive")
            if any(b >= self.n for b in rule.body):
                raise ValueError(
                    f"Q rule for '{self.atoms.name_of(rule.head)}' uses a fresh atom"
                )
        body_uses: Dict[int, int] = {}
        for rule in self.d:
            if rule.kind is not RuleKind.DISJUNCTIVE:
                raise ValueError("D must contain d-rules only")
            if rule.head >= self.n or rule.head in q_heads:
                raise ValueError(
                    f"d-rule head '{self.atoms.name_of(rule.head)}' must be an "
                    "original atom not defined in Q"
                )
            for atom in rule.body:
                body_uses[atom] = body_uses.get(atom, 0) + 1
        for fresh in range(self.n, self.m):
            heads = len(self.q.rules_by_head.get(fresh, ()))
            if heads != 1 or body_uses.get(fresh, 0) != 1:
                raise ValueError(
                    f"fresh atom '{self.atoms.name_of(fresh)}' must head exactly one "
                    "Q rule and appear in exactly one d-rule"
                )


def heads_index(program: DefiniteProgram) -> Dict[int, Tuple[int, ...]]:
    """head id -> positions of its defining rules."""
    return program.rules_by_head


def is_sd(program: DefiniteProgram) -> bool:
    """True when no two rules share a head."""
    return all(len(positions) == 1 for positions in heads_index(program).values())


def expand_disjunctions(program: DefiniteProgram) -> DefiniteProgram:
    """Rewrite each d-rule ``h <- a ; b`` as ``h <- a`` and ``h <- b``."""
    if not program.has_disjunctive_rules:
        return program
    rules: List[Rule] = []
    for rule in program.rules:
        if rule.kind is RuleKind.DISJUNCTIVE:
            rules.extend(Rule(rule.head, (atom,)) for atom in rule.body)
        else:
            rules.append(rule)
    logger.debug("Expanded d-rules into %d conjunctive rules", len(rules))
    return DefiniteProgram(program.atoms, dedupe_rules(rules))


def to_d_program(program: DefiniteProgram) -> DProgram:
    """Transform a definite program into ``Q + D``.

    Fresh atoms are named ``<head>__<ordinal>`` in rule order, with
    underscores appended on collision.
    """
    program = expand_disjunctions(program)
    n = program.n
    multi = {
        head: positions
        for head, positions in program.rules_by_head.items()
        if len(positions) > 1
    }
    if not multi:
        return DProgram(q=program, d=(), n=n, m=n)

    fresh_names: List[str] = []
    fresh_of: Dict[int, int] = {}
    origin: Dict[int, int] = {}
    ordinal: Dict[int, int] = {}
    for position, rule in enumerate(program.rules):
        if rule.head not in multi:
            continue
        ordinal[rule.head] = ordinal.get(rule.head, 0) + 1
        base = f"{program.atoms.name_of(rule.head)}__{ordinal[rule.head]}"
        name = program.atoms.fresh_name(base, taken=fresh_names)
        fresh_id = n + len(fresh_names)
        fresh_names.append(name)
        fresh_of[position] = fresh_id
        origin[fresh_id] = position

    atoms = program.atoms.extend(fresh_names)
    q_rules = tuple(
        Rule(fresh_of.get(position, rule.head), rule.body, RuleKind.CONJUNCTIVE)
        for position, rule in enumerate(program.rules)
    )
    d_rules: List[Rule] = []
    seen = set()
    for rule in program.rules:
        if rule.head in multi and rule.head not in seen:
            seen.add(rule.head)
            body = tuple(fresh_of[position] for position in multi[rule.head])
            d_rules.append(Rule(rule.head, body, RuleKind.DISJUNCTIVE))

    dp = DProgram(
        q=DefiniteProgram(atoms, q_rules),
        d=tuple(d_rules),
        n=n,
        m=len(atoms),
        origin=origin,
    )
    logger.debug(
        "Transformed %d rules: %d multiply defined heads, base %d -> %d",
        len(program.rules),
        len(multi),
        n,
        dp.m,
    )
    return dp


def flatten(dp: DProgram) -> DefiniteProgram:
    """Q and D as a single program over the extended table."""
    return DefiniteProgram(dp.q.atoms, dp.q.rules + dp.d)


def restrict_model(interpretation: Interpretation, n: int) -> Interpretation:
    """Keep only original atoms (ids below ``n``)."""
    return Interpretation(frozenset(i for i in interpretation.members if i < n))
