"""
Symbolic program model

Atoms are interned to dense integer ids; every other module speaks ids and
only the I/O boundary deals in names.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray


class RuleKind(str, Enum):
    CONJUNCTIVE = "conjunctive"
    DISJUNCTIVE = "disjunctive"


@dataclass(frozen=True)
class AtomTable:
    """Ordered name <-> id table. Ids are positions in ``names``."""

    names: Tuple[str, ...] = ()
    _index: Dict[str, int] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        index: Dict[str, int] = {}
        for i, name in enumerate(self.names):
            if name in index:
                raise ValueError(f"duplicate atom name '{name}' in atom table")
            index[name] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown atom '{name}'") from None

    def name_of(self, atom_id: int) -> str:
        return self.names[atom_id]

    def extend(self, extra: Iterable[str]) -> "AtomTable":
        return AtomTable(self.names + tuple(extra))

    def fresh_name(self, base: str, taken: Iterable[str] = ()) -> str:
        """Return ``base`` made unique against this table and ``taken``."""
        reserved = set(taken)
        name = base
        while name in self._index or name in reserved:
            name += "_"
        return name


@dataclass(frozen=True)
class Rule:
    """``head <- body`` where the body is conjunctive or disjunctive."""

    head: int
    body: Tuple[int, ...] = ()
    kind: RuleKind = RuleKind.CONJUNCTIVE

    def __post_init__(self) -> None:
        if len(set(self.body)) != len(self.body):
            object.__setattr__(self, "body", tuple(dict.fromkeys(self.body)))
        if not self.body and self.kind is RuleKind.DISJUNCTIVE:
            raise ValueError("a disjunctive rule needs a nonempty body")

    @property
    def is_fact(self) -> bool:
        return not self.body

    @cached_property
    def body_set(self) -> FrozenSet[int]:
        return frozenset(self.body)

    @property
    def key(self) -> Tuple[int, FrozenSet[int], RuleKind]:
        """Identity used to collapse duplicate rules (body order ignored)."""
        return (self.head, self.body_set, self.kind)


def dedupe_rules(rules: Iterable[Rule]) -> Tuple[Rule, ...]:
    """Drop repeated rules, keeping the first occurrence."""
    seen = set()
    kept: List[Rule] = []
    for rule in rules:
        if rule.key in seen:
            continue
        seen.add(rule.key)
        kept.append(rule)
    return tuple(kept)


@dataclass(frozen=True)
class DefiniteProgram:
    """A finite set of rules over an atom table.

    Disjunctive rules only appear in flattened d-programs.
    """

    atoms: AtomTable
    rules: Tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        size = len(self.atoms)
        for rule in self.rules:
            for atom in (rule.head, *rule.body):
                if not 0 <= atom < size:
                    raise ValueError(
                        f"rule references atom id {atom}, but the atom table has "
                        f"{size} entries"
                    )

    @property
    def n(self) -> int:
        return len(self.atoms)

    @cached_property
    def facts(self) -> FrozenSet[int]:
        return frozenset(rule.head for rule in self.rules if rule.is_fact)

    @cached_property
    def heads(self) -> FrozenSet[int]:
        return frozenset(rule.head for rule in self.rules)

    @cached_property
    def rules_by_head(self) -> Dict[int, Tuple[int, ...]]:
        """head id -> positions of its defining rules, in rule order."""
        index: Dict[int, List[int]] = defaultdict(list)
        for position, rule in enumerate(self.rules):
            index[rule.head].append(position)
        return {head: tuple(positions) for head, positions in index.items()}

    @property
    def has_disjunctive_rules(self) -> bool:
        return any(rule.kind is RuleKind.DISJUNCTIVE for rule in self.rules)

    def rule_text(self, rule: Rule) -> str:
        head = self.atoms.name_of(rule.head)
        if rule.is_fact:
            return f"{head}."
        sep = " ; " if rule.kind is RuleKind.DISJUNCTIVE else ", "
        body = sep.join(self.atoms.name_of(b) for b in rule.body)
        return f"{head} :- {body}."


@dataclass(frozen=True)
class Interpretation:
    """A set of true atoms, by id."""

    members: FrozenSet[int] = frozenset()

    def __contains__(self, atom: object) -> bool:
        return atom in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __le__(self, other: "Interpretation") -> bool:
        return self.members <= other.members

    @classmethod
    def of(cls, ids: Iterable[int]) -> "Interpretation":
        return cls(frozenset(int(i) for i in ids))

    @classmethod
    def from_names(cls, atoms: AtomTable, names: Iterable[str]) -> "Interpretation":
        return cls(frozenset(atoms.id_of(name) for name in names))

    @classmethod
    def from_bitvector(cls, bits: NDArray[np.uint8]) -> "Interpretation":
        return cls(frozenset(int(i) for i in np.flatnonzero(bits)))

    def names(self, atoms: AtomTable) -> List[str]:
        return sorted(atoms.name_of(i) for i in self.members)

    def to_bitvector(self, dim: int) -> NDArray[np.uint8]:
        bits = np.zeros(dim, dtype=np.uint8)
        if self.members:
            ids = np.fromiter(self.members, dtype=np.int64)
            if ids.max() >= dim:
                raise ValueError(
                    f"interpretation mentions atom id {int(ids.max())} outside "
                    f"dimension {dim}"
                )
            bits[ids] = 1
        return bits


@dataclass(frozen=True)
class ConstraintSet:
    """Integrity constraints ``<- body``, kept apart from the program."""

    bodies: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        cleaned = []
        seen = set()
        for body in self.bodies:
            if not body:
                raise ValueError("a constraint needs a nonempty body")
            unique = tuple(dict.fromkeys(body))
            key = frozenset(unique)
            if key in seen:
                continue
            seen.add(key)
            cleaned.append(unique)
        object.__setattr__(self, "bodies", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.bodies)

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.bodies)

    def constraint_text(self, index: int, atoms: AtomTable) -> str:
        return ":- " + ", ".join(atoms.name_of(b) for b in self.bodies[index]) + "."


@dataclass(frozen=True)
class ConstraintCheck:
    """Outcome of checking constraints against an interpretation."""

    violated: Tuple[int, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.violated

    def describe(self, constraints: ConstraintSet, atoms: AtomTable) -> List[str]:
        return [constraints.constraint_text(i, atoms) for i in self.violated]


def structurally_equal(left: DefiniteProgram, right: DefiniteProgram) -> bool:
    """Same rules by atom names and kinds, ignoring rule order and ids."""

    def _named(program: DefiniteProgram) -> FrozenSet[Tuple[str, FrozenSet[str], str]]:
        name = program.atoms.name_of
        return frozenset(
            (
                name(rule.head),
                frozenset(name(b) for b in rule.body),
                rule.kind.value,
            )
            for rule in program.rules
        )

    return _named(left) == _named(right)


def program_from_names(
    rules: Sequence[Tuple[str, Sequence[str]]],
    kinds: Sequence[RuleKind] | None = None,
) -> DefiniteProgram:
    """Build a program from ``(head, body)`` name pairs, interning in order."""
    names: Dict[str, int] = {}

    def intern(name: str) -> int:
        if name not in names:
            names[name] = len(names)
        return names[name]

    built = []
    for position, (head, body) in enumerate(rules):
        kind = kinds[position] if kinds is not None else RuleKind.CONJUNCTIVE
        head_id = intern(head)
        built.append(Rule(head_id, tuple(intern(b) for b in body), kind))
    return DefiniteProgram(AtomTable(tuple(names)), dedupe_rules(built))
