"""Symbolic partial evaluation of SD programs by parallel unfolding."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional

from lpvec.errors import NotSingleDefinedError
from lpvec.program.model import DefiniteProgram, Rule, RuleKind, dedupe_rules

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnfoldContext:
    """Definitions of an SD program: atom -> its unique rule."""

    defs: Dict[int, Rule]
    h_p: FrozenSet[int]

    @classmethod
    def from_program(cls, program: DefiniteProgram) -> "UnfoldContext":
        defs: Dict[int, Rule] = {}
        for rule in program.rules:
            if rule.kind is not RuleKind.CONJUNCTIVE:
                raise ValueError(
                    "partial evaluation does not unfold across d-rules; "
                    f"found '{program.rule_text(rule)}'"
                )
            if rule.head in defs:
                raise NotSingleDefinedError(
                    program.atoms.name_of(rule.head),
                    len(program.rules_by_head[rule.head]),
                    "partial evaluation",
                )
            defs[rule.head] = rule
        return cls(defs=defs, h_p=frozenset(defs))


def unfold_rule(rule: Rule, ctx: UnfoldContext) -> Optional[Rule]:
    """Replace every defined body atom by its definition's body.

    Returns None when the unfolded body still mentions an atom no rule
    defines; such a rule can never fire.
    """
    body: List[int] = []
    for atom in rule.body:
        definition = ctx.defs.get(atom)
        if definition is None:
            body.append(atom)
        else:
            body.extend(definition.body)
    unfolded = tuple(dict.fromkeys(body))
    if any(atom not in ctx.h_p for atom in unfolded):
        return None
    return Rule(rule.head, unfolded, RuleKind.CONJUNCTIVE)


def peval_symbolic(program: DefiniteProgram) -> DefiniteProgram:
    """One generation of parallel unfolding against the input's definitions."""
    ctx = UnfoldContext.from_program(program)
    kept = []
    removed = 0
    for rule in program.rules:
        unfolded = unfold_rule(rule, ctx)
        if unfolded is None:
            removed += 1
        else:
            kept.append(unfolded)
    if removed:
        logger.debug(
            "Partial evaluation removed %d rules with undefined atoms", removed
        )
    return DefiniteProgram(program.atoms, dedupe_rules(kept))


def peval_symbolic_iter(program: DefiniteProgram, k: int) -> DefiniteProgram:
    """Apply partial evaluation ``k`` times; ``k = 0`` is the identity."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    current = program
    if k == 0:
        UnfoldContext.from_program(program)
    for step in range(k):
        following = peval_symbolic(current)
        if following.rules == current.rules:
            logger.debug("Partial evaluation reached a fixpoint after %d steps", step)
            break
        current = following
    return current
