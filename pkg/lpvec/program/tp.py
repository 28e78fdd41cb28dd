"""Immediate-consequence (T_P) operator: the symbolic reference solver."""

from __future__ import annotations

import logging
from typing import Tuple

from lpvec.errors import FixpointDivergenceError
from lpvec.program.model import (
    ConstraintCheck,
    ConstraintSet,
    DefiniteProgram,
    Interpretation,
    Rule,
    RuleKind,
)

logger = logging.getLogger(__name__)


def _fires(rule: Rule, members: frozenset) -> bool:
    if rule.kind is RuleKind.DISJUNCTIVE:
        return not rule.body_set.isdisjoint(members)
    return rule.body_set <= members


def tp_step(program: DefiniteProgram, interpretation: Interpretation) -> Interpretation:
    """One application of T_P. Facts always fire (empty body is a subset)."""
    members = interpretation.members
    return Interpretation(
        frozenset(rule.head for rule in program.rules if _fires(rule, members))
    )


def tp_least_model(program: DefiniteProgram) -> Tuple[Interpretation, int]:
    """Iterate T_P from the fact set until it stabilizes.

    Returns the least model and the number of T_P applications, counting the
    final one that confirms the fixpoint.
    """
    current = Interpretation(program.facts)
    bound = program.n + 1
    iterations = 0
    while True:
        following = tp_step(program, current)
        iterations += 1
        if following == current:
            break
        if iterations > bound:
            raise FixpointDivergenceError(
                f"T_P iteration did not stabilize within {bound} steps"
            )
        current = following
    logger.debug("T_P fixpoint: %d atoms after %d steps", len(current), iterations)
    return current, iterations


def is_model(program: DefiniteProgram, interpretation: Interpretation) -> bool:
    members = interpretation.members
    return all(
        rule.head in members for rule in program.rules if _fires(rule, members)
    )


def check_constraints_symbolic(
    constraints: ConstraintSet, interpretation: Interpretation
) -> ConstraintCheck:
    """A constraint is violated when its whole body holds."""
    members = interpretation.members
    return ConstraintCheck(
        tuple(
            index
            for index, body in enumerate(constraints.bodies)
            if frozenset(body) <= members
        )
    )
