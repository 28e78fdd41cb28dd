"""Symbolic programs: model, file format and the T_P reference solver."""

from .model import (
    AtomTable,
    ConstraintCheck,
    ConstraintSet,
    DefiniteProgram,
    Interpretation,
    Rule,
    RuleKind,
    dedupe_rules,
    program_from_names,
    structurally_equal,
)
from .parser import parse_constraints, parse_program, serialize_program
from .tp import check_constraints_symbolic, is_model, tp_least_model, tp_step

__all__ = [
    "AtomTable",
    "ConstraintCheck",
    "ConstraintSet",
    "DefiniteProgram",
    "Interpretation",
    "Rule",
    "RuleKind",
    "check_constraints_symbolic",
    "dedupe_rules",
    "is_model",
    "parse_constraints",
    "parse_program",
    "program_from_names",
    "serialize_program",
    "structurally_equal",
    "tp_least_model",
    "tp_step",
]
