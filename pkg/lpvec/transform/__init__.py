"""Program transformations: d-programs and symbolic partial evaluation."""

from .dprogram import (
    DProgram,
    expand_disjunctions,
    flatten,
    heads_index,
    is_sd,
    restrict_model,
    to_d_program,
)
from .peval import UnfoldContext, peval_symbolic, peval_symbolic_iter, unfold_rule

__all__ = [
    "DProgram",
    "UnfoldContext",
    "expand_disjunctions",
    "flatten",
    "heads_index",
    "is_sd",
    "peval_symbolic",
    "peval_symbolic_iter",
    "restrict_model",
    "to_d_program",
    "unfold_rule",
]
