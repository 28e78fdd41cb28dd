"""Sparse matrix kernel: encoders, thresholdings, products and powers."""

from .encode import (
    DRuleIndex,
    d_rule_index,
    d_rule_matrix,
    decode_sd,
    encode_constraints,
    encode_d_program,
    encode_sd,
    encode_submatrix,
    initial_vector,
)
from .matrix import SparseMatrix, add_matrices, matmul, matvec
from .power import floor_support, gamma_k
from .threshold import check_constraints_vec, theta, theta_d

__all__ = [
    "DRuleIndex",
    "SparseMatrix",
    "add_matrices",
    "check_constraints_vec",
    "d_rule_index",
    "d_rule_matrix",
    "decode_sd",
    "encode_constraints",
    "encode_d_program",
    "encode_sd",
    "encode_submatrix",
    "floor_support",
    "gamma_k",
    "initial_vector",
    "matmul",
    "matvec",
    "theta",
    "theta_d",
]
