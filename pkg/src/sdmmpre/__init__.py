"""Secure distributed matrix multiplication with precomputation using GASP codes."""

from .degree_table import (
    GaspExponents,
    SchemeParams,
    build_gasp_exponents,
    check_table_conditions,
    count_servers,
    support_decomposition,
    symmetrize_count,
)
from .field import MERSENNE_61, FieldElement, FieldMatrix, PrimeField, SparsePoly
from .formulas import lower_bounds, n_pre_closed_form
from .protocol import multiply

__all__ = [
    "GaspExponents",
    "SchemeParams",
    "build_gasp_exponents",
    "check_table_conditions",
    "count_servers",
    "support_decomposition",
    "symmetrize_count",
    "MERSENNE_61",
    "FieldElement",
    "FieldMatrix",
    "PrimeField",
    "SparsePoly",
    "lower_bounds",
    "n_pre_closed_form",
    "multiply",
]
