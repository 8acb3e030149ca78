"""Numerical laboratory for inequalities between two-variable means.

Scalar means and their orderings, Kubo-Ando operator means, Hadamard-type
matrix means under unitarily invariant norms, and positive definiteness of
the kernels that decide those norm inequalities.
"""

from .inequality_lab import (
    ChainReport,
    GridSpec,
    diff_ratio,
    fundamental_chain,
    heinz_heron_condition,
    log_ratio,
    refined_chain,
    rho_chain,
    scan_sharp_constants,
)
from .kernel_posdef import (
    KernelFamily,
    gram,
    known_family_check,
    necessity_witnesses,
    parse_kernel,
    search_counterexample,
)
from .matrix_core import PsdMatrix, jacobi_eigh, loewner_leq, random_psd
from .matrix_means import hadamard_mean, op_arith, op_geom, op_log, op_power_mean, operator_chain_check
from .norms import hs_chain_check, ky_fan_dominates, singular_values, ui_bound_check_Kr
from .scalar_means import A, G, H, L, MeanDomainError, MeanKind, ScalarPair, parse_mean

__version__ = "0.1.0"

__all__ = [
    "A", "G", "H", "L", "ChainReport", "GridSpec", "KernelFamily", "MeanDomainError", "MeanKind",
    "PsdMatrix", "ScalarPair", "diff_ratio", "fundamental_chain", "gram", "hadamard_mean",
    "heinz_heron_condition", "hs_chain_check", "jacobi_eigh", "known_family_check", "ky_fan_dominates",
    "loewner_leq", "log_ratio", "necessity_witnesses", "op_arith", "op_geom", "op_log", "op_power_mean",
    "operator_chain_check", "parse_kernel", "parse_mean", "random_psd", "refined_chain", "rho_chain",
    "scan_sharp_constants", "search_counterexample", "singular_values", "ui_bound_check_Kr",
]
