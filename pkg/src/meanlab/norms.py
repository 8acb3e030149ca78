"""Unitarily invariant norms through singular values.

An inequality |||Y||| <= |||Z||| for every unitarily invariant norm is
equivalent to Ky Fan dominance: every partial sum of the sorted singular
values of Y is at most the matching partial sum for Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .inequality_lab import ChainReport
from .matrix_core import eigvals_sym, general, psd_power
from .matrix_means import explicit_map, hadamard_mean
from .scalar_means import A, G, L, Family, MeanDomainError, MeanKind

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SingularProfile:
    values: np.ndarray
    partial_sums: np.ndarray

    @classmethod
    def from_values(cls, values) -> "SingularProfile":
        values = np.sort(np.maximum(np.asarray(values, dtype=float), 0.0))[::-1]
        return cls(values, np.cumsum(values))


def singular_values(x) -> SingularProfile:
    """Singular values from the eigenvalues of [[0, X], [X^T, 0]].

    The augmented matrix has eigenvalues +-sigma_i, which keeps small
    singular values accurate to rounding of ||X|| (squaring through X^T X
    would not).
    """
    x = general(x)
    n = x.shape[0]
    aug = np.zeros((2 * n, 2 * n))
    aug[:n, n:] = x
    aug[n:, :n] = x.T
    w = eigvals_sym(aug)
    return SingularProfile.from_values(w[:n])


def norm(kind: str, x, param=None) -> float:
    """Unitarily invariant norm of X.

    ``kind`` is one of "kyfan" (param k), "schatten" (param p >= 1),
    "frobenius", "operator", "trace".
    """
    prof = singular_values(x)
    sv = prof.values
    n = sv.size
    kind = kind.lower()
    if kind == "kyfan":
        k = int(param)
        if not 1 <= k <= n:
            raise MeanDomainError(f"Ky Fan index must lie in [1, {n}], got {param}")
        return float(prof.partial_sums[k - 1])
    if kind == "schatten":
        p = float(param)
        if p < 1:
            raise MeanDomainError(f"Schatten exponent must be >= 1, got {p}")
        if np.isinf(p):
            return float(sv[0])
        top = sv[0]
        if top == 0:
            return 0.0
        return float(top * np.sum((sv / top) ** p) ** (1 / p))
    if kind == "frobenius":
        return norm("schatten", x, 2)
    if kind == "operator":
        return float(sv[0])
    if kind == "trace":
        return float(prof.partial_sums[-1])
    raise MeanDomainError(f"unknown norm {kind!r}")


def dominance_gap(y, z) -> float:
    """min over k of KyFan_k(Z) - KyFan_k(Y); nonnegative iff Z dominates Y."""
    y, z = general(y), general(z)
    if y.shape != z.shape:
        raise ValueError(f"dimension mismatch {y.shape} vs {z.shape}")
    return float(np.min(singular_values(z).partial_sums - singular_values(y).partial_sums))


def ky_fan_dominates(y, z, tol: float = DEFAULT_TOL) -> bool:
    """True iff |||Y||| <= |||Z||| + tol in every Ky Fan norm."""
    return dominance_gap(y, z) >= -tol


def normalize_instance(s, t, x):
    """Scale S, T to top eigenvalue 1 (jointly) and X to unit Frobenius norm."""
    from .matrix_core import PsdMatrix, as_psd

    s, t = as_psd(s), as_psd(t)
    x = general(x)
    c = max(float(s.spectrum[0]), float(t.spectrum[0]), 1e-300)
    fx = float(np.linalg.norm(x)) or 1.0
    s = PsdMatrix(s.matrix / c, s.spectrum / c, s.basis)
    t = PsdMatrix(t.matrix / c, t.spectrum / c, t.basis)
    return s, t, x / fx


HS_LABELS = ["G", "K_2/3", "L", "H_2/3"]


def hs_chain_check(s, t, x, tol: float = DEFAULT_TOL) -> ChainReport:
    """Frobenius norms of the G, K_2/3, L and H_2/3 maps, expected nondecreasing."""
    s, t, x = normalize_instance(s, t, x)
    maps = [
        psd_power(s, 0.5) @ x @ psd_power(t, 0.5),
        hadamard_mean(MeanKind(Family.BRIDGE, 2 / 3), s, t, x),
        explicit_map(L, s, t, x),
        hadamard_mean(MeanKind(Family.HERON, 2 / 3), s, t, x),
    ]
    values = [float(np.linalg.norm(m)) for m in maps]
    return ChainReport(list(HS_LABELS), values, tol)


@dataclass(frozen=True)
class DominanceVerdict:
    left_gap: float
    right_gap: float
    holds: bool


def ui_bound_details(r: float, s, t, x, tol: float = DEFAULT_TOL) -> DominanceVerdict:
    """Ky Fan gaps for G map <= K_r map <= A map."""
    if not 0 <= r <= 1:
        raise MeanDomainError(f"r must lie in [0, 1], got {r}")
    s, t, x = normalize_instance(s, t, x)
    geo = explicit_map(G, s, t, x)
    ari = explicit_map(A, s, t, x)
    k = hadamard_mean(MeanKind(Family.BRIDGE, r), s, t, x)
    left, right = dominance_gap(geo, k), dominance_gap(k, ari)
    return DominanceVerdict(left, right, left >= -tol and right >= -tol)


def ui_bound_check_Kr(r: float, s, t, x, tol: float = DEFAULT_TOL) -> bool:
    return ui_bound_details(r, s, t, x, tol).holds


def map_dominates(lower: MeanKind, upper: MeanKind, s, t, x, tol: float = DEFAULT_TOL) -> bool:
    """Whether the Hadamard map of ``upper`` Ky-Fan-dominates that of ``lower`` on one instance."""
    s, t, x = normalize_instance(s, t, x)
    return ky_fan_dominates(hadamard_mean(lower, s, t, x), hadamard_mean(upper, s, t, x), tol)
