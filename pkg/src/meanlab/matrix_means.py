"""Matrix means built from scalar means.

Two constructions live here.  The Hadamard construction lifts a symmetric
homogeneous mean M(a, b) to the linear map

    X -> U ([M(lambda_i, mu_j)] o (U^T X V)) V^T

for S = U diag(lambda) U^T and T = V diag(mu) V^T.  The operator means
(weighted arithmetic, weighted geometric, logarithmic and power means) are
the Kubo-Ando means of the pair (S, T).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List

import numpy as np

from .matrix_core import (
    PsdMatrix,
    SingularMatrixError,
    as_psd,
    general,
    loewner_gap,
    psd_power,
    spectral_apply,
    symmetrize,
)
from .scalar_means import (
    Family,
    MeanDomainError,
    MeanKind,
    logarithmic,
    mean_limit_at_zero,
)

DEFAULT_NODES = 64


@lru_cache(maxsize=32)
def gauss_legendre_01(nodes: int):
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    if nodes < 2:
        raise ValueError("quadrature needs at least 2 nodes")
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1) / 2, w / 2


@dataclass(frozen=True)
class MatrixMeanSpec:
    """A scalar mean plus the method used to lift it to matrices.

    ``method`` is one of ``"hadamard"``, ``"explicit"`` or ``"quadrature"``.
    """

    scalar_mean: MeanKind
    method: str = "hadamard"
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.method not in ("hadamard", "explicit", "quadrature"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "quadrature" and self.scalar_mean.family is not Family.LOGARITHMIC:
            raise ValueError("quadrature applies only to the logarithmic mean")
        if self.method == "explicit" and not self.scalar_mean.separable:
            raise ValueError(f"{self.scalar_mean} has no explicit separable form")

    def __call__(self, s, t, x) -> np.ndarray:
        if self.method == "hadamard":
            return hadamard_mean(self.scalar_mean, s, t, x)
        return explicit_map(self.scalar_mean, s, t, x, nodes=self.nodes)


def mean_table(kind: MeanKind, lam: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """[M(lam_i, mu_j)] with the continuous extension at zero eigenvalues."""
    lam = np.maximum(np.asarray(lam, dtype=float), 0.0)
    mu = np.maximum(np.asarray(mu, dtype=float), 0.0)
    ll, mm = np.meshgrid(lam, mu, indexing="ij")
    out = np.zeros_like(ll)
    pos = (ll > 0) & (mm > 0)
    if np.any(pos):
        out[pos] = kind(ll[pos], mm[pos])
    lz = (ll == 0) & (mm > 0)
    mz = (mm == 0) & (ll > 0)
    if np.any(lz) or np.any(mz):
        try:
            out[lz] = mean_limit_at_zero(kind, mm[lz])
            out[mz] = mean_limit_at_zero(kind, ll[mz])
        except MeanDomainError:
            i, j = np.argwhere(lz | mz)[0]
            raise MeanDomainError(
                f"{kind} undefined at eigenvalue pair ({lam[i]}, {mu[j]}); regularize the matrices"
            ) from None
    return out


def hadamard_mean(kind: MeanKind, s, t, x) -> np.ndarray:
    """M(S, T)X through the joint eigenbases and a Hadamard product."""
    s, t = as_psd(s), as_psd(t)
    x = general(x)
    if not (s.n == t.n == x.shape[0]):
        raise ValueError("S, T and X must have the same dimension")
    u, v = s.basis, t.basis
    table = mean_table(kind, s.spectrum, t.spectrum)
    return u @ (table * (u.T @ x @ v)) @ v.T


def explicit_map(kind: MeanKind, s, t, x, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Closed-form matrix expressions for separable means.

    A: (SX + XT)/2.  G: S^(1/2) X T^(1/2).  L: integral of S^v X T^(1-v) over
    [0, 1] by Gauss-Legendre quadrature.  Heinz: (S^v X T^(1-v) + S^(1-v) X T^v)/2.
    Heron: combination of the G and A maps.
    """
    s, t = as_psd(s), as_psd(t)
    x = general(x)
    f, p = kind.family, kind.param
    if f is Family.ARITHMETIC:
        return (s.matrix @ x + x @ t.matrix) / 2
    if f is Family.GEOMETRIC:
        return psd_power(s, 0.5) @ x @ psd_power(t, 0.5)
    if f is Family.LOGARITHMIC:
        vs, ws = gauss_legendre_01(nodes)
        acc = np.zeros_like(x)
        for v, w in zip(vs, ws):
            acc += w * (psd_power(s, v) @ x @ psd_power(t, 1 - v))
        return acc
    if f is Family.HEINZ:
        return (psd_power(s, p) @ x @ psd_power(t, 1 - p) + psd_power(s, 1 - p) @ x @ psd_power(t, p)) / 2
    if f in (Family.HERON, Family.HERON_HAT):
        w_geo = p if f is Family.HERON else 1 - p
        geo = psd_power(s, 0.5) @ x @ psd_power(t, 0.5)
        ari = (s.matrix @ x + x @ t.matrix) / 2
        return w_geo * geo + (1 - w_geo) * ari
    raise ValueError(f"{kind} has no explicit separable form")


# ---------------------------------------------------------------------------
# Kubo-Ando operator means
# ---------------------------------------------------------------------------


def _check_weight(v):
    if not 0 <= v <= 1:
        raise MeanDomainError(f"weight must lie in [0, 1], got {v}")


class _Congruence:
    """Caches S^(1/2), S^(-1/2) and the decomposition of S^(-1/2) T S^(-1/2)."""

    def __init__(self, s, t):
        self.s = as_psd(s)
        t = np.asarray(t.matrix if isinstance(t, PsdMatrix) else t, dtype=float)
        if not self.s.is_definite():
            raise SingularMatrixError("operator geometric means need a positive definite S; regularize first")
        self.half = psd_power(self.s, 0.5)
        self.neg_half = psd_power(self.s, -0.5)
        self.core = PsdMatrix.from_array(self.neg_half @ t @ self.neg_half, psd_tol=1e-8 * max(1.0, np.abs(t).max()))

    def lift(self, fn) -> np.ndarray:
        return symmetrize(self.half @ spectral_apply(self.core, fn) @ self.half)


def op_arith(v: float, s, t) -> np.ndarray:
    """Weighted arithmetic mean (1 - v) S + v T."""
    _check_weight(v)
    return symmetrize((1 - v) * np.asarray(s, dtype=float) + v * np.asarray(t, dtype=float))


def op_geom(v: float, s, t) -> np.ndarray:
    """Weighted geometric mean S^(1/2) (S^(-1/2) T S^(-1/2))^v S^(1/2)."""
    _check_weight(v)
    if v == 0:
        return symmetrize(np.asarray(s, dtype=float))
    return _Congruence(s, t).lift(lambda w: w**v)


def op_log(s, t, nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Logarithmic operator mean: the integral over v in [0, 1] of op_geom(v, S, T)."""
    if nodes < 2:
        raise ValueError("quadrature needs at least 2 nodes")
    c = _Congruence(s, t)
    vs, ws = gauss_legendre_01(nodes)
    core = c.core
    acc = np.zeros_like(c.half)
    for v, w in zip(vs, ws):
        acc += w * spectral_apply(core, lambda lam, v=v: lam**v)
    return symmetrize(c.half @ acc @ c.half)


def op_log_closed(s, t) -> np.ndarray:
    """S^(1/2) L(S^(-1/2) T S^(-1/2), I) S^(1/2) using the scalar logarithmic mean."""
    c = _Congruence(s, t)

    def f(w):
        out = np.zeros_like(w)
        pos = w > 0
        out[pos] = logarithmic(w[pos], np.ones(pos.sum()))
        return out

    return c.lift(f)


def op_power_mean(p: float, s, t) -> np.ndarray:
    """Matrix power mean S^(1/2) ((M^p + I)/2)^(1/p) S^(1/2), M = S^(-1/2) T S^(-1/2).

    p = 0 is rejected; its limit is op_geom(1/2, S, T).
    """
    if p == 0:
        raise MeanDomainError("power mean at p = 0 is the geometric mean; call op_geom(0.5, S, T)")
    c = _Congruence(s, t)
    if p < 0 and not c.core.is_definite():
        raise SingularMatrixError("negative-order power mean needs T positive definite")

    def f(w):
        with np.errstate(divide="ignore"):
            return ((w**p + 1) / 2) ** (1 / p)

    return c.lift(f)


# ---------------------------------------------------------------------------
# the operator chain
# ---------------------------------------------------------------------------

OPERATOR_LABELS = ["S#T", "middle", "SlT", "heron", "SvT"]


@dataclass
class LinkVerdict:
    label: str
    min_eigenvalue: float
    asymmetry: float
    holds: bool


@dataclass
class OperatorVerdict:
    t: float
    s: float
    p: float
    links: List[LinkVerdict] = field(default_factory=list)
    middle_asymmetry: float = 0.0
    scale: float = 1.0

    @property
    def holds(self) -> bool:
        return all(link.holds for link in self.links)

    @property
    def worst(self) -> float:
        return min(link.min_eigenvalue for link in self.links)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "s": self.s,
            "p": self.p,
            "holds": self.holds,
            "worst_min_eigenvalue": self.worst,
            "middle_asymmetry": self.middle_asymmetry,
            "links": [vars(link) for link in self.links],
        }


def operator_chain(s, t, t_param: float, s_param: float, p: float, nodes: int = DEFAULT_NODES):
    """The five chain expressions and the power mean, in order.

    The second expression is built literally as
    (S #_{t/2} T) S^(-1) (S #_{1-t} (S v T)) and is not symmetrised.
    """
    s = as_psd(s)
    t_mat = np.asarray(t, dtype=float)
    arith = op_arith(0.5, s.matrix, t_mat)
    geo = op_geom(0.5, s, t_mat)
    middle = op_geom(t_param / 2, s, t_mat) @ psd_power(s, -1) @ op_geom(1 - t_param, s, arith)
    logm = op_log(s, t_mat, nodes)
    heron_m = s_param * geo + (1 - s_param) * arith
    power = op_power_mean(p, s, t_mat)
    return [geo, middle, logm, heron_m, arith], power


def operator_chain_check(s, t, t_param: float = 2 / 3, s_param: float = 2 / 3, p: float = 1 / 3,
                         tol: float = 1e-9, nodes: int = DEFAULT_NODES, normalize: bool = True) -> OperatorVerdict:
    """Check S#T <= middle <= SlT <= sS#T + (1-s)SvT <= SvT and SlT <= power mean.

    Requires 2/3 <= t <= 1, 0 <= s <= 2/3, p >= 1/3.  With ``normalize`` both
    matrices are divided by the larger of their top eigenvalues first; all
    expressions are homogeneous so the ordering is unchanged.
    """
    if not (2 / 3 - 1e-15 <= t_param <= 1):
        raise MeanDomainError(f"t must lie in [2/3, 1], got {t_param}")
    if not (0 <= s_param <= 2 / 3 + 1e-15):
        raise MeanDomainError(f"s must lie in [0, 2/3], got {s_param}")
    if p < 1 / 3 - 1e-15:
        raise MeanDomainError(f"p must be at least 1/3, got {p}")
    s = as_psd(s)
    t_psd = as_psd(t)
    scale = 1.0
    if normalize:
        scale = max(float(s.spectrum[0]), float(t_psd.spectrum[0]), 1e-300)
        s = PsdMatrix(s.matrix / scale, s.spectrum / scale, s.basis)
        t_psd = PsdMatrix(t_psd.matrix / scale, t_psd.spectrum / scale, t_psd.basis)
    chain, power = operator_chain(s, t_psd.matrix, t_param, s_param, p, nodes)
    verdict = OperatorVerdict(t_param, s_param, p, scale=scale)
    mid = chain[1]
    verdict.middle_asymmetry = float(np.max(np.abs(mid - mid.T))) / 2
    for i in range(len(chain) - 1):
        g = loewner_gap(chain[i], chain[i + 1], tol)
        verdict.links.append(LinkVerdict(f"{OPERATOR_LABELS[i]} <= {OPERATOR_LABELS[i + 1]}", g.min_eigenvalue, g.asymmetry, g.holds))
    g = loewner_gap(chain[2], power, tol)
    verdict.links.append(LinkVerdict("SlT <= power mean", g.min_eigenvalue, g.asymmetry, g.holds))
    return verdict
