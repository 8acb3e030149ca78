"""Real symmetric matrices: Jacobi eigensolver, PSD powers, Loewner order.

Symmetric and general matrices are plain ``numpy.ndarray`` objects; only
positive semidefinite matrices get a wrapper, :class:`PsdMatrix`, which
caches the spectral decomposition computed once at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numba import njit

JACOBI_TOL = 1e-14
MAX_SWEEPS = 64
INVERSE_THRESHOLD = 1e-12  # lambda_min / lambda_max below this is treated as singular


class MatrixError(ValueError):
    pass


class SingularMatrixError(MatrixError):
    """A negative power of a matrix that is singular at the configured threshold."""


def symmetrize(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix has non-finite entries")
    return (m + m.T) / 2


def general(m) -> np.ndarray:
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix has non-finite entries")
    return m


@njit(cache=True)
def _jacobi_sweeps(a, v, target, max_sweeps):
    n = a.shape[0]
    prev_off = np.inf
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += a[p, q] * a[p, q]
        off = math.sqrt(off)
        # stagnation: rounding noise floor reached
        if off <= target or (sweep > 4 and off >= prev_off):
            return sweep
        prev_off = off
        skip_below = 0.2 * off / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0 or abs(apq) < skip_below:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                g = 100.0 * abs(apq)
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return -1


def jacobi_eigh(m, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Sweeps over all (p, q) pairs, annihilating each off-diagonal entry with
    a plane rotation, until the off-diagonal Frobenius mass falls below
    ``tol * ||m||_F`` or stops decreasing (rounding floor).  During the first
    three sweeps entries below ``0.2 * off / n**2`` are skipped.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Sorted nonincreasing.
    basis : ndarray, shape (n, n)
        Orthonormal eigenvectors as columns, in the same order.
    """
    a = np.ascontiguousarray(symmetrize(m))
    n = a.shape[0]
    v = np.eye(n)
    total = float(np.linalg.norm(a))
    if n == 1 or total == 0.0:
        return _sorted(np.diag(a).copy(), v)
    if _jacobi_sweeps(a, v, tol * total, max_sweeps) < 0:
        raise MatrixError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return _sorted(np.diag(a).copy(), v)


def _sorted(w, v):
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eig_sym(m) -> Tuple[np.ndarray, np.ndarray]:
    """Spectrum (nonincreasing) and orthonormal eigenvector basis of a symmetric matrix."""
    return jacobi_eigh(m)


def eigvals_sym(m) -> np.ndarray:
    return jacobi_eigh(m)[0]


def spectral_norm_sym(m) -> float:
    w = eigvals_sym(m)
    return float(max(abs(w[0]), abs(w[-1])))


@dataclass(frozen=True, eq=False)
class PsdMatrix:
    """Symmetric PSD matrix with its cached decomposition U diag(lambda) U^T."""

    matrix: np.ndarray
    spectrum: np.ndarray
    basis: np.ndarray

    @classmethod
    def from_array(cls, m, psd_tol: Optional[float] = None) -> "PsdMatrix":
        s = symmetrize(m)
        w, u = eig_sym(s)
        scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
        tol = psd_tol if psd_tol is not None else 64 * np.finfo(float).eps * s.shape[0] * scale
        if w[-1] < -tol:
            raise MatrixError(f"matrix is not positive semidefinite (lambda_min = {w[-1]:.3e})")
        return cls(s, w, u)

    @classmethod
    def from_decomposition(cls, spectrum, basis) -> "PsdMatrix":
        w = np.asarray(spectrum, dtype=float)
        u = np.asarray(basis, dtype=float)
        if np.any(w < 0):
            raise MatrixError("negative eigenvalue in a PSD decomposition")
        w, u = _sorted(w, u)
        return cls(symmetrize((u * w) @ u.T), w, u)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def clipped_spectrum(self) -> np.ndarray:
        """Eigenvalues with rounding-level negatives set to zero."""
        return np.maximum(self.spectrum, 0.0)

    def is_definite(self, threshold: float = INVERSE_THRESHOLD) -> bool:
        lmax = float(self.spectrum[0])
        return lmax > 0 and float(self.spectrum[-1]) > threshold * lmax

    def power(self, v: float) -> np.ndarray:
        return psd_power(self, v)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_psd(m: Union[PsdMatrix, np.ndarray, Sequence]) -> PsdMatrix:
    return m if isinstance(m, PsdMatrix) else PsdMatrix.from_array(m)


def spectral_apply(s: PsdMatrix, fn) -> np.ndarray:
    """U diag(fn(lambda)) U^T."""
    u = s.basis
    return symmetrize((u * fn(s.clipped_spectrum)) @ u.T)


def psd_power(s: PsdMatrix, v: float) -> np.ndarray:
    """S^v through the cached decomposition.  S^0 is the identity."""
    s = as_psd(s)
    if v == 0:
        return np.eye(s.n)
    if v < 0 and not s.is_definite():
        raise SingularMatrixError(
            f"negative power {v} of a matrix with lambda_min/lambda_max = "
            f"{s.spectrum[-1] / max(s.spectrum[0], 1e-300):.3e}; regularize first"
        )
    return spectral_apply(s, lambda w: w**v)


def regularize(s: PsdMatrix, eps: float) -> PsdMatrix:
    """S + eps*I, reusing the eigenbasis."""
    if eps < 0:
        raise MatrixError("regularization must be nonnegative")
    s = as_psd(s)
    if eps == 0:
        return s
    return PsdMatrix(s.matrix + eps * np.eye(s.n), s.spectrum + eps, s.basis)


@dataclass(frozen=True)
class LoewnerGap:
    """Outcome of comparing A <= B: the smallest eigenvalue of sym(B - A)."""

    min_eigenvalue: float
    scale: float
    asymmetry: float
    holds: bool


def loewner_gap(a, b, tol: float = 1e-9) -> LoewnerGap:
    """Compare A <= B in Loewner order.

    The difference B - A is not assumed symmetric; its symmetric part is
    tested and the size of the antisymmetric part is reported.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise MatrixError(f"dimension mismatch {a.shape} vs {b.shape}")
    d = b - a
    asym = float(np.max(np.abs(d - d.T))) / 2 if d.size else 0.0
    w = eigvals_sym(d)
    scale = max(1.0, float(max(abs(w[0]), abs(w[-1]))))
    lmin = float(w[-1])
    return LoewnerGap(lmin, scale, asym, lmin >= -tol * scale)


def loewner_leq(a, b, tol: float = 1e-9) -> bool:
    """True iff lambda_min(B - A) >= -tol * max(1, ||B - A||)."""
    return loewner_gap(a, b, tol).holds


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_orthogonal(n: int, seed) -> np.ndarray:
    """Haar-distributed orthogonal matrix from the QR factorisation of a Gaussian."""
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_psd(n: int, seed, condition_range: Tuple[float, float] = (1e-2, 1.0)) -> PsdMatrix:
    """Random PD matrix with spectrum drawn log-uniformly from ``condition_range``."""
    if n < 1:
        raise MatrixError("dimension must be at least 1")
    lo, hi = condition_range
    if not 0 < lo <= hi:
        raise MatrixError(f"bad condition range {condition_range}")
    rng = _rng(seed)
    q = random_orthogonal(n, rng)
    w = np.exp(rng.uniform(math.log(lo), math.log(hi), size=n)) if hi > lo else np.full(n, lo)
    return PsdMatrix.from_decomposition(w, q)


def random_matrix(n: int, seed) -> np.ndarray:
    if n < 1:
        raise MatrixError("dimension must be at least 1")
    return _rng(seed).standard_normal((n, n))


# ---------------------------------------------------------------------------
# text format: first line is the dimension, then row-major entries
# ---------------------------------------------------------------------------


def parse_matrix(text: str) -> np.ndarray:
    tokens = text.split()
    if not tokens:
        raise MatrixError("empty matrix text")
    n = int(tokens[0])
    entries = tokens[1:]
    if n < 1 or len(entries) != n * n:
        raise MatrixError(f"expected {n * n} entries after header {n}, got {len(entries)}")
    return general(np.array([float(t) for t in entries]).reshape(n, n))


def format_matrix(m) -> str:
    m = np.asarray(m, dtype=float)
    rows = [" ".join(repr(float(x)) for x in row) for row in m]
    return f"{m.shape[0]}\n" + "\n".join(rows) + "\n"


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, m) -> None:
    Path(path).write_text(format_matrix(m))
