"""Scalar inequality checks for bounds of the logarithmic mean."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .scalar_means import (
    MeanDomainError,
    ScalarPair,
    arithmetic,
    binomial,
    bridge,
    geometric,
    harmonic,
    heron,
    logarithmic,
    _as_pair,
)

DEFAULT_TOL = 1e-12
TWO_THIRDS = 2.0 / 3.0

# Even power series in u = log(x)/2 around x = 1; the raw quotients lose
# all digits there.  Coefficients of u^0, u^2, ..., u^10.
_LOG_RATIO_SERIES = (
    2 / 3,
    -2 / 45,
    19 / 2835,
    -23 / 17010,
    619 / 1871100,
    -469897 / 5108103000,
)
_DIFF_RATIO_SERIES = (
    2 / 3,
    1 / 90,
    -1 / 2520,
    1 / 75600,
    -1 / 2395008,
    691 / 54486432000,
)
# |u| below this uses the series; truncation error is below 1e-15 there.
RATIO_SERIES_CUTOFF = 0.05


@dataclass
class ChainReport:
    """Values of an inequality chain that should be nondecreasing left to right."""

    labels: List[str]
    values: List[float]
    tolerance: float = DEFAULT_TOL
    violations: List[Tuple[int, float]] = field(default_factory=list)

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValueError("labels and values differ in length")
        if not self.violations:
            self.violations = chain_violations(self.values, self.tolerance)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "values": [float(v) for v in self.values],
            "tolerance": self.tolerance,
            "violations": [[i, g] for i, g in self.violations],
        }


def chain_violations(values: Sequence[float], tol: float = DEFAULT_TOL) -> List[Tuple[int, float]]:
    """Indices i where values[i] <= values[i+1] fails beyond relative tolerance.

    The gap reported is values[i+1] - values[i] (negative for a violation).
    """
    out = []
    for i in range(len(values) - 1):
        gap = float(values[i + 1] - values[i])
        if gap < -tol * max(1.0, abs(float(values[i + 1]))):
            out.append((i, gap))
    return out


def chain_gaps(columns: np.ndarray, tol: float = DEFAULT_TOL):
    """Vectorised chain check.

    ``columns`` has shape (k, N): k chain terms for N pairs.  Returns the
    boolean violation mask of shape (k-1, N) and the most negative scaled gap.
    """
    columns = np.asarray(columns, dtype=float)
    gaps = np.diff(columns, axis=0)
    scale = np.maximum(1.0, np.abs(columns[1:]))
    bad = gaps < -tol * scale
    worst = float(np.min(gaps / scale)) if gaps.size else 0.0
    return bad, worst


# ---------------------------------------------------------------------------
# the fundamental chain and its refinements
# ---------------------------------------------------------------------------

FUNDAMENTAL_LABELS = ["G", "K_2/3", "L", "B_1/3", "H_2/3", "A"]


def fundamental_terms(a, b) -> np.ndarray:
    """Stacked chain G <= G^(2/3)A^(1/3) <= L <= B_(1/3) <= (2/3)G + (1/3)A <= A."""
    a, b = _as_pair(a, b)
    return np.array(
        [
            geometric(a, b),
            bridge(TWO_THIRDS, a, b),
            logarithmic(a, b),
            binomial(1 / 3, a, b),
            heron(TWO_THIRDS, a, b),
            arithmetic(a, b),
        ],
        dtype=float,
    )


def fundamental_chain(pair: ScalarPair, tol: float = DEFAULT_TOL) -> ChainReport:
    values = fundamental_terms(pair.a, pair.b)
    return ChainReport(list(FUNDAMENTAL_LABELS), [float(v) for v in values], tol)


def bounds_with_parameters(t: float, s: float, pair: ScalarPair, tol: float = DEFAULT_TOL):
    """Lower bound G^t A^(1-t) and upper bound sG + (1-s)A of L.

    Returns ``(lower, upper, holds)``.  The bounds are guaranteed for
    t >= 2/3 and s <= 2/3; other choices fail for some ratio a/b.
    """
    if not (0 <= t <= 1) or not (0 <= s <= 1):
        raise MeanDomainError(f"t and s must lie in [0, 1], got t={t}, s={s}")
    a, b = pair.a, pair.b
    lower = float(bridge(t, a, b))
    upper = float(heron(s, a, b))
    mid = float(logarithmic(a, b))
    scale = max(1.0, abs(mid))
    holds = (mid - lower >= -tol * scale) and (upper - mid >= -tol * scale)
    return lower, upper, holds


def refined_terms(m: int, a, b) -> np.ndarray:
    """Five-term refinement of the fundamental chain at order m.

    Rows: midpoint-type lower bound, cube-root lower bound, L, mixed upper
    bound, trapezoid-type upper bound.  m = 1 gives G, K_2/3, L, H_2/3, A.
    """
    if int(m) != m or m < 1:
        raise MeanDomainError(f"refinement order must be a positive integer, got {m}")
    m = int(m)
    a, b = _as_pair(a, b)
    la, lb = np.log(a), np.log(b)

    def mono(ea, eb):
        return np.exp(ea * la + eb * lb)

    k = np.arange(1, m + 1)
    mid_sum = sum(mono((2 * kk - 1) / (2 * m), (2 * m - (2 * kk - 1)) / (2 * m)) for kk in k)
    geo_sum = sum(mono((m - kk) / m, (kk - 1) / m) for kk in k)
    trap_sum = sum(mono(kk / m, (m - kk) / m) for kk in range(0, m + 1)) - (a + b) / 2

    a1, b1 = mono(1 / m, 0), mono(0, 1 / m)
    cube = np.cbrt(a1 * (a1 + b1) * b1 / 2)

    lower1 = mid_sum / m
    lower2 = geo_sum / m * cube
    upper1 = 2 * mid_sum / (3 * m) + trap_sum / (3 * m)
    upper2 = trap_sum / m
    return np.array([lower1, lower2, logarithmic(a, b), upper1, upper2], dtype=float)


REFINED_LABELS = ["lower_mid", "lower_cube", "L", "upper_mixed", "upper_trap"]


def refined_chain(m: int, pair: ScalarPair, tol: float = DEFAULT_TOL) -> ChainReport:
    values = refined_terms(m, pair.a, pair.b)
    return ChainReport(list(REFINED_LABELS), [float(v) for v in values], tol)


# ---------------------------------------------------------------------------
# sharpness of the constant 2/3
# ---------------------------------------------------------------------------


def _poly_even(coeffs, u):
    u2 = u * u
    acc = np.zeros_like(u)
    for c in reversed(coeffs):
        acc = acc * u2 + c
    return acc


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise MeanDomainError("ratio functions need x > 0")
    return x


def log_ratio(x):
    """log(L/A) / log(G/A) at (x, 1); the smallest admissible exponent t at x.

    Bounded by 2/3 with the limit 2/3 at x = 1.
    """
    x = _check_x(x)
    u = np.log(x) / 2
    near = np.abs(u) < RATIO_SERIES_CUTOFF
    us = np.where(near, 1.0, u)
    # with x = e^(2u): G/A = sech u and L/A = tanh(u)/u
    with np.errstate(divide="ignore", invalid="ignore"):
        au = np.abs(us)
        log_cosh = au + np.log1p(np.exp(-2 * au)) - math.log(2)
        log_tanh_over_u = np.log(np.tanh(au) / au)
        direct = log_tanh_over_u / -log_cosh
    out = np.where(near, _poly_even(_LOG_RATIO_SERIES, u), direct)
    return float(out) if out.ndim == 0 else out


def diff_ratio(x):
    """(A - L) / (A - G) at (x, 1); the largest admissible Heron weight s at x.

    Lies in [2/3, 1] with the limit 2/3 at x = 1.
    """
    x = _check_x(x)
    u = np.log(x) / 2
    near = np.abs(u) < RATIO_SERIES_CUTOFF
    us = np.where(near, 1.0, np.abs(u))
    with np.errstate(over="ignore"):
        direct = (1 - np.tanh(us) / us) / (1 - 1 / np.cosh(us))
    out = np.where(near, _poly_even(_DIFF_RATIO_SERIES, u), direct)
    return float(out) if out.ndim == 0 else out


@dataclass
class ScanResult:
    grid: np.ndarray
    ratio_values: np.ndarray
    extremum: float
    extremum_location: float
    direction: str

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "n_points": int(len(self.grid)),
            "extremum": self.extremum,
            "extremum_location": self.extremum_location,
            "gap_to_two_thirds": abs(self.extremum - TWO_THIRDS),
        }


@dataclass(frozen=True)
class GridSpec:
    """Log-spaced base grid on [lo, hi] plus geometric refinement toward x = 1.

    The refinement adds 1 +- 10^-k for k = 1 .. refine_decades, subdivided
    into ``refine_per_decade`` points per decade, on both sides of 1.
    """

    lo: float = 1e-6
    hi: float = 1e6
    n_points: int = 100_000
    refine_decades: int = 8
    refine_per_decade: int = 4

    def build(self) -> np.ndarray:
        base = np.logspace(math.log10(self.lo), math.log10(self.hi), self.n_points)
        if self.refine_decades > 0:
            n = self.refine_decades * self.refine_per_decade + 1
            eps = np.logspace(-1, -1 - self.refine_decades, n)
            refine = np.concatenate([1 + eps, 1 - eps, 1 / (1 + eps)])
            base = np.concatenate([base, refine])
        return np.unique(base)


def _scan(fn, grid, direction):
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(fn(grid), dtype=float).reshape(grid.shape)
    idx = int(np.argmax(values) if direction == "max" else np.argmin(values))
    return ScanResult(grid, values, float(values[idx]), float(grid[idx]), direction)


def scan_sharp_constants(grid_spec=None) -> Tuple[ScanResult, ScanResult]:
    """Scan log_ratio (sup) and diff_ratio (inf) over a grid.

    ``grid_spec`` may be a :class:`GridSpec` or an explicit array of x values.
    """
    if grid_spec is None:
        grid_spec = GridSpec()
    grid = grid_spec.build() if isinstance(grid_spec, GridSpec) else np.atleast_1d(np.asarray(grid_spec, dtype=float))
    return _scan(log_ratio, grid, "max"), _scan(diff_ratio, grid, "min")


# ---------------------------------------------------------------------------
# Heinz versus Heron
# ---------------------------------------------------------------------------

CONDITION_SLACK = 1e-12


def heinz_threshold(s: float) -> float:
    """(pi/2) / (pi - arccos(s/(1-s))) for 0 <= s <= 1/2."""
    if not 0 <= s <= 0.5:
        raise MeanDomainError(f"threshold defined for s in [0, 1/2], got {s}")
    ratio = min(1.0, s / (1 - s))
    return (math.pi / 2) / (math.pi - math.acos(ratio))


def heinz_heron_condition(s: float, v: float) -> bool:
    """Whether the Heinz mean Hz_v is dominated by the Heron mean H_s in every
    unitarily invariant norm.

    Threshold comparisons carry a 1e-12 slack so closed-form boundary values
    such as v = 7/8 at s = 1/3 are included despite arccos rounding.
    """
    if not (0 <= s <= 1) or not (0 <= v <= 1):
        raise MeanDomainError(f"s and v must lie in [0, 1], got s={s}, v={v}")
    if s == 1:
        return v == 0.5
    if s > 0.5:
        return False
    return abs(2 * v - 1) <= heinz_threshold(s) + CONDITION_SLACK


# ---------------------------------------------------------------------------
# the rho-interleaved chain
# ---------------------------------------------------------------------------

RHO_LABELS = ["m", "rho*m", "H", "rho*H", "G", "rho*G", "L", "rho*L", "A", "rho*A", "M"]


def rho(pair_or_a, b=None):
    """rho = sqrt(2A / (A + G)), between 1 and sqrt(2)."""
    if isinstance(pair_or_a, ScalarPair):
        a, b = pair_or_a.a, pair_or_a.b
    else:
        a = pair_or_a
    A_ = np.asarray(arithmetic(a, b))
    G_ = np.asarray(geometric(a, b))
    out = np.sqrt(2 * A_ / (A_ + G_))
    return float(out) if out.ndim == 0 else out


def rho_terms(a, b) -> np.ndarray:
    a, b = _as_pair(a, b)
    r = rho(a, b)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    H_, G_, L_, A_ = harmonic(a, b), geometric(a, b), logarithmic(a, b), arithmetic(a, b)
    return np.array([lo, r * lo, H_, r * H_, G_, r * G_, L_, r * L_, A_, r * A_, hi], dtype=float)


def rho_chain(pair: ScalarPair, tol: float = DEFAULT_TOL) -> ChainReport:
    values = rho_terms(pair.a, pair.b)
    return ChainReport(list(RHO_LABELS), [float(v) for v in values], tol)


def convexity_bound(x: float, tol: float = DEFAULT_TOL):
    """sqrt(2(x+1))/(sqrt(x)+1) * (x+1)/2 <= max(1, x).  Returns (lhs, rhs, holds)."""
    if not (math.isfinite(x) and x > 0):
        raise MeanDomainError(f"x must be positive, got {x}")
    lhs = math.sqrt(2 * (x + 1)) / (math.sqrt(x) + 1) * (x + 1) / 2
    rhs = (x + 1 + abs(x - 1)) / 2
    return lhs, rhs, rhs - lhs >= -tol * max(1.0, rhs)


# ---------------------------------------------------------------------------
# fuzz sweeps
# ---------------------------------------------------------------------------


def log_uniform_pairs(n: int, rng: np.random.Generator, lo: float = 1e-6, hi: float = 1e6):
    """n pairs drawn log-uniformly from [lo, hi]^2."""
    e = rng.uniform(math.log(lo), math.log(hi), size=(2, n))
    return np.exp(e[0]), np.exp(e[1])


def sweep(terms_fn, a, b, tol: float = DEFAULT_TOL) -> dict:
    """Evaluate a vectorised chain on arrays of pairs and count violations."""
    cols = terms_fn(a, b)
    bad, worst = chain_gaps(cols, tol)
    idx = np.nonzero(bad.any(axis=0))[0]
    return {
        "n_trials": int(np.size(a)),
        "n_violations": int(idx.size),
        "worst_gap": worst,
        "violations": [
            {"a": float(np.atleast_1d(a)[i]), "b": float(np.atleast_1d(b)[i]), "links": np.nonzero(bad[:, i])[0].tolist()}
            for i in idx[:20]
        ],
    }
