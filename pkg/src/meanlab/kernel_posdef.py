"""Positive definiteness of even functions via Gram matrices.

A function phi is positive definite when every matrix [phi(t_i - t_j)] is
positive semidefinite.  This module evaluates a catalog of mean-ratio
functions, builds Gram matrices, and searches point sets for a negative
eigenvalue.  A found witness disproves positive definiteness; a failed
search proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .matrix_core import eig_sym
from .scalar_means import MeanKind, parse_mean, parse_number

SMALL_T = 1e-8
PSD_REL_TOL = 1e-8


class KernelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# numerically careful pieces
# ---------------------------------------------------------------------------


def log_cosh(x):
    """log(cosh x), accurate both near 0 and for large |x|."""
    x = np.abs(np.asarray(x, dtype=float))
    small = x < 20
    xs = np.where(small, x, 0.0)
    near = np.log1p(2 * np.sinh(xs / 2) ** 2)
    far = x + np.log1p(np.exp(-2 * x)) - math.log(2)
    return np.where(small, near, far)


def log_sinhc(x):
    """log(sinh x / x), with the value 0 at x = 0."""
    x = np.abs(np.asarray(x, dtype=float))
    tiny = x < SMALL_T
    xs = np.where(tiny, 1.0, x)
    direct = xs + np.log(-np.expm1(-2 * xs)) - math.log(2) - np.log(xs)
    return np.where(tiny, x * x / 6, direct)


def _cosh_pow(p, t):
    """(cosh(p t))^(1/p), tending to 1 as p -> 0."""
    if abs(p) < SMALL_T:
        # log cosh(pt) / p = p t^2/2 - p^3 t^4/12 + ...
        return np.exp(p * t * t / 2)
    return np.exp(log_cosh(p * t) / p)


# ---------------------------------------------------------------------------
# the catalog
# ---------------------------------------------------------------------------

# tag -> parameter names
_FAMILIES: Dict[str, Tuple[str, ...]] = {
    "phi": ("r",),
    "psi": ("s",),
    "xi": ("s",),
    "eta": ("p",),
    "sechpow": ("c",),
    "coshratio": ("a", "b"),
    "shiftedsech": ("beta",),
    "sinhsech": ("beta",),
    "ratio": (),
}


@dataclass(frozen=True)
class KernelFamily:
    """An even function t -> phi(t) identified by a tag and its parameters.

    Tags: phi (K_r/L), psi (B_s/Hhat_s), xi (Hhat_s/B_s), eta (B_p/L),
    sechpow (sech^c), coshratio (cosh(a t)/cosh(b t)), shiftedsech
    (1/(beta + cosh t)), sinhsech (sinh t/(t (beta + cosh t))) and ratio
    (M1(e^t, e^-t)/M2(e^t, e^-t) for two scalar means).
    """

    tag: str
    params: Tuple[float, ...] = ()
    means: Tuple[MeanKind, ...] = ()

    def __post_init__(self):
        if self.tag not in _FAMILIES:
            raise KernelError(f"unknown kernel family {self.tag!r}")
        if self.tag == "ratio":
            if len(self.means) != 2:
                raise KernelError("ratio kernels need two means")
            return
        if len(self.params) != len(_FAMILIES[self.tag]):
            raise KernelError(f"{self.tag} needs parameters {_FAMILIES[self.tag]}")
        p = self.params
        if self.tag in ("psi", "xi") and not 0 <= p[0] <= 1:
            raise KernelError(f"{self.tag} needs s in [0, 1]")
        if self.tag == "sechpow" and p[0] < 0:
            raise KernelError("sechpow needs c >= 0")
        if self.tag in ("shiftedsech", "sinhsech") and p[0] <= -1:
            raise KernelError("beta must exceed -1")

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        if not np.all(np.isfinite(t)):
            raise KernelError("kernel argument must be finite")
        out = np.asarray(self._eval(t), dtype=float)
        if not np.all(np.isfinite(out)):
            raise KernelError(f"{self} is not finite at some argument")
        return float(out) if out.ndim == 0 else out

    def _eval(self, t):
        tag, p = self.tag, self.params
        if tag == "phi":
            return np.exp((1 - p[0]) * log_cosh(t) - log_sinhc(t))
        if tag == "psi":
            s = p[0]
            return _cosh_pow(s, t) / ((1 - s) + s * np.cosh(t))
        if tag == "xi":
            s = p[0]
            return ((1 - s) + s * np.cosh(t)) / _cosh_pow(s, t)
        if tag == "eta":
            return _cosh_pow(p[0], t) * np.exp(-log_sinhc(t))
        if tag == "sechpow":
            return np.exp(-p[0] * log_cosh(t))
        if tag == "coshratio":
            return np.exp(log_cosh(p[0] * t) - log_cosh(p[1] * t))
        if tag == "shiftedsech":
            return 1 / (p[0] + np.cosh(t))
        if tag == "sinhsech":
            return np.exp(log_sinhc(t)) / (p[0] + np.cosh(t))
        m1, m2 = self.means
        a, b = np.exp(t), np.exp(-t)
        return np.asarray(m1(a, b)) / np.asarray(m2(a, b))

    @property
    def value_at_zero(self) -> float:
        return float(self(0.0))

    def __str__(self) -> str:
        if self.tag == "ratio":
            return f"ratio:{self.means[0]}/{self.means[1]}"
        args = ",".join(f"{k}={float(v)!r}" for k, v in zip(_FAMILIES[self.tag], self.params))
        return f"{self.tag}:{args}"


def phi(r):
    return KernelFamily("phi", (float(r),))


def psi(s):
    return KernelFamily("psi", (float(s),))


def xi(s):
    return KernelFamily("xi", (float(s),))


def eta(p):
    return KernelFamily("eta", (float(p),))


def sech_pow(c):
    return KernelFamily("sechpow", (float(c),))


def cosh_ratio(a, b):
    return KernelFamily("coshratio", (float(a), float(b)))


def shifted_sech(beta):
    return KernelFamily("shiftedsech", (float(beta),))


def sinh_sech(beta):
    return KernelFamily("sinhsech", (float(beta),))


def ratio_of_means(m1, m2):
    m1 = parse_mean(m1) if isinstance(m1, str) else m1
    m2 = parse_mean(m2) if isinstance(m2, str) else m2
    return KernelFamily("ratio", means=(m1, m2))


def parse_kernel(text: str) -> KernelFamily:
    """Parse "phi:r=0.6667", "coshratio:a=1,b=2", "ratio:L/heron:s=0.6" and the like."""
    tag, _, rest = text.strip().partition(":")
    tag = tag.lower()
    if tag == "ratio":
        if "/" not in rest:
            raise KernelError("ratio kernels are written ratio:<mean>/<mean>")
        # a '/' inside a parameter (e.g. p=1/3) must not split the means
        parts = rest.split("/")
        for i in range(1, len(parts)):
            left, right = "/".join(parts[:i]), "/".join(parts[i:])
            try:
                return ratio_of_means(parse_mean(left), parse_mean(right))
            except ValueError:
                continue
        raise KernelError(f"cannot parse ratio kernel {text!r}")
    if tag not in _FAMILIES:
        raise KernelError(f"unknown kernel family {tag!r}")
    names = _FAMILIES[tag]
    values = {}
    for i, item in enumerate(filter(None, rest.split(","))):
        key, eq, val = item.partition("=")
        if eq:
            values[key.strip().lower()] = parse_number(val)
        else:
            values[names[i]] = parse_number(key)
    try:
        params = tuple(values[k] for k in names)
    except KeyError as exc:
        raise KernelError(f"{tag} needs parameter {exc.args[0]}") from None
    return KernelFamily(tag, params)


def eval_kernel(f: KernelFamily, t):
    return f(t)


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------


def psd_threshold(f: KernelFamily, n: int) -> float:
    """Scale-aware tolerance 1e-8 * n * phi(0)."""
    return PSD_REL_TOL * n * abs(f.value_at_zero)


@dataclass
class EigenReport:
    points: np.ndarray
    gram: np.ndarray
    eigenvalues: np.ndarray
    min_eigenvalue: float
    tolerance: float
    psd: bool

    def to_dict(self) -> dict:
        return {
            "points": self.points.tolist(),
            "gram": self.gram.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "psd": self.psd,
        }


def gram_matrix(f: KernelFamily, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float).ravel()
    return np.asarray(f(np.abs(pts[:, None] - pts[None, :])), dtype=float).reshape(pts.size, pts.size)


def gram(f: KernelFamily, points, tol: Optional[float] = None) -> EigenReport:
    """Gram matrix [f(t_i - t_j)] with its full spectrum."""
    pts = np.asarray(points, dtype=float).ravel()
    if pts.size == 0 or not np.all(np.isfinite(pts)):
        raise KernelError("points must be finite and nonempty")
    if np.unique(pts).size != pts.size:
        raise KernelError("points must be distinct")
    g = gram_matrix(f, pts)
    w, _ = eig_sym(g)
    tol = psd_threshold(f, pts.size) if tol is None else tol
    lmin = float(w[-1])
    return EigenReport(pts, g, w, lmin, tol, lmin >= -tol)


def _min_eig_fast(f, pts) -> float:
    # search inner loop; the verdict is always re-derived through gram()
    return float(np.linalg.eigvalsh(gram_matrix(f, pts))[0])


# ---------------------------------------------------------------------------
# known positive definite families
# ---------------------------------------------------------------------------


@dataclass
class FamilyVerdict:
    family: str
    trials: int
    n_points: int
    worst_min_eigenvalue: float
    tolerance: float
    all_psd: bool
    worst_points: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(vars(self))


def known_family_check(f: KernelFamily, n_points: int = 10, trials: int = 20, tol: Optional[float] = None,
                       seed=0, spread: float = 10.0) -> FamilyVerdict:
    """Gram spectra on random point sets in [0, spread].

    Intended for families that theory says are positive definite; a
    negative verdict there signals a bug rather than a discovery.
    """
    rng = np.random.default_rng(seed)
    tol = psd_threshold(f, n_points) if tol is None else tol
    worst, worst_pts = math.inf, None
    for _ in range(trials):
        pts = np.sort(rng.uniform(0, spread, size=n_points))
        rep = gram(f, pts, tol)
        if rep.min_eigenvalue < worst:
            worst, worst_pts = rep.min_eigenvalue, pts
    return FamilyVerdict(str(f), trials, n_points, worst, tol, worst >= -tol, worst_pts.tolist())


# ---------------------------------------------------------------------------
# counterexample search
# ---------------------------------------------------------------------------

STRATEGIES = ("integer", "random", "anneal", "auto")


@dataclass
class Witness:
    family: str
    strategy: str
    points: List[float]
    min_eigenvalue: float
    tolerance: float
    evaluations: int
    report: EigenReport

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "strategy": self.strategy,
            "points": self.points,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "evaluations": self.evaluations,
        }


def _confirm(f, pts, tol, strategy, evals) -> Optional[Witness]:
    try:
        rep = gram(f, pts, tol)
    except KernelError:
        return None
    if rep.min_eigenvalue < -tol:
        return Witness(str(f), strategy, rep.points.tolist(), rep.min_eigenvalue, tol, evals, rep)
    return None


def _anneal(f, start, budget, rng, scale, t0=1e-3):
    """Coordinate-wise simulated annealing on the normalised minimum eigenvalue."""
    cur = np.array(start, dtype=float)
    norm = cur.size * abs(f.value_at_zero)
    cur_val = _min_eig_fast(f, cur) / norm
    best, best_val = cur.copy(), cur_val
    for k in range(budget):
        temp = t0 * (1e-4) ** (k / max(1, budget - 1))
        step = scale * (0.5 * (1 - k / max(1, budget)) + 0.02)
        cand = cur.copy()
        i = rng.integers(cand.size)
        cand[i] += rng.normal(0, step)
        if np.unique(cand).size != cand.size:
            continue
        val = _min_eig_fast(f, cand) / norm
        if val < cur_val or rng.random() < math.exp(-(val - cur_val) / temp):
            cur, cur_val = cand, val
            if val < best_val:
                best, best_val = cand.copy(), val
    return best


def search_counterexample(f: KernelFamily, n: int, strategy: str = "auto", budget: int = 2000,
                          tol: Optional[float] = None, seed=0, spread: float = 10.0) -> Optional[Witness]:
    """Look for points whose Gram matrix has an eigenvalue below -tol.

    Strategies: "integer" (t_i = i, deterministic, budget unused), "random"
    (``budget`` uniform draws from [0, spread]^n), "anneal" (``budget``
    annealing steps from the integer grid) and "auto" (the three in order,
    splitting the budget between the last two).  Any witness is confirmed
    with a fresh :func:`gram` call.  Returns None when nothing is found.
    """
    if n < 2:
        raise KernelError("a witness needs at least two points")
    if budget < 1:
        raise KernelError("budget must be positive")
    if strategy not in STRATEGIES:
        raise KernelError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    tol = psd_threshold(f, n) if tol is None else tol
    rng = np.random.default_rng(seed)
    grid = np.arange(1, n + 1, dtype=float)

    if strategy in ("integer", "auto"):
        w = _confirm(f, grid, tol, "integer", 1)
        if w is not None or strategy == "integer":
            return w

    best_pts, best_val = grid, _min_eig_fast(f, grid)
    if strategy in ("random", "auto"):
        draws = budget if strategy == "random" else max(1, budget // 2)
        for k in range(draws):
            pts = np.sort(rng.uniform(0, spread, size=n))
            val = _min_eig_fast(f, pts)
            if val < best_val:
                best_pts, best_val = pts, val
            if val < -tol:
                w = _confirm(f, pts, tol, "random", k + 1)
                if w is not None:
                    return w
        if strategy == "random":
            return None

    steps = budget if strategy == "anneal" else max(1, budget - budget // 2)
    start = grid if strategy == "anneal" else best_pts
    pts = _anneal(f, start, steps, rng, scale=max(spread / n, 0.1))
    return _confirm(f, pts, tol, "anneal", steps)


# ---------------------------------------------------------------------------
# witness tables
# ---------------------------------------------------------------------------


@dataclass
class Finding:
    claim: str
    family: str
    status: str  # "witness" or "inconclusive"
    min_eigenvalue: Optional[float]
    points: Optional[List[float]]
    strategy: Optional[str]

    def to_dict(self) -> dict:
        return dict(vars(self))


def _finding(claim, f, witness):
    if witness is None:
        return Finding(claim, str(f), "inconclusive", None, None, None)
    return Finding(claim, str(f), "witness", witness.min_eigenvalue, witness.points, witness.strategy)


NECESSITY_CASES = [
    ("L vs H_s needs s <= 1/2 (s = 0.6)", "ratio:L/heron:s=0.6", 8),
    ("L vs H_s needs s <= 1/2 (s = 0.7)", "ratio:L/heron:s=0.7", 8),
    ("H_s vs H_s' needs s' <= 1/2 (0.9, 0.8)", "ratio:heron:s=0.9/heron:s=0.8", 8),
    ("B_1/3 vs H_2/3", "ratio:binomial:p=1/3/heron:s=2/3", 8),
    ("B_p vs L fails for p > 0 (p = 1/2)", "eta:p=0.5", 8),
    ("1/(beta + cosh) fails for beta > 1 (beta = 2)", "shiftedsech:beta=2", 8),
    ("K_2/3 vs L on (1, 2, 3)", "phi:r=2/3", 3),
    ("K_r vs L, r = 0.9, t = 1..5", "phi:r=0.9", 5),
    ("B_p vs L, p = 3/7, t = 1..7", "eta:p=3/7", 7),
    ("B_1/4 vs Hhat_1/4 on (1, 2, 3)", "psi:s=1/4", 3),
    ("Hhat_3/4 vs B_3/4 on (1, 2, 3)", "xi:s=3/4", 3),
]


def necessity_witnesses(budget: int = 2000, seed: int = 0) -> List[Finding]:
    """Search each non-domination claim for a concrete negative-eigenvalue witness."""
    out = []
    for i, (claim, spec, n) in enumerate(NECESSITY_CASES):
        f = parse_kernel(spec)
        w = search_counterexample(f, n, "auto", budget, seed=[int(seed), i])
        out.append(_finding(claim, f, w))
    return out


def min_eigenvalue_series(make_family, params: Sequence[float], points) -> List[Tuple[float, float]]:
    """(parameter, minimum Gram eigenvalue) pairs for plotting."""
    return [(float(p), gram(make_family(p), points).min_eigenvalue) for p in params]
