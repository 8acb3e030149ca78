"""Scalar two-variable means.

Every function accepts Python floats or numpy arrays (broadcast against each
other) and returns the same kind of object.  Inputs must be strictly
positive; anything else raises :class:`MeanDomainError`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

LOG_SERIES_CUTOFF = 1e-6
POWER_ZERO_CUTOFF = 1e-8
POWER_DIFF_CUTOFF = 1e-8


class MeanDomainError(ValueError):
    """Raised for nonpositive arguments or an out-of-range mean parameter."""


def _as_pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise MeanDomainError("means need finite arguments")
    if np.any(a <= 0) or np.any(b <= 0):
        raise MeanDomainError(f"means need positive arguments, got a={a!r}, b={b!r}")
    return a, b


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_range(name, value, lo, hi):
    if not (lo <= value <= hi):
        raise MeanDomainError(f"{name}={value} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class ScalarPair:
    """A pair of positive reals; ``ratio()`` is the normalised variable a/b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or self.a <= 0 or self.b <= 0:
            raise MeanDomainError(f"ScalarPair needs a, b > 0, got ({self.a}, {self.b})")

    def ratio(self) -> float:
        return self.a / self.b

    def swapped(self) -> "ScalarPair":
        return ScalarPair(self.b, self.a)


# ---------------------------------------------------------------------------
# classical means
# ---------------------------------------------------------------------------


def arithmetic(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    a, b = _as_pair(a, b)
    return _out((a + b) / 2)


def geometric(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    a, b = _as_pair(a, b)
    return _out(np.sqrt(a) * np.sqrt(b))


def harmonic(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    a, b = _as_pair(a, b)
    return _out(2 * a * b / (a + b))


def classical(kind: str, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Arithmetic, geometric or harmonic mean selected by ``kind`` in {"A", "G", "H"}."""
    try:
        fn = {"A": arithmetic, "G": geometric, "H": harmonic}[kind.upper()]
    except KeyError:
        raise MeanDomainError(f"unknown classical mean {kind!r}") from None
    return fn(a, b)


def logarithmic(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Logarithmic mean (a - b) / (log a - log b), with L(a, a) = a.

    The log difference is taken as log1p((a - b)/b) when a/b is within
    [0.5, 1.5].  When |log(a/b)| < 1e-6 the quotient is replaced by the cubic Taylor
    polynomial in h = a/b - 1, which avoids the 0/0 cancellation.
    """
    a, b = _as_pair(a, b)
    d = (a - b) / b
    # log1p of the exact difference keeps y accurate when a and b are close
    with np.errstate(invalid="ignore"):
        y = np.where(np.abs(d) < 0.5, np.log1p(d), np.log(a) - np.log(b))
    near = np.abs(y) < LOG_SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (a - b) / y
    with np.errstate(over="ignore", invalid="ignore"):
        h = a / b - 1
        series = b * (1 + h / 2 - h * h / 12 + h**3 / 24)
    return _out(np.where(near, series, direct))


def binomial(p: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Binomial (power) mean ((a^p + b^p)/2)^(1/p); the geometric mean at p = 0.

    Evaluated in log space so large |p| does not overflow.
    """
    a, b = _as_pair(a, b)
    if not math.isfinite(p):
        raise MeanDomainError(f"binomial exponent must be finite, got {p}")
    if abs(p) < POWER_ZERO_CUTOFF:
        return _out(np.sqrt(a) * np.sqrt(b))
    la, lb = np.log(a), np.log(b)
    return _out(np.exp((np.logaddexp(p * la, p * lb) - math.log(2)) / p))


def heron(s: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Heron mean s*G + (1 - s)*A for s in [0, 1]."""
    _check_range("s", s, 0.0, 1.0)
    return _out(s * geometric(a, b) + (1 - s) * arithmetic(a, b))


def heron_hat(s: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Weight-flipped Heron mean (1 - s)*G + s*A, identical to heron(1 - s)."""
    _check_range("s", s, 0.0, 1.0)
    return _out((1 - s) * geometric(a, b) + s * arithmetic(a, b))


def heinz(v: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Heinz mean (a^v b^(1-v) + a^(1-v) b^v) / 2 for v in [0, 1]."""
    _check_range("v", v, 0.0, 1.0)
    a, b = _as_pair(a, b)
    return _out((a**v * b ** (1 - v) + a ** (1 - v) * b**v) / 2)


def bridge(r: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Geometric bridge K_r = G^r A^(1-r) for r in [0, 2].

    K_0 = A, K_1 = G, K_2 = H.
    """
    _check_range("r", r, 0.0, 2.0)
    a, b = _as_pair(a, b)
    lg = 0.5 * (np.log(a) + np.log(b))
    la = np.log((a + b) / 2)
    return _out(np.exp(r * lg + (1 - r) * la))


def lehmer(alpha: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Lehmer mean (a^alpha + b^alpha) / (a^(alpha-1) + b^(alpha-1)), alpha in [0, 1]."""
    _check_range("alpha", alpha, 0.0, 1.0)
    a, b = _as_pair(a, b)
    return _out((a**alpha + b**alpha) / (a ** (alpha - 1) + b ** (alpha - 1)))


def power_diff(u: float, a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Power difference mean ((u-1)/u) (a^u - b^u) / (a^(u-1) - b^(u-1)).

    The diagonal value is a.  At u = 1 it is the logarithmic mean and at u = 0
    it is G^2 / L; both limits are returned directly within 1e-8 of the
    singular exponent.
    """
    a, b = _as_pair(a, b)
    if not math.isfinite(u):
        raise MeanDomainError(f"power-difference exponent must be finite, got {u}")
    if abs(u - 1) < POWER_DIFF_CUTOFF:
        return logarithmic(a, b)
    if abs(u) < POWER_DIFF_CUTOFF:
        return _out(a * b / np.asarray(logarithmic(a, b)))
    y = np.log(a) - np.log(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.expm1(u * y) / np.expm1((u - 1) * y)
    value = b * (u - 1) / u * ratio
    return _out(np.where(y == 0, a, value))


# ---------------------------------------------------------------------------
# tagged mean kinds
# ---------------------------------------------------------------------------


class Family(enum.Enum):
    ARITHMETIC = "A"
    GEOMETRIC = "G"
    HARMONIC = "H"
    LOGARITHMIC = "L"
    BINOMIAL = "binomial"
    HERON = "heron"
    HERON_HAT = "heronhat"
    HEINZ = "heinz"
    BRIDGE = "bridge"
    LEHMER = "lehmer"
    POWER_DIFF = "powerdiff"


# family -> (parameter name, allowed range or None for all reals)
_PARAMS = {
    Family.BINOMIAL: ("p", None),
    Family.HERON: ("s", (0.0, 1.0)),
    Family.HERON_HAT: ("s", (0.0, 1.0)),
    Family.HEINZ: ("v", (0.0, 1.0)),
    Family.BRIDGE: ("r", (0.0, 2.0)),
    Family.LEHMER: ("alpha", (0.0, 1.0)),
    Family.POWER_DIFF: ("u", None),
}

_ALIASES = {
    "a": Family.ARITHMETIC,
    "arithmetic": Family.ARITHMETIC,
    "g": Family.GEOMETRIC,
    "geometric": Family.GEOMETRIC,
    "h": Family.HARMONIC,
    "harmonic": Family.HARMONIC,
    "l": Family.LOGARITHMIC,
    "log": Family.LOGARITHMIC,
    "logarithmic": Family.LOGARITHMIC,
    "binomial": Family.BINOMIAL,
    "b": Family.BINOMIAL,
    "power": Family.BINOMIAL,
    "heron": Family.HERON,
    "heronhat": Family.HERON_HAT,
    "heron_hat": Family.HERON_HAT,
    "heinz": Family.HEINZ,
    "hz": Family.HEINZ,
    "bridge": Family.BRIDGE,
    "k": Family.BRIDGE,
    "lehmer": Family.LEHMER,
    "powerdiff": Family.POWER_DIFF,
    "power_diff": Family.POWER_DIFF,
    "m": Family.POWER_DIFF,
}


@dataclass(frozen=True)
class MeanKind:
    """A mean family plus its parameter (``None`` for A, G, H, L)."""

    family: Family
    param: Optional[float] = None

    def __post_init__(self):
        spec = _PARAMS.get(self.family)
        if spec is None:
            if self.param is not None:
                raise MeanDomainError(f"{self.family.value} takes no parameter")
            return
        name, bounds = spec
        if self.param is None:
            raise MeanDomainError(f"{self.family.value} needs parameter {name}")
        if not math.isfinite(self.param):
            raise MeanDomainError(f"{name} must be finite")
        if bounds is not None:
            _check_range(name, self.param, *bounds)

    @property
    def param_name(self) -> Optional[str]:
        spec = _PARAMS.get(self.family)
        return spec[0] if spec else None

    def __call__(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        f, p = self.family, self.param
        if f is Family.ARITHMETIC:
            return arithmetic(a, b)
        if f is Family.GEOMETRIC:
            return geometric(a, b)
        if f is Family.HARMONIC:
            return harmonic(a, b)
        if f is Family.LOGARITHMIC:
            return logarithmic(a, b)
        return {
            Family.BINOMIAL: binomial,
            Family.HERON: heron,
            Family.HERON_HAT: heron_hat,
            Family.HEINZ: heinz,
            Family.BRIDGE: bridge,
            Family.LEHMER: lehmer,
            Family.POWER_DIFF: power_diff,
        }[f](p, a, b)

    def __str__(self) -> str:
        if self.param is None:
            return self.family.value
        return f"{self.family.value}:{self.param_name}={self.param!r}"

    @property
    def separable(self) -> bool:
        """True when the mean is a finite sum of products f(a) g(b) (or an integral of them)."""
        return self.family in (
            Family.ARITHMETIC,
            Family.GEOMETRIC,
            Family.LOGARITHMIC,
            Family.HEINZ,
            Family.HERON,
            Family.HERON_HAT,
        )


A = MeanKind(Family.ARITHMETIC)
G = MeanKind(Family.GEOMETRIC)
H = MeanKind(Family.HARMONIC)
L = MeanKind(Family.LOGARITHMIC)


def parse_mean(text: str) -> MeanKind:
    """Parse ``"L"``, ``"heron:s=0.5"``, ``"binomial:p=1/3"`` and similar."""
    name, _, rest = text.strip().partition(":")
    try:
        family = _ALIASES[name.strip().lower()]
    except KeyError:
        raise MeanDomainError(f"unknown mean {name!r}") from None
    if not rest:
        return MeanKind(family)
    key, eq, value = rest.partition("=")
    if not eq:
        # bare value, e.g. "heron:0.5"
        value = key
    return MeanKind(family, parse_number(value))


def parse_number(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def mean_limit_at_zero(kind: MeanKind, a: np.ndarray) -> np.ndarray:
    """Continuous extension M(a, 0) for a >= 0 where one exists.

    Used by the Hadamard construction when a PSD matrix has zero eigenvalues.
    Raises for families without a finite extension that is implemented.
    """
    a = np.asarray(a, dtype=float)
    f, p = kind.family, kind.param
    if f is Family.ARITHMETIC:
        return a / 2
    if f in (Family.GEOMETRIC, Family.HARMONIC, Family.LOGARITHMIC):
        return np.zeros_like(a)
    if f is Family.HERON:
        return (1 - p) * a / 2
    if f is Family.HERON_HAT:
        return p * a / 2
    if f is Family.BRIDGE:
        return a / 2 if p == 0 else np.zeros_like(a)
    if f is Family.HEINZ:
        return a / 2 if p in (0.0, 1.0) else np.zeros_like(a)
    if f is Family.BINOMIAL:
        return a * 2.0 ** (-1.0 / p) if p > 0 else np.zeros_like(a)
    if f is Family.LEHMER:
        return a / 2 if p == 1 else np.zeros_like(a)
    raise MeanDomainError(f"{kind} has no implemented extension to a zero argument")
