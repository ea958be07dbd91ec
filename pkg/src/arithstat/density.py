"""Local density factors for counts of fields with local conditions.

Predicted counts have the shape N_T(X) ~ C_T * X with C_T a leading
constant times a product of per-prime factors, each in (0, 1).  Partial
products of such factors over a positive-density prime set tend to 0, at a
rate (log N)^(-delta) that is fitted here.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .frobenian import PrimeSet, member_primes
from .poly import DomainError
from .primes import is_prime

# zeta(3) to 30 digits
ZETA3 = 1.202056903159594285399738161511
ZETA2 = math.pi**2 / 6

CONDITIONS = ("unramified", "even-valuation", "reciprocal")


def _check_prime(p: int):
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def btt_factor_unramified(p: int) -> Fraction:
    """Cubic fields unramified at p: 1 - (p+1)/(p^2+p+1)."""
    _check_prime(p)
    return 1 - Fraction(p + 1, p * p + p + 1)


def btt_factor_even(p: int) -> Fraction:
    """Cubic fields not partially ramified at p: 1 - p/(p^2+p+1); undefined at 3."""
    _check_prime(p)
    if p == 3:
        raise DomainError("the even-valuation factor excludes p = 3")
    return 1 - Fraction(p, p * p + p + 1)


def epw_factor(degree: int, p: int) -> Fraction:
    """Unramified-at-p factor for quadratic, quartic and quintic fields."""
    _check_prime(p)
    if degree == 2:
        return 1 - Fraction(1, p + 1)
    if degree == 4:
        return 1 - Fraction(p * p + 2 * p + 1, p**3 + p * p + 2 * p + 1)
    if degree == 5:
        return 1 - Fraction(p**3 + 2 * p * p + 2 * p + 1, p**4 + p**3 + 2 * p * p + 2 * p + 1)
    raise DomainError(f"no factor for degree {degree}")


@dataclass(frozen=True)
class LocalFactor:
    """Per-prime factor; ``reciprocal`` is the plain 1 - 1/p."""

    degree: int | None
    condition: str

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise DomainError(f"unknown condition {self.condition!r}")
        if self.condition == "reciprocal":
            return
        if self.degree not in (2, 3, 4, 5):
            raise DomainError(f"unsupported degree {self.degree}")
        if self.condition == "even-valuation" and self.degree != 3:
            raise DomainError("even-valuation factors exist for cubic fields only")

    def value(self, p: int) -> Fraction:
        if self.condition == "reciprocal":
            _check_prime(p)
            return 1 - Fraction(1, p)
        if self.degree == 3:
            return btt_factor_unramified(p) if self.condition == "unramified" else btt_factor_even(p)
        return epw_factor(self.degree, p)

    def log_values(self, primes: np.ndarray) -> np.ndarray:
        """log of the factor at each prime, vectorized in floating point."""
        p = np.asarray(primes, dtype=np.float64)
        if self.condition == "reciprocal":
            frac = 1 / p
        elif self.degree == 3:
            if self.condition == "even-valuation" and np.any(primes == 3):
                raise DomainError("the even-valuation factor excludes p = 3")
            num = p + 1 if self.condition == "unramified" else p
            frac = num / (p * p + p + 1)
        elif self.degree == 2:
            frac = 1 / (p + 1)
        elif self.degree == 4:
            frac = (p * p + 2 * p + 1) / (p**3 + p * p + 2 * p + 1)
        else:
            frac = (p**3 + 2 * p * p + 2 * p + 1) / (p**4 + p**3 + 2 * p * p + 2 * p + 1)
        return np.log1p(-frac)

    def describe(self) -> str:
        if self.condition == "reciprocal":
            return "1-1/p"
        return f"degree {self.degree}, {self.condition}"


def cubic_leading_constant(T, condition: str = "unramified") -> float:
    """(1 / (3 zeta(3))) times the local factors at the primes of T."""
    if condition not in ("unramified", "even-valuation"):
        raise DomainError(f"unknown condition {condition!r}")
    factor = LocalFactor(3, condition)
    prod = Fraction(1)
    for p in sorted(set(T)):
        prod *= factor.value(p)
    return float(prod) / (3 * ZETA3)


@dataclass
class ProductSeries:
    checkpoints: list
    products: list
    n_factors: list
    factor: str = ""
    strictly_decreasing: bool = True
    slope: float = math.nan
    exact: Fraction | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "factors", "partial_product"])
        for n, k, v in zip(self.checkpoints, self.n_factors, self.products):
            w.writerow([n, k, repr(v)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"checkpoints": self.checkpoints, "products": self.products, "n_factors": self.n_factors,
                "factor": self.factor, "strictly_decreasing": self.strictly_decreasing,
                "slope": None if math.isnan(self.slope) else self.slope,
                "exact": None if self.exact is None else str(self.exact)}


def default_checkpoints(N: int, start: int = 1000, per_decade: int = 2) -> list[int]:
    pts = []
    k = 0
    while True:
        x = round(start * 10 ** (k / per_decade))
        if x >= N:
            break
        pts.append(x)
        k += 1
    pts.append(N)
    return [x for x in pts if x >= 2]


EXACT_LIMIT = 64


def partial_product(S: PrimeSet, factor: LocalFactor, N: int, checkpoints=None) -> ProductSeries:
    """Products of the factor over members p <= N_i of S at each checkpoint."""
    if N < 2:
        raise DomainError("partial products need N >= 2")
    cps = default_checkpoints(N, start=min(1000, N)) if checkpoints is None else sorted(set(checkpoints))
    members = member_primes(S, N)
    logs = factor.log_values(members)
    cum = np.cumsum(logs)
    strictly = bool(np.all(np.diff(np.concatenate(([0.0], cum))) < 0)) if len(cum) else True
    counts = np.searchsorted(members, cps, side="right")
    prods = [1.0 if k == 0 else float(math.exp(cum[k - 1])) for k in counts]
    exact = None
    if len(members) <= EXACT_LIMIT:
        exact = Fraction(1)
        for p in members.tolist():
            exact *= factor.value(p)
    return ProductSeries(list(cps), prods, [int(k) for k in counts], factor.describe(), strictly, exact=exact)


def fit_product_decay(series: ProductSeries, delta_expected: float | None = None) -> float:
    """Slope of -log(partial product) against log log N."""
    pts = [(n, v) for n, v in zip(series.checkpoints, series.products) if n >= 3]
    if len(pts) < 4:
        raise DomainError("decay fit needs >= 4 checkpoints")
    x = np.log(np.log(np.array([n for n, _ in pts], dtype=np.float64)))
    y = -np.log(np.array([v for _, v in pts], dtype=np.float64))
    slope = float(np.polyfit(x, y, 1)[0])
    series.slope = slope
    return slope


def compare_predicted_empirical(census, X: int, T, condition: str = "unramified") -> dict:
    """Census count with local conditions at T against C_T * X."""
    from .census import even_valuation, unramified

    T = sorted(set(T))
    make = unramified if condition == "unramified" else even_valuation
    if condition not in ("unramified", "even-valuation"):
        raise DomainError(f"unknown condition {condition!r}")
    total = census.count(X)
    empirical = census.count_with_conditions([make(p) for p in T], max_disc=X)
    C_T = cubic_leading_constant(T, condition)
    predicted = C_T * X
    factor = C_T * 3 * ZETA3
    fraction = empirical / total if total else math.nan
    return {
        "X": X,
        "T": T,
        "condition": condition,
        "empirical": empirical,
        "predicted": predicted,
        "deviation": (empirical - predicted) / predicted,
        "unconditioned": total,
        "conditional_fraction": fraction,
        "expected_fraction": factor,
        "fraction_deviation": fraction - factor,
    }


def secondary_term_prediction(X: float) -> dict:
    """Counts of cubic fields with 0 < +-disc <= X including the X^(5/6) term.

    N+(X) ~ X / (12 zeta(3)) + K X^(5/6), N-(X) ~ X / (4 zeta(3)) + sqrt(3) K X^(5/6),
    K = 4 zeta(1/3) / (5 Gamma(2/3)^3 zeta(5/3)) (a negative constant).  Diagnostic only.
    """
    import mpmath

    K = float(4 * mpmath.zeta(mpmath.mpf(1) / 3) / (5 * mpmath.gamma(mpmath.mpf(2) / 3) ** 3 * mpmath.zeta(mpmath.mpf(5) / 3)))
    pos = X / (12 * ZETA3) + K * X ** (5 / 6)
    neg = X / (4 * ZETA3) + math.sqrt(3) * K * X ** (5 / 6)
    return {"totally-real": pos, "complex": neg, "total": pos + neg, "K": K}
