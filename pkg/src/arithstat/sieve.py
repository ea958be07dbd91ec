"""Counting integers whose valuation is even at every prime of a set.

N_S(X) = #{n <= X : ord_p(n) even for all p in S}.  The sieve marks every
n with an odd valuation at some member prime; the survivors are counted at
checkpoints.  Growth is fitted to C * X / (log X)^alpha.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .frobenian import PrimeSet
from .poly import DomainError
from .primes import ResourceLimitError, primes_upto, spf_table, factor_with_spf

NAIVE_BUDGET = 10**6
SEGMENT = 1 << 24


@dataclass
class SieveSeries:
    checkpoints: list
    counts: list
    alpha_expected: float | None = None
    alpha_fitted: float = math.nan
    C_fitted: float = math.nan
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.checkpoints) != len(self.counts):
            raise DomainError("checkpoints and counts differ in length")
        if any(b < a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise DomainError("checkpoints must ascend")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise DomainError("counts must be nondecreasing")
        if any(c > x for c, x in zip(self.counts, self.checkpoints)):
            raise DomainError("count exceeds its checkpoint")

    def predicted(self) -> list[float]:
        if math.isnan(self.alpha_fitted):
            return [math.nan] * len(self.checkpoints)
        return [delange_predict(self.C_fitted, self.alpha_fitted, x) if x >= 3 else math.nan
                for x in self.checkpoints]

    def residuals(self) -> list[float]:
        """Relative error (predicted - measured) / measured per checkpoint."""
        return [(p - c) / c if c else math.nan for p, c in zip(self.predicted(), self.counts)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["X", "count", "predicted"])
        for x, c, p in zip(self.checkpoints, self.counts, self.predicted()):
            w.writerow([x, c, "" if math.isnan(p) else f"{p:.6f}"])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "checkpoints": list(self.checkpoints),
            "counts": list(self.counts),
            "alpha_expected": self.alpha_expected,
            "alpha_hat": None if math.isnan(self.alpha_fitted) else self.alpha_fitted,
            "C_hat": None if math.isnan(self.C_fitted) else self.C_fitted,
            "residuals": [None if math.isnan(r) else r for r in self.residuals()],
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def count_even_valuations_naive(S: PrimeSet, X: int, budget: int = NAIVE_BUDGET) -> int:
    """Reference count by factoring every n <= X."""
    if X < 1:
        raise DomainError("X must be >= 1")
    if X > budget:
        raise ResourceLimitError(f"naive count limited to X <= {budget}")
    spf = spf_table(max(X, 2))
    member: dict[int, bool] = {}
    total = 0
    for n in range(1, X + 1):
        ok = True
        for p, e in factor_with_spf(n, spf).items():
            if e % 2:
                if p not in member:
                    member[p] = S.contains(p)
                if member[p]:
                    ok = False
                    break
        total += ok
    return total


def log_checkpoints(lo: int, hi: int, k: int) -> list[int]:
    """k integers from lo to hi, evenly spaced in log log X."""
    if k < 2 or lo < 3 or hi <= lo:
        raise DomainError("need k >= 2 and 3 <= lo < hi")
    a, b = math.log(math.log(lo)), math.log(math.log(hi))
    pts = [round(math.exp(math.exp(a + (b - a) * i / (k - 1)))) for i in range(k)]
    pts[0], pts[-1] = lo, hi
    return sorted(set(pts))


def _mark_segment(lo: int, hi: int, small: np.ndarray, large: np.ndarray, X: int) -> np.ndarray:
    """Boolean array over n in [lo, hi): True where some member prime has odd valuation."""
    excl = np.zeros(hi - lo, dtype=bool)
    for p in small.tolist():
        q = p
        while q < hi:
            # multiples n = q*m of q = p^e (e odd) with p not dividing m
            m0 = max(1, -(-lo // q))
            start = q * m0
            if start < hi:
                view = excl[start - lo :: q]
                i0 = (-m0) % p
                keep = view[i0::p].copy()
                view[:] = True
                view[i0::p] = keep
            q *= p * p
    if len(large):
        # p > sqrt(X): only valuation 1 occurs, so every multiple is marked
        pmin = int(large[0])
        for m in range(1, (hi - 1) // pmin + 1):
            a = np.searchsorted(large, -(-lo // m))
            b = np.searchsorted(large, (hi - 1) // m, side="right")
            if a < b:
                excl[m * large[a:b] - lo] = True
    return excl


def _segment_counts(args):
    lo, hi, small, large, X, cps = args
    excl = _mark_segment(lo, hi, small, large, X)
    kept = ~excl
    out = [int(np.count_nonzero(kept[: c - lo + 1])) for c in cps]
    return out, int(np.count_nonzero(kept))


def count_even_valuations_sieved(S: PrimeSet, X: int, checkpoints=None, segment: int = SEGMENT,
                                 workers: int = 1, alpha_expected: float | None = None) -> SieveSeries:
    """Sieved N_S at each checkpoint (default: X only).

    ``checkpoints`` may be a list of bounds or an int k meaning k log-log
    spaced points in [10^4, X] (or [3, X] for small X).
    """
    if X < 1:
        raise DomainError("X must be >= 1")
    if checkpoints is None:
        checkpoints = [X]
    elif isinstance(checkpoints, int):
        checkpoints = log_checkpoints(min(10**4, max(3, X // 10)), X, checkpoints) if X > 3 else [X]
    cps = sorted(set(int(c) for c in checkpoints))
    if cps[0] < 1 or cps[-1] > X:
        raise DomainError("checkpoints must lie in [1, X]")
    X = cps[-1] if cps[-1] < X else X

    if X >= 2:
        primes = primes_upto(X)
        members = primes[S.mask(primes)]
    else:
        members = np.zeros(0, dtype=np.int64)
    r = isqrt(X)
    small = members[members <= r]
    large = members[members > r]

    jobs = []
    lo = 1
    while lo <= X:
        hi = min(X + 1, lo + segment)
        jobs.append((lo, hi, small, large, X, [c for c in cps if lo <= c < hi]))
        lo = hi
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_segment_counts, jobs))
    else:
        parts = [_segment_counts(j) for j in jobs]

    counts, running = [], 0
    for (at_cps, seg_total) in parts:
        counts.extend(running + c for c in at_cps)
        running += seg_total

    series = SieveSeries(cps, counts, alpha_expected=alpha_expected,
                         meta={"segment": segment, "member_primes": int(len(members)),
                               "checkpoint_spacing": "loglog"})
    try:
        series.alpha_fitted, series.C_fitted = fit_delange(series)
    except DomainError:
        pass
    return series


def fit_delange(series: SieveSeries) -> tuple[float, float]:
    """Least squares of log(N/X) on -log log X; returns (alpha_hat, C_hat)."""
    xs = np.asarray(series.checkpoints, dtype=np.float64)
    ns = np.asarray(series.counts, dtype=np.float64)
    if len(xs) < 4 or xs[0] < 3 or xs[-1] / xs[0] < 999.5:
        raise DomainError("fit needs >= 4 checkpoints spanning >= 3 decades")
    if np.any(ns <= 0):
        raise DomainError("fit needs positive counts")
    u = -np.log(np.log(xs))
    y = np.log(ns / xs)
    alpha, logC = np.polyfit(u, y, 1)
    return float(alpha), float(math.exp(logC))


def fit_delange_corrected(series: SieveSeries) -> tuple[float, float, float]:
    """Diagnostic fit log(N/X) = log C - alpha log log X + beta / log X.

    The extra term absorbs the first correction (1 + beta/log X) to the
    asymptotic, which biases the plain fit at moderate X.
    """
    xs = np.asarray(series.checkpoints, dtype=np.float64)
    ns = np.asarray(series.counts, dtype=np.float64)
    if len(xs) < 4 or np.any(ns <= 0) or xs[0] < 3:
        raise DomainError("corrected fit needs >= 4 positive checkpoints")
    A = np.c_[np.ones(len(xs)), -np.log(np.log(xs)), 1 / np.log(xs)]
    (logC, alpha, beta), *_ = np.linalg.lstsq(A, np.log(ns / xs), rcond=None)
    return float(alpha), float(math.exp(logC)), float(beta)


def delange_predict(C: float, alpha: float, X: float) -> float:
    if X < 3:
        raise DomainError("prediction needs X >= 3")
    return C * X / math.log(X) ** alpha
