"""Prime tables, factorization and small multiplicative helpers."""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np
import sympy

# One byte per odd integer; 4e9 would need 2 GB.
MAX_PRIME_TABLE = 2_000_000_000


class ResourceLimitError(RuntimeError):
    """Requested size exceeds the configured memory or time budget."""


def _odd_sieve(limit: int) -> np.ndarray:
    """Boolean array s with s[i] true iff 2i+1 is prime, for 2i+1 <= limit."""
    n = (limit + 1) // 2
    s = np.ones(n, dtype=bool)
    s[0] = False
    for i in range(1, (isqrt(limit) - 1) // 2 + 1):
        if s[i]:
            p = 2 * i + 1
            s[p * p // 2 :: p] = False
    return s


def prime_array(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        raise ValueError("prime table needs limit >= 2")
    if limit > MAX_PRIME_TABLE:
        raise ResourceLimitError(f"prime table limit {limit} exceeds {MAX_PRIME_TABLE}")
    odd = np.flatnonzero(_odd_sieve(limit)).astype(np.int64) * 2 + 1
    return np.concatenate((np.array([2], dtype=np.int64), odd))


def prime_table(limit: int) -> list[int]:
    """Ascending list of the primes in [2, limit]."""
    return prime_array(limit).tolist()


@lru_cache(maxsize=4)
def _cached_primes(limit: int) -> np.ndarray:
    return prime_array(limit)


def primes_upto(limit: int) -> np.ndarray:
    """Cached prime array; callers must not mutate the result."""
    arr = _cached_primes(max(limit, 2))
    return arr if arr[-1] <= limit else arr[: np.searchsorted(arr, limit, side="right")]


def spf_table(limit: int) -> np.ndarray:
    """Smallest prime factor of every n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in primes_upto(isqrt(limit)).tolist():
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


def factor_with_spf(n: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|; divisors(0) is [] ."""
    n = abs(n)
    if n == 0:
        return []
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))
