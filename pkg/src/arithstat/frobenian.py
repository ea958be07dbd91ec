"""Prime sets defined by residues or by root conditions, and their densities."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd

import numpy as np

from .modp import batch_root_counts, count_roots_mod_p
from .poly import DomainError, IntPoly, poly_discriminant
from .primes import primes_upto

KINDS = ("explicit", "residue", "noroot", "hasroot", "complement")


@dataclass(frozen=True)
class PrimeSet:
    """A membership predicate on primes.

    ``exceptions`` is a tuple of (prime, forced membership) pairs applied
    after the descriptor.
    """

    kind: str
    primes: frozenset = frozenset()
    modulus: int = 0
    residues: frozenset = frozenset()
    poly: IntPoly | None = None
    inner: "PrimeSet | None" = None
    exceptions: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown prime set kind {self.kind!r}")
        if self.kind == "residue":
            if self.modulus < 1:
                raise DomainError("residue sets need a positive modulus")
            for r in self.residues:
                if not 0 <= r < self.modulus or gcd(r, self.modulus) != 1:
                    raise DomainError(f"residue {r} is not a unit mod {self.modulus}")
        if self.kind in ("noroot", "hasroot") and self.poly is None:
            raise DomainError("root-condition sets need a polynomial")
        if self.kind == "complement" and self.inner is None:
            raise DomainError("complement needs an inner set")

    # -- membership ---------------------------------------------------------

    @cached_property
    def _exc(self) -> dict:
        return dict(self.exceptions)

    @cached_property
    def _disc(self) -> int:
        return poly_discriminant(self.poly) if self.poly.degree >= 1 else 1

    def _base_contains(self, p: int) -> bool:
        if self.kind == "explicit":
            return p in self.primes
        if self.kind == "residue":
            return p % self.modulus in self.residues
        if self.kind == "complement":
            return not self.inner.contains(p)
        g = self.poly
        if g.lc % p == 0:
            no_root = False
        else:
            no_root = count_roots_mod_p(g, p) == 0
        return no_root if self.kind == "noroot" else not no_root

    def contains(self, p: int) -> bool:
        if p in self._exc:
            return self._exc[p]
        return self._base_contains(p)

    def __contains__(self, p: int) -> bool:
        return self.contains(p)

    def mask(self, primes: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`contains` over an array of primes."""
        primes = np.asarray(primes, dtype=np.int64)
        if self.kind == "explicit":
            m = np.isin(primes, np.array(sorted(self.primes), dtype=np.int64))
        elif self.kind == "residue":
            m = np.isin(primes % self.modulus, np.array(sorted(self.residues), dtype=np.int64))
        elif self.kind == "complement":
            m = ~self.inner.mask(primes)
        else:
            counts = batch_root_counts(self.poly, primes)
            no_root = counts == 0
            bad_lc = counts < 0
            no_root[bad_lc] = False
            m = no_root if self.kind == "noroot" else ~no_root
        if self.exceptions:
            for p, member in self.exceptions:
                m[primes == p] = member
        return m

    def degenerate(self, p: int) -> bool:
        """Primes excluded from density samples (finitely many)."""
        if self.kind == "explicit":
            return False
        if self.kind == "residue":
            return self.modulus % p == 0
        if self.kind == "complement":
            return self.inner.degenerate(p)
        return (self.poly.lc * self._disc) % p == 0

    def degenerate_mask(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if self.kind == "explicit":
            return np.zeros(len(primes), dtype=bool)
        if self.kind == "residue":
            return self.modulus % primes == 0
        if self.kind == "complement":
            return self.inner.degenerate_mask(primes)
        bad = abs(self.poly.lc * self._disc)
        small = [p for p in primes_upto(min(bad, int(primes.max(initial=2)))).tolist() if bad % p == 0]
        return np.isin(primes, np.array(small, dtype=np.int64))

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "explicit":
            out["primes"] = sorted(self.primes)
        elif self.kind == "residue":
            out["modulus"] = self.modulus
            out["residues"] = sorted(self.residues)
        elif self.kind == "complement":
            out["inner"] = self.inner.to_dict()
        else:
            out["poly"] = list(self.poly.coeffs)
        out["exceptions"] = [[p, bool(m)] for p, m in self.exceptions]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "PrimeSet":
        kind = d["kind"]
        exc = tuple((int(p), bool(m)) for p, m in d.get("exceptions", []))
        if kind == "explicit":
            return cls(kind, primes=frozenset(int(p) for p in d["primes"]), exceptions=exc)
        if kind == "residue":
            return cls(kind, modulus=int(d["modulus"]), residues=frozenset(int(r) for r in d["residues"]), exceptions=exc)
        if kind == "complement":
            return cls(kind, inner=cls.from_dict(d["inner"]), exceptions=exc)
        if kind in ("noroot", "hasroot"):
            return cls(kind, poly=IntPoly(int(c) for c in d["poly"]), exceptions=exc)
        raise DomainError(f"unknown prime set kind {kind!r}")

    @classmethod
    def from_json(cls, text: str) -> "PrimeSet":
        return cls.from_dict(json.loads(text))

    def with_exceptions(self, exceptions) -> "PrimeSet":
        return PrimeSet(self.kind, self.primes, self.modulus, self.residues, self.poly, self.inner,
                        tuple((int(p), bool(m)) for p, m in exceptions))

    def describe(self) -> str:
        if self.kind == "explicit":
            return "{" + ",".join(map(str, sorted(self.primes))) + "}"
        if self.kind == "residue":
            return f"p mod {self.modulus} in {sorted(self.residues)}"
        if self.kind == "complement":
            return f"not ({self.inner.describe()})"
        return f"{self.kind}({self.poly.pretty('T')})"


def Explicit(primes=()) -> PrimeSet:
    return PrimeSet("explicit", primes=frozenset(int(p) for p in primes))


def Residue(modulus: int, residues) -> PrimeSet:
    return PrimeSet("residue", modulus=modulus, residues=frozenset(residues))


def NoRoot(g: IntPoly) -> PrimeSet:
    return PrimeSet("noroot", poly=g)


def HasRoot(g: IntPoly) -> PrimeSet:
    return PrimeSet("hasroot", poly=g)


def Complement(inner: PrimeSet) -> PrimeSet:
    return PrimeSet("complement", inner=inner)


def AllPrimes() -> PrimeSet:
    return Complement(Explicit())


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityEstimate:
    sample_limit: int
    member_count: int
    prime_count: int
    ratio: float = field(init=False)

    def __post_init__(self):
        ratio = self.member_count / self.prime_count if self.prime_count else 0.0
        object.__setattr__(self, "ratio", ratio)

    @property
    def stderr(self) -> float:
        """Binomial standard error of the ratio."""
        if not self.prime_count:
            return math.inf
        r = self.ratio
        return math.sqrt(r * (1 - r) / self.prime_count)

    def to_dict(self) -> dict:
        return {"sample_limit": self.sample_limit, "member_count": self.member_count,
                "prime_count": self.prime_count, "ratio": self.ratio, "stderr": self.stderr}


def _count_chunk(args):
    S, chunk = args
    keep = ~S.degenerate_mask(chunk)
    sample = chunk[keep]
    return int(S.mask(sample).sum()), int(len(sample))


@lru_cache(maxsize=8)
def _member_mask(S: PrimeSet, N: int) -> np.ndarray:
    return S.mask(primes_upto(N))


def empirical_density(S: PrimeSet, N: int, workers: int = 1, chunk: int = 250_000) -> DensityEstimate:
    """Fraction of non-degenerate primes p <= N that lie in S."""
    if N < 100:
        raise DomainError("empirical density needs N >= 100")
    primes = primes_upto(N)
    if workers > 1:
        chunks = [(S, primes[i : i + chunk]) for i in range(0, len(primes), chunk)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_count_chunk, chunks))
        return DensityEstimate(N, sum(m for m, _ in parts), sum(t for _, t in parts))
    keep = ~S.degenerate_mask(primes)
    members = _member_mask(S, N) & keep
    return DensityEstimate(N, int(members.sum()), int(keep.sum()))


def member_primes(S: PrimeSet, N: int) -> np.ndarray:
    return primes_upto(N)[_member_mask(S, N)]


def reciprocal_sum(S: PrimeSet, N: int) -> float:
    """Sum of 1/p over members p <= N."""
    if N < 2:
        raise DomainError("reciprocal sum needs N >= 2")
    members = member_primes(S, N)
    return math.fsum(1.0 / members.astype(np.float64))
