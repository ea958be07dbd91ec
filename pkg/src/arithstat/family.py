"""One-parameter families of cubic fields F(T, Y) = 0 and discriminant parity.

Write disc_Y(F) = g * h^2 with g squarefree.  For primes p at which g has no
root mod p, ord_p of the field discriminant of every specialization t is
even; the density of such primes comes from the Galois group of g.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .census import field_disc_monic
from .frobenian import DensityEstimate, NoRoot, PrimeSet, empirical_density
from .poly import BivarPoly, DomainError, IntPoly, disc_in_Y, is_square_int, poly_discriminant, squarefree_split
from .primes import factorize

THETA = None  # specialization flag: degree drop or reducible

DEFAULT_SEED = 20240607


@dataclass(frozen=True)
class Family:
    F: BivarPoly
    name: str = ""

    def __post_init__(self):
        if self.F.degree_Y != 3:
            raise DomainError(f"family {self.name!r} has degree {self.F.degree_Y} in Y, expected 3")

    def to_dict(self) -> dict:
        return {"name": self.name, "terms": self.F.to_json()}

    @classmethod
    def from_dict(cls, d: dict) -> "Family":
        return cls(BivarPoly.from_json(d["terms"]), d.get("name", ""))

    def pretty(self) -> str:
        parts = []
        for j in range(3, -1, -1):
            c = self.F.coeff_Y(j)
            if not c.is_zero():
                parts.append(f"({c.pretty('T')})*Y^{j}")
        return " + ".join(parts)


def _family(name: str, coeffs_by_Y: dict[int, list[int]]) -> Family:
    terms = {(i, j): c for j, cs in coeffs_by_Y.items() for i, c in enumerate(cs)}
    return Family(BivarPoly(terms), name)


REGISTRY = {
    # 4Y^3 + Y - T^4
    "x0_64": _family("x0_64", {3: [4], 1: [1], 0: [0, 0, 0, 0, -1]}),
    # Y^3 + (T-1)Y^2 - TY - 1
    "nagell_f": _family("nagell_f", {3: [1], 2: [-1, 1], 1: [0, -1], 0: [-1]}),
    # Y^3 + TY^2 - (T+3)Y + 1
    "nagell_g": _family("nagell_g", {3: [1], 2: [0, 1], 1: [-3, -1], 0: [1]}),
}


def get_family(name: str) -> Family:
    try:
        return REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; known: {sorted(REGISTRY)}") from None


def load_family(path) -> Family:
    """JSON descriptor {"name": ..., "terms": [[deg_T, deg_Y, coeff], ...]}."""
    return Family.from_dict(json.loads(Path(path).read_text()))


# -- analysis ---------------------------------------------------------------


@dataclass
class FamilyReport:
    name: str
    delta_Y: IntPoly
    g: IntPoly
    h: IntPoly
    g_degree_even: bool
    parity_set: PrimeSet
    free_density: DensityEstimate
    verdict: str
    irreducibility_witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.name,
            "delta_Y": self.delta_Y.pretty("T"),
            "g": self.g.pretty("T"),
            "h": self.h.pretty("T"),
            "g_degree": self.g.degree,
            "g_degree_even": self.g_degree_even,
            "parity_set": self.parity_set.to_dict(),
            "free_density": self.free_density.to_dict(),
            "complement_density": 1 - self.free_density.ratio,
            "verdict": self.verdict,
            "irreducibility_witnesses": [str(t) for t in self.irreducibility_witnesses],
        }


def split_delta(F: Family) -> tuple[IntPoly, IntPoly, IntPoly]:
    delta = disc_in_Y(F.F)
    if delta.is_zero():
        raise DomainError(f"family {F.name!r} is inseparable in Y")
    g, h = squarefree_split(delta)
    return delta, g, h


def analyze(F: Family, sample_limit: int = 10**6, workers: int = 1) -> FamilyReport:
    delta, g, h = split_delta(F)
    even = g.degree % 2 == 0
    S = NoRoot(g)
    est = empirical_density(S, sample_limit, workers=workers)
    ok = even and est.ratio > 3 * est.stderr
    return FamilyReport(F.name, delta, g, h, even, S, est, "criterion-satisfied" if ok else "criterion-fails",
                        irreducibility_witnesses(F))


def irreducibility_witnesses(F: Family, k: int = 3, search: int = 200) -> list[int]:
    """First k integers t with F(t, Y) irreducible of degree 3; F is then irreducible over Q(T)."""
    out = []
    for n in range(search):
        for t in ((n,) if n == 0 else (n, -n)):
            if specialize(F, t) is not THETA:
                out.append(t)
                if len(out) == k:
                    return out
    raise DomainError(f"no {k} irreducible specializations of {F.name!r} with |t| < {search}")


# -- specialization -----------------------------------------------------------


def _cleared_coeffs(F: Family, t: Fraction) -> list[int]:
    """Integer coefficients (Y^0..Y^3) of F(t, Y), primitive with positive Y^3 term when present."""
    t = Fraction(t)
    vals = [Fraction(c(t)) if not c.is_zero() else Fraction(0) for c in F.F.y_coeffs()]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return ints
    lead = next((x for x in reversed(ints) if x), 1)
    g = g if lead > 0 else -g
    return [x // g for x in ints]


def monicize(coeffs: list[int]) -> IntPoly:
    """alpha Y^3 + beta Y^2 + gamma Y + delta  ->  Z^3 + beta Z^2 + alpha gamma Z + alpha^2 delta (Z = alpha Y)."""
    delta, gamma, beta, alpha = coeffs
    return IntPoly([alpha * alpha * delta, alpha * gamma, beta, 1])


def _has_rational_root_monic(f: IntPoly) -> bool:
    from .census import BinaryCubicForm, is_irreducible_form

    return not is_irreducible_form(BinaryCubicForm(1, f[2], f[1], f[0]))


def specialize(F: Family, t) -> IntPoly | None:
    """Monic integral cubic for T = t, or None (the thin-set flag)."""
    coeffs = _cleared_coeffs(F, Fraction(t))
    if len(coeffs) < 4 or coeffs[3] == 0:
        return THETA
    f = monicize(coeffs)
    if f[0] == 0 or _has_rational_root_monic(f):
        return THETA
    return f


def _hint_primes(F: Family, t: Fraction) -> list[int]:
    t = Fraction(t)
    coeffs = _cleared_coeffs(F, t)
    ps = set()
    for n in (t.numerator, t.denominator, coeffs[3]):
        if n not in (0, 1, -1):
            ps.update(factorize(n))
    return sorted(ps)


def field_disc_of_specialization(F: Family, t) -> int:
    f = specialize(F, t)
    if f is THETA:
        raise DomainError(f"t = {t} lies in the thin set of {F.name!r}")
    return field_disc_monic(f, _hint_primes(F, t))


def sample_parameters(H: int, n: int, seed: int = DEFAULT_SEED) -> list[Fraction]:
    """n distinct rationals a/b in lowest terms with |a|, b <= H, b >= 1 (fewer if exhausted)."""
    if H < 1 or n < 0:
        raise DomainError("need H >= 1 and n >= 0")
    rng = random.Random(seed)
    total = (2 * H + 1) * H
    seen: set[Fraction] = set()
    out = []
    tries = 0
    while len(out) < n and tries < 50 * total:
        tries += 1
        a = rng.randint(-H, H)
        b = rng.randint(1, H)
        if math.gcd(a, b) != 1:
            continue
        t = Fraction(a, b)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _ord(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass
class ParityReport:
    family: str
    samples: int
    theta_flagged: int
    prime_limit: int
    primes_checked: int
    violations: list = field(default_factory=list)
    rows: list = field(default_factory=list)  # (t, field disc)

    def to_dict(self) -> dict:
        return {"family": self.family, "samples": self.samples, "theta_flagged": self.theta_flagged,
                "prime_limit": self.prime_limit, "primes_checked": self.primes_checked,
                "violations": [{"t": str(t), "p": p, "ord": v} for t, p, v in self.violations]}

    def to_csv(self) -> str:
        return "t,field_disc\n" + "".join(f"{t},{d}\n" for t, d in self.rows)


def verify_parity(F: Family, t_samples, prime_limit: int = 10**4, report: FamilyReport | None = None) -> ParityReport:
    """Check ord_p(field disc) is even at every parity-set prime p <= prime_limit."""
    from .frobenian import member_primes

    if report is None:
        _, g, _ = split_delta(F)
        S = NoRoot(g)
    else:
        S = report.parity_set
    members = set(member_primes(S, prime_limit).tolist())
    out = ParityReport(F.name, 0, 0, prime_limit, len(members))
    for t in t_samples:
        t = Fraction(t)
        out.samples += 1
        f = specialize(F, t)
        if f is THETA:
            out.theta_flagged += 1
            continue
        D = field_disc_monic(f, _hint_primes(F, t))
        out.rows.append((t, D))
        for p in sorted(members):
            if D % p == 0:
                v = _ord(D, p)
                if v % 2:
                    out.violations.append((t, p, v))
    return out


def square_class_check(F: Family, t) -> bool:
    """Field disc of K_t times g(t) is a rational square."""
    t = Fraction(t)
    _, g, _ = split_delta(F)
    gt = Fraction(g(t))
    if gt == 0:
        raise DomainError(f"g vanishes at t = {t}")
    D = field_disc_of_specialization(F, t)
    # D * g(t) = D * n / d is a square iff D * n * d is
    return is_square_int(D * gt.numerator * gt.denominator)


def theta_rate(F: Family, H: int, n: int = 200, seed: int = DEFAULT_SEED) -> float:
    ts = sample_parameters(H, n, seed)
    flagged = sum(specialize(F, t) is THETA for t in ts)
    return flagged / len(ts) if ts else math.nan


def delta_consistency(F: Family, t) -> bool:
    """disc_Y(F) at T = t equals the discriminant of F(t, Y)."""
    t = Fraction(t)
    delta = disc_in_Y(F.F)
    vals = [c(t) for c in F.F.y_coeffs()]
    d3, d2, d1, d0 = vals[3], vals[2], vals[1], vals[0]
    direct = 18 * d3 * d2 * d1 * d0 - 4 * d2**3 * d0 + d2**2 * d1**2 - 4 * d3 * d1**3 - 27 * d3**2 * d0**2
    return Fraction(delta(t)) == Fraction(direct)


def index_square_check(F: Family, t) -> bool:
    """Field disc divides the monic specialization's disc with square quotient."""
    f = specialize(F, t)
    if f is THETA:
        raise DomainError(f"t = {t} lies in the thin set")
    D = field_disc_of_specialization(F, t)
    P = poly_discriminant(f)
    return P % D == 0 and is_square_int(P // D)
