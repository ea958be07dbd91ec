"""Exceptional units: units e with 1 - e also a unit.

A root e of a monic irreducible f is such a unit iff f(0) = +-1 (norm of e)
and f(1) = +-1 (norm of 1 - e).  Real exceptional cubic fields come from the
two Nagell families below; the witness search is bounded, so "not found" is
evidence, not proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .census import BinaryCubicForm, Census, CubicField, from_monic_cubic, is_irreducible_form
from .poly import DomainError, IntPoly, is_square_int, poly_discriminant, squarefree_int_split
from .primes import factorize

NAGELL_F_RANGE = "t >= 3"
NAGELL_G_RANGE = "t >= -1"
DEFAULT_T_MAX = 10**4


def nagell_f(t: int) -> IntPoly:
    """x^3 + (t-1)x^2 - t x - 1."""
    return IntPoly([-1, -t, t - 1, 1])


def nagell_g(t: int) -> IntPoly:
    """x^3 + t x^2 - (t+3) x + 1."""
    return IntPoly([1, -(t + 3), t, 1])


@dataclass(frozen=True)
class ExceptionalPolynomial:
    f: IntPoly

    def __post_init__(self):
        if self.f.degree not in (2, 3) or self.f.lc != 1:
            raise DomainError("exceptional polynomials are monic of degree 2 or 3")
        if self.f(0) not in (1, -1) or self.f(1) not in (1, -1):
            raise DomainError(f"{self.f} has f(0) = {self.f(0)}, f(1) = {self.f(1)}")

    @property
    def norms(self) -> tuple[int, int]:
        return (self.f(0), self.f(1))

    def shifted(self) -> IntPoly:
        """Minimal polynomial of 1 - e up to sign: -f(1 - x) for cubics, f(1 - x) for quadratics."""
        g = IntPoly([1, -1])
        out = IntPoly()
        for k, c in enumerate(self.f.coeffs):
            out = out + c * g**k
        return out if out.lc > 0 else -out

    def __str__(self):
        return self.f.pretty()


def _irreducible(f: IntPoly) -> bool:
    if f.degree == 2:
        D = f[1] ** 2 - 4 * f[0]
        return not is_square_int(D)
    return is_irreducible_form(BinaryCubicForm(1, f[2], f[1], f[0]))


def enumerate_exceptional_polys(degree: int, B: int) -> list[ExceptionalPolynomial]:
    """Monic irreducible f with middle coefficients in [-B, B], f(0) = +-1, f(1) = +-1."""
    if degree not in (2, 3):
        raise DomainError("degree must be 2 or 3")
    if B < 0:
        raise DomainError("B must be >= 0")
    out = []
    for c in (-1, 1):
        for e in (-1, 1):
            if degree == 2:
                a = e - 1 - c  # f(1) = 1 + a + c
                if abs(a) <= B:
                    f = IntPoly([c, a, 1])
                    if _irreducible(f):
                        out.append(ExceptionalPolynomial(f))
                continue
            for a in range(-B, B + 1):
                b = e - 1 - a - c  # f(1) = 1 + a + b + c
                if abs(b) <= B:
                    f = IntPoly([c, b, a, 1])
                    if _irreducible(f):
                        out.append(ExceptionalPolynomial(f))
    return sorted(out, key=lambda w: w.f.coeffs[::-1])


def quadratic_field_disc(f: IntPoly) -> int:
    """Fundamental discriminant of Q(sqrt(b^2 - 4c))."""
    s, _ = squarefree_int_split(f[1] ** 2 - 4 * f[0])
    return s if s % 4 == 1 else 4 * s


@dataclass
class ExceptionalField:
    field: CubicField | int
    witnesses: list = field(default_factory=list)
    nagell_tag: str = "none"
    all_tags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        disc = self.field if isinstance(self.field, int) else self.field.disc
        return {"disc": disc, "witnesses": [str(w) for w in self.witnesses], "nagell_tag": self.nagell_tag,
                "all_tags": self.all_tags}


def field_of_poly(f: IntPoly) -> CubicField:
    """Cubic field generated by a root of monic f."""
    hints = [p for p in (2, 3) if poly_discriminant(f) % p == 0]
    return from_monic_cubic(f, hints)


@lru_cache(maxsize=4)
def nagell_index(t_max: int = DEFAULT_T_MAX) -> dict:
    """Canonical form -> (field, witnesses, tags) over f_t (3 <= t <= t_max) and g_t (-1 <= t <= t_max)."""
    index: dict = {}
    for name, make, lo in (("f_t", nagell_f, 3), ("g_t", nagell_g, -1)):
        for t in range(lo, t_max + 1):
            f = make(t)
            K = field_of_poly(f)
            entry = index.setdefault(K.canonical_form, (K, [], []))
            entry[1].append(ExceptionalPolynomial(f))
            entry[2].append(f"{name}({t})")
    return index


@lru_cache(maxsize=8)
def witness_index(B: int, t_max: int = DEFAULT_T_MAX) -> dict:
    """Canonical form -> (field, witnesses, tags) for every bounded witness."""
    index = {k: (K, list(w), list(tags)) for k, (K, w, tags) in nagell_index(t_max).items()}
    for w in enumerate_exceptional_polys(3, B):
        K = field_of_poly(w.f)
        entry = index.setdefault(K.canonical_form, (K, [], []))
        entry[1].insert(0, w)
    return index


def _tagged(entry) -> ExceptionalField:
    K, wits, tags = entry
    return ExceptionalField(K, list(wits), tags[0] if tags else "none", list(tags))


def is_exceptional_field(K: CubicField, B: int = 50, t_max: int = DEFAULT_T_MAX) -> ExceptionalField | None:
    """Witness-bearing record when a bounded witness generates K, else None."""
    entry = witness_index(B, t_max).get(K.canonical_form)
    return None if entry is None else _tagged(entry)


def search_witnesses(K: CubicField, B: int = 50, t_max: int = DEFAULT_T_MAX) -> ExceptionalField | None:
    """Direct search without the shared index; Nagell members are pre-filtered by the square-class of the disc."""
    found = []
    tags = []
    for w in enumerate_exceptional_polys(3, B):
        P = poly_discriminant(w.f)
        if P % K.disc == 0 and is_square_int(P // K.disc) and field_of_poly(w.f).canonical_form == K.canonical_form:
            found.append(w)
    for name, make, lo in (("f_t", nagell_f, 3), ("g_t", nagell_g, -1)):
        for t in range(lo, t_max + 1):
            f = make(t)
            P = poly_discriminant(f)
            if abs(P) < abs(K.disc):
                continue
            if P % K.disc == 0 and is_square_int(P // K.disc) and field_of_poly(f).canonical_form == K.canonical_form:
                found.append(ExceptionalPolynomial(f))
                tags.append(f"{name}({t})")
    if not found:
        return None
    return ExceptionalField(K, found, tags[0] if tags else "none", tags)


def exceptional_fields(B: int = 50, t_max: int = DEFAULT_T_MAX) -> list[ExceptionalField]:
    return sorted((_tagged(e) for e in witness_index(B, t_max).values()),
                  key=lambda x: (abs(x.field.disc), x.field.disc))


def exceptional_census_fraction(census: Census, checkpoints, B: int = 50, t_max: int = DEFAULT_T_MAX) -> list[tuple[int, float]]:
    """Fraction of census fields with |disc| <= X_i carrying a bounded witness."""
    index = witness_index(B, t_max)
    out = []
    for X in sorted(checkpoints):
        fields = census.fields(X)
        hits = sum(K.canonical_form in index for K in fields)
        out.append((X, hits / len(fields) if fields else 0.0))
    return out


def galois_split_census(census: Census, X: int | None = None) -> tuple[int, int]:
    return census.galois_split(X)
