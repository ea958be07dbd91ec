"""Cubic fields from integral binary cubic forms.

GL2(Z)-classes of irreducible binary cubic forms F = (a, b, c, d) correspond
to cubic rings; maximal ones correspond to cubic fields, with
disc(F) = disc(field).  Substitution convention: (F o g)(x, y) =
F(g00*x + g01*y, g10*x + g11*y).

Reduction (both signs use the PGL2(Z) fundamental domain
0 <= Re z <= 1/2, |z| >= 1, and a > 0):

* D > 0: z is the root of the Hessian H = (P, Q, R) = (b^2-3ac, bc-9ad,
  c^2-3bd), a positive definite form with 4PR - Q^2 = 3D.  F is reduced iff
  -P <= Q <= 0 <= P <= R.  On the boundary several reduced forms share H;
  the canonical one is the lexicographically smallest F o g over the
  automorphisms g of H.
* D < 0: z is the non-real root phi of F(x, 1).  With a > 0 the exact test is
  F(-b-a, a) < 0 < F(-b, a) (so 0 < Re phi < 1/2) and
  d*F(-d, a) < 0 (so |phi| > 1).  Irreducible forms never sit on the
  boundary, so the reduced form is unique.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import modp
from .poly import DomainError, IntPoly, is_square_int
from .primes import ResourceLimitError, factorize, spf_table, factor_with_spf

CENSUS_VERSION = 1
MAX_CENSUS_DISC = 20_000_000
CACHE_ENV = "ARITHSTAT_CACHE"

SPLIT_TYPES = ("111", "12", "3", "1^21", "1^3")


class CensusStateError(RuntimeError):
    """Query against a census that was not built far enough."""


@dataclass(frozen=True, order=True)
class BinaryCubicForm:
    a: int
    b: int
    c: int
    d: int

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def disc(self) -> int:
        return form_disc(self)

    def __call__(self, x, y):
        a, b, c, d = self.coeffs
        return ((a * x + b * y) * x + c * y * y) * x + d * y * y * y

    def __neg__(self):
        return BinaryCubicForm(-self.a, -self.b, -self.c, -self.d)

    def hessian(self) -> tuple[int, int, int]:
        a, b, c, d = self.coeffs
        return (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)

    def transform(self, g) -> "BinaryCubicForm":
        """F o g for a 2x2 integer matrix g = ((al, be), (ga, de))."""
        (al, be), (ga, de) = g
        X = [al, be]  # coefficients of x, y in the first argument
        Y = [ga, de]

        def mul(u, v):
            out = [0] * (len(u) + len(v) - 1)
            for i, s in enumerate(u):
                for j, t in enumerate(v):
                    out[i + j] += s * t
            return out

        X2, Y2 = mul(X, X), mul(Y, Y)
        terms = (mul(X2, X), mul(X2, Y), mul(X, Y2), mul(Y2, Y))
        res = [0, 0, 0, 0]
        for coef, t in zip(self.coeffs, terms):
            for k in range(4):
                res[k] += coef * t[k]
        return BinaryCubicForm(*res)

    def translate(self, n: int) -> "BinaryCubicForm":
        """F(x + n y, y)."""
        a, b, c, d = self.coeffs
        return BinaryCubicForm(a, 3 * a * n + b, 3 * a * n * n + 2 * b * n + c, ((a * n + b) * n + c) * n + d)

    def normalized(self) -> "BinaryCubicForm":
        return -self if self.a < 0 else self

    def monic_generator(self) -> IntPoly:
        """Minimal polynomial of a*theta where F(theta, 1) = 0."""
        a, b, c, d = self.coeffs
        return IntPoly([a * a * d, a * c, b, 1])

    def __str__(self):
        return f"({self.a},{self.b},{self.c},{self.d})"


def form_disc(F: BinaryCubicForm) -> int:
    a, b, c, d = F.coeffs
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d


def _as_form(F) -> BinaryCubicForm:
    return F if isinstance(F, BinaryCubicForm) else BinaryCubicForm(*F)


# -- irreducibility ---------------------------------------------------------


def _real_roots(F: BinaryCubicForm) -> list[float]:
    a, b, c, d = F.coeffs
    big = max(abs(a), abs(b), abs(c), abs(d))
    if big < 2**50:
        r = np.roots([a, b, c, d])
        return [float(z.real) for z in r if abs(z.imag) <= 1e-6 * (1 + abs(z))]
    import mpmath

    with mpmath.workdps(30 + len(str(big))):
        r = mpmath.polyroots([a, b, c, d], maxsteps=200, extraprec=4 * len(str(big)))
        return [float(mpmath.re(z)) if abs(mpmath.re(z)) < 1e300 else 0.0
                for z in r if abs(mpmath.im(z)) <= mpmath.mpf(10) ** -10 * (1 + abs(z))]


def is_irreducible_form(F: BinaryCubicForm) -> bool:
    """No linear factor over Q.

    A rational root r/s of F(x, 1) has s | a, so a*root is an integer k with
    F(k, a) = 0; numeric roots only locate the candidates.
    """
    F = _as_form(F)
    a, b, c, d = F.coeffs
    if a == 0 or d == 0:
        return False
    for rho in _real_roots(F):
        k = round(a * rho)
        for kk in (k - 1, k, k + 1):
            if F(kk, a) == 0:
                return False
    return True


def _require_irreducible(F: BinaryCubicForm):
    if F.disc == 0:
        raise DomainError(f"degenerate form {F}")
    if not is_irreducible_form(F):
        raise DomainError(f"reducible form {F}")


# -- reduction --------------------------------------------------------------


def is_reduced(F: BinaryCubicForm) -> bool:
    a, b, c, d = F.coeffs
    if a <= 0:
        return False
    D = F.disc
    if D > 0:
        P, Q, R = F.hessian()
        return -P <= Q <= 0 and P <= R
    if D < 0:
        return F(-b - a, a) < 0 < F(-b, a) and d * F(-d, a) < 0
    return False


def _gauss_reduce(H):
    """Reduce a positive definite (P, Q, R); returns (H_red, g) with H o g = H_red."""
    P, Q, R = H
    g = ((1, 0), (0, 1))

    def mat(m1, m2):
        return ((m1[0][0] * m2[0][0] + m1[0][1] * m2[1][0], m1[0][0] * m2[0][1] + m1[0][1] * m2[1][1]),
                (m1[1][0] * m2[0][0] + m1[1][1] * m2[1][0], m1[1][0] * m2[0][1] + m1[1][1] * m2[1][1]))

    while True:
        if not -P < Q <= P:
            # x -> x + n y brings Q into (-P, P]
            n = (P - Q) // (2 * P)
            Q, R = Q + 2 * P * n, P * n * n + Q * n + R
            g = mat(g, ((1, n), (0, 1)))
        if P > R:
            P, Q, R = R, -Q, P
            g = mat(g, ((0, -1), (1, 0)))
            continue
        break
    if Q > 0:
        Q = -Q
        g = mat(g, ((-1, 0), (0, 1)))
    return (P, Q, R), g


@lru_cache(maxsize=None)
def _unit_matrices():
    out = []
    for al, be, ga, de in product((-1, 0, 1), repeat=4):
        if abs(al * de - be * ga) == 1:
            out.append(((al, be), (ga, de)))
    return out


def _quad_compose(H, g):
    P, Q, R = H
    (al, be), (ga, de) = g
    return (P * al * al + Q * al * ga + R * ga * ga,
            2 * P * al * be + Q * (al * de + be * ga) + 2 * R * ga * de,
            P * be * be + Q * be * de + R * de * de)


def _hessian_automorphisms(H):
    return [g for g in _unit_matrices() if _quad_compose(H, g) == H]


def _canonical_positive(F: BinaryCubicForm) -> BinaryCubicForm:
    Hred, g = _gauss_reduce(F.hessian())
    Fr = F.transform(g)
    P, Q, R = Hred
    if -P < Q < 0 and P < R:
        return Fr.normalized()
    return min(Fr.transform(h).normalized() for h in _hessian_automorphisms(Hred))


def _complex_root(F: BinaryCubicForm, dps: int = 0):
    a, b, c, d = F.coeffs
    big = max(abs(a), abs(b), abs(c), abs(d))
    if dps == 0 and big < 2**40:
        r = np.roots([a, b, c, d])
        z = max(r, key=lambda w: w.imag)
        return complex(z)
    import mpmath

    with mpmath.workdps(max(dps, 30) + 2 * len(str(big))):
        r = mpmath.polyroots([a, b, c, d], maxsteps=400, extraprec=8 * len(str(big)))
        z = max(r, key=lambda w: mpmath.im(w))
        return z


def _canonical_negative(F: BinaryCubicForm) -> BinaryCubicForm:
    F = F.normalized()
    for attempt, dps in enumerate((0, 60, 200)):
        G = F
        for _ in range(500):
            G = G.normalized()
            if is_reduced(G):
                return G
            z = _complex_root(G, dps)
            n = int(math.floor(float(z.real) + 0.5))
            if n:
                G = G.translate(n)
                continue
            if float(z.real) < 0:
                G = BinaryCubicForm(-G.a, G.b, -G.c, G.d)  # F(-x, y)
                continue
            if abs(z) < 1:
                G = BinaryCubicForm(G.d, -G.c, G.b, -G.a)  # F(-y, x)
                continue
            # numerically in the domain but exact test failed: raise precision
            break
    raise DomainError(f"reduction of {F} did not converge")


def canonicalize(F: BinaryCubicForm) -> BinaryCubicForm:
    """Unique reduced representative of the GL2(Z)-class of an irreducible form."""
    F = _as_form(F)
    _require_irreducible(F)
    if F.disc > 0:
        return _canonical_positive(F)
    return _canonical_negative(F)


# -- maximality -------------------------------------------------------------


def _multiple_roots_mod_p(F: BinaryCubicForm, p: int) -> list[tuple[int, int] | None]:
    """Roots of F mod p in P^1 with multiplicity >= 2.

    A finite root r is returned as (r, 1); the point at infinity as (1, 0).
    Assumes F is not identically 0 mod p.
    """
    a, b, c, d = (x % p for x in F.coeffs)
    out = []
    if a == 0 and b == 0:
        out.append((1, 0))
    f = modp._trim([d, c, b, a])
    if len(f) <= 2:
        return out
    if p <= 7:
        df = modp._trim([c, 2 * b, 3 * a])
        for r in range(p):
            if modp.evaluate(f, r, p) == 0 and modp.evaluate([x % p for x in df], r, p) == 0:
                out.append((r, 1))
        return out
    g = modp.gcd(f, modp.deriv(f, p), p)
    k = len(g) - 1
    if k >= 1:
        # g = (x - r)^k for the unique multiple root
        r = (-g[k - 1] * pow(k, -1, p)) % p
        out.append((r, 1))
    return out


def _root_to_infinity(F: BinaryCubicForm, root) -> BinaryCubicForm:
    """Change variables so the projective root moves to (1 : 0)."""
    r, s = root
    if s == 0:
        return F
    return F.transform(((r, -1), (1, 0)))


def _local_defect(F: BinaryCubicForm, p: int):
    """Witness of non-maximality at p, or None when p-maximal."""
    if all(x % p == 0 for x in F.coeffs):
        return ("zero", None)
    pp = p * p
    for root in _multiple_roots_mod_p(F, p):
        G = _root_to_infinity(F, root)
        if G.a % pp == 0:
            return ("lift", G)
    return None


def is_p_maximal(F: BinaryCubicForm, p: int) -> bool:
    return _local_defect(_as_form(F), p) is None


def _square_primes(D: int, hints: Iterable[int] = ()) -> list[int]:
    """Primes p with p^2 | D; known prime factors in ``hints`` are stripped first."""
    D = abs(D)
    out = []
    for p in sorted(set(hints)):
        e = 0
        while D % p == 0:
            D //= p
            e += 1
        if e >= 2:
            out.append(p)
    if D > 1:
        out += [p for p, e in factorize(D).items() if e >= 2]
    return sorted(out)


def is_maximal(F: BinaryCubicForm) -> bool:
    """Ring of F is the maximal order.

    F fails at p iff F = 0 mod p, or F mod p has a root of multiplicity >= 2
    which, moved to (1 : 0), makes the leading coefficient divisible by p^2.
    Only p with p^2 | disc can fail.
    """
    F = _as_form(F)
    _require_irreducible(F)
    return all(is_p_maximal(F, p) for p in _square_primes(F.disc))


def index_lower(F: BinaryCubicForm, p: int) -> BinaryCubicForm:
    """Form of an index-p overring, with disc(F) / p^2.

    When F = p*G and G has no root mod p no single step of index p exists and
    G itself (disc / p^4) is returned.
    """
    F = _as_form(F)
    D = F.disc
    if D == 0 or D % (p * p):
        raise DomainError(f"{F} is {p}-maximal")
    defect = _local_defect(F, p)
    if defect is None:
        raise DomainError(f"{F} is {p}-maximal")
    kind, G = defect
    if kind == "lift":
        return BinaryCubicForm(G.a // (p * p), G.b // p, G.c, G.d * p)
    H = BinaryCubicForm(*(x // p for x in F.coeffs))
    roots = [r for r in range(p) if H(r, 1) % p == 0]
    if H.a % p == 0:
        K = H
    elif roots:
        K = _root_to_infinity(H, (roots[0], 1))
    else:
        return H
    return BinaryCubicForm(K.a // p, K.b, K.c * p, K.d * p * p)


def maximal_form(F: BinaryCubicForm, hints: Iterable[int] = ()) -> BinaryCubicForm:
    """Form of the maximal order containing the ring of F."""
    F = _as_form(F)
    _require_irreducible(F)
    for p in _square_primes(F.disc, hints):
        # p-maximality at other primes is unaffected by an index-p step
        while not is_p_maximal(F, p):
            F = index_lower(F, p)
    return F


# -- fields -----------------------------------------------------------------


@dataclass(frozen=True)
class CubicField:
    canonical_form: BinaryCubicForm
    disc: int

    @property
    def signature(self) -> str:
        return "totally-real" if self.disc > 0 else "complex"

    @property
    def galois_type(self) -> str:
        return "C3" if is_square_int(self.disc) else "S3"

    def to_row(self) -> list:
        return [*self.canonical_form.coeffs, self.disc, self.signature, self.galois_type]

    @classmethod
    def from_form(cls, F: BinaryCubicForm) -> "CubicField":
        return cls(F, F.disc)


def field_of_form(F: BinaryCubicForm, hints: Iterable[int] = ()) -> CubicField:
    """Field generated by a root of an irreducible form."""
    G = canonicalize(maximal_form(F, hints))
    return CubicField(G, G.disc)


def _monic_form(f: IntPoly) -> BinaryCubicForm:
    if f.degree != 3 or f.lc != 1:
        raise DomainError("expected a monic cubic")
    F = BinaryCubicForm(1, f[2], f[1], f[0])
    if not is_irreducible_form(F):
        raise DomainError(f"{f} is reducible")
    return F


def from_monic_cubic(f: IntPoly, hints: Iterable[int] = ()) -> CubicField:
    return field_of_form(_monic_form(f), hints)


def field_disc_monic(f: IntPoly, hints: Iterable[int] = ()) -> int:
    """Field discriminant of a monic irreducible cubic, skipping canonicalization."""
    return maximal_form(_monic_form(f), hints).disc


def splitting_type(K: CubicField, p: int) -> str:
    """Factorization shape of p from the maximal form mod p."""
    F = K.canonical_form
    if K.disc % p == 0:
        a, b, c, d = (x % p for x in F.coeffs)
        distinct = (1 if a == 0 else 0) + modp.count_roots_mod_p(IntPoly([d, c, b, a]), p)
        return "1^3" if distinct == 1 else "1^21"
    a = F.a % p
    f = IntPoly([x % p for x in (F.d, F.c, F.b, F.a)])
    distinct = (1 if a == 0 else 0) + modp.count_roots_mod_p(f, p)
    return {3: "111", 1: "12", 0: "3"}[distinct]


# -- enumeration ------------------------------------------------------------


def _ceil_div(x, y):
    return -(-x // y)


def _irreducible_negative(a, b, c, d) -> bool:
    # reduced & a > 0: the real root satisfies -b-a < a*theta < -b and
    # sign F(k, a) = sign(k - a*theta), so bisect for the sign change.
    lo, hi = -b - a, -b
    while hi - lo > 1:
        mid = (lo + hi) // 2
        v = (((a * mid + b * a) * mid + c * a * a) * mid + d * a * a * a)
        if v == 0:
            return False
        if v < 0:
            lo = mid
        else:
            hi = mid
    return True


def _irreducible_positive(a, b, c, d) -> bool:
    # depressed cubic via trig; rational roots satisfy F(a*rho, a) = 0
    A = b / a
    B = c / a
    C = d / a
    p = B - A * A / 3
    q = 2 * A**3 / 27 - A * B / 3 + C
    if p >= 0:
        return is_irreducible_form(BinaryCubicForm(a, b, c, d))
    m = 2 * math.sqrt(-p / 3)
    arg = 3 * q / (p * m)
    arg = max(-1.0, min(1.0, arg))
    t = math.acos(arg) / 3
    a3 = a * a * a
    for k in range(3):
        rho = m * math.cos(t - 2 * math.pi * k / 3) - A / 3
        r = round(a * rho)
        for rr in (r - 1, r, r + 1):
            if ((a * rr + b * a) * rr + c * a * a) * rr + d * a3 == 0:
                return False
    return True


class _MaxTester:
    def __init__(self, X: int):
        self.spf = spf_table(max(X, 2))

    def square_primes(self, D: int) -> list[int]:
        return [p for p, e in factor_with_spf(abs(D), self.spf).items() if e >= 2]

    def maximal(self, F: BinaryCubicForm, D: int) -> bool:
        for p in self.square_primes(D):
            if _local_defect(F, p) is not None:
                return False
        return True


def _scan_negative(X: int, a_values, tester) -> list[tuple]:
    out = []
    W = (X / 3) ** 0.25
    for a in a_values:
        vmax = (X / (4 * a**4)) ** (1 / 3)
        if vmax < 0.75:
            continue
        b_lo = math.floor(-1.5 * a - W) - 1
        b_hi = math.ceil(W) + 1
        a2, a3 = a * a, a**3
        for b in range(b_lo, b_hi + 1):
            s = b / a
            # c/a = -2 u s - 3u^2 + v^2, u in [0, 1/2], v^2 in [3/4, vmax]
            u_star = min(0.5, max(0.0, -s / 3))
            hmin = min(0.0, -s - 0.75)
            hmax = -2 * u_star * s - 3 * u_star * u_star
            c_lo = math.floor(a * (hmin + 0.75)) - 1
            c_hi = math.ceil(a * (hmax + vmax)) + 1
            for c in range(c_lo, c_hi + 1):
                # D(d) = -27a^2 d^2 + L d + M, need -X <= D < 0
                L = 18 * a * b * c - 4 * b**3
                M = b * b * c * c - 4 * a * c**3
                disc_q = L * L + 108 * a2 * (M + X)
                if disc_q < 0:
                    continue
                sq = math.isqrt(disc_q)
                d_lo = (L - sq) // (54 * a2) - 1
                d_hi = (L + sq) // (54 * a2) + 1
                # d = -a theta |phi|^2 with theta in (-s-1, -s), |phi|^2 in [1, vmax + 1/4]
                th = (-s - 1, -s)
                pr = (1.0, vmax + 0.25)
                corners = [-a * t * q for t in th for q in pr]
                d_lo = max(d_lo, math.floor(min(corners)) - 1)
                d_hi = min(d_hi, math.ceil(max(corners)) + 1)
                for d in range(d_lo, d_hi + 1):
                    if d == 0:
                        continue
                    D = (L - 27 * a2 * d) * d + M
                    if D >= 0 or D < -X:
                        continue
                    # exact reduced test
                    if not ((((-b - a) + b) * (-b - a) * a + c * a2) * (-b - a) + d * a3 < 0):
                        continue
                    if not (c * a2 * (-b) + d * a3 > 0):
                        continue
                    Fd = (((-d + b) * (-d) * a + c * a2) * (-d) + d * a3)
                    if d * Fd >= 0:
                        continue
                    if not _irreducible_negative(a, b, c, d):
                        continue
                    F = BinaryCubicForm(a, b, c, d)
                    if tester.maximal(F, D):
                        out.append((a, b, c, d, D))
    return out


def _scan_positive(X: int, a_values, tester) -> list[tuple]:
    out = []
    sqX = math.isqrt(X)
    X4 = X**0.25
    for a in a_values:
        # |sum(theta_k) - 3 Re z| <= (4/3) X^(1/4)/a + (4/sqrt3) X^(1/6)/a^(2/3)
        spread = (4 / 3) * X4 + (4 / math.sqrt(3)) * X ** (1 / 6) * a ** (1 / 3)
        b_lo = math.floor(-1.5 * a - spread) - 1
        b_hi = math.ceil(spread) + 1
        for b in range(b_lo, b_hi + 1):
            b2 = b * b
            # P = b^2 - 3ac in [1, sqrt X], so c = (b^2 - P) / (3a)
            c_hi = (b2 - 1) // (3 * a)
            c_lo = _ceil_div(b2 - sqX, 3 * a)
            for c in range(c_lo, c_hi + 1):
                P = b2 - 3 * a * c
                bc = b * c
                # Q = bc - 9ad in [-P, 0]
                for d in range(_ceil_div(bc, 9 * a), (bc + P) // (9 * a) + 1):
                    Q = bc - 9 * a * d
                    R = c * c - 3 * b * d
                    if R < P:
                        continue
                    D3 = 4 * P * R - Q * Q
                    if D3 > 3 * X or D3 <= 0:
                        continue
                    D = D3 // 3
                    if not _irreducible_positive(a, b, c, d):
                        continue
                    F = BinaryCubicForm(a, b, c, d)
                    if not (-P < Q < 0 and P < R):
                        if _canonical_positive(F) != F:
                            continue
                    if tester.maximal(F, D):
                        out.append((a, b, c, d, D))
    return out


def _a_bounds(X: int) -> tuple[int, int]:
    neg = int((16 * X / 27) ** 0.25) + 1
    pos = int((8 / 9) * X**0.25) + 1
    return neg, pos


def _scan_job(args):
    X, sign, a_values = args
    tester = _MaxTester(X)
    if sign < 0:
        return _scan_negative(X, a_values, tester)
    return _scan_positive(X, a_values, tester)


def enumerate_fields(X: int, signature: str | None = None, workers: int = 1) -> list[CubicField]:
    """One field per isomorphism class with 0 < |disc| <= X."""
    if X < 1:
        raise DomainError("X must be >= 1")
    if X > MAX_CENSUS_DISC:
        raise ResourceLimitError(f"census limited to |disc| <= {MAX_CENSUS_DISC}")
    if signature not in (None, "complex", "totally-real"):
        raise DomainError(f"unknown signature {signature!r}")
    neg_a, pos_a = _a_bounds(X)
    jobs = []
    if signature in (None, "complex"):
        jobs += [(X, -1, [a]) for a in range(1, neg_a + 1)]
    if signature in (None, "totally-real"):
        jobs += [(X, 1, [a]) for a in range(1, pos_a + 1)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_scan_job, jobs))
    else:
        parts = [_scan_job(j) for j in jobs]
    rows = sorted((r for part in parts for r in part), key=lambda r: (abs(r[4]), r[4], r[:4]))
    return [CubicField(BinaryCubicForm(*r[:4]), r[4]) for r in rows]


# -- census with cache and queries --------------------------------------------


@dataclass(frozen=True)
class Condition:
    """Local condition at p, applied either to ord_p(disc) or to the splitting type."""

    p: int
    on: str
    accept: Callable
    label: str = ""

    def __post_init__(self):
        if self.on not in ("ord", "type"):
            raise DomainError("condition acts on 'ord' or 'type'")


def unramified(p: int) -> Condition:
    return Condition(p, "ord", lambda v: v == 0, f"ord_{p}=0")


def even_valuation(p: int) -> Condition:
    return Condition(p, "ord", lambda v: v % 2 == 0, f"ord_{p} even")


def has_type(p: int, types: Iterable[str]) -> Condition:
    types = frozenset(types)
    bad = types - set(SPLIT_TYPES)
    if bad:
        raise DomainError(f"unknown splitting types {sorted(bad)}")
    return Condition(p, "type", lambda t: t in types, f"type_{p} in {sorted(types)}")


def _valuations(discs: np.ndarray, p: int) -> np.ndarray:
    v = np.zeros(len(discs), dtype=np.int64)
    cur = np.abs(discs)
    mask = cur % p == 0
    while mask.any():
        v[mask] += 1
        cur = np.where(mask, cur // p, cur)
        mask = (cur % p == 0) & mask
    return v


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "arithstat"))


@dataclass
class Census:
    max_disc: int
    forms: np.ndarray  # (n, 4) int64
    discs: np.ndarray  # (n,) int64
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.discs)

    @classmethod
    def from_fields(cls, X: int, fields: list[CubicField]) -> "Census":
        forms = np.array([f.canonical_form.coeffs for f in fields], dtype=np.int64).reshape(-1, 4)
        discs = np.array([f.disc for f in fields], dtype=np.int64)
        return cls(X, forms, discs)

    @classmethod
    def build(cls, X: int, workers: int = 1) -> "Census":
        return cls.from_fields(X, enumerate_fields(X, workers=workers))

    def fields(self, max_disc: int | None = None, signature: str | None = None) -> list[CubicField]:
        idx = self._select(max_disc, signature)
        return [CubicField(BinaryCubicForm(*map(int, self.forms[i])), int(self.discs[i])) for i in idx]

    def _select(self, max_disc, signature) -> np.ndarray:
        X = self.max_disc if max_disc is None else max_disc
        if X > self.max_disc:
            raise CensusStateError(f"census built to {self.max_disc}, query asks {X}")
        m = np.abs(self.discs) <= X
        if signature == "complex":
            m &= self.discs < 0
        elif signature == "totally-real":
            m &= self.discs > 0
        elif signature is not None:
            raise DomainError(f"unknown signature {signature!r}")
        return np.flatnonzero(m)

    def count(self, max_disc: int | None = None, signature: str | None = None) -> int:
        return int(len(self._select(max_disc, signature)))

    def condition_mask(self, conditions: Iterable[Condition], max_disc: int | None = None) -> np.ndarray:
        idx = self._select(max_disc, None)
        discs = self.discs[idx]
        keep = np.ones(len(idx), dtype=bool)
        for cond in conditions:
            if cond.on == "ord":
                v = _valuations(discs, cond.p)
                for val in np.unique(v):
                    if not cond.accept(int(val)):
                        keep &= v != val
            else:
                for j, i in enumerate(idx):
                    if keep[j]:
                        K = CubicField(BinaryCubicForm(*map(int, self.forms[i])), int(self.discs[i]))
                        keep[j] = cond.accept(splitting_type(K, cond.p))
        return keep

    def count_with_conditions(self, conditions: Iterable[Condition] = (), max_disc: int | None = None) -> int:
        return int(self.condition_mask(list(conditions), max_disc).sum())

    def galois_split(self, max_disc: int | None = None) -> tuple[int, int]:
        idx = self._select(max_disc, None)
        discs = self.discs[idx]
        pos = discs > 0
        r = np.zeros(len(discs), dtype=np.int64)
        r[pos] = np.round(np.sqrt(discs[pos].astype(np.float64))).astype(np.int64)
        c3 = int(np.count_nonzero(pos & (r * r == discs)))
        return c3, len(discs) - c3

    # -- persistence --------------------------------------------------------

    HEADER = ["a", "b", "c", "d", "disc", "signature", "galois_type"]

    def save(self, path: Path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(f"# census version={CENSUS_VERSION} max_disc={self.max_disc} rows={len(self)}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.HEADER)
            for (a, b, c, d), D in zip(self.forms.tolist(), self.discs.tolist()):
                sig = "totally-real" if D > 0 else "complex"
                gal = "C3" if is_square_int(D) else "S3"
                w.writerow([a, b, c, d, D, sig, gal])
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Path) -> "Census":
        """Read a cache file; raises ValueError on any inconsistency."""
        path = Path(path)
        with open(path, newline="") as fh:
            head = fh.readline().split()
            meta = dict(kv.split("=", 1) for kv in head[2:]) if head[:2] == ["#", "census"] else {}
            if int(meta.get("version", -1)) != CENSUS_VERSION:
                raise ValueError(f"cache version mismatch in {path}")
            X = int(meta["max_disc"])
            rows = int(meta["rows"])
            r = csv.reader(fh)
            if next(r) != cls.HEADER:
                raise ValueError(f"bad cache header in {path}")
            data = [(int(a), int(b), int(c), int(d), int(D)) for a, b, c, d, D, _, _ in r]
        if len(data) != rows:
            raise ValueError(f"cache {path} has {len(data)} rows, header says {rows}")
        arr = np.array(data, dtype=np.int64).reshape(-1, 5)
        forms, discs = arr[:, :4], arr[:, 4]
        a, b, c, d = forms.T
        recomputed = 18 * a * b * c * d + b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d
        if not np.array_equal(recomputed, discs) or np.any(np.abs(discs) > X):
            raise ValueError(f"cache {path} fails the discriminant check")
        return cls(X, forms, discs)

    @classmethod
    def obtain(cls, X: int, cache_dir: Path | None = None, workers: int = 1) -> "Census":
        """Load from cache when it covers X; otherwise (or when corrupt) rebuild and save."""
        cache_dir = default_cache_dir() if cache_dir is None else Path(cache_dir)
        path = cache_dir / "cubic_census.csv"
        notes = []
        if path.exists():
            try:
                cached = cls.load(path)
                if cached.max_disc >= X:
                    cached.notes = [f"loaded {path}"]
                    return cached
                notes.append(f"cache covers {cached.max_disc} < {X}; rebuilding")
            except (ValueError, KeyError, IndexError) as exc:
                notes.append(f"cache rebuilt: {exc}")
        census = cls.build(X, workers=workers)
        census.save(path)
        census.notes = notes + [f"built to {X}, saved {path}"]
        return census
