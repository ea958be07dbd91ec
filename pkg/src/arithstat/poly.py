"""Exact integer polynomials in one and two variables.

Coefficient lists are stored low degree first.  Everything here is exact:
Python integers for Z, ``fractions.Fraction`` for Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class IntPoly:
    """Dense univariate polynomial with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        coeffs = _strip(coeffs)
        for c in coeffs:
            if not isinstance(c, int):
                raise TypeError(f"IntPoly coefficients must be int, got {type(c).__name__}")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    def __reduce__(self):
        return (IntPoly, (self.coeffs,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_fraction_coeffs(cls, coeffs: Sequence[Fraction]) -> "IntPoly":
        """Scale a rational polynomial to a primitive integer one (positive lc)."""
        coeffs = _strip(Fraction(c) for c in coeffs)
        if not coeffs:
            return cls()
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        poly = cls(ints)
        return poly.primitive_part()

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        return self.pretty()

    def pretty(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other):
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = IntPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        """gcd of the coefficients, carrying the sign of the leading coefficient."""
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        if self.lc < 0:
            g = -g
        return g

    def primitive_part(self) -> "IntPoly":
        if self.is_zero():
            return self
        g = self.content()
        return IntPoly(c // g for c in self.coeffs)

    def exact_div(self, other: "IntPoly | int") -> "IntPoly":
        """Division that must be exact over Z."""
        if isinstance(other, int):
            if any(c % other for c in self.coeffs):
                raise DomainError(f"{self} is not divisible by {other}")
            return IntPoly(c // other for c in self.coeffs)
        q, r = _q_divmod(_to_q(self), _to_q(other))
        if any(r) or any(c.denominator != 1 for c in q):
            raise DomainError(f"{self} is not divisible by {other} over Z")
        return IntPoly(int(c) for c in q)

    def gcd(self, other: "IntPoly") -> "IntPoly":
        """Primitive gcd with positive leading coefficient."""
        g = _q_gcd(_to_q(self), _to_q(other))
        return IntPoly.from_fraction_coeffs(g)

    def reduce_mod(self, p: int) -> list[int]:
        return list(_strip(c % p for c in self.coeffs))


# ---------------------------------------------------------------------------
# rational helpers, used for gcd / Yun / exact division


def _to_q(f: IntPoly):
    return [Fraction(c) for c in f.coeffs]


def _q_strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _q_divmod(a, b):
    a, b = _q_strip(a), _q_strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        factor = r[-1] / lb
        q[shift] = factor
        for i, c in enumerate(b):
            r[shift + i] -= factor * c
        r = _q_strip(r)
    return q, r


def _q_gcd(a, b):
    a, b = _q_strip(a), _q_strip(b)
    while b:
        _, r = _q_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lc = a[-1]
    return [c / lc for c in a]


def _q_deriv(a):
    return [i * c for i, c in enumerate(a)][1:]


def _q_sub(a, b):
    n = max(len(a), len(b))
    return _q_strip([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


# ---------------------------------------------------------------------------
# determinants, resultants, discriminants


def bareiss_det(matrix, exact_div, is_zero):
    """Fraction-free determinant over an integral domain.

    ``exact_div(x, y)`` must divide exactly; ``is_zero`` tests ring zero.
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = None
    for k in range(n - 1):
        if is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return m[k][k] * 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = val if prev is None else exact_div(val, prev)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def sylvester_matrix(f: Sequence, g: Sequence, zero):
    """Sylvester matrix from coefficient lists given low degree first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fh, gh = list(reversed(f)), list(reversed(g))
    for i in range(n):
        rows.append([zero] * i + fh + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + gh + [zero] * (size - i - n - 1))
    return rows


def resultant(f: IntPoly, g: IntPoly) -> int:
    if f.is_zero() or g.is_zero():
        return 0
    if f.degree == 0:
        return f.lc ** g.degree
    if g.degree == 0:
        return g.lc ** f.degree
    mat = sylvester_matrix(list(f.coeffs), list(g.coeffs), 0)
    return bareiss_det(mat, lambda x, y: x // y, lambda x: x == 0)


def poly_discriminant(f: IntPoly) -> int:
    """Discriminant (-1)^{n(n-1)/2} Res(f, f') / lc(f)."""
    n = f.degree
    if n < 1:
        raise DomainError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    res = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, r = divmod(res, f.lc)
    assert r == 0
    return sign * q


# ---------------------------------------------------------------------------
# squarefree splitting


def yun_decomposition(f: IntPoly) -> list[IntPoly]:
    """Squarefree decomposition of a primitive polynomial.

    Returns ``[a1, a2, ...]`` with f = +-prod a_i^i, each a_i primitive with
    positive leading coefficient (constant factors are ``IntPoly([1])``).
    """
    if f.degree < 1:
        return []
    a = _to_q(f)
    da = _q_deriv(a)
    b = _q_gcd(a, da)
    c, _ = _q_divmod(a, b)
    d, _ = _q_divmod(da, b)
    d = _q_sub(d, _q_deriv(c))
    out = []
    while len(_q_strip(c)) > 1:
        ai = _q_gcd(c, d)
        c, _ = _q_divmod(c, ai)
        d, _ = _q_divmod(d, ai)
        d = _q_sub(d, _q_deriv(c))
        out.append(IntPoly.from_fraction_coeffs(ai))
    return out


def squarefree_int_split(n: int) -> tuple[int, int]:
    """n = s * q^2 with s squarefree (sign kept on s), q > 0."""
    from .primes import factorize

    if n == 0:
        raise DomainError("zero has no squarefree split")
    s, q = (-1 if n < 0 else 1), 1
    for p, e in factorize(abs(n)).items():
        q *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, q


def squarefree_split(P: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Write P = g * h^2 with g squarefree of squarefree content."""
    if P.is_zero():
        raise DomainError("zero polynomial has no squarefree split")
    content = P.content()
    prim = P.primitive_part()
    s, q = squarefree_int_split(content)
    g, h = IntPoly([s]), IntPoly([q])
    for i, ai in enumerate(yun_decomposition(prim), start=1):
        if i % 2:
            g = g * ai
        h = h * ai ** (i // 2)
    if g * h * h != P:
        raise AssertionError("squarefree split failed to reconstruct the input")
    return g, h


# ---------------------------------------------------------------------------
# homogenization


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form sum coeffs[i] u^i v^(m-i)."""

    degree: int
    coeffs: tuple[int, ...]

    def __call__(self, u, v):
        return sum(c * u**i * v ** (self.degree - i) for i, c in enumerate(self.coeffs))

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append(f"{c}*u^{i}*v^{self.degree - i}")
        return " + ".join(terms) or "0"


def homogenize(g: IntPoly, m: int) -> BinaryForm:
    if m < g.degree:
        raise DomainError(f"cannot homogenize degree {g.degree} to degree {m}")
    return BinaryForm(m, tuple(g[i] for i in range(m + 1)))


# ---------------------------------------------------------------------------
# bivariate polynomials


class BivarPoly:
    """Integer polynomial in T and Y stored as {(deg_T, deg_Y): coeff}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int]):
        clean = {}
        for (i, j), c in terms.items():
            if c:
                if i < 0 or j < 0:
                    raise DomainError("negative exponent")
                clean[(int(i), int(j))] = int(c)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BivarPoly is immutable")

    def __reduce__(self):
        return (BivarPoly, (self.terms,))

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"BivarPoly({self.terms})"

    @property
    def degree_Y(self) -> int:
        return max((j for (_, j) in self.terms), default=-1)

    @property
    def degree_T(self) -> int:
        return max((i for (i, _) in self.terms), default=-1)

    def coeff_Y(self, j: int) -> IntPoly:
        """Coefficient of Y^j as a polynomial in T."""
        deg = max((i for (i, jj) in self.terms if jj == j), default=-1)
        out = [0] * (deg + 1)
        for (i, jj), c in self.terms.items():
            if jj == j:
                out[i] = c
        return IntPoly(out)

    def y_coeffs(self) -> list[IntPoly]:
        return [self.coeff_Y(j) for j in range(self.degree_Y + 1)]

    def derivative_Y(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def at_T(self, t) -> list:
        """Coefficients (in Y, low first) after substituting T = t."""
        return [cy(t) for cy in self.y_coeffs()]

    def to_json(self) -> list[list[int]]:
        return [[i, j, c] for (i, j), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, terms) -> "BivarPoly":
        return cls({(int(i), int(j)): int(c) for i, j, c in terms})


def _intpoly_exact_div(x: IntPoly, y: IntPoly) -> IntPoly:
    return x.exact_div(y)


def disc_in_Y(F: BivarPoly) -> IntPoly:
    """Discriminant of F with respect to Y, as a polynomial in T."""
    n = F.degree_Y
    if n < 2:
        raise DomainError("discriminant in Y needs degree >= 2 in Y")
    f = F.y_coeffs()
    df = F.derivative_Y().y_coeffs()
    mat = sylvester_matrix(f, df, IntPoly())
    res = bareiss_det(mat, _intpoly_exact_div, IntPoly.is_zero)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res.exact_div(f[-1])


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_irreducible_cubic(f: IntPoly) -> bool:
    """A cubic over Q is irreducible iff it has no rational root."""
    if f.degree != 3:
        raise DomainError("is_irreducible_cubic needs degree 3")
    return not rational_roots(f)


def rational_roots(f: IntPoly) -> list[Fraction]:
    """Rational roots by the rational-root test (divisors of the end coefficients)."""
    from .primes import divisors

    if f.is_zero():
        raise DomainError("zero polynomial")
    # strip factors of x
    k = 0
    while f[k] == 0:
        k += 1
    roots = [Fraction(0)] if k else []
    g = IntPoly(f.coeffs[k:])
    if g.degree < 1:
        return roots
    found = set()
    for q in divisors(abs(g.lc)):
        for p in divisors(abs(g[0])):
            for s in (p, -p):
                r = Fraction(s, q)
                if r not in found and g(r) == 0:
                    found.add(r)
    return roots + sorted(found)
