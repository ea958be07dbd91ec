"""Polynomial arithmetic over the prime field F_p.

Polynomials are plain lists of residues in [0, p), low degree first, with no
trailing zeros (the zero polynomial is ``[]``).  The scalar routines use
Python integers; :func:`batch_root_counts` evaluates many primes at once with
int64 numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .poly import DomainError, IntPoly, poly_discriminant

# products of two residues must fit in int64
MAX_BATCH_PRIME = 3_037_000_499


class DegenerateReduction(ValueError):
    """The polynomial vanishes identically mod p."""


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def reduce(f: IntPoly, p: int) -> list[int]:
    return _trim([c % p for c in f.coeffs])


def add(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(r) - db, 0)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] * inv % p
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] = (r[shift + i] - f * c) % p
        _trim(r)
    return _trim(q), r


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def powmod(base, e, m, p):
    result = [1]
    base = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def deriv(a, p):
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def evaluate(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def count_roots_mod_p(g: IntPoly, p: int) -> int:
    """Number of distinct roots of g in F_p, via deg gcd(x^p - x, g)."""
    gb = reduce(g, p)
    if not gb:
        raise DegenerateReduction(f"{g} vanishes identically mod {p}")
    if len(gb) == 1:
        return 0
    xp = powmod([0, 1], p, gb, p)
    h = sub(xp, [0, 1], p)
    return len(gcd(gb, h, p)) - 1


def is_degenerate(g: IntPoly, p: int) -> bool:
    """p divides lc(g) * disc(g)."""
    if g.lc % p == 0:
        return True
    if g.degree < 1:
        return False
    return poly_discriminant(g) % p == 0


def distinct_degree_factorization(a, p) -> list[tuple[int, list[int]]]:
    """Pairs (d, product of the monic degree-d irreducible factors) of a squarefree a."""
    f = monic(list(a), p)
    out = []
    h = [0, 1]
    d = 1
    while len(f) - 1 >= 2 * d:
        h = powmod(h, p, f, p)
        gd = gcd(f, sub(h, [0, 1], p), p)
        if len(gd) > 1:
            out.append((d, gd))
            f = divmod_(f, gd, p)[0]
            h = mod(h, f, p)
        d += 1
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def cycle_type_mod_p(g: IntPoly, p: int) -> tuple[int, ...] | None:
    """Degrees of the irreducible factors of g mod p, or None when p | lc*disc."""
    if g.degree < 1:
        raise DomainError("cycle type needs degree >= 1")
    if is_degenerate(g, p):
        return None
    parts = []
    for d, prod in distinct_degree_factorization(reduce(g, p), p):
        parts.extend([d] * ((len(prod) - 1) // d))
    return tuple(sorted(parts))


def squarefree_factorization(a, p) -> list[tuple[list[int], int]]:
    """Pairs (factor, multiplicity) with a = lc * prod factor^mult (char p aware)."""
    a = monic(list(a), p)
    if len(a) <= 1:
        return []
    out: dict[int, list[int]] = {}

    def merge(poly, mult):
        if len(poly) > 1:
            prev = out.get(mult)
            out[mult] = poly if prev is None else mul(prev, poly, p)

    i = 1
    da = deriv(a, p)
    if not da:
        # a is a p-th power
        root = [a[k] for k in range(0, len(a), p)]
        for f, m in squarefree_factorization(root, p):
            merge(f, m * p)
        return sorted(((f, m) for m, f in out.items()), key=lambda t: t[1])
    c = gcd(a, da, p)
    w = divmod_(a, c, p)[0]
    while len(w) > 1:
        y = gcd(w, c, p)
        z = divmod_(w, y, p)[0]
        merge(z, i)
        i += 1
        w = y
        c = divmod_(c, y, p)[0]
    if len(c) > 1:
        root = [c[k] for k in range(0, len(c), p)]
        for f, m in squarefree_factorization(root, p):
            merge(f, m * p)
    return sorted(((f, m) for m, f in out.items()), key=lambda t: t[1])


def radical(a, p):
    r = [1]
    for f, _ in squarefree_factorization(a, p):
        r = mul(r, f, p)
    return r


def dedekind_p_maximal(f: IntPoly, p: int) -> bool:
    """Dedekind's criterion: is Z[theta] maximal at p for a root theta of monic f?"""
    if f.lc != 1:
        raise DomainError("Dedekind criterion needs a monic polynomial")
    if f.degree == 3:
        from .poly import is_irreducible_cubic

        if not is_irreducible_cubic(f):
            raise DomainError(f"{f} is reducible")
    elif f.degree == 2:
        from .poly import rational_roots

        if rational_roots(f):
            raise DomainError(f"{f} is reducible")
    fb = reduce(f, p)
    g = radical(fb, p)
    h = divmod_(fb, g, p)[0]
    big = IntPoly(g) * IntPoly(h) - f
    F = [c // p for c in big.coeffs]
    Fb = _trim([c % p for c in F])
    common = gcd(gcd(g, h, p), Fb, p) if Fb else gcd(g, h, p)
    return len(common) == 1


# ---------------------------------------------------------------------------
# vectorized root counting over many primes


def _batch_inverse(x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """x^(p-2) mod p elementwise."""
    e = p - 2
    result = np.ones_like(x)
    base = x % p
    while np.any(e > 0):
        odd = (e & 1).astype(bool)
        result = np.where(odd, result * base % p, result)
        base = base * base % p
        e = e >> 1
    return result


def _batch_reduce(P: np.ndarray, G: np.ndarray, p: np.ndarray, d: int) -> np.ndarray:
    """Reduce rows of P (length >= d) modulo the monic rows x^d + G.

    Entries of P may be unreduced as long as they stay below 2^63 after the
    subtractions; only the pivot column is reduced before use.
    """
    pc = p[:, None]
    for k in range(P.shape[1] - 1, d - 1, -1):
        c = P[:, k] % p
        P[:, k - d : k] -= c[:, None] * G
        P[:, k - d : k] %= pc
    return P[:, :d] % pc


def _batch_rank(M: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Rank of each d x d matrix M[k] over F_{p[k]}."""
    n, d, _ = M.shape
    M = M.copy()
    rank = np.zeros(n, dtype=np.int64)
    rows = np.arange(d)
    for col in range(d):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.flatnonzero(has)
        piv = np.argmax(cand[idx], axis=1)
        tgt = rank[idx]
        pivot_rows = M[idx, piv, :].copy()
        M[idx, piv, :] = M[idx, tgt, :]
        M[idx, tgt, :] = pivot_rows
        pk = p[idx][:, None]
        inv = _batch_inverse(pivot_rows[:, col], p[idx])
        prow = pivot_rows * inv[:, None] % pk
        M[idx, tgt, :] = prow
        factors = M[idx, :, col].copy()
        factors[np.arange(len(idx)), tgt] = 0
        upd = (factors[:, :, None] * prow[:, None, :]) % pk[:, :, None]
        M[idx] = (M[idx] - upd) % pk[:, :, None]
        rank[idx] += 1
    return rank


def batch_root_counts(g: IntPoly, primes: np.ndarray, chunk: int = 200_000) -> np.ndarray:
    """Distinct root counts of g mod p for every prime in ``primes``.

    Primes dividing lc(g) get -1 (the reduction drops degree); use
    :func:`count_roots_mod_p` for those.  Method: h = x^p - x mod g, then the
    number of roots is deg g - rank of multiplication by h on F_p[x]/(g).
    """
    primes = np.asarray(primes, dtype=np.int64)
    out = np.empty(len(primes), dtype=np.int64)
    d = g.degree
    if d < 1:
        out[:] = 0
        return out
    if len(primes) and primes.max() > MAX_BATCH_PRIME:
        raise DomainError("batch root counting supports primes below 3.03e9 only")
    coeffs = list(g.coeffs)
    for start in range(0, len(primes), chunk):
        p = primes[start : start + chunk]
        res = np.full(len(p), -1, dtype=np.int64)
        lc = _coef_mod(g.lc, p)
        ok = lc != 0
        if ok.any():
            res[ok] = _root_counts_monic(coeffs, p[ok], lc[ok], d)
        out[start : start + chunk] = res
    return out


def _coef_mod(c: int, p: np.ndarray) -> np.ndarray:
    if abs(c) < 2**62:
        return np.int64(c) % p
    return np.array([c % int(q) for q in p], dtype=np.int64)


def _root_counts_monic(coeffs, p, lc, d):
    n = len(p)
    pc = p[:, None]
    low = np.stack([_coef_mod(c, p) for c in coeffs[:d]], axis=1)
    inv = _batch_inverse(lc, p)
    G = low * inv[:, None] % pc  # g / lc = x^d + sum G_i x^i

    # unreduced accumulation needs d * p^2 < 2^63
    lazy = int(p.max()) ** 2 * (d + 1) < 2**63

    def mulmod(A, B):
        P = np.zeros((n, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            if lazy:
                P[:, i : i + d] += A[:, i : i + 1] * B
            else:
                P[:, i : i + d] = (P[:, i : i + d] + A[:, i : i + 1] * B % pc) % pc
        if lazy:
            P %= pc
        return _batch_reduce(P, G, p, d)

    def times_x(A):
        P = np.zeros((n, d + 1), dtype=np.int64)
        P[:, 1:] = A
        return _batch_reduce(P, G, p, d)

    R = np.zeros((n, d), dtype=np.int64)
    R[:, 0] = 1
    nbits = int(p.max()).bit_length()
    for bit in range(nbits - 1, -1, -1):
        R = mulmod(R, R)
        setbit = ((p >> bit) & 1).astype(bool)
        if setbit.any():
            Rx = times_x(R)
            R = np.where(setbit[:, None], Rx, R)
    H = R.copy()  # x^p - x mod g
    if d > 1:
        H[:, 1] = (H[:, 1] - 1) % p
    else:
        # x == -G0 mod g when d == 1
        H[:, 0] = (H[:, 0] + G[:, 0]) % p
    # columns: h * x^j mod g
    M = np.empty((n, d, d), dtype=np.int64)
    col = H
    for j in range(d):
        M[:, :, j] = col
        if j + 1 < d:
            col = times_x(col)
    return d - _batch_rank(M, p)
