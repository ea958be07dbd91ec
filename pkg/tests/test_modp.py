import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from arithstat.modp import (DegenerateReduction, batch_root_counts, count_roots_mod_p, cycle_type_mod_p,
                            dedekind_p_maximal)
from arithstat.poly import IntPoly, poly_discriminant
from arithstat.primes import primes_upto

x = sympy.Symbol("x")
polys = st.lists(st.integers(-30, 30), min_size=2, max_size=9).filter(lambda c: c[-1] != 0).map(IntPoly)
small_primes = st.sampled_from(primes_upto(200).tolist())


def brute_roots(f, p):
    return sum(f(r) % p == 0 for r in range(p))


@given(polys, small_primes)
def test_root_count_brute_force(f, p):
    if all(c % p == 0 for c in f.coeffs):
        with pytest.raises(DegenerateReduction):
            count_roots_mod_p(f, p)
    else:
        assert count_roots_mod_p(f, p) == brute_roots(f, p)


@given(polys)
def test_batch_matches_scalar(f):
    ps = primes_upto(3000)
    got = batch_root_counts(f, ps)
    for p, n in zip(ps.tolist(), got.tolist()):
        if f.lc % p == 0:
            assert n == -1
        else:
            assert n == count_roots_mod_p(f, p)


def test_batch_large_primes():
    f = IntPoly([-1, 0, 0, 0, 0, 0, 0, 0, -27])
    ps = np.array([1_000_003, 999_999_937, 2_147_483_647], dtype=np.int64)
    assert batch_root_counts(f, ps).tolist() == [count_roots_mod_p(f, int(p)) for p in ps]


@given(polys, small_primes)
def test_cycle_type_matches_sympy_factorization(f, p):
    ct = cycle_type_mod_p(f, p)
    if f.lc % p == 0 or poly_discriminant(f) % p == 0:
        assert ct is None
        return
    _, facs = sympy.factor_list(sympy.Poly(list(reversed(f.coeffs)), x, modulus=p))
    want = sorted(g.degree() for g, e in facs for _ in range(e))
    assert list(ct) == want and sum(ct) == f.degree


def _sympy_index_prime(f, p):
    from sympy.polys.numberfields.basis import round_two

    T = sympy.Poly(list(reversed(f.coeffs)), x)
    ZK, dK = round_two(T)
    return (poly_discriminant(f) // int(dK)) % p == 0


@given(st.integers(-12, 12), st.integers(-12, 12), st.integers(-12, 12).filter(bool))
def test_dedekind_matches_round_two(a, b, c):
    f = IntPoly([c, b, a, 1])
    if sympy.Poly(list(reversed(f.coeffs)), x).is_irreducible is False:
        return
    D = poly_discriminant(f)
    for p, e in sympy.factorint(abs(D)).items():
        if e >= 2:
            assert dedekind_p_maximal(f, p) == (not _sympy_index_prime(f, p))


@given(polys, small_primes)
def test_root_count_bounded_and_cycle_sum(f, p):
    if all(c % p == 0 for c in f.coeffs):
        return
    assert 0 <= count_roots_mod_p(f, p) <= f.degree
    ct = cycle_type_mod_p(f, p)
    if ct is not None:
        assert sum(ct) == f.degree
        assert (1 in ct) == (count_roots_mod_p(f, p) > 0)
