import numpy as np
import pytest
from hypothesis import given, strategies as st

from arithstat.frobenian import (AllPrimes, Complement, Explicit, HasRoot, NoRoot, PrimeSet, Residue,
                                 empirical_density, member_primes, reciprocal_sum)
from arithstat.modp import count_roots_mod_p
from arithstat.poly import DomainError, IntPoly
from arithstat.primes import primes_upto

G8 = IntPoly([-1, 0, 0, 0, 0, 0, 0, 0, -27])
F4 = IntPoly([-31, -6, 7, 6, 1])

polys = st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda c: c[-1] != 0).map(IntPoly)
sets = st.one_of(
    st.builds(Explicit, st.sets(st.sampled_from(primes_upto(100).tolist()), max_size=6)),
    st.sampled_from([Residue(4, {3}), Residue(3, {2}), Residue(8, {1, 7}), AllPrimes()]),
    polys.map(NoRoot), polys.map(HasRoot))


@given(sets)
def test_mask_agrees_with_contains(S):
    ps = primes_upto(600)
    assert S.mask(ps).tolist() == [S.contains(p) for p in ps.tolist()]


@given(sets)
def test_descriptor_roundtrip(S):
    T = PrimeSet.from_json(S.to_json())
    assert T == S


@given(sets)
def test_complement_partitions(S):
    ps = primes_upto(400)
    assert np.all(S.mask(ps) ^ Complement(S).mask(ps))


def test_root_conditions():
    # at p = 3 the leading coefficient vanishes and the root at infinity counts
    for p in primes_upto(300).tolist():
        has = count_roots_mod_p(G8, p) > 0 if p != 3 else True
        assert (p in NoRoot(G8)) == (not has)
        assert (p in HasRoot(G8)) == has


def test_exceptions_override():
    S = Residue(4, {3}).with_exceptions([(3, False), (5, True)])
    assert 3 not in S and 5 in S and 7 in S


def test_bad_descriptors():
    with pytest.raises(DomainError):
        Residue(4, {2})
    with pytest.raises(DomainError):
        PrimeSet("mystery")
    with pytest.raises(DomainError):
        empirical_density(AllPrimes(), 10)


def test_residue_density():
    est = empirical_density(Residue(4, {3}), 10**6)
    assert abs(est.ratio - 0.5) < 0.005


def test_quartic_root_density():
    # Galois group D4: 3/8 of primes give a root
    est = empirical_density(HasRoot(F4), 10**6)
    assert abs(est.ratio - 0.375) < 4 * est.stderr + 1e-3


def test_octic_no_root_density():
    est = empirical_density(NoRoot(G8), 10**6)
    assert abs(est.ratio - 21 / 32) < 4 * est.stderr + 1e-3


def test_parallel_density_matches_serial():
    S = NoRoot(F4)
    assert empirical_density(S, 2 * 10**5, workers=2) == empirical_density(S, 2 * 10**5)


def test_reciprocal_sum_all_primes():
    # sum_{p <= N} 1/p = log log N + 0.2615 + o(1)
    N = 10**6
    assert abs(reciprocal_sum(AllPrimes(), N) - (np.log(np.log(N)) + 0.2615)) < 0.01
    assert len(member_primes(Explicit({2, 3}), 100)) == 2


@given(polys)
def test_no_root_and_has_root_are_complementary(g):
    a = empirical_density(NoRoot(g), 5000)
    b = empirical_density(HasRoot(g), 5000)
    assert a.prime_count == b.prime_count
    assert a.member_count + b.member_count == a.prime_count


@given(polys)
def test_no_root_iff_fixed_point_free(g):
    from arithstat.modp import cycle_type_mod_p

    S = NoRoot(g)
    for p in primes_upto(500).tolist():
        if S.degenerate(p):
            continue
        assert (p in S) == (1 not in cycle_type_mod_p(g, p))


@pytest.mark.parametrize("m,rs", [(4, {3}), (3, {2}), (8, {1, 7}), (5, {1, 4}), (7, {3})])
def test_residue_density_within_three_sigma(m, rs):
    import math

    est = empirical_density(Residue(m, rs), 10**6)
    phi = sum(math.gcd(k, m) == 1 for k in range(1, m + 1))
    assert abs(est.ratio - len(rs) / phi) <= 3 * est.stderr
