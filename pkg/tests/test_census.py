import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, assume, given, settings, strategies as st
from sympy.polys.numberfields.basis import round_two

from arithstat.census import (BinaryCubicForm, Census, CubicField, canonicalize, enumerate_fields, even_valuation,
                              field_of_form, from_monic_cubic, has_type, index_lower, is_irreducible_form,
                              is_maximal, is_p_maximal, is_reduced, maximal_form, splitting_type, unramified)
from arithstat.oracles import box_scan_fields, dedekind_field_discs
from arithstat.poly import DomainError, IntPoly, poly_discriminant

x = sympy.Symbol("x")
coef = st.integers(-9, 9)
forms = st.builds(BinaryCubicForm, st.integers(1, 9), coef, coef, coef).filter(
    lambda F: F.disc != 0 and is_irreducible_form(F))
# generators of GL2(Z)
GENS = [((1, 1), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (0, -1)), ((0, -1), (1, 0))]


def sympy_field_disc(F: BinaryCubicForm) -> int:
    T = sympy.Poly(list(reversed(F.monic_generator().coeffs)), x)
    return int(round_two(T)[1])


def test_small_census_exact():
    assert sorted(K.disc for K in enumerate_fields(50, "complex")) == [-44, -31, -23]
    assert [K.disc for K in enumerate_fields(50, "totally-real")] == [49]


def test_splitting_type_examples():
    K23, K31, K44, K49 = enumerate_fields(50)
    assert splitting_type(K23, 2) == "3"
    assert splitting_type(K23, 23) == "1^21"
    assert splitting_type(K49, 7) == "1^3"
    assert enumerate_fields(22) == []


def test_small_census_oracles_agree():
    want = sorted(K.disc for K in enumerate_fields(50))
    assert sorted(d for _, d in box_scan_fields(50, 6)) == want
    assert sorted(dedekind_field_discs(50, 12)) == want


def test_published_counts(small_census):
    # tabulated counts of cubic fields by |disc|
    assert small_census.count(1000, "totally-real") == 27
    assert small_census.count(10**4, "totally-real") == 382
    assert small_census.count(10**4, "complex") == 1520


def test_census_discs_match_round_two(small_census):
    for K in small_census.fields(4000):
        assert sympy_field_disc(K.canonical_form) == K.disc


def test_census_complete_against_monic_scan(small_census):
    got = set(small_census.discs.tolist())
    assert dedekind_field_discs(3000, 25) <= got


def test_canonical_forms_are_distinct_and_fixed(small_census):
    fields = small_census.fields()
    assert len({K.canonical_form for K in fields}) == len(fields)
    for K in fields[:300]:
        assert canonicalize(K.canonical_form) == K.canonical_form
        assert is_maximal(K.canonical_form)


@given(forms, st.lists(st.sampled_from(GENS), max_size=12))
def test_canonical_form_is_orbit_invariant(F, word):
    G = F
    for g in word:
        G = G.transform(g)
    assert G.disc == F.disc
    assert canonicalize(G) == canonicalize(F)


@settings(suppress_health_check=[HealthCheck.filter_too_much])
@given(forms)
def test_reduced_positive_forms_satisfy_hessian_bounds(F):
    assume(F.disc > 0)
    P, Q, R = canonicalize(F).hessian()
    assert -P <= Q <= 0 and P <= R


@given(forms)
def test_maximal_form_disc_matches_round_two(F):
    M = maximal_form(F)
    assert is_maximal(M)
    assert M.disc == sympy_field_disc(F)
    assert (F.disc // M.disc) > 0 and sympy.sqrt(F.disc // M.disc).is_integer


@given(forms, st.sampled_from([2, 3, 5, 7]))
def test_index_lower_divides_disc_by_p_squared(F, p):
    if is_p_maximal(F, p):
        if F.disc % (p * p) == 0:
            with pytest.raises(DomainError):
                index_lower(F, p)
        return
    G = index_lower(F, p)
    assert G.disc in (F.disc // p**2, F.disc // p**4)
    assert field_of_form(G) == field_of_form(F)


def test_non_maximal_example():
    # x^3 + 4 has disc -432 = -108 * 2^2; its field is Q(cbrt 2), disc -108
    F = BinaryCubicForm(1, 0, 0, 4)
    assert not is_maximal(F)
    assert maximal_form(F).disc == -108


KUMMER = {((1, 1), (1, 1), (1, 1)): "111", ((1, 1), (2, 1)): "12", ((3, 1),): "3",
          ((1, 1), (1, 2)): "1^21", ((1, 3),): "1^3"}


def kummer_type(K: CubicField, p: int) -> str:
    """Splitting type from a generator of index prime to p, factored mod p by sympy."""
    F = K.canonical_form
    for g in [((1, 0), (0, 1))] + [((k, -1), (1, 0)) for k in range(p)]:
        G = F.transform(g)
        if G.a % p:
            f = G.monic_generator()
            _, facs = sympy.factor_list(sympy.Poly(list(reversed(f.coeffs)), x, modulus=p))
            return KUMMER[tuple(sorted((h.degree(), e) for h, e in facs))]
    # F vanishes on all of P^1(F_p): only possible for p = 2, with three distinct roots
    assert p == 2
    return "111"


def test_splitting_types_match_kummer(small_census):
    for K in small_census.fields(2000):
        for p in (2, 3, 5, 7):
            assert splitting_type(K, p) == kummer_type(K, p), (K, p)


def test_conditions_count(small_census):
    X = 50
    assert small_census.count_with_conditions([unramified(2)], X) == 3  # -23, -31, 49
    assert small_census.count_with_conditions([even_valuation(2)], X) == 4
    assert small_census.count_with_conditions([has_type(2, ["1^3"])], X) == 1  # -44, Eisenstein at 2


def test_condition_rejects_unknown_type():
    with pytest.raises(DomainError):
        has_type(2, ["21"])


def test_from_monic_cubic():
    K = from_monic_cubic(IntPoly([-1, -2, 1, 1]))  # x^3 + x^2 - 2x - 1
    assert K.disc == 49 and K.galois_type == "C3" and K.signature == "totally-real"


def test_census_roundtrip(tmp_path, small_census):
    path = tmp_path / "c.csv"
    small_census.save(path)
    back = Census.load(path)
    assert back.max_disc == small_census.max_disc
    assert np.array_equal(back.forms, small_census.forms) and np.array_equal(back.discs, small_census.discs)


def test_corrupt_cache_is_rebuilt(tmp_path):
    Census.obtain(200, tmp_path)
    path = tmp_path / "cubic_census.csv"
    lines = path.read_text().splitlines()
    lines[3] = lines[3].replace(",", ",9", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError):
        Census.load(path)
    C = Census.obtain(200, tmp_path)
    assert any("rebuilt" in n for n in C.notes)
    assert C.count() == len(enumerate_fields(200))


def test_query_beyond_census_is_a_state_error(small_census):
    from arithstat.census import CensusStateError

    with pytest.raises(CensusStateError):
        small_census.count(10**5)


def test_galois_split(small_census):
    c3, s3 = small_census.galois_split(10**4)
    assert (c3, s3) == (sum(1 for d in small_census.discs if d > 0 and sympy.sqrt(int(d)).is_integer), 1902 - c3)
    assert c3 == 16  # cyclic cubic conductors up to 100


def test_disc_residues_and_galois_type(small_census):
    assert np.all(small_census.discs % 4 <= 1)
    for K in small_census.fields():
        assert (K.galois_type == "C3") == bool(sympy.sqrt(K.disc).is_integer)


def test_maximal_agrees_with_dedekind_on_census(small_census):
    from arithstat.modp import dedekind_p_maximal
    from arithstat.primes import factorize

    for K in small_census.fields():
        F = K.canonical_form
        f = F.monic_generator()  # Z[a theta] can only lose maximality at primes dividing a
        for p, e in factorize(abs(poly_discriminant(f))).items():
            if e >= 2 and F.a % p:
                assert dedekind_p_maximal(f, p)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20).filter(bool))
def test_maximal_agrees_with_dedekind_on_monic_forms(b, c, d):
    from arithstat.modp import dedekind_p_maximal
    from arithstat.primes import factorize

    F = BinaryCubicForm(1, b, c, d)
    assume(is_irreducible_form(F))
    f = F.monic_generator()
    want = all(dedekind_p_maximal(f, p) for p, e in factorize(abs(F.disc)).items() if e >= 2)
    assert is_maximal(F) == want


def test_census_independent_of_workers():
    a = Census.build(3000, workers=1)
    b = Census.build(3000, workers=2)
    assert np.array_equal(a.forms, b.forms) and np.array_equal(a.discs, b.discs)
