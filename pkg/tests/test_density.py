import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arithstat.census import Census
from arithstat.density import (ZETA3, LocalFactor, btt_factor_even, btt_factor_unramified, compare_predicted_empirical,
                               cubic_leading_constant, epw_factor, fit_product_decay, partial_product,
                               secondary_term_prediction)
from arithstat.frobenian import AllPrimes, Explicit, NoRoot, Residue
from arithstat.poly import DomainError, IntPoly
from arithstat.primes import primes_upto

primes = st.sampled_from(primes_upto(2000).tolist())
G8 = IntPoly([-1, 0, 0, 0, 0, 0, 0, 0, -27])


def test_zeta3():
    import mpmath

    assert abs(ZETA3 - float(mpmath.zeta(3))) < 1e-15
    assert abs(1 / (3 * ZETA3) - 0.277302) < 1e-6


def test_factor_values_at_two():
    assert btt_factor_unramified(2) == Fraction(4, 7)
    assert btt_factor_even(2) == Fraction(5, 7)
    assert epw_factor(2, 2) == Fraction(2, 3)
    assert epw_factor(4, 2) == Fraction(8, 17)
    assert epw_factor(5, 2) == Fraction(16, 37)


@given(primes, st.sampled_from([(3, "unramified"), (3, "even-valuation"), (2, "unramified"), (4, "unramified"),
                                (5, "unramified"), (None, "reciprocal")]))
def test_factors_in_unit_interval(p, kind):
    f = LocalFactor(*kind)
    if kind[1] == "even-valuation" and p == 3:
        with pytest.raises(DomainError):
            f.value(p)
        return
    v = f.value(p)
    assert 0 < v < 1
    assert math.isclose(math.log(v), float(f.log_values([p])[0]), rel_tol=1e-12)


def test_even_exceeds_unramified():
    for p in [2, 5, 7, 11, 13]:
        assert btt_factor_even(p) > btt_factor_unramified(p)


def test_non_primes_rejected():
    with pytest.raises(DomainError):
        btt_factor_unramified(9)
    with pytest.raises(DomainError):
        LocalFactor(6, "unramified")
    with pytest.raises(DomainError):
        LocalFactor(4, "even-valuation")


def test_leading_constant():
    assert cubic_leading_constant([]) == pytest.approx(1 / (3 * ZETA3))
    assert cubic_leading_constant([2, 2]) == pytest.approx(4 / 7 / (3 * ZETA3))


def test_partial_product_exact_small():
    s = partial_product(Explicit({2, 5}), LocalFactor(3, "unramified"), 100)
    assert s.exact == Fraction(4, 7) * btt_factor_unramified(5)
    assert s.products[-1] == pytest.approx(float(s.exact))


def test_mertens_decay():
    # prod (1 - 1/p) ~ e^-gamma / log N, so the slope against log log N is 1
    s = partial_product(AllPrimes(), LocalFactor(None, "reciprocal"), 10**6)
    assert s.strictly_decreasing
    assert abs(fit_product_decay(s) - 1) < 0.05


def test_decay_on_octic_set():
    s = partial_product(NoRoot(G8), LocalFactor(3, "even-valuation"), 10**6)
    assert s.strictly_decreasing
    assert abs(fit_product_decay(s, 21 / 32) - 21 / 32) < 0.15


def test_compare_predicted_empirical():
    C = Census.build(2000)
    r = compare_predicted_empirical(C, 2000, [2], "unramified")
    assert r["expected_fraction"] == pytest.approx(4 / 7)
    assert r["empirical"] == C.count_with_conditions([], 2000) - sum(1 for d in C.discs if d % 2 == 0)
    assert set(r) >= {"X", "T", "condition", "empirical", "predicted", "deviation"}


def test_secondary_term_tracks_small_census():
    pred = secondary_term_prediction(10**4)
    assert pred["K"] < 0
    assert abs(pred["total"] - 1902) / 1902 < 0.01


@pytest.mark.parametrize("kind", [(3, "unramified"), (3, "even-valuation"), (2, "unramified"), (4, "unramified"),
                                  (5, "unramified"), (None, "reciprocal")])
def test_factors_increase_with_p(kind):
    f = LocalFactor(*kind)
    ps = [p for p in primes_upto(500).tolist() if not (kind[1] == "even-valuation" and p == 3)]
    vals = [f.value(p) for p in ps]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)


def test_conditional_fraction_is_a_count_ratio(small_census):
    from arithstat.census import even_valuation

    for X in (10**3, 10**4):
        r = compare_predicted_empirical(small_census, X, [5], "even-valuation")
        assert r["conditional_fraction"] == small_census.count_with_conditions([even_valuation(5)], X) / small_census.count(X)
    assert abs(r["conditional_fraction"] - float(btt_factor_even(5))) < 0.02
