import pytest
from hypothesis import given, strategies as st

from arithstat.census import Census, enumerate_fields
from arithstat.exceptional import (ExceptionalPolynomial, enumerate_exceptional_polys, exceptional_census_fraction,
                                   exceptional_fields, field_of_poly, is_exceptional_field, nagell_f, nagell_g,
                                   nagell_index, quadratic_field_disc, search_witnesses)
from arithstat.poly import DomainError, IntPoly, is_square_int, poly_discriminant


@given(st.integers(-50, 50))
def test_nagell_discriminants(t):
    assert poly_discriminant(nagell_g(t)) == (t * t + 3 * t + 9) ** 2
    assert poly_discriminant(nagell_f(t)) == t**4 + 6 * t**3 + 7 * t * t - 6 * t - 31


@pytest.mark.parametrize("B", [0, 1, 5, 12])
def test_witness_invariants(B):
    for w in enumerate_exceptional_polys(3, B):
        assert w.f(0) in (1, -1) and w.f(1) in (1, -1)
        assert w.shifted()(0) in (1, -1)  # 1 - e is a unit
        assert max(abs(c) for c in w.f.coeffs[1:3]) <= B


@pytest.mark.parametrize("B", range(3, 31))
def test_quadratic_classification(B):
    assert {quadratic_field_disc(w.f) for w in enumerate_exceptional_polys(2, B)} == {5, -3}


def test_exceptional_polynomial_validation():
    with pytest.raises(DomainError):
        ExceptionalPolynomial(IntPoly([2, 0, 0, 1]))
    with pytest.raises(DomainError):
        enumerate_exceptional_polys(4, 3)


def test_complex_fields_are_the_two_smallest():
    discs = {field_of_poly(w.f).disc for w in enumerate_exceptional_polys(3, 30)}
    assert {d for d in discs if d < 0} == {-23, -31}


def test_real_fields_are_nagell():
    index = nagell_index(300)
    for w in enumerate_exceptional_polys(3, 10):
        K = field_of_poly(w.f)
        if K.disc > 0:
            assert K.canonical_form in index


def test_nagell_g_fields_are_cyclic():
    for t in range(-1, 60):
        assert field_of_poly(nagell_g(t)).galois_type == "C3"


def test_census_membership_small():
    fields = enumerate_fields(50)
    tags = {K.disc: is_exceptional_field(K, 10, 50) for K in fields}
    assert tags[-44] is None
    assert tags[49].nagell_tag == "g_t(-1)"
    assert tags[-23].nagell_tag == "none" and tags[-23].witnesses
    C = Census.from_fields(50, fields)
    assert exceptional_census_fraction(C, [50], 10, 50) == [(50, 0.75)]


def test_direct_search_agrees_with_index():
    for K in enumerate_fields(400):
        a = search_witnesses(K, 8, 40)
        b = is_exceptional_field(K, 8, 40)
        assert (a is None) == (b is None)


def test_listing_sorted():
    fs = exceptional_fields(8, 30)
    keys = [(abs(e.field.disc), e.field.disc) for e in fs]
    assert keys == sorted(keys)
    assert all(e.nagell_tag != "none" for e in fs if e.field.disc > 0)
    assert all(e.nagell_tag.startswith("g_t") for e in fs if e.field.disc > 0 and is_square_int(e.field.disc))
