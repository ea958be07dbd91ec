import pickle
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from arithstat.poly import (BivarPoly, IntPoly, disc_in_Y, is_square_int, poly_discriminant, rational_roots,
                            resultant, squarefree_int_split, squarefree_split)

x = sympy.Symbol("x")
coeff_lists = st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


def to_sympy(f: IntPoly):
    return sympy.Poly(list(reversed(f.coeffs)), x)


@given(coeff_lists)
def test_discriminant_matches_sympy(cs):
    f = IntPoly(cs)
    assert poly_discriminant(f) == int(sympy.discriminant(to_sympy(f)))


@given(coeff_lists, coeff_lists)
def test_resultant_is_sylvester_determinant(a, b):
    # sympy.resultant flips sign for some inputs (e.g. x + 1 against x^3), so compare with the matrix itself
    from sympy.polys.subresultants_qq_zz import sylvester

    f, g = IntPoly(a), IntPoly(b)
    fe, ge = to_sympy(f).as_expr(), to_sympy(g).as_expr()
    assert resultant(f, g) == int(sylvester(fe, ge, x, 1).det())


def test_resultant_root_product():
    # Res(f, g) = lc(f)^deg g * prod g(roots of f)
    assert resultant(IntPoly([1, 1]), IntPoly([0, 0, 0, 1])) == -1
    assert resultant(IntPoly([2, 1]), IntPoly([0, 0, 0, 1])) == -8


@given(coeff_lists, st.lists(st.integers(-5, 5), min_size=1, max_size=3).filter(lambda c: c[-1] != 0))
def test_squarefree_split_recombines(a, b):
    P = IntPoly(a) * IntPoly(b) ** 2
    g, h = squarefree_split(P)
    assert g * h * h == P
    if g.degree > 0:
        assert sympy.gcd(to_sympy(g), to_sympy(g).diff(x)).degree() == 0


def test_discriminant_in_Y_of_the_genus_one_family():
    F = BivarPoly({(0, 3): 4, (0, 1): 1, (4, 0): -1})
    delta = disc_in_Y(F)
    assert delta == IntPoly([-16, 0, 0, 0, 0, 0, 0, 0, -432])
    g, h = squarefree_split(delta)
    assert g == IntPoly([-1, 0, 0, 0, 0, 0, 0, 0, -27]) and h == IntPoly([4])


def test_cubic_discriminant_formula():
    # x^3 + a x + b has disc -4a^3 - 27b^2
    for a in range(-4, 5):
        for b in range(-4, 5):
            assert poly_discriminant(IntPoly([b, a, 0, 1])) == -4 * a**3 - 27 * b * b


@given(st.integers(-10**12, 10**12).filter(bool))
def test_squarefree_int_split(n):
    s, r = squarefree_int_split(n)
    assert s * r * r == n
    assert all(e == 1 for e in sympy.factorint(abs(s)).values())


@given(st.integers(0, 10**15))
def test_is_square_int(n):
    assert is_square_int(n * n)
    assert is_square_int(n) == (sympy.sqrt(n).is_integer)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=5).filter(lambda c: c[-1] != 0))
def test_rational_roots_match_sympy(cs):
    f = IntPoly(cs)
    want = sorted({Fraction(int(r.p), int(r.q)) for r in sympy.roots(to_sympy(f), filter="Q")})
    assert sorted(rational_roots(f)) == want


def test_polys_pickle():
    f = IntPoly([1, 2, 3])
    F = BivarPoly({(1, 2): 3})
    assert pickle.loads(pickle.dumps(f)) == f
    assert pickle.loads(pickle.dumps(F)).to_json() == F.to_json()


@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30), st.integers(-30, 30))
def test_quadratic_formula(a, b, c):
    assert poly_discriminant(IntPoly([c, b, a])) == b * b - 4 * a * c


@given(*[st.integers(-15, 15)] * 3, st.integers(-15, 15).filter(bool))
def test_cubic_formula(d, c, b, a):
    want = 18 * a * b * c * d + b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d
    assert poly_discriminant(IntPoly([d, c, b, a])) == want


@given(coeff_lists, st.integers(0, 3), st.integers(-50, 50))
def test_homogenize(cs, extra, t):
    from arithstat.poly import homogenize

    g = IntPoly(cs)
    G = homogenize(g, g.degree + extra)
    assert G(t, 1) == g(t)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5).filter(lambda c: c[-1] != 0), st.integers(1, 12))
def test_squarefree_split_content(cs, k):
    P = IntPoly([k * k * 2 * c for c in cs])
    g, h = squarefree_split(P)
    assert g * h * h == P
    _, r = squarefree_int_split(g.content())
    assert r == 1
