"""Slow independent references for small cubic censuses."""

from __future__ import annotations

from itertools import product

from .census import BinaryCubicForm, canonicalize, is_irreducible_form, is_maximal
from .modp import dedekind_p_maximal
from .poly import IntPoly, poly_discriminant
from .primes import factorize


def box_scan_fields(X: int, box: int) -> set[tuple[BinaryCubicForm, int]]:
    """Canonical maximal forms found by scanning every form with coefficients in a box.

    Independent of the enumeration bounds; relies only on canonicalize and
    is_maximal.
    """
    out = set()
    for a, b, c, d in product(range(1, box + 1), *[range(-box, box + 1)] * 3):
        F = BinaryCubicForm(a, b, c, d)
        D = F.disc
        if D == 0 or abs(D) > X or not is_irreducible_form(F):
            continue
        if is_maximal(F):
            out.add((canonicalize(F), D))
    return out


def dedekind_field_discs(X: int, box: int) -> set[int]:
    """Discriminants |D| <= X of fields x^3 + a x^2 + b x + c whose order Z[x] is maximal.

    Maximality is decided by Dedekind's criterion alone; a in {-1, 0, 1}
    suffices because x -> x + k shifts a by 3k.
    """
    out = set()
    for a in (-1, 0, 1):
        for b in range(-box, box + 1):
            for c in range(-box, box + 1):
                if c == 0:
                    continue
                f = IntPoly([c, b, a, 1])
                if not is_irreducible_form(BinaryCubicForm(1, a, b, c)):
                    continue
                D = poly_discriminant(f)
                if abs(D) > X:
                    continue
                if all(dedekind_p_maximal(f, p) for p, e in factorize(D).items() if e >= 2):
                    out.add(D)
    return out
