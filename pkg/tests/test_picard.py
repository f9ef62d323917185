from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from maninbench.picard import (
    DivisorGeometry,
    LineBundleClass,
    ManinInvariants,
    RestrictionTable,
    is_balanced,
    lex_less,
    manin_a,
    manin_b,
    manin_invariants,
    permuted,
)

P3 = DivisorGeometry(("D",), (2,))


def test_single_quadric_anticanonical():
    assert manin_invariants(P3, LineBundleClass((2,))) == ManinInvariants(1, 1)


def test_product_counts_ties():
    geom = DivisorGeometry(("D2", "D3", "D4"), (2, 2, 2))
    L = LineBundleClass((2, 2, 4))
    assert manin_a(geom, L) == 1
    assert manin_b(geom, L) == 2


def test_rational_ratio_is_exact():
    geom = DivisorGeometry(("A", "B"), (3, 1))
    assert manin_a(geom, LineBundleClass((Fraction(7, 2), 5))) == Fraction(6, 7)


@pytest.mark.parametrize(
    "labels, kappa",
    [(("A", "A"), (1, 1)), (("A",), (0,)), (("A", "B"), (1,))],
)
def test_bad_geometry(labels, kappa):
    with pytest.raises(ValueError):
        DivisorGeometry(labels, kappa)


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        LineBundleClass((0.5,))
    with pytest.raises(TypeError):
        DivisorGeometry(("A",), (1.0,))


def test_non_big_bundle_rejected():
    with pytest.raises(ValueError):
        LineBundleClass((1, 0))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        manin_a(P3, LineBundleClass((1, 2)))


def test_point_sentinel_sits_below_everything():
    empty = DivisorGeometry((), ())
    pt = manin_invariants(empty, LineBundleClass(()))
    assert pt.is_point
    assert lex_less(pt, ManinInvariants(Fraction(1, 100), 1))


def test_lexicographic_order():
    assert lex_less(ManinInvariants(1, 1), ManinInvariants(1, 2))
    assert lex_less(ManinInvariants(Fraction(1, 2), 5), ManinInvariants(1, 1))
    assert not lex_less(ManinInvariants(1, 2), ManinInvariants(1, 2))


def test_restriction_table_needs_every_pair():
    with pytest.raises(ValueError):
        RestrictionTable(3, {(1, 2): (P3, LineBundleClass((2,)))})


def test_equal_restriction_is_a_violation():
    geom = DivisorGeometry(("D2",), (2,))
    empty = (DivisorGeometry((), ()), LineBundleClass(()))
    assert is_balanced(geom, LineBundleClass((2,)), RestrictionTable(2, {(1, 2): empty})) == (True, None)
    table = RestrictionTable(2, {(1, 2): (P3, LineBundleClass((2,)))})
    assert is_balanced(geom, LineBundleClass((2,)), table) == (False, (1, 2))


lam = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=12)
kap = st.integers(min_value=1, max_value=6)


@given(st.lists(st.tuples(kap, lam), min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_invariants_are_permutation_invariant(pairs, rnd):
    geom = DivisorGeometry(tuple(f"D{i}" for i in range(len(pairs))), tuple(k for k, _ in pairs))
    L = LineBundleClass(tuple(x for _, x in pairs))
    order = list(range(len(pairs)))
    rnd.shuffle(order)
    assert manin_invariants(*permuted(geom, L, order)) == manin_invariants(geom, L)


@given(st.lists(st.tuples(kap, lam), min_size=1, max_size=6), st.fractions(min_value=Fraction(1, 4), max_value=4))
def test_scaling_divides_a_and_keeps_b(pairs, t):
    geom = DivisorGeometry(tuple(f"D{i}" for i in range(len(pairs))), tuple(k for k, _ in pairs))
    L = LineBundleClass(tuple(x for _, x in pairs))
    base = manin_invariants(geom, L)
    scaled = manin_invariants(geom, L.scaled(t))
    assert scaled.a == base.a / t and scaled.b == base.b
