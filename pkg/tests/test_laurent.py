"""Group-algebra arithmetic: examples frozen by hand plus ring laws."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klcells.errors import SkewSymmetryError
from klcells.laurent import LaurentPoly, lex_sign, skew_solve


def mono(*exp, c=1):
    return LaurentPoly.monomial(exp, c)


def test_product_inverse_pair():
    assert mono(1) * mono(-1) == LaurentPoly.one(1)


def test_square_of_sum():
    p = mono(1) + mono(-1)
    expected = mono(2) + LaurentPoly.constant(1, 2) + mono(-2)
    assert p * p == expected


def test_rank2_product():
    p = mono(1, 0) - mono(0, 1)
    q = mono(1, 0) + mono(0, 1)
    assert p * q == mono(2, 0) - mono(0, 2)


def test_rank_mismatch_rejected():
    with pytest.raises(ValueError):
        mono(1) * mono(1, 0)


def test_bar_examples():
    p = mono(1) + mono(-2, c=2)
    assert p.bar() == mono(-1) + mono(2, c=2)


def test_sign_split_examples():
    p = mono(1) - mono(-1)
    neg, const, pos = p.sign_split()
    assert neg == -mono(-1) and const == 0 and pos == mono(1)

    five = LaurentPoly.constant(2, 5)
    neg, const, pos = five.sign_split()
    assert not neg and const == 5 and not pos

    p = mono(0, -1) + LaurentPoly.constant(2, 7) + mono(1, -3)
    neg, const, pos = p.sign_split()
    assert neg == mono(0, -1) and const == 7 and pos == mono(1, -3)


def test_lex_sign():
    assert lex_sign((0, -1)) == -1
    assert lex_sign((1, -3)) == 1
    assert lex_sign((0, 0)) == 0
    assert lex_sign(()) == 0


def test_skew_solve_examples():
    alpha = mono(1) - mono(-1)
    p = skew_solve(alpha)
    assert p == -mono(-1)
    assert p - p.bar() == alpha

    assert skew_solve(LaurentPoly.zero(2)) == LaurentPoly.zero(2)

    alpha = mono(0, -2, c=3) - mono(0, 2, c=3)
    assert skew_solve(alpha) == mono(0, -2, c=3)


def test_skew_solve_rejects_non_skew():
    with pytest.raises(SkewSymmetryError):
        skew_solve(mono(1))
    with pytest.raises(SkewSymmetryError):
        skew_solve(LaurentPoly.constant(1, 2))


def test_text_form():
    p = mono(0, -1, c=2) + mono(1, 0)
    assert p.text() == "2*e[0,-1]+e[1,0]"
    assert LaurentPoly.zero(2).text() == "0"
    assert (-mono(1)).text() == "-e[1]"


@st.composite
def polys(draw, rank=None):
    if rank is None:
        rank = draw(st.integers(min_value=0, max_value=3))
    n_terms = draw(st.integers(min_value=0, max_value=5))
    terms = {}
    for _ in range(n_terms):
        exp = tuple(
            draw(st.integers(min_value=-4, max_value=4)) for _ in range(rank)
        )
        coeff = draw(st.integers(min_value=-9, max_value=9))
        if coeff:
            terms[exp] = coeff
    return LaurentPoly(rank, terms)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2).flatmap(lambda r: st.tuples(polys(r), polys(r), polys(r))))
def test_ring_laws(triple):
    p, q, r = triple
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * LaurentPoly.one(p.rank) == p
    assert p * q == q * p


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2).flatmap(lambda r: st.tuples(polys(r), polys(r))))
def test_bar_is_ring_involution(pair):
    p, q = pair
    assert p.bar().bar() == p
    assert (p * q).bar() == p.bar() * q.bar()
    assert (p + q).bar() == p.bar() + q.bar()


@settings(max_examples=60, deadline=None)
@given(polys())
def test_sign_split_recombines(p):
    neg, const, pos = p.sign_split()
    assert neg + LaurentPoly.constant(p.rank, const) + pos == p
    assert neg.is_negative_supported()
    assert all(lex_sign(e) > 0 for e in pos.terms)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_skew_solve_round_trip(p):
    neg = p.negative_part()
    assert skew_solve(neg - neg.bar()) == neg
