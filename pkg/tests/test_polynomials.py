from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvzeta.polynomials import MultiPoly, PiLaurent, UnivarPolyS, as_fraction, format_fraction, monomials_up_to

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def univar(draw, max_deg=4):
    return UnivarPolyS(draw(st.lists(small, min_size=0, max_size=max_deg + 1)))


@st.composite
def multipoly(draw, n=2, max_deg=3):
    exps = monomials_up_to(n, max_deg)
    terms = draw(st.dictionaries(st.sampled_from(exps), small, max_size=5))
    return MultiPoly(n, terms)


points = st.tuples(small, small)


def test_univar_basics():
    p = UnivarPolyS([1, 2, 1])
    assert p(Fraction(-1)) == 0
    assert p.shift(1) == UnivarPolyS([4, 4, 1])
    assert str(UnivarPolyS([0, -1, 1])) == "s^2 - s"
    lead, roots, rest = UnivarPolyS.from_roots([Fraction(-1), Fraction(3, 2)], 4).rational_roots()
    assert lead == 4 and sorted(roots) == [Fraction(-1), Fraction(3, 2)] and rest.degree == 0


def test_irreducible_part_is_left_over():
    lead, roots, rest = (UnivarPolyS([1, 0, 1]) * UnivarPolyS([2, 1])).rational_roots()
    assert roots == [Fraction(-2)]
    assert rest == UnivarPolyS([1, 0, 1])


def test_factor_strings():
    assert UnivarPolyS.from_roots([Fraction(-3, 2), 0], 4).factor_strings() == ["4", "s + 3/2", "s"]


def test_format_fraction():
    assert format_fraction(Fraction(3, 4)) == "3/4"
    assert format_fraction(Fraction(-2)) == "-2"
    assert as_fraction(0.5) == Fraction(1, 2)


@given(univar(), univar(), small)
def test_univar_ring_homomorphism(p, q, x):
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
    assert p.shift(2)(x) == p(x + 2)


@given(multipoly(), multipoly(), points)
@settings(max_examples=60)
def test_multipoly_evaluation_homomorphism(p, q, x):
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
    assert (p - q).evaluate(x) == p.evaluate(x) - q.evaluate(x)


@given(multipoly(), multipoly())
@settings(max_examples=60)
def test_leibniz_rule(p, q):
    for j in range(2):
        assert (p * q).diff(j) == p.diff(j) * q + p * q.diff(j)


@given(multipoly(), small)
@settings(max_examples=40)
def test_dilate(p, a):
    x = (Fraction(1, 3), Fraction(-2))
    assert p.dilate([a, a]).evaluate(x) == p.evaluate((a * x[0], a * x[1]))


def test_triples_round_trip():
    p = MultiPoly(2, {(2, 0): Fraction(1), (0, 2): Fraction(-3, 7)})
    assert MultiPoly.from_triples(2, p.to_triples()) == p


def test_operator_action():
    x = MultiPoly.var(2, 0)
    y = MultiPoly.var(2, 1)
    lap = MultiPoly(2, {(2, 0): Fraction(1), (0, 2): Fraction(1)})
    assert lap.apply_as_operator(x * x * y * y) == (x * x + y * y).scale(Fraction(2))


def test_pi_laurent_arithmetic():
    i_over_pi = PiLaurent.monomial(0, 1, -1)
    sq = i_over_pi * i_over_pi
    assert sq == PiLaurent.monomial(-1, 0, -2)
    assert i_over_pi * i_over_pi.inverse() == PiLaurent.rational(1)
    assert i_over_pi.is_imaginary()
    assert abs(complex(sq) + 1 / 3.141592653589793 ** 2) < 1e-15


def test_pi_laurent_inverse_needs_monomial():
    with pytest.raises(ZeroDivisionError):
        (PiLaurent.rational(1) + PiLaurent.monomial(1, 0, 1)).inverse()


def test_monomial_order():
    assert monomials_up_to(2, 1) == [(0, 0), (1, 0), (0, 1)]
    assert len(monomials_up_to(3, 2)) == 10
