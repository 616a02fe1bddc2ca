"""Exact rational polynomial and rational-function algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellzero.polyalg import (
    Poly,
    RatFunc,
    poly_gcd,
    real_roots_in,
    squarefree_decomposition,
)

fractions = st.fractions(
    min_value=-5, max_value=5, max_denominator=6
)
polys = st.lists(fractions, min_size=0, max_size=6).map(Poly)


def test_constructors_and_degree():
    assert Poly.zero().degree() == -1
    assert Poly.one().degree() == 0
    assert Poly.x().degree() == 1
    assert Poly.monomial(3, 2).degree() == 3
    assert Poly([1, 0, 0]).degree() == 0  # trailing zeros stripped
    assert Poly.constant(Fraction(1, 3))[0] == Fraction(1, 3)


def test_eval_is_exact_for_rationals():
    p = Poly([Fraction(1, 3), -2, Fraction(5, 7)])
    x = Fraction(3, 2)
    assert p.eval(x) == Fraction(1, 3) - 2 * x + Fraction(5, 7) * x * x


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == Poly.zero()
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_divmod_invariant(a, b):
    if b.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.divmod(b)
        return
    q, r = a.divmod(b)
    assert a == q * b + r
    assert r.degree() < b.degree() or r.is_zero()


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_derivative_product_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@settings(max_examples=40, deadline=None)
@given(polys, polys, fractions)
def test_compose_matches_pointwise(a, b, x):
    assert a.compose(b).eval(x) == a.eval(b.eval(x))


@settings(max_examples=40, deadline=None)
@given(polys)
def test_even_odd_decomposition(p):
    assert p.even_part() + p.odd_part() == p
    assert all(p.even_part()[d] == 0 for d in range(1, p.degree() + 1, 2))
    assert all(p.odd_part()[d] == 0 for d in range(0, p.degree() + 1, 2))


def test_gcd_of_shared_factor():
    shared = Poly([-1, 1])  # x - 1
    a = shared * Poly([2, 1])
    b = shared * Poly([-3, 1])
    assert poly_gcd(a, b) == shared.monic()


def test_squarefree_decomposition_recombines():
    p = Poly([-1, 1]) ** 2 * Poly([2, 1]) * Poly.constant(3)
    parts = squarefree_decomposition(p)
    prod = Poly.constant(p.leading())
    for factor, mult in parts:
        prod = prod * factor**mult
    assert prod == p
    assert sorted(mult for _, mult in parts) == [1, 2]


def test_sturm_real_roots():
    # (x^2 - 2)(x - 1/2): roots -sqrt(2), 1/2, sqrt(2).
    p = Poly([-2, 0, 1]) * Poly([Fraction(-1, 2), 1])
    roots = real_roots_in(p, -2, 2)
    locs = sorted(x for x, _ in roots)
    assert len(locs) == 3
    assert abs(locs[0] + 2**0.5) < 1e-9
    assert abs(locs[1] - 0.5) < 1e-9
    assert abs(locs[2] - 2**0.5) < 1e-9


def test_ratfunc_reduces_and_normalizes():
    r = RatFunc(Poly([0, 2, 2]), Poly([0, -2]))  # (2x^2+2x)/(-2x)
    assert r == RatFunc(Poly([-1, -1]))
    assert r.den.leading() > 0
    assert r.eval(Fraction(3)) == Fraction(-4)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, polys)
def test_ratfunc_field_axioms(a, b, c, d):
    if b.is_zero() or d.is_zero():
        return
    x, y = RatFunc(a, b), RatFunc(c, d)
    assert x + y == y + x
    assert x - x == RatFunc(Poly.zero())
    if not y.is_zero():
        assert (x / y) * y == x


def test_ratfunc_derivative_quotient_rule():
    num, den = Poly([1, 0, 3]), Poly([2, 1])
    r = RatFunc(num, den)
    expect = RatFunc(num.derivative() * den - num * den.derivative(), den * den)
    assert r.derivative() == expect


def test_string_round_trip():
    p = Poly([Fraction(1, 3), 0, -2])
    assert Poly.from_strings(p.to_strings()) == p
