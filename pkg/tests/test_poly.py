from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acheck.poly import (
    GREVLEX,
    BlockOrder,
    Kind,
    Lex,
    Polynomial,
    RationalFunction,
    Var,
)

P = 11
K = Var(1, Kind.KNOWN, "k")
X = Var(2, Kind.OUTPUT, "x")
Y = Var(3, Kind.TEMP, "y")
VARS = [K, X, Y]


def v(var, p=P):
    return Polynomial.var(p, var)


@st.composite
def polys(draw, max_terms=5, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = [draw(st.integers(0, max_exp)) for _ in VARS]
        mono = tuple((w, e) for w, e in zip(VARS, exps) if e)
        terms[mono] = draw(st.integers(0, P - 1))
    return Polynomial(P, terms)


points = st.fixed_dictionaries({w: st.integers(0, P - 1) for w in VARS})


@given(polys(), polys(), points)
def test_operations_commute_with_evaluation(f, g, pt):
    assert (f + g).evaluate(pt) == (f.evaluate(pt) + g.evaluate(pt)) % P
    assert (f - g).evaluate(pt) == (f.evaluate(pt) - g.evaluate(pt)) % P
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt) % P


@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Polynomial.zero(P)


@given(polys(), points)
def test_substitute_then_evaluate(f, pt):
    partial = f.substitute({K: pt[K]})
    assert K not in partial.variables()
    assert partial.evaluate(pt) == f.evaluate(pt)


@given(polys(), polys())
def test_substitute_polynomial_value(f, g):
    # replacing x by g and evaluating equals evaluating with x := g(pt)
    h = f.substitute({X: g})
    pt = {K: 2, X: 0, Y: 5}
    pt_x = dict(pt)
    pt_x[X] = g.evaluate(pt)
    assert h.evaluate(pt) == f.evaluate(pt_x)


@given(polys(), polys())
def test_exact_quotient_recovers_factor(f, g):
    if g.is_zero():
        return
    q = (f * g).exact_quotient(g)
    assert q == f


def test_exact_quotient_detects_remainder():
    assert (v(X) + 1).exact_quotient(v(X)) is None
    assert (v(X) * v(Y)).exact_quotient(v(K)) is None


def test_coefficients_reduce_mod_p_and_zero_terms_vanish():
    f = Polynomial(P, {((X, 1),): 12, (): 11})
    assert f == v(X)
    assert f.terms == {((X, 1),): 1}


def test_constant_is_a_property():
    assert Polynomial.const(P, 4).constant == 4
    assert Polynomial.zero(P).constant == 0


def test_grevlex_orders_by_degree_then_reverse_lex():
    f = v(X) ** 2 + v(X) * v(Y) * v(K) + v(Y)
    m, _ = f.leading_term(GREVLEX)
    assert dict(m) == {K: 1, X: 1, Y: 1}


def test_lex_priority():
    f = v(X) ** 3 + v(Y)
    assert dict(f.leading_term(Lex([Y, X]))[0]) == {Y: 1}
    assert dict(f.leading_term(Lex([X, Y]))[0]) == {X: 3}


def test_block_order_eliminates_first_block():
    f = v(K) ** 5 + v(X)
    assert dict(f.leading_term(BlockOrder([X]))[0]) == {X: 1}


@given(st.lists(st.tuples(*[st.integers(0, 2)] * 3), min_size=2, max_size=6, unique=True))
def test_orders_are_total_and_multiplicative(exps):
    monos = [tuple((w, e) for w, e in zip(VARS, es) if e) for es in exps]
    for order in (GREVLEX, Lex([Y, X, K]), BlockOrder([X, Y])):
        keys = [order.key(m) for m in monos]
        assert len(set(keys)) == len(keys)
        # a < b implies a*x < b*x
        for a, b in itertools.combinations(monos, 2):
            lt = order.key(a) < order.key(b)
            fa = Polynomial(P, {a: 1}) * v(X)
            fb = Polynomial(P, {b: 1}) * v(X)
            ka = order.key(next(iter(fa.terms)))
            kb = order.key(next(iter(fb.terms)))
            assert (ka < kb) == lt, (a, b)


def test_collect_by_unknowns_groups_known_coefficients():
    f = v(K) * v(X) + 3 * v(X) + v(K) ** 2 + 1
    parts = f.collect_by_unknowns()
    assert parts[((X, 1),)] == v(K) + 3
    assert parts[()] == v(K) ** 2 + 1


def test_format_and_degree():
    f = v(X) ** 2 - v(K) * v(Y) + 2
    assert f.total_degree() == 2
    assert f.format() == "x^2 - k*y + 2"


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        v(X) + Polynomial.var(7, X)


# ---------------------------------------------------------- rational functions


@settings(max_examples=60)
@given(polys(max_terms=3, max_exp=2), polys(max_terms=3, max_exp=2), points)
def test_rational_arithmetic_matches_pointwise(f, g, pt):
    if g.is_zero() or g.evaluate(pt) == 0:
        return
    r = RationalFunction(f, g)
    s = RationalFunction(g, Polynomial.const(P, 1))
    val = f.evaluate(pt) * pow(g.evaluate(pt), -1, P) % P
    assert r.evaluate(pt) == val
    assert (r * s).evaluate(pt) == f.evaluate(pt)
    assert (r + s).evaluate(pt) == (val + g.evaluate(pt)) % P


def test_rational_normalisation_cancels_common_factor():
    r = RationalFunction(v(K) * v(K) - 1, v(K) - 1)
    assert r.is_polynomial()
    assert r.num == v(K) + 1


def test_rational_inverse_of_constant_numerator():
    r = RationalFunction(Polynomial.const(P, 3), v(K) + v(X))
    back = r.inverse()
    assert back.is_polynomial()
    assert back.evaluate({K: 1, X: 1}) == 2 * pow(3, -1, P) % P


def test_rational_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(v(K), Polynomial.zero(P))
