from __future__ import annotations

import itertools

import pytest

from acheck.circuit import ConstraintSystem
from acheck.field import Prime
from acheck.oracle import OracleRefused, oracle
from acheck.poly import Polynomial
from acheck.verdict import Category, Truth, Verdict, allowed_truths, consistent

from helpers import make_vars


def test_consistency_table():
    assert consistent(Category.ALGEBRAIC_EXACT, Truth.UNDER)
    assert not consistent(Category.PRECISELY_EXACT, Truth.UNDER)
    assert consistent(Category.UNKNOWN, Truth.OVER)
    assert not consistent(Category.ALGEBRAIC_OVER, Truth.UNDER)
    for c in Category:
        if c.is_precise:
            assert len(allowed_truths(c)) == 1


def test_verdict_json():
    v = Verdict(Category.PRECISELY_EXACT, {"via": "elimination"}, [], 0.5)
    doc = v.to_json()
    assert doc["category"] == "precisely-exact-constrained"
    assert doc["class"] is None
    assert consistent(v, Truth.EXACT)


def decoder(p):
    (inp,), (o0, o1, s), _ = make_vars(1, 3, 0)
    I, O0, O1, S = (Polynomial.var(p, x) for x in (inp, o0, o1, s))
    return ConstraintSystem(Prime(p), (inp, o0, o1, s), (O0 * I, O1 * (I - 1), S * (S - 1)))


def test_oracle_decoder_f5():
    res = oracle(decoder(5))
    assert res.label is Truth.UNDER
    assert len(res.per_input) == 5


def test_oracle_examples():
    (k,), (x,), _ = make_vars(1, 1, 0)
    K, X = Polynomial.var(5, k), Polynomial.var(5, x)
    assert oracle(ConstraintSystem(Prime(5), (k, x), (X - K,))).label is Truth.EXACT
    const = Polynomial.const(5, -1)
    assert oracle(ConstraintSystem(Prime(5), (k, x), (const,))).label is Truth.OVER


def test_oracle_under_dominates_over():
    # k = 0: o free (under); k = 1: 0 = 1 (over)
    (k,), (o,), _ = make_vars(1, 1, 0)
    K, O = Polynomial.var(5, k), Polynomial.var(5, o)
    res = oracle(ConstraintSystem(Prime(5), (k, o), (K * (K - 1) * O - K,)))
    assert res.per_input[(0,)] is Truth.UNDER
    assert res.per_input[(1,)] is Truth.OVER
    assert res.per_input[(2,)] is Truth.EXACT
    assert res.label is Truth.UNDER


def test_oracle_budget():
    with pytest.raises(OracleRefused):
        oracle(decoder(13), max_points=100)


def test_oracle_matches_python_enumeration():
    sys = decoder(3)
    us = list(sys.unknowns)
    expected = {}
    for kv in range(3):
        outs = set()
        for xs in itertools.product(range(3), repeat=len(us)):
            pt = {sys.known[0]: kv, **dict(zip(us, xs))}
            if sys.is_satisfied(pt):
                outs.add(xs)
        expected[(kv,)] = {0: Truth.OVER, 1: Truth.EXACT}.get(len(outs), Truth.UNDER)
    assert oracle(sys).per_input == expected
