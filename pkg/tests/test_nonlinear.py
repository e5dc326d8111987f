from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acheck.circuit import CircuitClass, ConstraintSystem
from acheck.config import Config
from acheck.errors import UsageError
from acheck.field import BN254, Prime
from acheck.groebner import buchberger
from acheck.nonlinear import (
    CandidateInput,
    Variety,
    check_higher,
    check_k_coefficient,
    recheck_under_binding,
    solve_k_poly,
    triangular,
    undetermined_coeff_solutions,
    variety_outputs,
)
from acheck.poly import Polynomial
from acheck.verdict import Category

from helpers import make_vars, random_system


def polys(p, *vs):
    return [Polynomial.var(p, v) for v in vs]


def output_projections(sys: ConstraintSystem) -> set:
    us = list(sys.unknowns)
    out = set()
    for xs in itertools.product(range(sys.p), repeat=len(us)):
        pt = dict(zip(us, xs))
        if sys.is_satisfied(pt):
            out.add(tuple(pt[o] for o in sys.output))
    return out


def test_solve_k_poly_univariate_and_linear():
    (a, b), _, _ = make_vars(2, 0, 0)
    A, B = polys(7, a, b)
    sols, complete = solve_k_poly(A * A - 1)
    assert complete and sorted(s[a] for s in sols) == [1, 6]
    sols, complete = solve_k_poly(A + 2 * B - 3)
    assert not complete and sols == [{a: 3, b: 0}]
    assert solve_k_poly(A * B - 1) == ([], False)


def test_candidate_frequency_table_orders_by_count():
    (k,), (o, t), _ = make_vars(1, 2, 0)
    K, O, T = polys(7, k, o, t)
    # k = 0 kills a coefficient in two rows, k = 3 in one
    sys = ConstraintSystem(Prime(7), (k, o, t), (K * O - 1, K * T + O, (K - 3) * T - 2))
    cands = undetermined_coeff_solutions(sys)
    assert [c.binding[k] for c in cands] == [0, 3]
    assert [c.frequency for c in cands] == [2, 1]


def test_decoder_candidates():
    (inp,), (o0, o1, s), _ = make_vars(1, 3, 0)
    I, O0, O1, S = polys(BN254, inp, o0, o1, s)
    sys = ConstraintSystem(Prime(BN254), (inp, o0, o1, s), (O0 * I, O1 * (I - 1), S * (S - 1)))
    cands = undetermined_coeff_solutions(sys)
    assert sorted(c.binding[inp] for c in cands) == [0, 1]
    assert recheck_under_binding(sys, CandidateInput({inp: 0}))


def test_triangular_chain():
    _, (x, y, z), _ = make_vars(0, 3, 0)
    X, Y, Z = polys(11, x, y, z)
    det, assumed = triangular([X - 1, Y - X * X, 2 * Z - Y], [x, y, z])
    assert set(det) == {x, y, z}
    assert assumed == []


def test_triangular_records_symbolic_coefficients():
    (k,), (x,), _ = make_vars(1, 1, 0)
    K, X = polys(11, k, x)
    det, assumed = triangular([K * X - 1], [x])
    assert set(det) == {x}
    assert assumed == [K]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([5, 7, 11, 13]))
def test_variety_outputs_agrees_with_enumeration(seed, p):
    rng = random.Random(seed)
    sys = random_system(rng, CircuitClass.HIGHER_ORDER, p)
    sys = sys.substitute({k: rng.randrange(p) for k in sys.known})
    if not sys.constraints:
        return
    gb = buchberger(list(sys.constraints))
    vr = variety_outputs(gb, sys)
    proj = output_projections(sys)
    expected = {0: Variety.EMPTY, 1: Variety.UNIQUE}.get(len(proj), Variety.MULTIPLE)
    assert vr.kind is expected
    if vr.kind is Variety.MULTIPLE:
        a, b = vr.pair
        assert sys.is_satisfied(a) and sys.is_satisfied(b)
        assert any(a[o] != b[o] for o in sys.output)


def test_variety_outputs_enumeration_bound():
    us = make_vars(0, 1, 11)
    out, temps = us[1], us[2]
    chain = temps + out
    p = 13
    rows = [Polynomial.var(p, a) ** 2 - Polynomial.var(p, b) - 1 for a, b in zip(chain, chain[1:])]
    sys = ConstraintSystem(Prime(p), tuple(chain), tuple(rows))
    vr = variety_outputs(buchberger(rows), sys, Config(enum_unknowns=10))
    assert vr.kind is Variety.UNKNOWN
    assert vr.reason == "enumeration-bound"


def test_free_output_over_bn254():
    _, (o, s), _ = make_vars(0, 2, 0)
    S = Polynomial.var(BN254, s)
    sys = ConstraintSystem(Prime(BN254), (o, s), (S * S - S,))
    vr = variety_outputs(buchberger(list(sys.constraints)), sys)
    assert vr.kind is Variety.MULTIPLE
    a, b = vr.pair
    assert a[o] != b[o]


def test_class_guards():
    _, (o,), _ = make_vars(0, 1, 0)
    lin = ConstraintSystem(Prime(7), (o,), (Polynomial.var(7, o) - 1,))
    with pytest.raises(UsageError):
        check_higher(lin)
    with pytest.raises(UsageError):
        check_k_coefficient(lin)


def test_k_coefficient_examples_over_f7():
    (k,), (o,), _ = make_vars(1, 1, 0)
    K, O = polys(7, k, o)
    v = check_k_coefficient(ConstraintSystem(Prime(7), (k, o), (O * K - K,)))
    assert v.category is Category.PRECISELY_UNDER
    assert v.evidence["binding"] == {"k0": 0}
    v = check_k_coefficient(ConstraintSystem(Prime(7), (k, o), (O * K - 1, O * K - 2)))
    assert v.category is Category.ALGEBRAIC_OVER
