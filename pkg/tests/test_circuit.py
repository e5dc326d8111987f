from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acheck.circuit import (
    CircuitClass,
    ConstraintClass,
    ConstraintSystem,
    WireLayout,
    classify_circuit,
    classify_constraint,
    partition_variables,
    reduce_degree,
)
from acheck.errors import FormatError, UsageError
from acheck.field import Prime
from acheck.poly import Kind, Polynomial, Var

from helpers import make_vars

P = 7
(K,), (O,), (T,) = make_vars(1, 1, 1)


def v(x):
    return Polynomial.var(P, x)


def system(*rows, variables=(K, O, T)):
    return ConstraintSystem(Prime(P), tuple(variables), tuple(rows))


def test_constraint_classes():
    assert classify_constraint(v(O) + 3 * v(T) - v(K) ** 2) is ConstraintClass.PRECISELY_LINEAR
    assert classify_constraint(v(K) * v(O) - 1) is ConstraintClass.K_COEFFICIENT_LINEAR
    assert classify_constraint(v(O) * v(T)) is ConstraintClass.HIGHER_ORDER
    assert classify_constraint(v(K) * v(O) ** 2) is ConstraintClass.HIGHER_ORDER


def test_circuit_class_takes_the_hardest_row():
    assert classify_circuit(system(v(O) - 1)) is CircuitClass.PRECISELY_LINEAR
    assert classify_circuit(system(v(O) - 1, v(K) * v(T))) is CircuitClass.K_COEFFICIENT
    assert classify_circuit(system(v(K) * v(T), v(O) * v(O))) is CircuitClass.HIGHER_ORDER


def test_empty_system_cannot_be_classified():
    with pytest.raises(UsageError):
        classify_circuit(system())


def test_undeclared_variable_rejected():
    with pytest.raises(UsageError):
        system(v(O) - v(Var(9, Kind.TEMP, "z")))


def test_substitute_drops_vacuous_rows():
    s = system(v(K) * v(O), v(O) - 1)
    t = s.substitute({K: 0})
    assert len(t) == 1
    assert t.constraints[0] == v(O) - 1


def test_reduce_degree_cube():
    s = system(v(O) - v(T) ** 3)
    r = reduce_degree(s)
    assert len(r.constraints) == 2
    assert len(r.aux) == 1
    assert all(f.degree_in({Kind.TEMP, Kind.OUTPUT, Kind.AUX}) <= 2 for f in r.constraints)


def test_reduce_degree_leaves_quadratic_systems_alone():
    s = system(v(O) * v(T) - v(K) ** 5)
    assert reduce_degree(s) is s


def test_reduce_degree_round_cap():
    s = system(v(O) - v(T) ** 40)
    with pytest.raises(FormatError):
        reduce_degree(s, max_rounds=2)


def _solutions(s: ConstraintSystem, keep) -> set:
    vs = list(s.variables)
    out = set()
    for xs in itertools.product(range(P), repeat=len(vs)):
        pt = dict(zip(vs, xs))
        if s.is_satisfied(pt):
            out.add(tuple(pt[x] for x in keep))
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_reduce_degree_preserves_solutions(seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(rng.randint(1, 2)):
        f = Polynomial.const(P, rng.randrange(P))
        for _ in range(rng.randint(1, 3)):
            mono = Polynomial.const(P, rng.randrange(1, P))
            for _ in range(rng.randint(1, 4)):
                mono = mono * v(rng.choice([K, O, T]))
            f = f + mono
        rows.append(f)
    s = system(*rows)
    r = reduce_degree(s)
    # aux variables are functions of the others, so projections agree
    assert _solutions(s, (K, O, T)) == _solutions(r, (K, O, T))


def test_partition_by_header_counts():
    layout = WireLayout(6, n_pub_out=1, n_pub_in=1, n_prv_in=1, names={1: "main.out", 2: "main.a"})
    known, temp, output = partition_variables(layout)
    assert [x.index for x in output] == [1]
    assert [x.index for x in known] == [2, 3]
    assert [x.index for x in temp] == [4, 5]
    assert output[0].name == "main.out"
    assert temp[0].name == "w4"


def test_partition_output_filter_by_short_name():
    layout = WireLayout(4, 1, 1, 0, names={1: "main.o", 2: "main.i", 3: "main.t"}, output_names=["t"])
    known, temp, output = partition_variables(layout)
    assert [x.name for x in output] == ["main.t"]
    assert [x.name for x in temp] == ["main.o"]


def test_partition_rejects_inputs_as_outputs_and_bad_counts():
    layout = WireLayout(4, 1, 1, 0, names={1: "o", 2: "i"}, output_names=["i"])
    with pytest.raises(FormatError):
        partition_variables(layout)
    with pytest.raises(FormatError):
        partition_variables(WireLayout(2, 1, 1, 1))
