"""Random constraint systems shared by the property tests."""

from __future__ import annotations

import random

from acheck.circuit import CircuitClass, ConstraintSystem
from acheck.field import Prime
from acheck.poly import Kind, Polynomial, Var

SMALL_PRIMES = (5, 7, 11, 13)


def make_vars(n_known: int, n_out: int, n_temp: int) -> tuple[list, list, list]:
    i = 1
    ks, os_, ts = [], [], []
    for _ in range(n_known):
        ks.append(Var(i, Kind.KNOWN, f"k{len(ks)}"))
        i += 1
    for _ in range(n_out):
        os_.append(Var(i, Kind.OUTPUT, f"o{len(os_)}"))
        i += 1
    for _ in range(n_temp):
        ts.append(Var(i, Kind.TEMP, f"t{len(ts)}"))
        i += 1
    return ks, os_, ts


def _coeff(rng: random.Random, p: int, ks: list, symbolic: bool) -> Polynomial:
    """A small coefficient: a constant, or a polynomial of degree <= 2 in K."""
    c = Polynomial.const(p, rng.choice([0, 1, 1, p - 1, rng.randrange(p)]))
    if symbolic and ks:
        k = rng.choice(ks)
        kp = Polynomial.var(p, k)
        shape = rng.randrange(4)
        if shape == 0:
            c = c + kp
        elif shape == 1:
            c = kp - rng.randrange(p)
        elif shape == 2:
            c = kp * kp - rng.randrange(p)
        else:
            other = rng.choice(ks)
            c = kp * Polynomial.var(p, other) + c
    return c


def random_system(
    rng: random.Random, cls: CircuitClass, p: int | None = None, max_unknowns: int = 4
) -> ConstraintSystem:
    """At most 2 knowns, `max_unknowns` unknowns and 5 constraints.

    The class is a target: a random row can cancel down to a simpler one.
    """
    p = p or rng.choice(SMALL_PRIMES)
    n_known = rng.randint(0 if cls is not CircuitClass.K_COEFFICIENT else 1, 2)
    n_unknown = rng.randint(1, max_unknowns)
    n_out = rng.randint(1, n_unknown)
    ks, os_, ts = make_vars(n_known, n_out, n_unknown - n_out)
    us = os_ + ts
    n_cons = rng.randint(1, 5)
    rows = []
    for _ in range(n_cons):
        f = Polynomial.zero(p)
        for u in rng.sample(us, rng.randint(1, len(us))):
            f = f + Polynomial.var(p, u) * _coeff(rng, p, ks, cls is CircuitClass.K_COEFFICIENT)
        if cls is CircuitClass.HIGHER_ORDER:
            for _ in range(rng.randint(1, 2)):
                a, b = rng.choice(us), rng.choice(us)
                f = f + Polynomial.var(p, a) * Polynomial.var(p, b) * _coeff(rng, p, ks, rng.random() < 0.4)
        const = _coeff(rng, p, ks, rng.random() < 0.5)
        f = f + const
        if not f.is_zero():
            rows.append(f)
    if not rows:
        rows.append(Polynomial.var(p, us[0]) - 1)
    return ConstraintSystem(Prime(p), tuple(ks + us), tuple(rows))


def sparse_exact_system(rng: random.Random, n: int, p: int, per_row: int = 4) -> ConstraintSystem:
    """n linear rows in n output unknowns with a unique solution (almost surely).

    Each row has a nonzero diagonal entry and per_row - 1 other random
    entries; the right-hand side comes from a random solution vector.
    """
    _, us, _ = make_vars(0, n, 0)
    xs = [rng.randrange(p) for _ in range(n)]
    rows = []
    for i in range(n):
        cols = {i: rng.randrange(1, p)}
        while len(cols) < min(per_row, n):
            cols[rng.randrange(n)] = rng.randrange(1, p)
        rhs = sum(c * xs[j] for j, c in cols.items()) % p
        terms = {((us[j], 1),): c for j, c in cols.items()}
        terms[()] = -rhs % p
        rows.append(Polynomial(p, terms))
    return ConstraintSystem(Prime(p), tuple(us), tuple(rows))
