"""Gauss-Jordan elimination over F_p and over F_p(K).

Three kernels share one result type:

* a dense numeric kernel for small or dense constant matrices,
* a sparse numeric kernel (Markowitz pivoting, then back-substitution)
  for the large, very sparse systems circuit compilers emit,
* a parametric kernel for entries that are polynomials in the known
  inputs, run fraction-free so entries stay polynomials.  Every
  nonconstant pivot ratio is recorded in a ledger; the result is valid
  wherever no ledger polynomial vanishes.

Right-hand sides may be polynomials in K even when every coefficient is
a constant; rows reducing to ``0 = c(K)`` are then reported as conditions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from .circuit import ConstraintSystem
from .errors import ResourceExhausted, UsageError
from .poly import Polynomial, RationalFunction, Var, mono_degree

SPARSE_ZERO_FRACTION = 0.9


# ------------------------------------------------------------------ matrix


@dataclass
class ParametricMatrix:
    """Augmented matrix ``A | b`` in sparse row form.

    Coefficients are ints, or Polynomials in K when nonconstant.  The
    right-hand side entries are ints or K-polynomials.
    """

    p: int
    columns: list  # list[Var], one per unknown
    rows: list  # list[dict[int, int | Polynomial]]
    rhs: list  # list[int | Polynomial]
    ledger: list = field(default_factory=list)

    @property
    def parametric(self) -> bool:
        return any(isinstance(c, Polynomial) for r in self.rows for c in r.values())

    @property
    def symbolic_rhs(self) -> bool:
        return any(isinstance(b, Polynomial) for b in self.rhs)

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, 0)

    def dense(self) -> list:
        """Rows as lists, augmented column last."""
        n = len(self.columns)
        return [[r.get(j, 0) for j in range(n)] + [b] for r, b in zip(self.rows, self.rhs)]

    def zero_fraction(self) -> float:
        cells = len(self.rows) * max(len(self.columns), 1)
        if not cells:
            return 1.0
        return 1.0 - sum(len(r) for r in self.rows) / cells


def _simplify(f: Polynomial):
    return f.constant if f.is_constant() else f


def to_matrix(sys: ConstraintSystem) -> ParametricMatrix:
    cols = list(sys.unknowns)
    where = {v: j for j, v in enumerate(cols)}
    rows, rhs = [], []
    for f in sys.constraints:
        row = {}
        b = 0
        for u, c in f.collect_by_unknowns().items():
            d = mono_degree(u)
            if d >= 2:
                raise UsageError(f"constraint {f} is not linear in the unknowns")
            if d == 0:
                b = _simplify(-c)
            else:
                row[where[u[0][0]]] = _simplify(c)
        rows.append(row)
        rhs.append(b)
    return ParametricMatrix(sys.p, cols, rows, rhs)


# ---------------------------------------------------------------- solution


@dataclass(frozen=True)
class Pivot:
    """``u = value + sum(coeff * free)`` over the Free unknowns in `deps`."""

    value: Any
    deps: dict = field(default_factory=dict)  # Var -> coefficient

    @property
    def determined(self) -> bool:
        return not self.deps


class _Free:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Free"


FREE = _Free()


@dataclass
class LinearSolution:
    columns: list
    status: dict = field(default_factory=dict)  # Var -> Pivot | FREE; empty when inconsistent
    inconsistent: Any = None  # c of a row 0 = c, c a nonzero constant (or rational function)
    conditions: list = field(default_factory=list)  # K-polynomials c with a row 0 = c(K)
    ledger: list = field(default_factory=list)  # nonconstant pivots assumed nonzero
    rank: int = 0

    @property
    def consistent(self) -> bool:
        return self.inconsistent is None and not self.conditions

    def free(self) -> list:
        return [v for v in self.columns if self.status.get(v) is FREE]


def check_uniqueness(sol: LinearSolution, outputs: Sequence[Var]) -> bool:
    for o in outputs:
        st = sol.status.get(o)
        if not isinstance(st, Pivot) or not st.determined:
            return False
    return True


# ------------------------------------------------------------ numeric kernels


def _sub_scaled(a, f: int, b, p: int):
    """a - f*b for ints or K-polynomials."""
    if isinstance(a, int) and isinstance(b, int):
        return (a - f * b) % p
    if isinstance(a, int):
        a = Polynomial.const(p, a)
    if isinstance(b, int):
        b = Polynomial.const(p, b)
    return _simplify(a - b.scale(f))


def _scale(a, f: int, p: int):
    return a * f % p if isinstance(a, int) else _simplify(a.scale(f))


def _is_nonzero(b) -> bool:
    return bool(b) if isinstance(b, int) else not b.is_zero()


class _Clock:
    def __init__(self, deadline: float | None):
        self.deadline = deadline
        self.n = 0

    def tick(self):
        self.n += 1
        if self.deadline is not None and not self.n & 63 and time.monotonic() > self.deadline:
            raise ResourceExhausted("timeout")


def _finish(m: ParametricMatrix, pivots: list, leftovers: list) -> LinearSolution:
    """Turn eliminated rows into a LinearSolution.

    `pivots` lists (column, row, rhs) with unit pivot entries, in the order
    they were chosen; every other column of a row is either free or a
    pivot chosen later.  `leftovers` are rhs values of rows with no
    coefficients left.
    """
    p = m.p
    sol = LinearSolution(list(m.columns), ledger=list(m.ledger), rank=len(pivots))
    for b in leftovers:
        if not _is_nonzero(b):
            continue
        if isinstance(b, int):
            if sol.inconsistent is None:
                sol.inconsistent = b
        else:
            sol.conditions.append(b)
    if not sol.consistent:
        return sol
    pivot_cols = {c for c, _, _ in pivots}
    free_cols = [j for j in range(len(m.columns)) if j not in pivot_cols]
    exprs: dict = {}  # col -> (value, {free col: coeff})
    for c, row, b in reversed(pivots):
        value = b
        deps: dict = {}
        for j, a in row.items():
            if j == c:
                continue
            if j in exprs:
                v2, d2 = exprs[j]
                value = _sub_scaled(value, a, v2, p)
                for fj, fc in d2.items():
                    deps[fj] = (deps.get(fj, 0) - a * fc) % p
            else:
                deps[j] = (deps.get(j, 0) - a) % p
        exprs[c] = (value, {j: x for j, x in deps.items() if x})
    for j in free_cols:
        sol.status[m.columns[j]] = FREE
    for c, (value, deps) in exprs.items():
        sol.status[m.columns[c]] = Pivot(value, {m.columns[j]: x for j, x in deps.items()})
    return sol


def _dense_numeric(m: ParametricMatrix, clock: _Clock) -> LinearSolution:
    p = m.p
    n = len(m.columns)
    rows = [[r.get(j, 0) for j in range(n)] for r in m.rows]
    rhs = list(m.rhs)
    pivots = []
    used = [False] * len(rows)
    for c in range(n):
        r = next((i for i in range(len(rows)) if not used[i] and rows[i][c]), None)
        if r is None:
            continue
        used[r] = True
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        rhs[r] = _scale(rhs[r], inv, p)
        for i in range(len(rows)):
            clock.tick()
            f = rows[i][c]
            if i != r and f:
                ri, rr = rows[i], rows[r]
                rows[i] = [(x - f * y) % p for x, y in zip(ri, rr)]
                rhs[i] = _sub_scaled(rhs[i], f, rhs[r], p)
        pivots.append((c, r))
    spivots = [(c, {j: x for j, x in enumerate(rows[r]) if x}, rhs[r]) for c, r in pivots]
    leftovers = [rhs[i] for i in range(len(rows)) if not used[i]]
    return _finish(m, spivots, leftovers)


def _sparse_numeric(m: ParametricMatrix, clock: _Clock) -> LinearSolution:
    """Markowitz-style elimination on dict rows.

    Each step takes a shortest remaining row and, within it, the column
    touching the fewest remaining rows, which keeps fill-in low.
    """
    p = m.p
    rows = [dict(r) for r in m.rows]
    rhs = list(m.rhs)
    col_rows: dict = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    # bucket rows by length so the shortest is found quickly
    alive = set(range(len(rows)))
    buckets: dict = {}
    for i, r in enumerate(rows):
        buckets.setdefault(len(r), set()).add(i)
    length = {i: len(r) for i, r in enumerate(rows)}

    def move(i: int, new: int):
        old = length[i]
        if old != new:
            buckets[old].discard(i)
            buckets.setdefault(new, set()).add(i)
            length[i] = new

    pivots, leftovers = [], []
    while alive:
        clock.tick()
        k = min(l for l, s in buckets.items() if s)
        i = min(buckets[k])
        buckets[k].discard(i)
        alive.discard(i)
        r = rows[i]
        if not r:
            leftovers.append(rhs[i])
            continue
        c = min(r, key=lambda j: (len(col_rows[j]), j))
        inv = pow(r[c], -1, p)
        if inv != 1:
            for j in r:
                r[j] = r[j] * inv % p
            rhs[i] = _scale(rhs[i], inv, p)
        for j in r:
            col_rows[j].discard(i)
        for t in list(col_rows[c]):
            rt = rows[t]
            f = rt[c]
            for j, v in r.items():
                nv = (rt.get(j, 0) - f * v) % p
                if nv:
                    if j not in rt:
                        col_rows[j].add(t)
                    rt[j] = nv
                elif j in rt:
                    del rt[j]
                    col_rows[j].discard(t)
            rhs[t] = _sub_scaled(rhs[t], f, rhs[i], p)
            move(t, len(rt))
        pivots.append((c, r, rhs[i]))
    return _finish(m, pivots, leftovers)


# --------------------------------------------------------- parametric kernel


def _poly(x, p: int) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial.const(p, x)


def _size(f: Polynomial) -> tuple:
    return (f.total_degree(), len(f.terms))


def _note(ledger: list, g: Polynomial):
    if not g.is_constant() and g.monic() not in ledger:
        ledger.append(g.monic())


def _parametric(m: ParametricMatrix, clock: _Clock) -> LinearSolution:
    """Fraction-free Gauss-Jordan over polynomials in the known inputs.

    Each update multiplies by the current pivot and divides exactly by the
    previous one, so entries stay polynomials of bounded size.  After the
    last step every pivot entry equals the last pivot; quotients are only
    formed at the end.  The numerator of every pivot ratio goes into the ledger.
    """
    p = m.p
    n = len(m.columns)
    rows = [[_poly(r.get(j, 0), p) for j in range(n)] + [_poly(b, p)] for r, b in zip(m.rows, m.rhs)]
    ledger: list = list(m.ledger)
    used = [False] * len(rows)
    done_cols: set = set()
    order: list = []  # (col, row)
    prev = Polynomial.const(p, 1)

    def choose():
        # smallest entry first, lowest column breaking ties
        best = None
        for c in range(n):
            if c in done_cols:
                continue
            for i in range(len(rows)):
                a = rows[i][c]
                if used[i] or a.is_zero():
                    continue
                key = (_size(a), c, i)
                if best is None or key < best:
                    best = key
        return None if best is None else best[1:]

    while True:
        clock.tick()
        pick = choose()
        if pick is None:
            break
        c, r = pick
        a = rows[r][c]
        _note(ledger, RationalFunction(a, prev).num)
        used[r] = True
        done_cols.add(c)
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            new = []
            for x, y in zip(rows[i], rows[r]):
                clock.tick()
                t = a * x - f * y if not f.is_zero() else a * x
                q = t.exact_quotient(prev) if not prev.is_constant() else t.scale(pow(prev.constant, -1, p))
                if q is None:
                    raise AssertionError("fraction-free step left a remainder")
                new.append(q)
            rows[i] = new
        prev = a
        order.append((c, r))

    sol = LinearSolution(list(m.columns), ledger=ledger, rank=len(order))
    for i in range(len(rows)):
        b = rows[i][n]
        if used[i] or b.is_zero():
            continue
        val = RationalFunction(b, prev)
        if val.is_constant():
            if sol.inconsistent is None:
                sol.inconsistent = val.constant
        else:
            sol.conditions.append(val.num.monic())
            _note(ledger, val.den)
    if not sol.consistent:
        return sol
    pivot_cols = {c for c, _ in order}
    for j in range(n):
        if j not in pivot_cols:
            sol.status[m.columns[j]] = FREE
    for c, r in order:
        d = rows[r][c]
        deps = {}
        for j in range(n):
            if j not in pivot_cols and not rows[r][j].is_zero():
                deps[m.columns[j]] = RationalFunction(-rows[r][j], d)
        sol.status[m.columns[c]] = Pivot(RationalFunction(rows[r][n], d), deps)
    return sol


# ------------------------------------------------------------------ public


def gauss_jordan(
    m: ParametricMatrix, kernel: str = "auto", deadline: float | None = None
) -> LinearSolution:
    """Solve the augmented system.  `kernel` is auto, dense, sparse or parametric."""
    clock = _Clock(deadline)
    if kernel == "auto":
        if m.parametric:
            kernel = "parametric"
        elif m.zero_fraction() >= SPARSE_ZERO_FRACTION:
            kernel = "sparse"
        else:
            kernel = "dense"
    if kernel == "parametric":
        return _parametric(m, clock)
    if m.parametric:
        raise UsageError(f"{kernel} kernel needs constant coefficients")
    if kernel == "sparse":
        return _sparse_numeric(m, clock)
    if kernel == "dense":
        return _dense_numeric(m, clock)
    raise UsageError(f"unknown kernel {kernel!r}")


def check_linear(sys: ConstraintSystem, config=None):
    """Verdict for a system whose coefficients are all constants."""
    from .circuit import CircuitClass, classify_circuit
    from .dispatch import check

    if sys.constraints and classify_circuit(sys) is not CircuitClass.PRECISELY_LINEAR:
        raise UsageError("check_linear needs a precisely linear system")
    return check(sys, config)
