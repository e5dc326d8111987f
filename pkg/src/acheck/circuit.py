"""Constraint systems: variables split into known/temp/output plus the
equations ``f = 0`` that tie them together."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import FormatError, UsageError
from .field import Prime
from .poly import UNKNOWN_KINDS, Kind, Polynomial, Var, mono_degree


class ConstraintClass(enum.Enum):
    PRECISELY_LINEAR = "precisely-linear"
    K_COEFFICIENT_LINEAR = "k-coefficient-linear"
    HIGHER_ORDER = "higher-order"


class CircuitClass(enum.Enum):
    PRECISELY_LINEAR = "precisely-linear"
    K_COEFFICIENT = "k-coefficient"
    HIGHER_ORDER = "higher-order"


@dataclass(frozen=True)
class ConstraintSystem:
    prime: Prime
    variables: tuple  # tuple[Var, ...], sorted by index
    constraints: tuple  # tuple[Polynomial, ...], each read as "= 0"
    name: str = ""

    def __post_init__(self):
        vs = tuple(sorted(self.variables))
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        seen = set()
        for v in vs:
            if v.index in seen:
                raise UsageError(f"duplicate variable index {v.index}")
            seen.add(v.index)
        declared = set(vs)
        p = self.prime.value
        for f in self.constraints:
            if f.p != p:
                raise UsageError(f"constraint over F_{f.p} in a system over F_{p}")
            missing = f.variables() - declared
            if missing:
                raise UsageError(f"undeclared variables {sorted(missing)} in {f}")

    @property
    def p(self) -> int:
        return self.prime.value

    def _of(self, *kinds) -> tuple:
        return tuple(v for v in self.variables if v.kind in kinds)

    @property
    def known(self) -> tuple:
        return self._of(Kind.KNOWN)

    @property
    def temp(self) -> tuple:
        return self._of(Kind.TEMP)

    @property
    def output(self) -> tuple:
        return self._of(Kind.OUTPUT)

    @property
    def aux(self) -> tuple:
        return self._of(Kind.AUX)

    @property
    def unknowns(self) -> tuple:
        return self._of(*UNKNOWN_KINDS)

    def by_name(self, name: str) -> Var:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def next_index(self) -> int:
        return max((v.index for v in self.variables), default=0) + 1

    def with_constraints(self, constraints: Iterable[Polynomial], extra_vars=()) -> ConstraintSystem:
        return ConstraintSystem(
            self.prime, self.variables + tuple(extra_vars), tuple(constraints), self.name
        )

    def substitute(self, binding: Mapping) -> ConstraintSystem:
        """Apply `binding` to every constraint and drop rows that became 0 = 0."""
        rows = [f.substitute(binding) for f in self.constraints]
        return self.with_constraints(f for f in rows if not f.is_zero())

    def known_in_constraints(self) -> frozenset:
        return frozenset(v for f in self.constraints for v in f.variables() if v.is_known)

    def is_satisfied(self, assignment: Mapping) -> bool:
        return all(f.evaluate(assignment) == 0 for f in self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)


def classify_constraint(f: Polynomial, sys: ConstraintSystem | None = None) -> ConstraintClass:
    coeffs = f.collect_by_unknowns()
    if max((mono_degree(u) for u in coeffs), default=0) >= 2:
        return ConstraintClass.HIGHER_ORDER
    if any(u and not c.is_constant() for u, c in coeffs.items()):
        return ConstraintClass.K_COEFFICIENT_LINEAR
    return ConstraintClass.PRECISELY_LINEAR


def classify_circuit(sys: ConstraintSystem) -> CircuitClass:
    if not sys.constraints:
        raise UsageError("cannot classify a system with no constraints")
    classes = {classify_constraint(f) for f in sys.constraints}
    if ConstraintClass.HIGHER_ORDER in classes:
        return CircuitClass.HIGHER_ORDER
    if ConstraintClass.K_COEFFICIENT_LINEAR in classes:
        return CircuitClass.K_COEFFICIENT
    return CircuitClass.PRECISELY_LINEAR


# --------------------------------------------------------- degree reduction


def _unknown_degree(m) -> int:
    return sum(e for v, e in m if v.kind in UNKNOWN_KINDS)


def _rewrite(f: Polynomial, pair: tuple, aux: Var) -> Polynomial:
    """Replace every occurrence of the product `pair` (v*v or v*w) by `aux`."""
    v, w = pair
    out: dict = {}
    p = f.p
    for m, c in f.terms.items():
        e = dict(m)
        if v == w:
            k = e.get(v, 0) // 2
            if k:
                e[v] -= 2 * k
        else:
            k = min(e.get(v, 0), e.get(w, 0))
            if k:
                e[v] -= k
                e[w] -= k
        if k:
            e[aux] = e.get(aux, 0) + k
        m2 = tuple(sorted(((x, n) for x, n in e.items() if n), key=lambda xn: xn[0].index))
        out[m2] = (out.get(m2, 0) + c) % p
    return Polynomial(p, out)


def reduce_degree(sys: ConstraintSystem, max_rounds: int | None = None) -> ConstraintSystem:
    """Introduce auxiliary variables until every constraint is quadratic in the unknowns.

    Each round picks the first (by variable indices) monomial of the highest
    unknown-degree and splits off a square ``v^2`` (or, for square-free
    monomials, the product of its two leading unknowns) as a fresh
    auxiliary, adding ``v^2 - aux = 0``.
    """
    rows = list(sys.constraints)
    new_vars: list[Var] = []
    next_idx = sys.next_index()
    names = {v.name for v in sys.variables}
    rounds = 0
    while True:
        worst = None
        for f in rows:
            for m in f.terms:
                d = _unknown_degree(m)
                if d > 2:
                    key = (-d, tuple((v.index, -e) for v, e in m))
                    if worst is None or key < worst[0]:
                        worst = (key, m)
        if worst is None:
            break
        rounds += 1
        if max_rounds is not None and rounds > max_rounds:
            raise FormatError(f"degree reduction did not converge in {max_rounds} rounds")
        unk = [(v, e) for v, e in worst[1] if v.kind in UNKNOWN_KINDS]
        sq = next((v for v, e in unk if e >= 2), None)
        pair = (sq, sq) if sq is not None else (unk[0][0], unk[1][0])
        base = f"{pair[0].name}_sq" if pair[0] == pair[1] else f"{pair[0].name}_{pair[1].name}"
        name = base
        n = 1
        while name in names:
            n += 1
            name = f"{base}{n}"
        names.add(name)
        aux = Var(next_idx, Kind.AUX, name)
        next_idx += 1
        new_vars.append(aux)
        p = sys.p
        defining = Polynomial.var(p, pair[0]) * Polynomial.var(p, pair[1]) - Polynomial.var(p, aux)
        rows = [_rewrite(f, pair, aux) for f in rows]
        rows.append(defining)
    if not new_vars:
        return sys
    return sys.with_constraints(rows, new_vars)


# ------------------------------------------------------------ partitioning


@dataclass
class WireLayout:
    """Wire metadata as a circuit compiler reports it.

    Wire 0 is the constant one; then public outputs, public inputs and
    private inputs follow in that order; everything after is internal.
    """

    n_wires: int
    n_pub_out: int
    n_pub_in: int
    n_prv_in: int
    names: dict = field(default_factory=dict)  # wire id -> signal name
    output_names: Sequence[str] | None = None


def partition_variables(layout: WireLayout, used: Iterable[int] | None = None):
    """Return (known, temp, output) lists of Var, indexed by wire id."""
    n_io = layout.n_pub_out + layout.n_pub_in + layout.n_prv_in
    if min(layout.n_pub_out, layout.n_pub_in, layout.n_prv_in) < 0:
        raise FormatError("negative signal count")
    if n_io and n_io > layout.n_wires - 1:
        raise FormatError(f"{n_io} declared signals do not fit in {layout.n_wires} wires")
    outputs = set(range(1, 1 + layout.n_pub_out))
    inputs = set(range(1 + layout.n_pub_out, 1 + n_io))
    if layout.output_names is not None:
        wanted = set(layout.output_names)
        by_name = {}
        for w, nm in layout.names.items():
            by_name[nm] = w
            short = nm.split(".", 1)[1] if nm.startswith("main.") else None
            if short:
                by_name.setdefault(short, w)
        missing = wanted - set(by_name)
        if missing:
            raise FormatError(f"unknown output names: {sorted(missing)}")
        outputs = {by_name[n] for n in wanted}
        clash = outputs & inputs
        if clash:
            raise FormatError(
                f"signals declared both input and output: {sorted(layout.names[w] for w in clash)}"
            )
        if 0 in outputs:
            raise FormatError("the constant wire cannot be an output")
    wires = set(range(1, layout.n_wires)) if used is None else set(used) - {0}
    wires |= outputs | inputs
    known, temp, output = [], [], []
    for w in sorted(wires):
        name = layout.names.get(w, f"w{w}")
        if w in inputs:
            known.append(Var(w, Kind.KNOWN, name))
        elif w in outputs:
            output.append(Var(w, Kind.OUTPUT, name))
        else:
            temp.append(Var(w, Kind.TEMP, name))
    return known, temp, output
