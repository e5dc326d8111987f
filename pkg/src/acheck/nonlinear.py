"""Special-input candidates, Groebner-based analysis and F_p point search."""

from __future__ import annotations

import enum
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field

from . import univariate as uni
from .circuit import ConstraintSystem
from .config import Config, Context, context
from .errors import ResourceExhausted
from .groebner import GroebnerBasis, buchberger
from .poly import GREVLEX, UNKNOWN_KINDS, BlockOrder, GrevLex, Kind, Lex, Polynomial, Var

log = logging.getLogger(__name__)


# -------------------------------------------------------------- candidates


@dataclass
class CandidateInput:
    binding: dict  # Var -> int
    frequency: int = 1

    def sort_key(self):
        return (-self.frequency, tuple((v.index, x) for v, x in sorted(self.binding.items())))

    def named(self) -> dict:
        return {v.name: x for v, x in sorted(self.binding.items())}


def solve_k_poly(c: Polynomial) -> tuple[list, bool]:
    """Zeros of a polynomial in the known inputs.

    Returns (bindings, complete).  Univariate polynomials get all their
    roots.  Linear multivariate ones get one point: the lowest-index
    variable is solved for with the others set to 0.  Anything else is
    skipped.
    """
    p = c.p
    vs = sorted(c.variables())
    if not vs:
        return [], True
    if len(vs) == 1:
        v = vs[0]
        return [{v: r} for r in uni.roots(c.to_dense(v), p)], True
    if c.total_degree() == 1:
        v = vs[0]
        a = c.terms[((v, 1),)]
        b = c.constant
        point = {w: 0 for w in vs}
        point[v] = -b * pow(a, -1, p) % p
        return [point], False
    return [], False


def undetermined_coeff_solutions(sys: ConstraintSystem) -> list:
    """Candidate special inputs, most frequent first.

    Every unknown monomial whose coefficient is a nonconstant polynomial
    in K contributes the zeros of that coefficient; a binding found for
    several (constraint, monomial) origins counts once per origin.
    """
    table: Counter = Counter()
    skipped = 0
    for f in sys.constraints:
        for u, c in f.collect_by_unknowns().items():
            if not u or c.is_constant():
                continue
            sols, complete = solve_k_poly(c)
            if not sols and not complete:
                skipped += 1
            for b in {tuple(sorted(s.items())) for s in sols}:
                table[b] += 1
    if skipped:
        log.debug("%d coefficient equations had no solvable shape", skipped)
    cands = [CandidateInput(dict(b), n) for b, n in table.items()]
    cands.sort(key=CandidateInput.sort_key)
    return cands


def recheck_under_binding(sys: ConstraintSystem, c: CandidateInput, config=None) -> bool:
    """True iff the system with `c` substituted is precisely underconstrained."""
    from .dispatch import check
    from .verdict import Category

    return check(sys.substitute(c.binding), config).category is Category.PRECISELY_UNDER


# ------------------------------------------------------ triangular structure


def triangular(gens, unknowns) -> tuple[dict, list]:
    """Unknowns pinned down by a generator linear in them, to a fixpoint.

    An unknown u is determined by g when u occurs in g only as the bare
    monomial u, and every other unknown in g is already determined.
    Returns ({u: (g, coefficient)}, nonconstant coefficients relied on).
    """
    det: dict = {}
    assumed: list = []
    todo = set(unknowns)
    parts = [(g, g.collect_by_unknowns()) for g in gens]
    changed = True
    while changed and todo:
        changed = False
        for g, cu in parts:
            for u in sorted(todo & g.variables()):
                mons = [m for m in cu if any(v == u for v, _ in m)]
                if mons != [((u, 1),)]:
                    continue
                others = {v for m in cu if m != mons[0] for v, _ in m}
                if others <= set(det):
                    coeff = cu[mons[0]]
                    det[u] = (g, coeff)
                    if not coeff.is_constant() and coeff.monic() not in assumed:
                        assumed.append(coeff.monic())
                    todo.discard(u)
                    changed = True
                    break
    return det, assumed


def _eval_triangular(det: dict, p: int) -> dict:
    """Solve a fully determined numeric triangular system."""
    point: dict = {}
    pending = dict(det)
    while pending:
        for u, (g, coeff) in list(pending.items()):
            rest = g - Polynomial.var(p, u).scale(coeff.constant)
            if rest.variables() <= set(point):
                point[u] = -rest.evaluate(point) * pow(coeff.constant, -1, p) % p
                del pending[u]
    return point


# ------------------------------------------------------------ point search


class Variety(enum.Enum):
    EMPTY = "empty"
    UNIQUE = "unique-outputs"
    MULTIPLE = "multiple-outputs"
    UNKNOWN = "unknown"


@dataclass
class VarietyResult:
    kind: Variety
    pair: tuple | None = None  # two full assignments with different outputs
    point: dict | None = None  # one solution, when known
    reason: str = ""


class _Budget(Exception):
    pass


class _Search:
    """Depth-first F_p point search by lex bases and univariate roots.

    Variables are ordered with outputs last, so outputs are branched on
    first; once every output is fixed only one completion is sought.
    """

    def __init__(self, p: int, outputs, ctx: Context):
        self.p = p
        self.outputs = set(outputs)
        self.ctx = ctx
        self.exhaustive = True
        self.nodes = 0

    def _values(self, gb, v: Var):
        for g in gb:
            if g.variables() == {v}:
                return uni.roots(g.to_dense(v), self.p)
        if self.p <= self.ctx.config.small_field:
            return range(self.p)
        self.exhaustive = False
        return range(3)

    def solutions(self, polys, order, assign, free=frozenset()):
        self.nodes += 1
        if self.nodes > self.ctx.config.max_branches:
            raise _Budget()
        if not self.nodes & 31:
            self.ctx.check_time()
        polys = [f for f in polys if not f.is_zero()]
        if any(f.is_constant() for f in polys):
            return
        # with field equations the basis only prunes, so the cheaper order will do
        mo = GREVLEX if self.p <= self.ctx.config.field_equations else Lex(order)
        gb = buchberger(polys, mo, self.ctx.limits()).generators if polys else []
        if gb and gb[0].is_constant():
            return
        present = set().union(*(g.variables() for g in gb)) if gb else set()
        newly = [v for v in order if v not in present]
        rest = [v for v in order if v in present]
        base = dict(assign)
        base.update({v: 0 for v in newly})
        free = free | set(newly)
        if not rest:
            yield base, free
            return
        v = rest[-1]
        deeper_outputs = any(u in self.outputs for u in rest[:-1])
        for a in self._values(gb, v):
            sub = [g.substitute({v: a}) for g in gb]
            gen = self.solutions(sub, rest[:-1], {**base, v: a}, free)
            if deeper_outputs:
                yield from gen
            else:
                first = next(gen, None)
                if first is not None:
                    yield first


def _lex_order(unknowns, outputs) -> list:
    """Priority list for Lex: temporaries first (largest), outputs last."""
    outs = set(outputs)
    return [v for v in unknowns if v not in outs] + [v for v in unknowns if v in outs]


def _complete(point: dict, unknowns) -> dict:
    return {u: point.get(u, 0) for u in unknowns}


def _field_equations(polys, present, p: int, ctx: Context) -> list:
    """Append x^p - x for every variable when p is small.

    The F_p points are unchanged, but the ideal becomes radical and
    zero-dimensional, which keeps lex bases small.
    """
    if p > ctx.config.field_equations:
        return list(polys)
    return list(polys) + [Polynomial.var(p, v) ** p - Polynomial.var(p, v) for v in sorted(present)]


def find_point(polys, unknowns, p: int, ctx: Context) -> tuple[dict | None, bool]:
    """Any F_p solution of `polys` (no known inputs).  Returns (point, exhaustive)."""
    s = _Search(p, (), ctx)
    present = set().union(*(f.variables() for f in polys)) if polys else set()
    order = [u for u in unknowns if u in present]
    try:
        sol = next(s.solutions(_field_equations(polys, present, p, ctx), order, {}), None)
    except _Budget:
        return None, False
    if sol is None:
        return None, s.exhaustive
    return _complete(sol[0], unknowns), True


def variety_outputs(gb: GroebnerBasis, sys: ConstraintSystem, config=None) -> VarietyResult:
    """Classify the F_p output projections of the variety of `gb`.

    With known inputs left in the basis only the triangular rule applies;
    otherwise points are searched for directly (exhaustively for p up to
    the small-field bound).
    """
    ctx = context(config)
    p = sys.p
    gens = [g for g in gb.generators if not g.is_zero()]
    if gb.is_unit():
        return VarietyResult(Variety.EMPTY)
    unknowns = list(sys.unknowns)
    outputs = list(sys.output)
    present = set().union(*(g.variables() for g in gens)) if gens else set()
    has_k = any(v.is_known for v in present)
    det, _ = triangular(gens, [u for u in unknowns if u in present])

    if has_k:
        if all(o in det for o in outputs):
            return VarietyResult(Variety.UNIQUE, reason="triangular")
        return VarietyResult(Variety.UNKNOWN, reason="symbolic-inputs")

    free_outputs = [o for o in outputs if o not in present]
    if free_outputs:
        if len(present) > ctx.config.enum_unknowns:
            return VarietyResult(Variety.UNKNOWN, reason="enumeration-bound")
        point, exhaustive = find_point(gens, unknowns, p, ctx)
        if point is None:
            if exhaustive:
                return VarietyResult(Variety.EMPTY)
            return VarietyResult(Variety.UNKNOWN, reason="no-point-found")
        other = dict(point)
        other[free_outputs[0]] = (point[free_outputs[0]] + 1) % p
        return VarietyResult(Variety.MULTIPLE, pair=(point, other), point=point)

    if len(det) == len(present):
        point = _complete(_eval_triangular(det, p), unknowns)
        return VarietyResult(Variety.UNIQUE, point=point, reason="triangular")

    if len(present) > ctx.config.enum_unknowns:
        return VarietyResult(Variety.UNKNOWN, reason="enumeration-bound")

    order = _lex_order([u for u in unknowns if u in present], outputs)
    search = _Search(p, outputs, ctx)
    projections: dict = {}
    try:
        for sol, free in search.solutions(_field_equations(gens, present, p, ctx), order, {}):
            sol = _complete(sol, unknowns)
            fo = [o for o in outputs if o in free]
            if fo:
                other = dict(sol)
                other[fo[0]] = (sol[fo[0]] + 1) % p
                return VarietyResult(Variety.MULTIPLE, pair=(sol, other), point=sol)
            key = tuple(sol[o] for o in outputs)
            projections.setdefault(key, sol)
            if len(projections) >= 2:
                a, b = list(projections.values())[:2]
                return VarietyResult(Variety.MULTIPLE, pair=(a, b), point=a)
    except _Budget:
        return VarietyResult(Variety.UNKNOWN, reason="branch-cap")
    if search.exhaustive:
        if not projections:
            return VarietyResult(Variety.EMPTY)
        return VarietyResult(Variety.UNIQUE, point=next(iter(projections.values())))
    if projections and all(o in det for o in outputs):
        return VarietyResult(Variety.UNIQUE, point=next(iter(projections.values())))
    return VarietyResult(Variety.UNKNOWN, reason="sampled-search")


# -------------------------------------------------------- symbolic analysis


@dataclass
class HigherGeneric:
    """Outcome of a Groebner computation with the known inputs symbolic."""

    gb: GroebnerBasis
    ledger: list = field(default_factory=list)  # leading coefficients assumed nonzero
    conditions: list = field(default_factory=list)  # K-only basis members
    unit: bool = False
    determined: set = field(default_factory=set)


def groebner_generic(sys: ConstraintSystem, ctx: Context) -> HigherGeneric:
    unknowns = set(sys.unknowns)
    has_k = any(v.is_known for f in sys.constraints for v in f.variables())
    order = BlockOrder(unknowns) if has_k else GREVLEX
    gb = buchberger(list(sys.constraints), order, ctx.limits(symbolic=has_k))
    gb.domain = "rational-in-K" if has_k else "constant"
    out = HigherGeneric(gb)
    if gb.is_unit():
        out.unit = True
        return out
    ugrev = GrevLex()
    for g in gb.generators:
        cu = g.collect_by_unknowns()
        if list(cu) == [()]:
            out.conditions.append(g.monic())
            continue
        lead = max((m for m in cu if m), key=ugrev.key)
        c = cu[lead]
        if not c.is_constant() and c.monic() not in out.ledger:
            out.ledger.append(c.monic())
    det, assumed = triangular(gb.generators, [u for u in sys.unknowns])
    for c in assumed:
        if c not in out.ledger:
            out.ledger.append(c)
    out.determined = set(det)
    gb.ledger = list(out.ledger)
    return out


def check_k_coefficient(sys: ConstraintSystem, config=None):
    from .circuit import CircuitClass, classify_circuit
    from .dispatch import check
    from .errors import UsageError

    if classify_circuit(sys) is not CircuitClass.K_COEFFICIENT:
        raise UsageError("check_k_coefficient needs a K-coefficient system")
    return check(sys, config)


def check_higher(sys: ConstraintSystem, config=None):
    from .circuit import CircuitClass, classify_circuit
    from .dispatch import check
    from .errors import UsageError

    if classify_circuit(sys) is not CircuitClass.HIGHER_ORDER:
        raise UsageError("check_higher needs a higher-order system")
    return check(sys, config)
