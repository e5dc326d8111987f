"""Entry point: classify a system, run the matching checker, grade the result.

The analysis works on sets of possible ground-truth labels.  A symbolic
pass (elimination or a Groebner basis with the known inputs left as
parameters) describes every input point where its assumption ledger does
not vanish.  The points where some ledger polynomial does vanish are
found (roots, or enumeration when small) and re-analysed with the inputs
substituted.  The label sets of all regions are then merged: a concrete
underconstraint witness anywhere wins outright, otherwise the merged set
decides between a precise, an algebraic or an unknown verdict.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field

from .circuit import CircuitClass, ConstraintSystem, classify_circuit
from .config import Config, Context, context
from .errors import ResourceExhausted
from .linear import FREE, Pivot, check_uniqueness, gauss_jordan, to_matrix
from .nonlinear import (
    CandidateInput,
    Variety,
    groebner_generic,
    undetermined_coeff_solutions,
    variety_outputs,
)
from .poly import Polynomial
from .verdict import Category, Truth, Verdict

log = logging.getLogger(__name__)

U, E, O = Truth.UNDER, Truth.EXACT, Truth.OVER
ALL = frozenset(Truth)


@dataclass
class Outcome:
    possible: frozenset  # aggregate labels still possible for this region
    witness: dict | None = None  # {"binding": {Var: int}, "pair": (dict, dict)}
    ledger: list = field(default_factory=list)
    conditions: list = field(default_factory=list)
    relaxed: bool = False  # some special inputs were not examined
    via: str = ""
    reason: str = ""
    over_binding: dict | None = None
    candidates: list = field(default_factory=list)
    symbolic: bool = False  # known inputs stayed symbolic in the analysis


def combine(regions) -> frozenset:
    """Aggregate labels possible over a union of nonempty input regions."""
    regions = [frozenset(r) for r in regions]
    if not regions:
        return ALL
    out = set()
    if any(U in r for r in regions):
        out.add(U)
    if any(O in r for r in regions) and all(r - {U} for r in regions):
        out.add(O)
    if all(E in r for r in regions):
        out.add(E)
    return frozenset(out)


# ------------------------------------------------------------------ helpers


def _used_known(sys: ConstraintSystem) -> list:
    used = set()
    for f in sys.constraints:
        used |= {v for v in f.variables() if v.is_known}
    return sorted(used)


def _under(binding: dict, pair: tuple, via: str, **kw) -> Outcome:
    return Outcome(frozenset({U}), witness={"binding": dict(binding), "pair": pair}, via=via, **kw)


def _linear_pair(sys: ConstraintSystem, sol) -> tuple | None:
    """Two numeric solutions whose outputs differ, from an RREF solution."""
    p = sys.p
    target = None
    for o in sys.output:
        st = sol.status.get(o)
        if st is FREE:
            target = o
            break
        if isinstance(st, Pivot) and st.deps:
            target = next(iter(st.deps))
            break
    if target is None:
        return None

    def assign(flip: int) -> dict:
        free = {v: 0 for v, st in sol.status.items() if st is FREE}
        free[target] = flip
        out = dict(free)
        for v, st in sol.status.items():
            if isinstance(st, Pivot):
                val = st.value + sum(c * free[f] for f, c in st.deps.items())
                out[v] = val % p
        return out

    return assign(0), assign(1)


def _numeric(sys: ConstraintSystem, ctx: Context) -> Outcome:
    """Analysis of a system with no known inputs in its constraints."""
    binding = {k: 0 for k in sys.known}
    cls = classify_circuit(sys)
    if cls is not CircuitClass.HIGHER_ORDER:
        sol = gauss_jordan(to_matrix(sys), deadline=ctx.deadline)
        if not sol.consistent:
            return Outcome(frozenset({O}), via="elimination")
        if check_uniqueness(sol, sys.output):
            return Outcome(frozenset({E}), via="elimination")
        return _under(binding, _linear_pair(sys, sol), "elimination")
    gen = groebner_generic(sys, ctx)
    if gen.unit:
        return Outcome(frozenset({O}), via="groebner")
    vr = variety_outputs(gen.gb, sys, ctx)
    if vr.kind is Variety.EMPTY:
        return Outcome(frozenset({O}), via="groebner")
    if vr.kind is Variety.UNIQUE:
        return Outcome(frozenset({E}), via="groebner")
    if vr.kind is Variety.MULTIPLE:
        return _under(binding, vr.pair, "groebner")
    return Outcome(ALL, via="groebner", reason=vr.reason)


def _points(vs: list, p: int, limit: int):
    """All points of F_p^len(vs) when there are at most `limit`, else None."""
    if p ** len(vs) > limit:
        return None
    return [dict(zip(vs, xs)) for xs in itertools.product(range(p), repeat=len(vs))]


def _exceptional_bindings(polys: list, p: int, cfg: Config) -> tuple[list, bool]:
    """Bindings covering every zero of every polynomial, and whether complete."""
    from . import univariate as uni

    found: dict = {}
    complete = True
    for f in polys:
        vs = sorted(f.variables())
        if not vs:
            continue
        if len(vs) == 1:
            zeros = [{vs[0]: r} for r in uni.roots(f.to_dense(vs[0]), p)]
        else:
            pts = _points(vs, p, cfg.exceptional_points)
            if pts is None:
                complete = False
                continue
            zeros = [pt for pt in pts if f.evaluate(pt) == 0]
        for z in zeros:
            found.setdefault(tuple(sorted((v.index, x) for v, x in z.items())), z)
    keys = sorted(found)
    if len(keys) > cfg.max_exceptional:
        complete = False
        keys = keys[: cfg.max_exceptional]
    return [found[k] for k in keys], complete


def _generic_points(ks: list, polys: list, p: int, ctx: Context) -> tuple[list, bool | None]:
    """Sample input points where no polynomial vanishes.

    The flag says whether such points exist: True/False when the input
    space was enumerated, None when only sampled.
    """
    cfg = ctx.config
    want = cfg.witness_samples
    pts = _points(ks, p, cfg.exceptional_points)
    if pts is not None:
        good = [pt for pt in pts if all(f.evaluate(pt) for f in polys)]
        if len(good) > want:
            good = ctx.rng.sample(good, want)
        return good, bool(good)
    good = []
    for _ in range(4 * want):
        pt = {k: ctx.rng.randrange(p) for k in ks}
        if all(f.evaluate(pt) for f in polys):
            good.append(pt)
            if len(good) >= want:
                break
    return good, None


def _symbolic(sys: ConstraintSystem, ctx: Context):
    """Generic label set with the inputs symbolic: (region, ledger, conditions, via).

    A region of None means no input admits a solution at all.
    """
    if classify_circuit(sys) is CircuitClass.HIGHER_ORDER:
        gen = groebner_generic(sys, ctx)
        if gen.unit:
            return None, [], [], "groebner"
        present = set().union(*(g.variables() for g in gen.gb.generators))
        unknown_present = [u for u in sys.unknowns if u in present]
        if gen.conditions:
            region = frozenset({O})
        elif all(o in present for o in sys.output) and set(unknown_present) <= gen.determined:
            region = frozenset({E})
        elif all(o in gen.determined for o in sys.output):
            region = frozenset({E, O})
        else:
            region = ALL
        return region, gen.ledger, gen.conditions, "groebner"
    sol = gauss_jordan(to_matrix(sys), deadline=ctx.deadline)
    if not sol.consistent:
        region = frozenset({O})
    elif check_uniqueness(sol, sys.output):
        region = frozenset({E})
    else:
        region = frozenset({U, E})
    return region, sol.ledger, sol.conditions, "elimination"


def _by_input(sys: ConstraintSystem, ks: list, ctx: Context, why: str, cands: list) -> Outcome:
    """Fallback when symbolic work runs out: analyse each input point, if few."""
    pts = _points(ks, sys.p, ctx.config.input_enumeration)
    if pts is None:
        samples, _ = _generic_points(ks, [], sys.p, ctx)
        for pt in samples:
            sub = analyze(sys.substitute(pt), ctx)
            if sub.witness:
                return _under({**sub.witness["binding"], **pt}, sub.witness["pair"],
                              "sampled-input", candidates=cands)
        return Outcome(ALL, relaxed=True, reason=why, candidates=cands, symbolic=True)
    regions = []
    relaxed = False
    for pt in pts:
        sub = analyze(sys.substitute(pt), ctx)
        if sub.witness:
            return _under({**sub.witness["binding"], **pt}, sub.witness["pair"],
                          "input-enumeration", candidates=cands)
        regions.append(sub.possible)
        relaxed |= sub.relaxed
    return Outcome(combine(regions), relaxed=relaxed, via="input-enumeration", candidates=cands)


# ----------------------------------------------------------------- analysis


def analyze(sys: ConstraintSystem, ctx: Context) -> Outcome:
    key = (frozenset(sys.constraints), tuple((v.index, v.kind) for v in sys.variables))
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    ctx.check_time()
    try:
        out = _analyze(sys, ctx)
    except ResourceExhausted as e:
        if e.reason == "timeout":
            raise
        out = Outcome(ALL, relaxed=True, reason=e.reason)
    ctx.memo[key] = out
    return out


def _analyze(sys: ConstraintSystem, ctx: Context) -> Outcome:
    p = sys.p
    cfg = ctx.config
    if not sys.constraints:
        if not sys.output:
            return Outcome(frozenset({E}), via="empty")
        a = {u: 0 for u in sys.unknowns}
        b = dict(a)
        b[sys.output[0]] = 1
        return _under({k: 0 for k in sys.known}, (a, b), "empty")

    ks = _used_known(sys)
    if not ks:
        return _numeric(sys, ctx)

    # special inputs suggested by vanishing coefficients
    cands = undetermined_coeff_solutions(sys)
    if len(cands) > cfg.max_candidates:
        log.info("trying %d of %d candidate inputs", cfg.max_candidates, len(cands))
    over_binding = None
    for c in cands[: cfg.max_candidates]:
        sub = analyze(sys.substitute(c.binding), ctx)
        if sub.witness:
            binding = {**sub.witness["binding"], **c.binding}
            return _under(binding, sub.witness["pair"], "candidate", candidates=cands)
        if sub.possible == {O} and not sub.relaxed and over_binding is None:
            over_binding = c.binding

    # symbolic pass
    try:
        region, ledger, conditions, via = _symbolic(sys, ctx)
    except ResourceExhausted as e:
        if e.reason == "timeout":
            raise
        return _by_input(sys, ks, ctx, e.reason, cands)
    if region is None:
        return Outcome(frozenset({O}), via=via, candidates=cands)
    special = ledger + conditions

    # look for a concrete witness at ordinary inputs
    samples, generic_exists = _generic_points(ks, special, p, ctx)
    if U in region:
        for pt in samples:
            sub = analyze(sys.substitute(pt), ctx)
            if sub.witness:
                binding = {**sub.witness["binding"], **pt}
                return _under(binding, sub.witness["pair"], via, candidates=cands,
                              ledger=ledger, symbolic=True)

    # inputs where the symbolic pass may not apply
    bindings, complete = _exceptional_bindings(special, p, cfg)
    regions = [] if generic_exists is False else [region]
    relaxed = not complete
    reason = ""
    for b in bindings:
        sub = analyze(sys.substitute(b), ctx)
        if sub.witness:
            binding = {**sub.witness["binding"], **b}
            return _under(binding, sub.witness["pair"], "special-input", candidates=cands,
                          ledger=ledger, symbolic=True)
        regions.append(sub.possible)
        relaxed |= sub.relaxed
        reason = reason or sub.reason
        if sub.possible == {O} and not sub.relaxed and over_binding is None:
            over_binding = b
    return Outcome(
        combine(regions), ledger=list(ledger), conditions=list(conditions), relaxed=relaxed,
        via=via, reason=reason, over_binding=over_binding, candidates=cands, symbolic=True,
    )


# ------------------------------------------------------------------- grading


def _names(d: dict) -> dict:
    return {v.name: x for v, x in sorted(d.items())}


def _verify(sys: ConstraintSystem, w: dict) -> tuple[dict, list] | None:
    """Complete and check a witness; returns (evidence, differing outputs)."""
    binding = {k: w["binding"].get(k, 0) for k in sys.known}
    a, b = w["pair"]
    fa = {**binding, **{u: a.get(u, 0) for u in sys.unknowns}}
    fb = {**binding, **{u: b.get(u, 0) for u in sys.unknowns}}
    if not (sys.is_satisfied(fa) and sys.is_satisfied(fb)):
        return None
    differ = [o for o in sys.output if fa[o] != fb[o]]
    if not differ:
        return None
    ev = {
        "binding": _names(binding),
        "free_outputs": [o.name for o in differ],
        "witness": [_names({u: fa[u] for u in sys.unknowns}), _names({u: fb[u] for u in sys.unknowns})],
    }
    return ev, differ


def grade(sys: ConstraintSystem, out: Outcome) -> tuple[Category, dict, str]:
    ev: dict = {"via": out.via}
    if out.candidates:
        ev["candidates"] = [{"binding": c.named(), "frequency": c.frequency} for c in out.candidates]
    if out.witness:
        checked = _verify(sys, out.witness)
        if checked is None:
            log.error("discarding a witness that failed verification")
            return Category.UNKNOWN, ev, "witness-verification-failed"
        ev.update(checked[0])
        return Category.PRECISELY_UNDER, ev, ""
    if out.over_binding is not None:
        ev["over_binding"] = _names(out.over_binding)
    if out.relaxed:
        ev["relaxed"] = True
    P = out.possible
    precise = not out.ledger and not out.conditions and not out.relaxed
    if precise and P == {E}:
        return Category.PRECISELY_EXACT, ev, ""
    if precise and P == {O}:
        return Category.PRECISELY_OVER, ev, ""
    symbolic = out.symbolic or bool(out.ledger or out.conditions)
    if symbolic and E in P and P <= {U, E}:
        return Category.ALGEBRAIC_EXACT, ev, ""
    if symbolic and P and P <= {E, O}:
        return Category.ALGEBRAIC_OVER, ev, ""
    return Category.UNKNOWN, ev, out.reason or "undecided"


def check(sys: ConstraintSystem, config: Config | Context | None = None) -> Verdict:
    """Check one constraint system; failures fold into an Unknown verdict."""
    ctx = context(config)
    t0 = time.perf_counter()
    cls = classify_circuit(sys) if sys.constraints else None
    try:
        out = analyze(sys, ctx)
        category, ev, reason = grade(sys, out)
        ledger = list(out.ledger) + list(out.conditions)
    except ResourceExhausted as e:
        category, ev, reason, ledger = Category.UNKNOWN, {}, e.reason, []
    except MemoryError:
        ctx.memo.clear()
        category, ev, reason, ledger = Category.UNKNOWN, {}, "memory", []
    return Verdict(category, ev, ledger, time.perf_counter() - t0, cls, reason)
