"""Groebner bases over F_p with Buchberger's algorithm.

Internally polynomials are dicts from dense exponent tuples to residues,
with variables ordered from largest to smallest under the active monomial
order.  Basis elements are kept monic.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ResourceExhausted
from .poly import GREVLEX, BlockOrder, GrevLex, Lex, MonomialOrder, Polynomial, Var

DEFAULT_MAX_PAIRS = 20_000
DEFAULT_MAX_BASIS = 2_000
DEFAULT_MAX_STEPS = 5_000_000


@dataclass
class Limits:
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_basis: int = DEFAULT_MAX_BASIS
    deadline: float | None = None  # time.monotonic() value
    max_steps: int = DEFAULT_MAX_STEPS  # term reductions, summed over the run
    steps: int = 0

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExhausted("timeout")

    def spend(self, n: int):
        self.steps += n
        if self.steps > self.max_steps:
            raise ResourceExhausted("reduction-steps")
        self.check_time()


@dataclass
class GroebnerBasis:
    generators: list  # list[Polynomial], descending by leading monomial
    order: MonomialOrder
    domain: str = "constant"  # or "rational-in-K"
    ledger: list = field(default_factory=list)

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant() and not self.generators[0].is_zero()

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


# --------------------------------------------------------------- internals


def _grevlex_neg(e):
    return (-sum(e), tuple(reversed(e)))


class _Ring:
    """Dense view of a set of variables under a monomial order."""

    def __init__(self, variables: Iterable[Var], order: MonomialOrder, p: int):
        self.p = p
        self.order = order
        self.vars: list[Var] = order.sort_vars(variables)
        self.pos = {v: i for i, v in enumerate(self.vars)}
        self.n = len(self.vars)
        self.by_index = sorted(range(self.n), key=lambda i: self.vars[i].index)
        if isinstance(order, GrevLex):
            self.nkey = _grevlex_neg
        elif isinstance(order, Lex):
            self.nkey = lambda e: tuple(-x for x in e)
        elif isinstance(order, BlockOrder):
            k = sum(1 for v in self.vars if v in order.first)
            self.nkey = lambda e: _grevlex_neg(e[:k]) + _grevlex_neg(e[k:])
        else:  # pragma: no cover - custom orders
            dk = order.dense_key(self.vars)
            raise TypeError(f"unsupported monomial order {order!r} ({dk})")

    def to_dense(self, f: Polynomial) -> dict:
        out = {}
        n = self.n
        pos = self.pos
        for m, c in f.terms.items():
            e = [0] * n
            for v, k in m:
                e[pos[v]] = k
            out[tuple(e)] = c
        return out

    def to_poly(self, d: dict) -> Polynomial:
        vs = self.vars
        terms = {}
        for e, c in d.items():
            terms[tuple((vs[i], e[i]) for i in self.by_index if e[i])] = c
        return Polynomial._raw(self.p, terms)

    def lm(self, d: dict):
        return min(d, key=self.nkey)


class _Elt:
    __slots__ = ("lm", "terms", "tail", "mask")

    def __init__(self, terms: dict, lm):
        self.terms = terms
        self.lm = lm
        self.tail = [(m, c) for m, c in terms.items() if m != lm]
        self.mask = sum(1 << i for i, x in enumerate(lm) if x)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _monic(d: dict, lm, p: int) -> dict:
    c = d[lm]
    if c == 1:
        return d
    inv = pow(c, -1, p)
    return {m: a * inv % p for m, a in d.items()}


def _nf(f: dict, basis: Sequence[_Elt], ring: _Ring, limits: Limits | None = None) -> dict:
    """Full normal form of f modulo the monic elements of `basis`."""
    if not f or not basis:
        return dict(f)
    p = ring.p
    nkey = ring.nkey
    f = dict(f)
    heap = [(nkey(m), m) for m in f]
    heapq.heapify(heap)
    r = {}
    steps = 0
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if not c:
            continue
        mmask = 0
        for i, x in enumerate(m):
            if x:
                mmask |= 1 << i
        for g in basis:
            if g.mask & ~mmask:
                continue
            glm = g.lm
            if not _divides(glm, m):
                continue
            q = tuple(a - b for a, b in zip(m, glm))
            steps += len(g.tail)
            for mg, cg in g.tail:
                mm = tuple(a + b for a, b in zip(mg, q))
                old = f.get(mm)
                if old is None:
                    f[mm] = (-c * cg) % p
                    heapq.heappush(heap, (nkey(mm), mm))
                else:
                    new = (old - c * cg) % p
                    if new:
                        f[mm] = new
                    else:
                        del f[mm]
            break
        else:
            r[m] = c
        steps += 1
        if limits is not None and steps >= 1024:
            limits.spend(steps)
            steps = 0
    if limits is not None:
        limits.spend(steps)
    return r


def _spoly(a: _Elt, b: _Elt, p: int) -> dict:
    lcm = _lcm(a.lm, b.lm)
    qa = tuple(x - y for x, y in zip(lcm, a.lm))
    qb = tuple(x - y for x, y in zip(lcm, b.lm))
    out: dict = {}
    for m, c in a.tail:
        mm = tuple(x + y for x, y in zip(m, qa))
        out[mm] = (out.get(mm, 0) + c) % p
    for m, c in b.tail:
        mm = tuple(x + y for x, y in zip(m, qb))
        out[mm] = (out.get(mm, 0) - c) % p
    return {m: c for m, c in out.items() if c}


def _gm_update(G: list, B: set, ih: int, elts: list) -> tuple[list, set]:
    """Gebauer-Moeller installation of a new element: product and chain criteria."""
    mh = elts[ih].lm
    C = list(G)
    D: list = []
    while C:
        ig = C.pop()
        lcm1 = _lcm(mh, elts[ig].lm)
        if _coprime(mh, elts[ig].lm) or not (
            any(_divides(_lcm(mh, elts[j].lm), lcm1) for j in C)
            or any(_divides(_lcm(mh, elts[j].lm), lcm1) for j in D)
        ):
            D.append(ig)
    E = [ig for ig in D if not _coprime(mh, elts[ig].lm)]
    B_new = set()
    for i, j in B:
        lij = _lcm(elts[i].lm, elts[j].lm)
        if (
            not _divides(mh, lij)
            or _lcm(elts[i].lm, mh) == lij
            or _lcm(mh, elts[j].lm) == lij
        ):
            B_new.add((i, j))
    for ig in E:
        B_new.add((ig, ih))
    G_new = [ig for ig in G if not _divides(mh, elts[ig].lm)]
    G_new.append(ih)
    return G_new, B_new


def _is_const(d: dict) -> bool:
    return len(d) == 1 and not any(next(iter(d)))


def _buchberger_dense(F: list, ring: _Ring, limits: Limits) -> list:
    """Reduced basis (list of monic dense dicts) of the ideal generated by F."""
    p = ring.p
    nkey = ring.nkey
    F = [f for f in F if f]
    if not F:
        return []
    one = tuple([0] * ring.n)
    if any(_is_const(f) for f in F):
        return [{one: 1}]
    F.sort(key=lambda f: nkey(ring.lm(f)), reverse=True)  # smallest leading monomial first
    elts: list[_Elt] = []
    G: list = []
    B: set = set()

    def install(h: dict) -> bool:
        nonlocal G, B
        lm = ring.lm(h)
        h = _monic(h, lm, p)
        if not any(lm):
            return True
        elts.append(_Elt(h, lm))
        if len(elts) > limits.max_basis:
            raise ResourceExhausted("basis-size")
        G, B = _gm_update(G, B, len(elts) - 1, elts)
        return False

    for f in F:
        h = _nf(f, [elts[i] for i in G], ring, limits)
        if h and install(h):
            return [{one: 1}]

    processed = 0
    while B:
        pair = min(
            B,
            key=lambda ij: (
                sum(_lcm(elts[ij[0]].lm, elts[ij[1]].lm)),
                nkey(_lcm(elts[ij[0]].lm, elts[ij[1]].lm)),
                ij,
            ),
        )
        B.discard(pair)
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceExhausted("pair-count")
        if processed % 64 == 0:
            limits.check_time()
        s = _spoly(elts[pair[0]], elts[pair[1]], p)
        if not s:
            continue
        h = _nf(s, [elts[i] for i in G], ring, limits)
        if h and install(h):
            return [{one: 1}]

    return _reduce_basis([elts[i] for i in G], ring, limits)


def _reduce_basis(gs: list, ring: _Ring, limits: Limits | None = None) -> list:
    nkey = ring.nkey
    gs = sorted(gs, key=lambda g: nkey(g.lm), reverse=True)  # ascending monomials
    minimal: list[_Elt] = []
    for g in gs:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        tail = _nf(dict(g.tail), others, ring, limits)
        tail[g.lm] = 1
        out.append(tail)
    out.sort(key=lambda d: nkey(ring.lm(d)))
    return out


def _collect_vars(polys) -> set:
    vs: set = set()
    for f in polys:
        vs |= f.variables()
    return vs


# -------------------------------------------------------------- public API


def buchberger(
    polys: Sequence[Polynomial],
    order: MonomialOrder = GREVLEX,
    limits: Limits | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `polys`."""
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return GroebnerBasis([], order)
    p = polys[0].p
    ring = _Ring(_collect_vars(polys), order, p)
    dense = _buchberger_dense([ring.to_dense(f) for f in polys], ring, limits or Limits())
    return GroebnerBasis([ring.to_poly(d) for d in dense], order)


def normal_form(
    f: Polynomial, basis: Iterable[Polynomial], order: MonomialOrder = GREVLEX
) -> Polynomial:
    """Remainder of f on division by `basis` (full reduction, all terms)."""
    basis = [g for g in basis if not g.is_zero()]
    if not basis:
        return f
    ring = _Ring(_collect_vars(basis) | f.variables(), order, f.p)
    elts = []
    for g in basis:
        d = ring.to_dense(g)
        lm = ring.lm(d)
        elts.append(_Elt(_monic(d, lm, f.p), lm))
    return ring.to_poly(_nf(ring.to_dense(f), elts, ring))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    ring = _Ring(f.variables() | g.variables(), order, f.p)
    elts = []
    for h in (f, g):
        d = ring.to_dense(h)
        lm = ring.lm(d)
        elts.append(_Elt(_monic(d, lm, f.p), lm))
    return ring.to_poly(_spoly(elts[0], elts[1], f.p))


def is_groebner_basis(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Every S-polynomial of a pair of generators reduces to zero."""
    basis = [g for g in basis if not g.is_zero()]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not normal_form(s_polynomial(basis[i], basis[j], order), basis, order).is_zero():
                return False
    return True


def is_reduced(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Monic, and no leading monomial divides any term of another generator."""
    lms = [g.leading_term(order) for g in basis]
    for (m, c) in lms:
        if c != 1:
            return False
    for i, g in enumerate(basis):
        for j, (m, _) in enumerate(lms):
            if i == j:
                continue
            me = dict(m)
            for t in g.terms:
                te = dict(t)
                if all(te.get(v, 0) >= e for v, e in me.items()):
                    return False
    return True


def power_normal_form(
    v: Var, e: int, basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
    limits: Limits | None = None,
) -> Polynomial:
    """Normal form of v**e modulo a Groebner basis, by square-and-multiply."""
    basis = [g for g in basis if not g.is_zero()]
    p = basis[0].p if basis else None
    if p is None:
        raise ValueError("empty basis")
    ring = _Ring(_collect_vars(basis) | {v}, order, p)
    elts = []
    for g in basis:
        d = ring.to_dense(g)
        lm = ring.lm(d)
        elts.append(_Elt(_monic(d, lm, p), lm))
    one = tuple([0] * ring.n)
    x = tuple(1 if w == v else 0 for w in ring.vars)

    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(s + t for s, t in zip(ma, mb))
                out[m] = (out.get(m, 0) + ca * cb) % p
        return _nf({m: c for m, c in out.items() if c}, elts, ring, limits)

    result = {one: 1}
    base = _nf({x: 1}, elts, ring, limits)
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return ring.to_poly(result)
