"""Sparse multivariate polynomials and rational functions over F_p.

A monomial is a tuple of ``(Var, exponent)`` pairs sorted by variable index,
with the empty tuple standing for 1.  Coefficients are canonical ``int``
residues; every polynomial carries its modulus ``p``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from . import univariate as uni
from .field import FieldElement, signed


class Kind(enum.Enum):
    KNOWN = "input"
    TEMP = "temp"
    OUTPUT = "output"
    AUX = "aux"


UNKNOWN_KINDS = frozenset({Kind.TEMP, Kind.OUTPUT, Kind.AUX})


@dataclass(frozen=True, order=True)
class Var:
    index: int
    kind: Kind = field(compare=False)
    name: str = field(compare=False, default="")

    def __post_init__(self):
        if not self.name:
            object.__setattr__(self, "name", f"v{self.index}")

    @property
    def is_known(self) -> bool:
        return self.kind is Kind.KNOWN

    def __repr__(self) -> str:
        return self.name


Monomial = tuple  # tuple[tuple[Var, int], ...]
ONE: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va.index == vb.index:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va.index < vb.index:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_split(m: Monomial, kinds=UNKNOWN_KINDS) -> tuple[Monomial, Monomial]:
    """Split into (part whose variables have kind in `kinds`, the rest)."""
    inside = tuple(ve for ve in m if ve[0].kind in kinds)
    outside = tuple(ve for ve in m if ve[0].kind not in kinds)
    return inside, outside


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in m)


# ---------------------------------------------------------------- orders


class MonomialOrder:
    """Total, multiplicative monomial order; larger `key` means larger monomial."""

    def key(self, m: Monomial):
        raise NotImplementedError

    def sort_vars(self, variables: Iterable[Var]) -> list[Var]:
        """Variables from largest to smallest."""
        return sorted(set(variables))

    def dense_key(self, variables: list[Var]):
        """Key function on exponent tuples aligned with `sort_vars` output."""
        raise NotImplementedError


def _grevlex_dense(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class GrevLex(MonomialOrder):
    """Graded reverse lex; lower variable index is the larger variable."""

    def key(self, m):
        return (mono_degree(m), tuple((-v.index, -e) for v, e in reversed(m)))

    def dense_key(self, variables):
        return _grevlex_dense

    def __eq__(self, other):
        return isinstance(other, GrevLex)

    def __hash__(self):
        return hash("grevlex")

    def __repr__(self):
        return "GrevLex()"


class Lex(MonomialOrder):
    def __init__(self, priority: Iterable[Var]):
        self.priority = list(dict.fromkeys(priority))
        self._rank = {v: i for i, v in enumerate(self.priority)}

    def _r(self, v: Var) -> int:
        r = self._rank.get(v)
        return r if r is not None else len(self._rank) + v.index

    def key(self, m):
        return tuple((-self._r(v), e) for v, e in sorted(m, key=lambda ve: self._r(ve[0])))

    def sort_vars(self, variables):
        return sorted(set(variables), key=self._r)

    def dense_key(self, variables):
        return None  # the exponent tuple itself

    def __eq__(self, other):
        return isinstance(other, Lex) and self.priority == other.priority

    def __hash__(self):
        return hash(("lex", tuple(self.priority)))

    def __repr__(self):
        return f"Lex({self.priority})"


class BlockOrder(MonomialOrder):
    """Grevlex on `first` variables, ties broken by grevlex on the rest.

    With the unknowns as the first block this is an elimination order
    for them, so a basis doubles as one over the rational functions in
    the remaining (known) variables.
    """

    def __init__(self, first: Iterable[Var]):
        self.first = frozenset(first)

    def _split(self, m):
        a = tuple(ve for ve in m if ve[0] in self.first)
        b = tuple(ve for ve in m if ve[0] not in self.first)
        return a, b

    def key(self, m):
        a, b = self._split(m)
        g = GrevLex()
        return g.key(a) + g.key(b)

    def sort_vars(self, variables):
        return sorted(set(variables), key=lambda v: (v not in self.first, v.index))

    def dense_key(self, variables):
        n = sum(1 for v in variables if v in self.first)

        def k(e):
            return _grevlex_dense(e[:n]) + _grevlex_dense(e[n:])

        return k

    def __eq__(self, other):
        return isinstance(other, BlockOrder) and self.first == other.first

    def __hash__(self):
        return hash(("block", self.first))

    def __repr__(self):
        return f"BlockOrder({sorted(self.first)})"


GREVLEX = GrevLex()


# ----------------------------------------------------------- polynomials

Scalar = Union[int, FieldElement]


class Polynomial:
    __slots__ = ("p", "terms", "_hash")

    def __init__(self, p: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.p = int(p)
        self._hash = None
        clean = {}
        for m, c in (terms or {}).items():
            c = int(c) % self.p
            if c:
                clean[m] = c
        self.terms: dict = clean

    @classmethod
    def _raw(cls, p: int, terms: dict) -> Polynomial:
        obj = cls.__new__(cls)
        obj.p = p
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, p: int, c: Scalar) -> Polynomial:
        return cls(p, {ONE: c})

    @classmethod
    def var(cls, p: int, v: Var, exp: int = 1) -> Polynomial:
        return cls._raw(p, {((v, exp),): 1})

    @classmethod
    def zero(cls, p: int) -> Polynomial:
        return cls._raw(p, {})

    # -- predicates and accessors

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE in self.terms)

    @property
    def constant(self) -> int:
        """Coefficient of the monomial 1."""
        return self.terms.get(ONE, 0)

    def variables(self) -> frozenset:
        return frozenset(v for m in self.terms for v, _ in m)

    def is_univariate(self) -> bool:
        return len(self.variables()) <= 1

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, kinds) -> int:
        kinds = frozenset(kinds)
        return max(
            (sum(e for v, e in m if v.kind in kinds) for m in self.terms), default=0
        )

    def degree_of(self, v: Var) -> int:
        return max((e for m in self.terms for w, e in m if w == v), default=0)

    def only_kinds(self, kinds) -> bool:
        return all(v.kind in kinds for v in self.variables())

    # -- arithmetic

    def _check(self, other: Polynomial):
        if other.p != self.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(p, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        p = self.p
        return Polynomial._raw(p, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> Polynomial:
        c = int(c) % self.p
        if c == 0:
            return Polynomial.zero(self.p)
        if c == 1:
            return self
        p = self.p
        return Polynomial._raw(p, {m: a * c % p for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = (out.get(m, 0) + ca * cb) % p
        return Polynomial._raw(p, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def mul_term(self, mono: Monomial, c: int) -> Polynomial:
        p = self.p
        return Polynomial._raw(
            p, {mono_mul(m, mono): a * c % p for m, a in self.terms.items()}
        )

    def __pow__(self, e: int) -> Polynomial:
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(self.p, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.p == other.p and self.terms == other.terms
        if isinstance(other, (int, FieldElement)):
            return self.terms == Polynomial.const(self.p, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- structure

    def collect_by_unknowns(self, kinds=UNKNOWN_KINDS) -> dict:
        """Map each monomial in the unknowns to its coefficient polynomial in K."""
        out: dict = {}
        p = self.p
        for m, c in self.terms.items():
            u, k = mono_split(m, kinds)
            out.setdefault(u, {})[k] = c
        return {u: Polynomial._raw(p, t) for u, t in out.items()}

    def substitute(self, binding: Mapping) -> Polynomial:
        """Evaluate the bound variables; values may be scalars or polynomials."""
        if not binding:
            return self
        p = self.p
        scalars: dict = {}
        polys: dict = {}
        for v, val in binding.items():
            if isinstance(val, Polynomial):
                polys[v] = val
            else:
                scalars[v] = int(val) % p
        out: dict = {}
        poly_terms = []
        for m, c in self.terms.items():
            rest = []
            sub = []
            for v, e in m:
                if v in scalars:
                    c = c * pow(scalars[v], e, p) % p
                    if not c:
                        break
                elif v in polys:
                    sub.append((v, e))
                else:
                    rest.append((v, e))
            else:
                if not c:
                    continue
                if sub:
                    poly_terms.append((tuple(rest), c, sub))
                else:
                    m2 = tuple(rest)
                    out[m2] = (out.get(m2, 0) + c) % p
        result = Polynomial._raw(p, {m: c for m, c in out.items() if c})
        for rest, c, sub in poly_terms:
            term = Polynomial._raw(p, {rest: c})
            for v, e in sub:
                term = term * polys[v] ** e
            result = result + term
        return result

    def evaluate(self, assignment: Mapping) -> int:
        p = self.p
        acc = 0
        for m, c in self.terms.items():
            for v, e in m:
                c = c * pow(int(assignment[v]), e, p) % p
            acc += c
        return acc % p

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Monomial, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list:
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self.terms:
            return self
        return self.scale(pow(self.leading_term(order)[1], -1, self.p))

    # -- univariate bridge

    def to_dense(self, v: Var | None = None) -> list:
        vs = self.variables()
        if len(vs) > 1 or (v is not None and vs and v not in vs):
            raise ValueError("not univariate in the requested variable")
        coeffs = [0] * (self.total_degree() + 1)
        for m, c in self.terms.items():
            coeffs[m[0][1] if m else 0] = c
        return uni.trim(coeffs)

    @classmethod
    def from_dense(cls, p: int, coeffs: list, v: Var) -> Polynomial:
        terms = {}
        for i, c in enumerate(coeffs):
            if c % p:
                terms[((v, i),) if i else ONE] = c % p
        return cls._raw(p, terms)

    # -- division

    def divide(self, divisor: Polynomial, order: MonomialOrder = GREVLEX):
        """Single-divisor multivariate division; returns (quotient, remainder)."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        lm, lc = divisor.leading_term(order)
        inv_lc = pow(lc, -1, p)
        lm_exp = dict(lm)
        q = Polynomial.zero(p)
        r: dict = {}
        f = self
        while not f.is_zero():
            m, c = f.leading_term(order)
            me = dict(m)
            if all(me.get(v, 0) >= e for v, e in lm_exp.items()):
                quo = tuple(
                    (v, e - lm_exp.get(v, 0)) for v, e in m if e - lm_exp.get(v, 0) > 0
                )
                k = c * inv_lc % p
                q = q + Polynomial._raw(p, {quo: k})
                f = f - divisor.mul_term(quo, k)
            else:
                r[m] = c
                f = Polynomial._raw(p, {mm: cc for mm, cc in f.terms.items() if mm != m})
        return q, Polynomial._raw(p, r)

    def exact_quotient(self, divisor: Polynomial, order: MonomialOrder = GREVLEX):
        """self / divisor when the division is exact, else None."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self
        if not divisor.variables() <= self.variables() and not divisor.is_constant():
            return None
        p = self.p
        lm, lc = divisor.leading_term(order)
        inv_lc = pow(lc, -1, p)
        lm_exp = dict(lm)
        f = dict(self.terms)
        q: dict = {}
        while f:
            m = max(f, key=order.key)
            me = dict(m)
            if any(me.get(v, 0) < e for v, e in lm_exp.items()):
                return None
            quo = tuple((v, e - lm_exp.get(v, 0)) for v, e in m if e - lm_exp.get(v, 0) > 0)
            k = f[m] * inv_lc % p
            q[quo] = k
            for dm, dc in divisor.terms.items():
                t = mono_mul(quo, dm)
                c = (f.get(t, 0) - k * dc) % p
                if c:
                    f[t] = c
                else:
                    f.pop(t, None)
        return Polynomial._raw(p, q)

    # -- printing

    def format(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            s = signed(c, self.p)
            neg = s < 0
            a = abs(s)
            if m == ONE:
                body = str(a)
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{a}*{mono_str(m)}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r}, p={self.p})"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def total_degree(f: Polynomial) -> int:
    return f.total_degree()


def degree_in(f: Polynomial, kinds) -> int:
    return f.degree_in(kinds)


def collect_by_unknowns(f: Polynomial) -> dict:
    return f.collect_by_unknowns()


def substitute(f: Polynomial, binding: Mapping) -> Polynomial:
    return f.substitute(binding)


def normalize_monic(f: Polynomial) -> Polynomial:
    """Canonical scalar multiple, used to deduplicate assumption ledgers."""
    return f.monic(GREVLEX)


# ----------------------------------------------------- rational functions


class RationalFunction:
    """num/den with den a nonzero polynomial in the known variables.

    Normalisation is best effort: constant denominators are folded into
    the numerator, univariate pairs in one variable are reduced by their
    gcd, and exact multivariate quotients are detected by division.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        p = num.p
        if den is None:
            den = Polynomial.const(p, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def const(cls, p: int, c: Scalar) -> RationalFunction:
        return cls(Polynomial.const(p, c))

    @property
    def p(self) -> int:
        return self.num.p

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    @property
    def constant(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant * pow(self.den.constant, -1, self.p) % self.p

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    def _lift(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        # Only exact for normalised forms; equality is by cross-multiplication.
        if self.is_polynomial():
            return hash(self.num.scale(pow(self.den.constant, -1, self.p)))
        return hash((self.num.monic(), self.den.monic()))

    def substitute(self, binding: Mapping) -> RationalFunction:
        return RationalFunction(self.num.substitute(binding), self.den.substitute(binding))

    def evaluate(self, assignment: Mapping) -> int:
        d = self.den.evaluate(assignment)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(assignment) * pow(d, -1, self.p) % self.p

    def __str__(self) -> str:
        if self.den == 1:
            return self.num.format()
        return f"({self.num.format()})/({self.den.format()})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _normalize(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    p = num.p
    if num.is_zero():
        return num, Polynomial.const(p, 1)
    if den.is_constant():
        return num.scale(pow(den.constant, -1, p)), Polynomial.const(p, 1)
    dv = den.variables()
    nv = num.variables()
    if len(dv) == 1 and nv <= dv:
        (v,) = dv
        g = uni.gcd(num.to_dense(v), den.to_dense(v), p)
        if len(g) > 1:
            num = Polynomial.from_dense(p, uni.divmod_(num.to_dense(v), g, p)[0], v)
            den = Polynomial.from_dense(p, uni.divmod_(den.to_dense(v), g, p)[0], v)
    else:
        q = num.exact_quotient(den)
        if q is not None:
            return q, Polynomial.const(p, 1)
        if not num.is_constant():
            q = den.exact_quotient(num)
            if q is not None:
                return _normalize(Polynomial.const(p, 1), q)
    lc = den.leading_term()[1]
    if lc != 1:
        inv_lc = pow(lc, -1, p)
        num, den = num.scale(inv_lc), den.scale(inv_lc)
    if den.is_constant():
        return num.scale(pow(den.constant, -1, p)), Polynomial.const(p, 1)
    return num, den
