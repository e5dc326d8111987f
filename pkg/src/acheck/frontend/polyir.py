"""PolyIR: a small text format for polynomial constraint systems.

    # comments run to the end of the line
    prime 7;                 # optional, BN254 when absent
    input x; output y; temp t; aux a;
    eq y - x*x;              # read as "= 0"
    eq t^2 = y + 1;          # "lhs = rhs" means lhs - rhs = 0

Expressions use ``+ - * ^ ( )``, decimal literals and declared names.
Names may contain letters, digits, ``_``, ``.``, ``[`` and ``]`` so that
compiler signal paths such as ``main.bits[0]`` survive unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..circuit import ConstraintSystem, reduce_degree
from ..errors import FormatError
from ..field import BN254, Prime
from ..poly import Kind, Polynomial, Var

MAX_REDUCTION_ROUNDS = 64

_KINDS = {"input": Kind.KNOWN, "output": Kind.OUTPUT, "temp": Kind.TEMP, "aux": Kind.AUX}
_KEYWORDS = {"prime", "eq", *_KINDS}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.\[\]]*)
  | (?P<op>[-+*^()=;])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    text: str
    line: int


def _tokens(text: str) -> list:
    out = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormatError(f"unexpected character {text[pos]!r}", line=line)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind not in ("ws", "comment"):
            out.append(_Tok(kind, m.group(), line))
        pos = m.end()
    out.append(_Tok("end", "", line))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.p = BN254
        self.vars: dict[str, Var] = {}
        self.override: Prime | None = None

    # -- token helpers

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.take()
        if t.text != text:
            got = t.text or "end of input"
            raise FormatError(f"expected {text!r}, got {got!r}", line=t.line)
        return t

    # -- statements

    def document(self) -> tuple[Prime, list, list]:
        rows: list = []
        t = self.peek()
        if t.text == "prime":
            self.take()
            n = self.take()
            if n.kind != "num":
                raise FormatError("prime needs a decimal modulus", line=n.line)
            try:
                self.prime = Prime(int(n.text))
            except ValueError as e:
                raise FormatError(str(e), line=n.line) from None
            self.expect(";")
        else:
            self.prime = Prime(BN254)
        if self.override is not None:
            self.prime = self.override
        self.p = self.prime.value
        while self.peek().kind != "end":
            t = self.take()
            if t.text in _KINDS:
                name = self.take()
                if name.kind != "name" or name.text in _KEYWORDS:
                    raise FormatError(f"bad variable name {name.text!r}", line=name.line)
                if name.text in self.vars:
                    raise FormatError(f"duplicate declaration of {name.text!r}", line=name.line)
                self.vars[name.text] = Var(len(self.vars) + 1, _KINDS[t.text], name.text)
                self.expect(";")
            elif t.text == "eq":
                lhs = self.expr()
                if self.peek().text == "=":
                    self.take()
                    lhs = lhs - self.expr()
                self.expect(";")
                rows.append(lhs)
            elif t.text == "prime":
                raise FormatError("prime must come first and only once", line=t.line)
            else:
                raise FormatError(f"unexpected {t.text!r}", line=t.line)
        return self.prime, list(self.vars.values()), rows

    # -- expressions: sum of products of powers of atoms

    def expr(self) -> Polynomial:
        acc = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek().text == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        if self.peek().text == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            e = self.take()
            if e.kind != "num" or int(e.text) < 1:
                raise FormatError("exponent must be a positive integer", line=e.line)
            base = base ** int(e.text)
        return base

    def atom(self) -> Polynomial:
        t = self.take()
        if t.kind == "num":
            return Polynomial.const(self.p, int(t.text))
        if t.kind == "name" and t.text not in _KEYWORDS:
            v = self.vars.get(t.text)
            if v is None:
                raise FormatError(f"undeclared variable {t.text!r}", line=t.line)
            return Polynomial.var(self.p, v)
        if t.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise FormatError(f"unexpected {t.text or 'end of input'!r}", line=t.line)


def parse_polyir(
    text: str, name: str = "", reduce: bool = True, prime: int | None = None
) -> ConstraintSystem:
    """Parse a PolyIR document; unknown-degree > 2 terms are split by reduce_degree.

    `prime` replaces the modulus declared in the document.
    """
    parser = _Parser(text)
    if prime is not None:
        try:
            parser.override = Prime(prime)
        except ValueError as e:
            raise FormatError(str(e)) from None
    prime, variables, rows = parser.document()
    sys = ConstraintSystem(prime, tuple(variables), tuple(f for f in rows if not f.is_zero()), name)
    if reduce:
        sys = reduce_degree(sys, max_rounds=MAX_REDUCTION_ROUNDS)
    return sys


def format_polyir(sys: ConstraintSystem) -> str:
    """Print a system so that parse_polyir(format_polyir(s)) reproduces it."""
    keyword = {k: w for w, k in _KINDS.items()}
    lines = [f"prime {sys.p};"]
    lines += [f"{keyword[v.kind]} {v.name};" for v in sys.variables]
    lines += [f"eq {f.format()};" for f in sys.constraints]
    return "\n".join(lines) + "\n"
