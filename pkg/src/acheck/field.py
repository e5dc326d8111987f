"""Prime-field arithmetic.

Residues are kept canonical (``0 <= r < p``).  Hot loops elsewhere in the
package work on plain ``int`` residues; :class:`FieldElement` is the
user-facing scalar.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

#: Scalar field of BN254, the default curve of the Circom toolchain.
BN254 = 21888242871839275222246405745257275088548364400416034343698204186575808495617

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@lru_cache(maxsize=256)
def is_probable_prime(n: int, rounds: int = 64) -> bool:
    """Miller-Rabin with `rounds` bases drawn from an n-seeded generator."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Prime:
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.value!r}")
        if not is_probable_prime(self.value):
            raise ValueError(f"{self.value} is not prime")

    def __int__(self) -> int:
        return self.value

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.value, self)

    @property
    def byte_size(self) -> int:
        """Bytes needed for a little-endian residue, rounded to 8 like circom."""
        n = (self.value.bit_length() + 7) // 8
        return (n + 7) // 8 * 8


class FieldMismatch(ValueError):
    """Operands live in different prime fields."""


@dataclass(frozen=True)
class FieldElement:
    residue: int
    prime: Prime

    def __post_init__(self):
        if not 0 <= self.residue < self.prime.value:
            raise ValueError(f"residue {self.residue} not reduced mod {self.prime.value}")

    @property
    def p(self) -> int:
        return self.prime.value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.prime.value != self.prime.value:
                raise FieldMismatch(f"mod {self.p} vs mod {other.p}")
            return other.residue
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def _new(self, r: int) -> FieldElement:
        return FieldElement(r % self.p, self.prime)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue * o)

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return self._new(-self.residue)

    def inverse(self) -> FieldElement:
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return self._new(pow(self.residue, -1, self.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._new(o).inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** -e
        return self._new(pow(self.residue, e, self.p))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.residue == other.residue and self.p == other.p
        if isinstance(other, int):
            return self.residue == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.residue, self.p))

    def __int__(self) -> int:
        return self.residue

    def __bool__(self) -> bool:
        return self.residue != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.residue}, mod {self.p})"

    def __str__(self) -> str:
        return str(self.residue)


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def parse_le_bytes(data: bytes, prime: Prime) -> FieldElement:
    return prime(int.from_bytes(data, "little"))


def to_le_bytes(value: int, size: int) -> bytes:
    return value.to_bytes(size, "little")


def signed(r: int, p: int) -> int:
    """Representative of r in (-p/2, p/2], handy for printing."""
    return r - p if r > p // 2 else r
