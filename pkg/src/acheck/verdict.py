"""Verdict categories and their relation to ground-truth labels."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Category(enum.Enum):
    PRECISELY_UNDER = "precisely-underconstrained"
    PRECISELY_EXACT = "precisely-exact-constrained"
    PRECISELY_OVER = "precisely-overconstrained"
    ALGEBRAIC_EXACT = "algebraic-exact-constrained"
    ALGEBRAIC_OVER = "algebraic-overconstrained"
    UNKNOWN = "unknown"

    @property
    def is_precise(self) -> bool:
        return self.name.startswith("PRECISELY")


class Truth(enum.Enum):
    """Ground-truth label produced by exhaustive enumeration."""

    UNDER = "under"
    EXACT = "exact"
    OVER = "over"


_ALLOWED = {
    Category.PRECISELY_UNDER: {Truth.UNDER},
    Category.PRECISELY_EXACT: {Truth.EXACT},
    Category.PRECISELY_OVER: {Truth.OVER},
    Category.ALGEBRAIC_EXACT: {Truth.UNDER, Truth.EXACT},
    Category.ALGEBRAIC_OVER: {Truth.EXACT, Truth.OVER},
    Category.UNKNOWN: set(Truth),
}


def allowed_truths(c: Category) -> frozenset:
    return frozenset(_ALLOWED[c])


@dataclass
class Verdict:
    category: Category
    evidence: dict = field(default_factory=dict)
    ledger: list = field(default_factory=list)  # K-polynomials assumed nonzero
    seconds: float = 0.0
    circuit_class: Any = None  # CircuitClass, or None for trivial systems
    reason: str = ""  # set for Unknown

    def to_json(self) -> dict:
        return {
            "category": self.category.value,
            "class": self.circuit_class.value if self.circuit_class is not None else None,
            "evidence": self.evidence,
            "ledger": [str(f) for f in self.ledger],
            "seconds": round(self.seconds, 6),
            "reason": self.reason,
        }


def consistent(v: Verdict | Category, truth: Truth) -> bool:
    category = v.category if isinstance(v, Verdict) else v
    return truth in _ALLOWED[category]
