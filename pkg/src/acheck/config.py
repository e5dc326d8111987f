"""Tunable limits shared by the checkers."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field

from .errors import ResourceExhausted
from .groebner import DEFAULT_MAX_BASIS, DEFAULT_MAX_PAIRS, DEFAULT_MAX_STEPS, Limits


@dataclass(frozen=True)
class Config:
    timeout: float | None = 600.0  # seconds per circuit
    memory_limit: int | None = 8 << 30  # bytes of address space, enforced by the bench and CLI
    max_candidates: int = 64  # special-input candidates tried
    enum_unknowns: int = 10  # point search only below this many unknowns
    small_field: int = 1 << 16  # free variables are enumerated up to this p
    max_branches: int = 1_000_000  # search-tree nodes
    field_equations: int = 64  # point search adds x^p - x for p up to this
    exceptional_points: int = 4096  # zero enumeration budget per polynomial
    max_exceptional: int = 256  # special bindings examined
    witness_samples: int = 8  # generic input points tried for a witness
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_basis: int = DEFAULT_MAX_BASIS
    max_steps: int = DEFAULT_MAX_STEPS  # Groebner reduction work per basis
    symbolic_steps: int = 200_000  # same, while inputs are symbolic
    input_enumeration: int = 256  # inputs checked one by one if symbolic work runs out
    seed: int = 0

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Context:
    """Per-check state: deadline, memo table and a seeded RNG."""

    config: Config = field(default_factory=Config)
    deadline: float | None = None
    memo: dict = field(default_factory=dict)
    rng: random.Random = None

    def __post_init__(self):
        if self.deadline is None and self.config.timeout is not None:
            self.deadline = time.monotonic() + self.config.timeout
        if self.rng is None:
            self.rng = random.Random(self.config.seed)

    def limits(self, symbolic: bool = False) -> Limits:
        c = self.config
        steps = min(c.symbolic_steps, c.max_steps) if symbolic else c.max_steps
        return Limits(c.max_pairs, c.max_basis, self.deadline, steps)

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExhausted("timeout")


def context(config: Config | Context | None) -> Context:
    if isinstance(config, Context):
        return config
    return Context(config or Config())
