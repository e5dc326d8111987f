"""Exhaustive ground truth for tiny systems, vectorised with numpy.

Every variable gets its own array axis of length p, so a constraint
evaluates over the whole grid by broadcasting.  Axes are ordered known
inputs, then outputs, then the remaining unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import ConstraintSystem
from .errors import AcheckError
from .verdict import Truth

DEFAULT_MAX_POINTS = 10_000_000
_MAX_P = 1 << 31  # keeps products of residues inside int64


class OracleRefused(AcheckError):
    """The enumeration would exceed its budget."""


@dataclass
class OracleResult:
    label: Truth
    per_input: dict = field(default_factory=dict)  # tuple of known values -> Truth
    known: tuple = ()


def oracle(sys: ConstraintSystem, max_points: int = DEFAULT_MAX_POINTS) -> OracleResult:
    p = sys.p
    known = list(sys.known)
    outputs = list(sys.output)
    rest = [v for v in sys.unknowns if v not in set(outputs)]
    order = known + outputs + rest
    n = len(order)
    if p >= _MAX_P or p**n > max_points:
        raise OracleRefused(f"{p}^{n} points exceed the budget of {max_points}")
    axis = {v: i for i, v in enumerate(order)}
    base = np.arange(p, dtype=np.int64)

    def power(v, e):
        shape = [1] * n
        shape[axis[v]] = p
        vals = base if e == 1 else np.array([pow(x, e, p) for x in range(p)], dtype=np.int64)
        return vals.reshape(shape)

    sat = np.ones([p] * n, dtype=bool)
    cache: dict = {}
    for f in sys.constraints:
        total = np.zeros([1] * n, dtype=np.int64)
        for m, c in f.terms.items():
            term = np.full([1] * n, c, dtype=np.int64)
            for v, e in m:
                key = (v, e)
                if key not in cache:
                    cache[key] = power(v, e)
                term = term * cache[key] % p
            total = (total + term) % p
        sat &= np.broadcast_to(total == 0, sat.shape)

    nk, no = len(known), len(outputs)
    if rest:
        sat = sat.any(axis=tuple(range(nk + no, n)))
    counts = sat.reshape([p] * nk + [-1]).sum(axis=-1) if no else sat.astype(np.int64)
    labels = np.where(counts == 0, 0, np.where(counts == 1, 1, 2))
    names = {0: Truth.OVER, 1: Truth.EXACT, 2: Truth.UNDER}
    per_input = {}
    for idx in np.ndindex(*labels.shape):
        per_input[tuple(int(i) for i in idx)] = names[int(labels[idx])]
    if (labels == 2).any():
        label = Truth.UNDER
    elif (labels == 0).any():
        label = Truth.OVER
    else:
        label = Truth.EXACT
    return OracleResult(label, per_input, tuple(known))
