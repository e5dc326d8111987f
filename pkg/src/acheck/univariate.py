"""Dense univariate polynomials over F_p, coefficient lists low-to-high.

Only what root finding and rational-function cancellation need: division,
gcd, modular powering and Cantor-Zassenhaus splitting into linear factors.
"""

from __future__ import annotations

import random

Coeffs = list  # list[int], index = degree


def trim(a: Coeffs) -> Coeffs:
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Coeffs) -> int:
    return len(a) - 1


def add(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out)


def mul(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % p for c in out])


def divmod_(a: Coeffs, b: Coeffs, p: int) -> tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    inv_lead = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv_lead % p
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] = (r[k + j] - c * b[j]) % p
    return trim(q), trim(r[:db])


def monic(a: Coeffs, p: int) -> Coeffs:
    if not a:
        return []
    inv_lead = pow(a[-1], -1, p)
    return [c * inv_lead % p for c in a]


def gcd(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, divmod_(a, b, p)[1]
    return monic(a, p)


def powmod(base: Coeffs, e: int, mod: Coeffs, p: int) -> Coeffs:
    result = [1]
    base = divmod_(base, mod, p)[1]
    while e:
        if e & 1:
            result = divmod_(mul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = divmod_(mul(base, base, p), mod, p)[1]
    return result


def evaluate(a: Coeffs, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


# Below this size, scanning the whole field beats the gcd machinery.
_SCAN_LIMIT = 64


def roots(f: Coeffs, p: int, seed: int = 0) -> list[int]:
    """Distinct roots of f in F_p, ascending.  f must be nonzero."""
    f = trim(list(f))
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    if len(f) == 1:
        return []
    if p <= _SCAN_LIMIT:
        return [x for x in range(p) if evaluate(f, x, p) == 0]
    f = monic(f, p)
    xp = powmod([0, 1], p, f, p)
    g = gcd(f, sub(xp, [0, 1], p), p)
    found: list[int] = []
    _split(g, p, random.Random(seed), found)
    return sorted(found)


def _split(g: Coeffs, p: int, rng: random.Random, out: list[int]) -> None:
    # g is monic and a product of distinct linear factors.
    d = degree(g)
    if d <= 0:
        return
    if d == 1:
        out.append(-g[0] % p)
        return
    while True:
        a = rng.randrange(p)
        t = sub(powmod([a, 1], (p - 1) // 2, g, p), [1], p)
        h = gcd(g, t, p)
        if 0 < degree(h) < d:
            _split(h, p, rng, out)
            _split(divmod_(g, h, p)[0], p, rng, out)
            return
