"""Dense univariate polynomials over a prime field GF(p).

Polynomials are lists of ints in [0, p), lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from typing import Sequence

Poly = list


def trim(f: Sequence[int]) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence[int]) -> int:
    return len(f) - 1


def add(f: Sequence[int], g: Sequence[int], p: int) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(f: Sequence[int], g: Sequence[int], p: int) -> Poly:
    return add(f, [(-c) % p for c in g], p)


def mul(f: Sequence[int], g: Sequence[int], p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def divmod_(f: Sequence[int], g: Sequence[int], p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(r) - dg, 0)
    while len(r) - 1 >= dg and r:
        c = r[-1] * inv_lead % p
        shift = len(r) - 1 - dg
        q[shift] = c
        if c:
            for i, b in enumerate(g):
                r[shift + i] = (r[shift + i] - c * b) % p
        r.pop()
        r = trim(r)
    return trim(q), r


def mod(f: Sequence[int], g: Sequence[int], p: int) -> Poly:
    return divmod_(f, g, p)[1]


def monic(f: Sequence[int], p: int) -> Poly:
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd(f: Sequence[int], g: Sequence[int], p: int) -> Poly:
    a, b = trim(f), trim(g)
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> Poly:
    result: Poly = [1]
    b = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, b, p), m, p)
        b = mod(mul(b, b, p), m, p)
        e >>= 1
    return mod(result, m, p)


def evaluate(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or's test: f has no factor of degree <= deg(f)/2."""
    f = trim(f)
    k = degree(f)
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(k // 2):
        h = powmod(h, p, f, p)
        if len(gcd(f, sub(h, x, p), p)) > 1:
            return False
    return True


def roots(f: Sequence[int], p: int) -> list[int]:
    """All distinct roots of f in GF(p), p an odd prime, sorted.

    Cantor-Zassenhaus equal-degree splitting with a deterministic sweep of
    shifts a = 0, 1, 2, ... instead of random ones.
    """
    f = monic(trim(f), p)
    if len(f) <= 1:
        return []
    x = [0, 1]
    xp = powmod(x, p, f, p)
    g = gcd(f, sub(xp, x, p), p)
    out = _split(g, p)
    return sorted(out)


def _split(g: Poly, p: int) -> list[int]:
    d = degree(g)
    if d <= 0:
        return []
    if d == 1:
        return [(-g[0]) * pow(g[1], -1, p) % p]
    if p == 2:
        return [r for r in (0, 1) if evaluate(g, r, p) == 0]
    half = (p - 1) // 2
    a = 0
    while True:
        h = powmod([a % p, 1], half, g, p)
        h = gcd(g, sub(h, [1], p), p)
        if 0 < degree(h) < d:
            return _split(h, p) + _split(divmod_(g, h, p)[0], p)
        a += 1
        if a >= p:  # pragma: no cover - cannot happen for a squarefree split polynomial
            raise ArithmeticError("root splitting failed")
