"""Deterministic sparse interpolation and test sets for commutative polynomials.

Interpolation follows Ben-Or and Tiwari: variable v is sent to the v-th prime
p_v, so a monomial m evaluates to the integer m(p) and the sequence
a_t = f(p_1^t, ..., p_N^t) is a sum of s geometric progressions.  Its minimal
recurrence (Berlekamp-Massey) has the m(p) as roots, trial division by the
primes recovers the exponents, and a Vandermonde solve yields coefficients.

Over GF(p^k) the same scheme works when p exceeds every m(p); over Q the
roots are found modulo a prime larger than twice that bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

import gmpy2

from . import gfpoly
from .errors import FieldTooSmallError, InfeasibleError, InterpolationError
from .field import FieldSpec, Scalar
from .freegroup import CommPoly, monomial
from .matrix import SquareMatrix, solve

CommBlackBox = Callable[[Sequence[Scalar]], Scalar]


@lru_cache(maxsize=None)
def first_primes(count: int) -> tuple[int, ...]:
    out, p = [], 1
    for _ in range(count):
        p = int(gmpy2.next_prime(p))
        out.append(p)
    return tuple(out)


def berlekamp_massey(seq: Sequence[Scalar], F: FieldSpec) -> list[Scalar]:
    """Shortest connection polynomial [1, c_1, ..., c_L] with sum_i c_i a_(t-i) = 0."""
    c, b = [F.one], [F.one]
    length, shift, last = 0, 1, F.one
    for t, a in enumerate(seq):
        disc = a
        for i in range(1, length + 1):
            disc = F.add(disc, F.mul(c[i], seq[t - i]))
        if disc == 0:
            shift += 1
            continue
        coef = F.div(disc, last)
        new = c + [F.zero] * max(0, len(b) + shift - len(c))
        for i, v in enumerate(b):
            new[i + shift] = F.sub(new[i + shift], F.mul(coef, v))
        if 2 * length <= t:
            b, length, last, shift = c, t + 1 - length, disc, 1
        else:
            shift += 1
        c = new
    return (c + [F.zero] * (length + 1))[: length + 1]


def _integer_roots(conn: Sequence[Scalar], F: FieldSpec, bound: int) -> list[int]:
    """Distinct integer roots in [1, bound] of z^L * conn(1/z), via a prime field."""
    rev = list(reversed(conn))
    if F.characteristic == 0:
        if any(v.denominator != 1 for v in rev):
            raise InterpolationError("recurrence has non-integral coefficients")
        q = int(gmpy2.next_prime(2 * bound))
        coeffs = [int(v.numerator) % q for v in rev]
    else:
        q = F.characteristic
        coeffs = [F.prime_subfield_int(v) for v in rev]
    found = gfpoly.roots(coeffs, q)
    if len(found) != len(rev) - 1:
        raise InterpolationError("recurrence does not split into distinct roots")
    return found


def _exponents(value: int, primes: Sequence[int]) -> list[int] | None:
    if value <= 0:
        return None
    exps = []
    for p in primes:
        e = 0
        while value % p == 0:
            value //= p
            e += 1
        exps.append(e)
    return exps if value == 1 else None


def sparse_interpolate(
    cbb: CommBlackBox,
    N: int,
    d: int,
    s: int,
    field: FieldSpec,
    variables: Sequence | None = None,
) -> CommPoly:
    """Recover the s-sparse, degree <= d polynomial behind ``cbb``.

    ``variables`` names the N coordinates (default 0..N-1).  Raises
    InterpolationError when the bounds turn out to be wrong and
    InfeasibleError when a finite field is too small for the scheme.
    """
    if s < 1 or d < 0 or N < 0:
        raise ValueError("need s >= 1, d >= 0, N >= 0")
    F = field
    variables = list(range(N)) if variables is None else list(variables)
    if len(variables) != N:
        raise ValueError("one name per variable is required")
    primes = first_primes(N + 1)[:N]
    bound = max(primes, default=1) ** d
    if F.is_finite and F.characteristic <= bound:
        raise InfeasibleError(
            f"characteristic {F.characteristic} must exceed {bound} for prime-power interpolation"
        )
    base = [F.from_int(p) for p in primes]

    def point(t: int, bases=base) -> list[Scalar]:
        return [F.pow(b, t) for b in bases]

    seq = [cbb(point(t)) for t in range(2 * s)]
    conn = berlekamp_massey(seq, F)
    length = len(conn) - 1
    terms: dict = {}
    if length:
        roots = _integer_roots(conn, F, bound)
        values, monos = [], []
        for r in roots:
            exps = _exponents(r, primes)
            if exps is None or sum(exps) > d:
                raise InterpolationError(f"root {r} is not a monomial of degree <= {d}")
            values.append(F.from_int(r))
            monos.append(monomial({variables[v]: e for v, e in enumerate(exps)}))
        vander = SquareMatrix(F, [[F.pow(m, t) for m in values] for t in range(length)])
        coeffs = solve(vander, seq[:length])
        terms = dict(zip(monos, coeffs))
    poly = CommPoly(F, terms)
    _verify(poly, cbb, F, N, s, base, point, variables)
    return poly


def _verify(poly, cbb, F, N, s, base, point, variables) -> None:
    shifted = [F.from_int(p) for p in first_primes(2 * N + 1)[N + 1 :]]
    checks = [point(2 * s), point(2 * s + 1), point(1, shifted)]
    for pt in checks:
        if poly.evaluate(dict(zip(variables, pt))) != cbb(pt):
            raise InterpolationError("recovered polynomial disagrees with the black box")


@dataclass(frozen=True)
class TestSet:
    """Points hitting every nonzero s-sparse polynomial of degree <= d in N variables."""

    __test__ = False  # not a pytest class

    N: int
    d: int
    s: int
    field: FieldSpec
    points: tuple[tuple[Scalar, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    def hits(self, f: Callable[[Sequence[Scalar]], Scalar]) -> bool:
        """True iff f is nonzero at some point of the set."""
        return any(f(p) != 0 for p in self.points)


def deterministic_test_set(N: int, d: int, s: int, field: FieldSpec) -> TestSet:
    """Kronecker-style test set.

    For a prime r, y -> (y^(k_1), ..., y^(k_N)) with k_i = (d+1)^(i-1) mod r
    keeps all s monomials distinct unless r divides one of the C(s, 2)
    pairwise Kronecker differences, each below (d+1)^N in absolute value.
    Their product has fewer than M prime factors, so one of the first M
    primes works; for it the univariate restriction has degree <= d(r-1)
    and is nonzero at one of d(r-1)+1 distinct nonzero points.
    """
    if N < 0 or d < 0 or s < 1:
        raise ValueError("need N >= 0, d >= 0, s >= 1")
    F = field
    if N <= 1:
        ys = F.nonzero_elements(d + 1)
        return TestSet(N, d, s, F, tuple((y,) * N for y in ys))
    count = ((d + 1) ** (N * comb(s, 2)) - 1).bit_length() + 1
    primes = first_primes(count)
    need = d * (primes[-1] - 1) + 1
    if F.is_finite and F.size - 1 < need:
        raise FieldTooSmallError(f"{F} has fewer than {need} nonzero elements")
    ys = F.nonzero_elements(need)
    points = []
    seen = set()
    for r in primes:
        ks = [pow(d + 1, i, r) for i in range(N)]
        for y in ys[: d * (r - 1) + 1]:
            pt = tuple(F.pow(y, k) for k in ks)
            if pt not in seen:
                seen.add(pt)
                points.append(pt)
    return TestSet(N, d, s, F, tuple(points))
