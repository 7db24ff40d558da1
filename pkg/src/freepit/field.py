"""Exact scalar arithmetic: rationals, prime fields GF(p) and extensions GF(p^k).

A :class:`FieldSpec` describes the field; scalars are plain Python values
handled through FieldSpec methods (``F.add(a, b)``, ``F.mul(a, b)``, ...):

* rationals: ``gmpy2.mpq``
* GF(p): ``int`` in ``[0, p)``
* GF(p^k): ``int`` code ``c0 + c1*p + ... + c_{k-1}*p^(k-1)`` for the residue
  ``c0 + c1*a + ...`` modulo the defining polynomial of ``a``.

Every element of a prime subfield therefore has the same code in every
extension of it, which is what :meth:`FieldSpec.embed` relies on.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Iterator, Sequence

import gmpy2
from gmpy2 import mpq

from . import gfpoly
from .errors import FieldError, FieldMismatchError, FieldTooSmallError

#: 2^61 - 1, the default working prime.
DEFAULT_PRIME = 2305843009213693951

#: Random rational samples are nonzero integers in [-Q_SAMPLE_BOUND, Q_SAMPLE_BOUND].
Q_SAMPLE_BOUND = 2**20

# Extension fields up to this order get log/Zech tables.
_TABLE_LIMIT = 2**16

Scalar = Any


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int
    extension_degree: int = 1
    modulus: tuple[int, ...] = dc_field(default=(), compare=True)

    # -- descriptive -----------------------------------------------------

    @property
    def kind(self) -> str:
        if self.characteristic == 0:
            return "Q"
        return "prime" if self.extension_degree == 1 else "ext"

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def size(self) -> int | None:
        """Number of elements, ``None`` for the rationals."""
        if self.characteristic == 0:
            return None
        return self.characteristic**self.extension_degree

    @property
    def sample_size(self) -> int:
        """Size of the set random nonzero samples are drawn from."""
        if self.characteristic == 0:
            return 2 * Q_SAMPLE_BOUND
        return self.size - 1

    def __str__(self) -> str:
        if self.characteristic == 0:
            return "Q"
        if self.extension_degree == 1:
            return str(self.characteristic)
        return f"{self.characteristic}^{self.extension_degree}"

    # -- constants and conversion -----------------------------------------

    @property
    def zero(self) -> Scalar:
        return mpq(0) if self.characteristic == 0 else 0

    @property
    def one(self) -> Scalar:
        return mpq(1) if self.characteristic == 0 else 1

    def from_int(self, n: int) -> Scalar:
        if self.characteristic == 0:
            return mpq(n)
        # the constant coefficient is the lowest base-p digit
        return int(n) % self.characteristic

    def from_rational(self, num: int, den: int = 1) -> Scalar:
        if self.characteristic == 0:
            return mpq(num, den)
        return self.div(self.from_int(num), self.from_int(den))

    def prime_subfield_int(self, a: Scalar) -> int:
        """Integer representative of ``a`` if it lies in the prime subfield."""
        if self.characteristic == 0:
            if a.denominator != 1:
                raise FieldMismatchError(f"{a} is not an integer")
            return int(a.numerator)
        if a >= self.characteristic:
            raise FieldMismatchError(f"{self.to_str(a)} is not in the prime subfield")
        return a

    def embed(self, a: Scalar, source: "FieldSpec") -> Scalar:
        """Map a scalar of ``source`` into this field.

        Supported: identity, and prime-subfield elements between fields of the
        same characteristic.
        """
        if source == self:
            return a
        if source.characteristic != self.characteristic:
            raise FieldMismatchError(f"cannot embed GF({source}) scalar into {self}")
        if self.characteristic == 0:
            return a
        if a >= self.characteristic:
            raise FieldMismatchError(
                f"{source.to_str(a)} is not in the prime subfield of {source}"
            )
        return a

    def to_str(self, a: Scalar) -> str:
        if self.extension_degree == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in self._digits(a)) + "]"

    def from_str(self, text: str) -> Scalar:
        text = text.strip()
        if self.characteristic == 0:
            return mpq(text)
        if self.extension_degree == 1:
            return int(text) % self.characteristic
        if not (text.startswith("[") and text.endswith("]")):
            raise FieldError(f"bad scalar for {self}: {text!r}")
        digits = [int(t) % self.characteristic for t in text[1:-1].split(",")]
        if len(digits) != self.extension_degree:
            raise FieldError(f"bad scalar for {self}: {text!r}")
        return self._encode(digits)

    def check(self, a: Scalar) -> bool:
        if self.characteristic == 0:
            return isinstance(a, type(mpq(0)))
        return isinstance(a, int) and 0 <= a < self.size

    # -- arithmetic ------------------------------------------------------

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        kind = self.kind
        if kind == "Q":
            return a + b
        if kind == "prime":
            return (a + b) % self.characteristic
        if self._tables is None:
            return self._encode(gfpoly.add(self._digits(a), self._digits(b), self.characteristic))
        if a == 0:
            return b
        if b == 0:
            return a
        exp, log, zech = self._tables
        q1 = self.size - 1
        la = log[a]
        z = zech[(log[b] - la) % q1]
        if z < 0:
            return 0
        return exp[la + z]

    def neg(self, a: Scalar) -> Scalar:
        if self.kind == "Q":
            return -a
        if self.kind == "prime":
            return (-a) % self.characteristic
        p = self.characteristic
        return self._encode([(-c) % p for c in self._digits(a)])

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == "Q":
            return a - b
        if self.kind == "prime":
            return (a - b) % self.characteristic
        return self.add(a, self.neg(b))

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        kind = self.kind
        if kind == "Q":
            return a * b
        if kind == "prime":
            return a * b % self.characteristic
        if a == 0 or b == 0:
            return 0
        if self._tables is not None:
            exp, log, _ = self._tables
            return exp[log[a] + log[b]]
        p = self.characteristic
        prod = gfpoly.mod(gfpoly.mul(self._digits(a), self._digits(b), p), self.modulus, p)
        return self._encode(prod)

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        kind = self.kind
        if kind == "Q":
            return 1 / a
        if kind == "prime":
            return pow(a, -1, self.characteristic)
        if self._tables is not None:
            exp, log, _ = self._tables
            return exp[(-log[a]) % (self.size - 1)]
        return self.pow(a, self.size - 2)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def pow(self, a: Scalar, e: int) -> Scalar:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.kind == "Q":
            return a**e
        if self.kind == "prime":
            return pow(a, e, self.characteristic)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def sum(self, values: Sequence[Scalar]) -> Scalar:
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    # -- sampling and enumeration ------------------------------------------

    def random_nonzero(self, rng: random.Random) -> Scalar:
        if self.characteristic == 0:
            v = rng.randint(1, Q_SAMPLE_BOUND)
            return mpq(v if rng.random() < 0.5 else -v)
        return rng.randrange(1, self.size)

    def random_element(self, rng: random.Random) -> Scalar:
        if self.characteristic == 0:
            return mpq(rng.randint(-Q_SAMPLE_BOUND, Q_SAMPLE_BOUND))
        return rng.randrange(self.size)

    def elements(self) -> Iterator[Scalar]:
        if self.characteristic == 0:
            raise FieldError("the rationals cannot be enumerated")
        return iter(range(self.size))

    def nonzero_elements(self, count: int) -> list[Scalar]:
        """The first ``count`` nonzero elements in a fixed deterministic order."""
        if self.characteristic == 0:
            return [mpq(i) for i in range(1, count + 1)]
        if count > self.size - 1:
            raise FieldTooSmallError(f"{self} has fewer than {count} nonzero elements")
        return list(range(1, count + 1))

    # -- internals ---------------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        p = self.characteristic
        out = []
        for _ in range(self.extension_degree):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(digits)):
            code = code * self.characteristic + c
        return code

    @cached_property
    def _tables(self):
        if self.kind != "ext" or self.size > _TABLE_LIMIT:
            return None
        q = self.size
        p = self.characteristic
        gen = _find_generator(self)
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for e in range(q - 1):
            exp[e] = x
            log[x] = e
            x = self._encode(
                gfpoly.mod(gfpoly.mul(self._digits(x), self._digits(gen), p), self.modulus, p)
            )
        for e in range(q - 1, 2 * (q - 1)):
            exp[e] = exp[e - (q - 1)]
        zech = [0] * (q - 1)
        for e in range(q - 1):
            s = self._encode(gfpoly.add(self._digits(exp[e]), [1], p))
            zech[e] = log[s] if s else -1
        log[0] = -1
        return exp, log, zech


def _prime_factors(m: int) -> list[int]:
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out.append(m)
    return out


def _find_generator(F: FieldSpec) -> int:
    """Smallest code generating the multiplicative group of a small extension field."""
    q = F.size
    p = F.characteristic
    factors = _prime_factors(q - 1)

    def slow_pow(a: int, e: int) -> list[int]:
        return gfpoly.powmod(F._digits(a), e, F.modulus, p)

    for g in range(2, q):
        if all(slow_pow(g, (q - 1) // r) != [1] for r in factors):
            return g
    raise AssertionError("no generator found")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """Build GF(p^k), or the rationals when ``p == 0``.

    For ``k > 1`` the defining polynomial is the first monic irreducible one in
    a lexicographic scan (lowest coefficient varying fastest).
    """
    p, k = int(p), int(k)
    if k < 1:
        raise FieldError(f"extension degree must be positive, got {k}")
    if p == 0:
        if k != 1:
            raise FieldError("the rationals have no proper extensions here")
        return FieldSpec(0, 1, ())
    if p < 2 or not gmpy2.is_prime(p):
        raise FieldError(f"characteristic must be 0 or prime, got {p}")
    if k == 1:
        return FieldSpec(p, 1, ())
    for code in range(p**k):
        coeffs = []
        c = code
        for _ in range(k):
            c, r = divmod(c, p)
            coeffs.append(r)
        if coeffs[0] == 0:
            continue
        if gfpoly.is_irreducible(coeffs + [1], p):
            return FieldSpec(p, k, tuple(coeffs + [1]))
    raise AssertionError("irreducible polynomial search failed")  # pragma: no cover


RATIONALS = make_field(0)


def parse_field(text: str) -> FieldSpec:
    """Parse the textual field form ``"Q" | "p" | "p^k"``."""
    t = text.strip()
    if t in ("Q", "q"):
        return RATIONALS
    try:
        if "^" in t:
            base, exp = t.split("^", 1)
            return make_field(int(base), int(exp))
        return make_field(int(t), 1)
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise
        raise FieldError(f"cannot parse field {text!r}") from exc


def extend_to_size(F: FieldSpec, min_size: int) -> FieldSpec:
    """Smallest field GF(p^(k*m)) extending ``F`` with at least ``min_size`` elements.

    The rationals, and finite fields already large enough, are returned as is.
    """
    if F.characteristic == 0 or F.size >= min_size:
        return F
    p, k = F.characteristic, F.extension_degree
    m = 1
    while p ** (k * m) < min_size:
        m += 1
    return make_field(p, k * m)


# -- separating elements ---------------------------------------------------


def separating_polynomial(n: int) -> list[int]:
    """Integer coefficients of G(y) = prod_{i<j} (y^i + y^j)(y^i - y^j), lowest first.

    Each factor pair equals y^(2i) - y^(2j).
    """
    g = [1]
    for j in range(2, n + 1):
        for i in range(1, j):
            factor = [0] * (2 * j + 1)
            factor[2 * i] += 1
            factor[2 * j] -= 1
            prod = [0] * (len(g) + len(factor) - 1)
            for a, ca in enumerate(g):
                if ca:
                    for b, cb in enumerate(factor):
                        if cb:
                            prod[a + b] += ca * cb
            g = prod
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    return g


def is_separating(alphas: Sequence[Scalar], F: FieldSpec) -> bool:
    """True iff b_i*a_i + b_j*a_j != 0 for all i < j and signs b_i, b_j."""
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            a, b = alphas[i], alphas[j]
            if F.add(a, b) == 0 or F.sub(a, b) == 0:
                return False
    return True


def _needs_extension(n: int, F: FieldSpec) -> bool:
    return F.characteristic != 0 and F.characteristic <= 2 * n


def separating_elements_in(F: FieldSpec, n: int) -> tuple[Scalar, ...]:
    """Separating elements inside ``F`` itself.

    Raises FieldTooSmallError when ``F`` has no element alpha with G(alpha) != 0.
    """
    if not _needs_extension(n, F):
        return tuple(F.from_int(i) for i in range(1, n + 1))
    for alpha in range(1, F.size):
        powers = [F.pow(alpha, i) for i in range(1, n + 1)]
        if _g_nonzero(powers, F):
            return tuple(powers)
    raise FieldTooSmallError(f"{F} contains no separating elements for n={n}")


def _g_nonzero(powers: Sequence[Scalar], F: FieldSpec) -> bool:
    for j in range(1, len(powers)):
        for i in range(j):
            if F.sub(F.mul(powers[i], powers[i]), F.mul(powers[j], powers[j])) == 0:
                return False
    return True


def find_separating_elements(n: int, F: FieldSpec) -> tuple[FieldSpec, tuple[Scalar, ...]]:
    """Return ``(F', (alpha_1, ..., alpha_n))`` with every ``±alpha_i ± alpha_j != 0``.

    In characteristic 0 or above 2n this is ``(F, (1, ..., n))``.  Otherwise
    ``F'`` is the smallest extension of ``F`` with more elements than deg G,
    where G(y) = prod_{i<j}(y^i+y^j)(y^i-y^j); the first alpha in code order
    with G(alpha) != 0 yields alpha_i = alpha^i.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not _needs_extension(n, F):
        return F, separating_elements_in(F, n)
    deg_g = len(separating_polynomial(n)) - 1
    ext = extend_to_size(F, deg_g + 1)
    return ext, separating_elements_in(ext, n)
