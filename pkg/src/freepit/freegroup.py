"""The free group algebra F<X, X^-1>, its commutative encoding, and isolating index sets.

Words are tuples of :class:`Letter`; a *reduced* word never contains a letter
next to its own inverse.  An :class:`AlgebraElement` is a finite map from
reduced words to nonzero scalars.
"""

from __future__ import annotations

import json
from collections import defaultdict
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import DimensionMismatchError, FieldMismatchError, InvalidAssignment, NotInImage
from .field import FieldSpec, Scalar
from .matrix import SquareMatrix, identity, mat_add, mat_mul, mat_scale, row_times, zero_matrix


class Letter(NamedTuple):
    gen: int
    sign: int  # +1 or -1

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self) -> str:
        return f"x{self.gen}" if self.sign > 0 else f"x{self.gen}^-1"


Word = tuple  # tuple[Letter, ...]

EMPTY: Word = ()


def reduce(letters: Iterable[Letter | tuple[int, int]]) -> Word:
    """Free reduction: cancel adjacent ``x x^-1`` / ``x^-1 x`` until none remain."""
    stack: list[Letter] = []
    for g, s in letters:
        if s not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {s}")
        if stack and stack[-1].gen == g and stack[-1].sign == -s:
            stack.pop()
        else:
            stack.append(Letter(g, s))
    return tuple(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(not (a.gen == b.gen and a.sign == -b.sign) for a, b in zip(w, w[1:]))


def word_concat(u: Word, v: Word) -> Word:
    k = 0
    while k < len(u) and k < len(v) and u[-1 - k].gen == v[k].gen and u[-1 - k].sign == -v[k].sign:
        k += 1
    return u[: len(u) - k] + v[k:]


def word_inverse(w: Word) -> Word:
    return tuple(a.inverse() for a in reversed(w))


def word_key(w: Word) -> tuple:
    """Length-lexicographic order; generator first, then x before x^-1."""
    return (len(w), tuple((a.gen, 0 if a.sign > 0 else 1) for a in w))


def word_str(w: Word) -> str:
    return "*".join(str(a) for a in w) if w else "1"


def parse_word(text: str) -> Word:
    """Inverse of :func:`word_str` (``"x1*x2^-1"``, ``"1"``); the result is reduced."""
    text = text.strip()
    if text in ("", "1"):
        return EMPTY
    letters = []
    for tok in text.split("*"):
        tok = tok.strip()
        sign = 1
        if tok.endswith("^-1"):
            sign, tok = -1, tok[:-3]
        if not tok.startswith("x") or not tok[1:].isdigit():
            raise ValueError(f"bad letter {tok!r}")
        letters.append(Letter(int(tok[1:]), sign))
    return reduce(letters)


def reduced_words(n: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly the given length over x1..xn, in word_key order."""
    letters = [Letter(g, s) for g in range(1, n + 1) for s in (1, -1)]

    def extend(prefix: tuple) -> Iterator[Word]:
        if len(prefix) == length:
            yield prefix
            return
        for a in letters:
            if prefix and prefix[-1].gen == a.gen and prefix[-1].sign == -a.sign:
                continue
            yield from extend(prefix + (a,))

    return extend(())


# ---------------------------------------------------------------------------
# AlgebraElement
# ---------------------------------------------------------------------------


class AlgebraElement:
    """Sparse element ``sum_w c_w w`` of F<X, X^-1>; zero coefficients are never stored."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Mapping[Word, Scalar] | None = None):
        self.field = field
        acc: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            w = reduce(w)
            acc[w] = field.add(acc.get(w, field.zero), c)
        self.terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, field: FieldSpec, terms: dict[Word, Scalar]) -> "AlgebraElement":
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, field: FieldSpec) -> "AlgebraElement":
        return cls._raw(field, {})

    @classmethod
    def constant(cls, field: FieldSpec, c: Scalar) -> "AlgebraElement":
        return cls._raw(field, {EMPTY: c} if c != 0 else {})

    @classmethod
    def word(cls, field: FieldSpec, w: Iterable, c: Scalar | None = None) -> "AlgebraElement":
        c = field.one if c is None else c
        return cls._raw(field, {reduce(w): c} if c != 0 else {})

    # -- queries --

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def sparsity(self) -> int:
        return len(self.terms)

    def coefficient(self, w: Word) -> Scalar:
        return self.terms.get(w, self.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[Word, Scalar]]:
        """Terms in canonical word order."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def homogeneous_part(self, ell: int) -> "AlgebraElement":
        return AlgebraElement._raw(self.field, {w: c for w, c in self.terms.items() if len(w) == ell})

    # -- arithmetic --

    def _same_field(self, other: "AlgebraElement") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_field(other)
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = F.add(out.get(w, F.zero), c)
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        return AlgebraElement._raw(F, out)

    def __neg__(self) -> "AlgebraElement":
        F = self.field
        return AlgebraElement._raw(F, {w: F.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "AlgebraElement":
        F = self.field
        if c == 0:
            return AlgebraElement.zero(F)
        return AlgebraElement._raw(F, {w: F.mul(c, v) for w, v in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_field(other)
        F = self.field
        acc: dict[Word, Scalar] = defaultdict(lambda: F.zero)
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = word_concat(u, v)
                acc[w] = F.add(acc[w], F.mul(a, b))
        return AlgebraElement._raw(F, {w: c for w, c in acc.items() if c != 0})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{self.field.to_str(c)}*{word_str(w)}" for w, c in self.items())

    # -- serialization --

    def to_json_obj(self) -> list[dict[str, str]]:
        return [{"word": word_str(w), "coeff": self.field.to_str(c)} for w, c in self.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, field: FieldSpec, data: str | list) -> "AlgebraElement":
        if isinstance(data, str):
            data = json.loads(data)
        out = cls.zero(field)
        for term in data:
            out = out + cls.word(field, parse_word(term["word"]), field.from_str(term["coeff"]))
        return out


def alg_add(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    return f + g


def alg_scale(c: Scalar, f: AlgebraElement) -> AlgebraElement:
    return f.scale(c)


def alg_mul(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    return f * g


def degree(f: AlgebraElement) -> int:
    """Maximum word length; -1 for the zero element."""
    return f.degree()


def sparsity(f: AlgebraElement) -> int:
    return f.sparsity()


def homogeneous_part(f: AlgebraElement, ell: int) -> AlgebraElement:
    return f.homogeneous_part(ell)


# ---------------------------------------------------------------------------
# Commutative side: variables y_ij, z_ij, xi_j and polynomials over them
# ---------------------------------------------------------------------------


class CommVar(NamedTuple):
    axis: str  # "y", "z" or "xi"
    var_index: int  # generator i for y/z, block index for xi
    position: int = 0  # word position j for y/z; unused for xi

    def __str__(self) -> str:
        if self.axis == "xi":
            return f"xi{self.var_index}"
        return f"{self.axis}{self.var_index}_{self.position}"


Monomial = tuple  # sorted tuple of (variable, positive exponent)


def monomial(powers: Mapping) -> Monomial:
    return tuple(sorted((v, e) for v, e in powers.items() if e))


class CommPoly:
    """Sparse commutative polynomial: monomial -> nonzero coefficient."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Mapping[Monomial, Scalar] | None = None):
        self.field = field
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    def sparsity(self) -> int:
        return len(self.terms)

    def evaluate(self, point: Mapping) -> Scalar:
        F = self.field
        acc = F.zero
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = F.mul(t, F.pow(point[v], e))
            acc = F.add(acc, t)
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
            parts.append(f"{self.field.to_str(c)}*{mono}" if mono else self.field.to_str(c))
        return " + ".join(parts)

    __repr__ = __str__


def phi_word(w: Word) -> Monomial:
    """Encoding of one reduced word: position j carries y_{i,j} (x_i) or z_{i,j} (x_i^-1)."""
    return tuple(sorted((CommVar("y" if a.sign > 0 else "z", a.gen, j), 1) for j, a in enumerate(w, 1)))


def phi(f: AlgebraElement, d_bound: int | None = None) -> CommPoly:
    if d_bound is not None and f.degree() > d_bound:
        raise ValueError(f"degree {f.degree()} exceeds position bound {d_bound}")
    return CommPoly(f.field, {phi_word(w): c for w, c in f.terms.items()})


def phi_inverse_monomial(m: Monomial | Mapping) -> Word:
    """Decode a monomial in the image of phi back to its reduced word."""
    items = list(m.items()) if isinstance(m, Mapping) else list(m)
    by_pos: dict[int, Letter] = {}
    for v, e in items:
        v = CommVar(*v)
        if e != 1:
            raise NotInImage(f"exponent {e} on {v}")
        if v.axis not in ("y", "z"):
            raise NotInImage(f"{v} is not a position variable")
        if v.position in by_pos:
            raise NotInImage(f"two variables at position {v.position}")
        by_pos[v.position] = Letter(v.var_index, 1 if v.axis == "y" else -1)
    if set(by_pos) != set(range(1, len(by_pos) + 1)):
        raise NotInImage(f"positions {sorted(by_pos)} are not 1..{len(by_pos)}")
    w = tuple(by_pos[j] for j in range(1, len(by_pos) + 1))
    if not is_reduced(w):
        raise NotInImage(f"{word_str(w)} is not reduced")
    return w


# ---------------------------------------------------------------------------
# Matrix evaluation
# ---------------------------------------------------------------------------

MatrixAssignment = Mapping[int, tuple[SquareMatrix, SquareMatrix]]


def check_assignment(assignment: MatrixAssignment) -> tuple[FieldSpec, int]:
    """Validate a generator -> (M, M^-1) map; return its common field and dim."""
    field = dim = None
    for g, (m, minv) in assignment.items():
        if field is None:
            field, dim = m.field, m.dim
        if m.field != field or minv.field != field:
            raise FieldMismatchError(f"generator {g}: mixed fields")
        if m.dim != dim or minv.dim != dim:
            raise DimensionMismatchError(f"generator {g}: mixed dims")
        if not mat_mul(m, minv).is_identity():
            raise InvalidAssignment(f"generator {g}: pair is not (M, M^-1)")
    if field is None:
        raise InvalidAssignment("empty assignment")
    return field, dim


def _letter_matrix(assignment: MatrixAssignment, a: Letter) -> SquareMatrix:
    try:
        pair = assignment[a.gen]
    except KeyError:
        raise InvalidAssignment(f"no matrix for x{a.gen}") from None
    return pair[0] if a.sign > 0 else pair[1]


def eval_algebra(f: AlgebraElement, assignment: MatrixAssignment, *, verify: bool = True) -> SquareMatrix:
    """Evaluate f at x_i -> M_i, x_i^-1 -> M_i^-1, 1 -> I."""
    if verify:
        field, dim = check_assignment(assignment)
    else:
        m0 = next(iter(assignment.values()))[0]
        field, dim = m0.field, m0.dim
    total = zero_matrix(field, dim)
    prefix: dict[Word, SquareMatrix] = {EMPTY: identity(field, dim)}
    for w, c in f.items():
        k = len(w)
        while w[:k] not in prefix:
            k -= 1
        for j in range(k, len(w)):
            prefix[w[: j + 1]] = mat_mul(prefix[w[:j]], _letter_matrix(assignment, w[j]))
        total = mat_add(total, mat_scale(field.embed(c, f.field), prefix[w]))
    return total


def eval_algebra_entry(f: AlgebraElement, assignment: MatrixAssignment, row: int, col: int) -> Scalar:
    """Single entry of :func:`eval_algebra`, via row-vector products (assignment not re-verified)."""
    m0 = next(iter(assignment.values()))[0]
    field, dim = m0.field, m0.dim
    total = field.zero
    for w, c in f.terms.items():
        v = [field.one if j == row else field.zero for j in range(dim)]
        for a in w:
            v = row_times(v, _letter_matrix(assignment, a))
        total = field.add(total, field.mul(field.embed(c, f.field), v[col]))
    return total


# ---------------------------------------------------------------------------
# Isolating index sets
# ---------------------------------------------------------------------------


def isolating_index_set(words: Iterable[Word]) -> tuple[frozenset[int], Word]:
    """Constructive halving: returns (I, m) with |I| <= floor(log2 |words|).

    Positions are 1-based.  At each step the first position where the current
    set disagrees is added, and the set shrinks to the smallest-key class
    (generator, then x before x^-1) of size at most half.
    """
    current = sorted(set(words), key=word_key)
    if not current:
        raise ValueError("isolating_index_set needs a nonempty word set")
    D = len(current[0])
    if any(len(w) != D for w in current):
        raise ValueError("all words must have the same degree")
    chosen: list[int] = []
    while len(current) > 1:
        pos = next(j for j in range(D) if len({w[j] for w in current}) > 1)
        classes: dict[Letter, list[Word]] = defaultdict(list)
        for w in current:
            classes[w[pos]].append(w)
        half = len(current) / 2
        key = min(
            (a for a, ws in classes.items() if len(ws) <= half),
            key=lambda a: (a.gen, 0 if a.sign > 0 else 1),
        )
        current = classes[key]
        chosen.append(pos + 1)
    return frozenset(chosen), current[0]


def is_isolating(words: Iterable[Word], index_set: Iterable[int], m: Word) -> bool:
    idx = sorted(index_set)
    return all(any(m[i - 1] != w[i - 1] for i in idx) for w in set(words) if w != m)
