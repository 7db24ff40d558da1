"""Structured invertible matrices that turn words into commutative monomials.

Two families are built, both as ``P_i = N_i M_i N_i`` with explicit inverses
``N_i^-1 M_i^-1 N_i^-1``:

* the degree encoding of dimension 2d, whose (1, 2d) entry on a word of
  degree exactly d is ``scalar_factor(word) * prod(y or z)`` and is 0 on
  shorter words;
* the sparsity encoding of dimension 4(k'+1), k' = ceil(log2 s), which
  isolates a maximal-degree word among s candidates.

All Y, Z and xi variables are substituted by field scalars before the
matrices are formed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .errors import FieldError, FieldTooSmallError
from .field import FieldSpec, Scalar, is_separating, separating_elements_in
from .freegroup import Word
from .matrix import SquareMatrix, block_diag, from_sparse, identity, mat_mul

DEGREE = "degree"
SPARSE = "sparse"


@dataclass(frozen=True)
class Assignment:
    """Scalar values for y_(i,j), z_(i,j), xi_j and the separating alphas."""

    field: FieldSpec
    y: Mapping[tuple[int, int], Scalar]
    z: Mapping[tuple[int, int], Scalar]
    alphas: tuple[Scalar, ...]
    xi: Mapping[int, Scalar] = dc_field(default_factory=dict)

    def __post_init__(self):
        for name, table in (("y", self.y), ("z", self.z), ("xi", self.xi)):
            for key, v in table.items():
                if v == 0:
                    raise FieldError(f"{name}{key} must be nonzero")

    def to_json_obj(self) -> dict:
        F = self.field
        return {
            "field": str(F),
            "alphas": [F.to_str(a) for a in self.alphas],
            "y": {f"{i},{j}": F.to_str(v) for (i, j), v in sorted(self.y.items())},
            "z": {f"{i},{j}": F.to_str(v) for (i, j), v in sorted(self.z.items())},
            "xi": {str(j): F.to_str(v) for j, v in sorted(self.xi.items())},
        }


@dataclass(frozen=True)
class Encoding:
    """Per-generator pairs (P_i, P_i^-1), usable directly as a matrix assignment."""

    mode: str
    n: int
    param: int  # d for the degree encoding, k' for the sparsity encoding
    assignment: Assignment
    pairs: Mapping[int, tuple[SquareMatrix, SquareMatrix]]

    @property
    def dim(self) -> int:
        return next(iter(self.pairs.values()))[0].dim

    @property
    def field(self) -> FieldSpec:
        return self.assignment.field


DegreeEncoding = Encoding
SparsityEncoding = Encoding


def sparse_kprime(s_bound: int) -> int:
    """ceil(log2 s_bound), with 0 for s_bound = 1."""
    if s_bound < 1:
        raise ValueError("sparsity bound must be positive")
    return (s_bound - 1).bit_length()


def sparse_dim(s_bound: int) -> int:
    return 4 * (sparse_kprime(s_bound) + 1)


def _verify(F: FieldSpec, pairs: Mapping[int, tuple[SquareMatrix, SquareMatrix]]) -> None:
    for i, (p, q) in pairs.items():
        if not mat_mul(p, q).is_identity():
            raise ArithmeticError(f"structural inverse for x{i} is wrong")


def _check_alphas(n: int, a: Assignment) -> None:
    F = a.field
    if len(a.alphas) < n:
        raise FieldError(f"need {n} alphas, got {len(a.alphas)}")
    if any(F.add(x, x) == 0 for x in a.alphas[:n]) or not is_separating(a.alphas[:n], F):
        raise FieldError("alphas are not separating")


def degree_n_blocks(F: FieldSpec, d: int, alpha: Scalar) -> tuple[SquareMatrix, SquareMatrix]:
    """N_i = diag(1, N', ..., N', 1) with d-1 copies of N' = [[1, alpha], [0, 1]], and its inverse."""
    dim = 2 * d
    fwd, bwd = {}, {}
    for c in range(d - 1):
        r = 1 + 2 * c
        fwd[(r, r + 1)] = alpha
        bwd[(r, r + 1)] = F.neg(alpha)
    return from_sparse(F, dim, fwd, F.one), from_sparse(F, dim, bwd, F.one)


def build_degree_encoding(n: int, d: int, assignment: Assignment, *, verify: bool = True) -> Encoding:
    if d < 1:
        raise ValueError("degree must be at least 1")
    F = assignment.field
    _check_alphas(n, assignment)
    dim = 2 * d
    pairs = {}
    for i in range(1, n + 1):
        n_fwd, n_bwd = degree_n_blocks(F, d, assignment.alphas[i - 1])
        m_fwd, m_bwd = {}, {}
        for j in range(1, d + 1):
            y, z = assignment.y[(i, j)], assignment.z[(i, j)]
            r = 2 * (j - 1)
            m_fwd[(r, r + 1)], m_fwd[(r + 1, r)] = y, F.inv(z)
            m_bwd[(r, r + 1)], m_bwd[(r + 1, r)] = z, F.inv(y)
        p = mat_mul(mat_mul(n_fwd, from_sparse(F, dim, m_fwd)), n_fwd)
        q = mat_mul(mat_mul(n_bwd, from_sparse(F, dim, m_bwd)), n_bwd)
        pairs[i] = (p, q)
    if verify:
        _verify(F, pairs)
    return Encoding(DEGREE, n, d, assignment, pairs)


def sparse_n_block(F: FieldSpec, alpha: Scalar) -> list[list[Scalar]]:
    """I_4 + alpha*(e12 + e34 + e32 + e14)."""
    o, z = F.one, F.zero
    return [[o, alpha, z, alpha], [z, o, z, z], [z, alpha, o, alpha], [z, z, z, o]]


def build_sparsity_encoding(n: int, s_bound: int, assignment: Assignment, *, verify: bool = True) -> Encoding:
    F = assignment.field
    _check_alphas(n, assignment)
    kp = sparse_kprime(s_bound)
    dim = 4 * (kp + 1)
    pairs = {}
    for i in range(1, n + 1):
        alpha = assignment.alphas[i - 1]
        n_fwd = block_diag(F, [sparse_n_block(F, alpha)] * (kp + 1))
        n_bwd = block_diag(F, [sparse_n_block(F, F.neg(alpha))] * (kp + 1))
        # diagonal layout: 1, xi_1, M'_(i,1), xi_2, ..., M'_(i,k'), xi_(k'+1), 1
        m_fwd = {(0, 0): F.one, (dim - 1, dim - 1): F.one}
        m_bwd = dict(m_fwd)
        r = 1
        for j in range(1, kp + 2):
            xi = assignment.xi[j]
            m_fwd[(r, r + 1)], m_fwd[(r + 1, r)] = xi, F.inv(xi)
            m_bwd[(r, r + 1)], m_bwd[(r + 1, r)] = xi, F.inv(xi)
            r += 2
            if j <= kp:
                y, z = assignment.y[(i, j)], assignment.z[(i, j)]
                m_fwd[(r, r + 1)], m_fwd[(r + 1, r)] = y, F.inv(z)
                m_bwd[(r, r + 1)], m_bwd[(r + 1, r)] = z, F.inv(y)
                r += 2
        p = mat_mul(mat_mul(n_fwd, from_sparse(F, dim, m_fwd)), n_fwd)
        q = mat_mul(mat_mul(n_bwd, from_sparse(F, dim, m_bwd)), n_bwd)
        pairs[i] = (p, q)
    if verify:
        _verify(F, pairs)
    return Encoding(SPARSE, n, kp, assignment, pairs)


def scalar_factor(m: Word, alphas: Sequence[Scalar], field: FieldSpec) -> Scalar:
    """prod over adjacent letters of (b_j * alpha_(i_j) + b_(j+1) * alpha_(i_(j+1)))."""
    if not m:
        raise ValueError("scalar factor of the empty word is undefined")
    F = field
    out = F.one
    for a, b in zip(m, m[1:]):
        left = alphas[a.gen - 1] if a.sign > 0 else F.neg(alphas[a.gen - 1])
        right = alphas[b.gen - 1] if b.sign > 0 else F.neg(alphas[b.gen - 1])
        out = F.mul(out, F.add(left, right))
    return out


def word_value(m: Word, assignment: Assignment) -> Scalar:
    """prod_j (y_(i_j, j) if b_j = 1 else z_(i_j, j)): the image of m under phi."""
    F = assignment.field
    out = F.one
    for j, a in enumerate(m, start=1):
        out = F.mul(out, assignment.y[(a.gen, j)] if a.sign > 0 else assignment.z[(a.gen, j)])
    return out


def top_entry(result: SquareMatrix) -> Scalar:
    """Entry (1, dim)."""
    return result[0, result.dim - 1]


def random_assignment(
    field: FieldSpec,
    n: int,
    size: int,
    mode: str,
    rng: random.Random,
    alphas: Sequence[Scalar] | None = None,
) -> Assignment:
    """Uniform nonzero values for y, z (and xi in sparse mode).

    ``size`` is d for the degree encoding and k' for the sparsity encoding.
    Raises FieldTooSmallError when ``field`` has no separating elements.
    """
    if mode not in (DEGREE, SPARSE):
        raise ValueError(f"unknown mode {mode!r}")
    if alphas is None:
        alphas = separating_elements_in(field, n)
    if field.is_finite and field.size <= 2:
        raise FieldTooSmallError(f"{field} is too small for an encoding")
    y, z = {}, {}
    for i in range(1, n + 1):
        for j in range(1, size + 1):
            y[(i, j)] = field.random_nonzero(rng)
            z[(i, j)] = field.random_nonzero(rng)
    xi = {j: field.random_nonzero(rng) for j in range(1, size + 2)} if mode == SPARSE else {}
    return Assignment(field, y, z, tuple(alphas), xi)


def encode(field: FieldSpec, n: int, mode: str, size: int, rng: random.Random, alphas=None) -> Encoding:
    """Random assignment followed by the matching encoding (size is d or s_bound)."""
    if mode == DEGREE:
        return build_degree_encoding(n, size, random_assignment(field, n, size, mode, rng, alphas))
    kp = sparse_kprime(size)
    return build_sparsity_encoding(n, size, random_assignment(field, n, kp, mode, rng, alphas))


def encoding_to_json_obj(enc: Encoding) -> dict:
    return {
        "mode": enc.mode,
        "n": enc.n,
        "dim": enc.dim,
        "field": str(enc.field),
        "assignment": enc.assignment.to_json_obj(),
        "matrices": {
            f"x{i}": {"matrix": p.to_strings(), "inverse": q.to_strings()}
            for i, (p, q) in sorted(enc.pairs.items())
        },
    }


def identity_pairs(field: FieldSpec, n: int, dim: int = 1) -> dict[int, tuple[SquareMatrix, SquareMatrix]]:
    """x_i -> I for every generator (the constant-term probe)."""
    eye = identity(field, dim)
    return {i: (eye, eye) for i in range(1, n + 1)}
