"""Dense square matrices over a :class:`~freepit.field.FieldSpec`."""

from __future__ import annotations

from operator import mul as _mul
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, FieldMismatchError, SingularMatrixError
from .field import FieldSpec, Scalar


class SquareMatrix:
    """Immutable ``dim x dim`` matrix; ``rows`` is a tuple of row tuples."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable[Scalar]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DimensionMismatchError("matrix must be square and nonempty")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SquareMatrix is immutable")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.field, self.rows))

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "SquareMatrix") -> "SquareMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        return mat_sub(self, other)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.to_str(v) for v in r) for r in self.rows)
        return f"SquareMatrix({self.field}, [{body}])"

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.rows for v in r)

    def is_identity(self) -> bool:
        return all(v == (1 if i == j else 0) for i, r in enumerate(self.rows) for j, v in enumerate(r))

    def nonzero_entry(self) -> tuple[int, int] | None:
        """Position of the first nonzero entry in row-major order."""
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if v != 0:
                    return i, j
        return None

    def to_strings(self) -> list[list[str]]:
        return [[self.field.to_str(v) for v in r] for r in self.rows]


def identity(field: FieldSpec, dim: int) -> SquareMatrix:
    one, zero = field.one, field.zero
    return SquareMatrix(field, ((one if i == j else zero for j in range(dim)) for i in range(dim)))


def zero_matrix(field: FieldSpec, dim: int) -> SquareMatrix:
    return SquareMatrix(field, ((field.zero,) * dim for _ in range(dim)))


def scalar_matrix(field: FieldSpec, dim: int, c: Scalar) -> SquareMatrix:
    zero = field.zero
    return SquareMatrix(field, ((c if i == j else zero for j in range(dim)) for i in range(dim)))


def from_sparse(field: FieldSpec, dim: int, entries: dict[tuple[int, int], Scalar], diagonal: Scalar | None = None) -> SquareMatrix:
    """Matrix with the given entries (0-based), zero elsewhere, optional constant diagonal underneath."""
    rows = [[field.zero] * dim for _ in range(dim)]
    if diagonal is not None:
        for i in range(dim):
            rows[i][i] = diagonal
    for (i, j), v in entries.items():
        rows[i][j] = v
    return SquareMatrix(field, rows)


def _check(a: SquareMatrix, b: SquareMatrix) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"matrices over {a.field} and {b.field}")
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dims {a.dim} and {b.dim}")


def mat_mul(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    _check(a, b)
    F = a.field
    cols = list(zip(*b.rows))
    kind = F.kind
    if kind == "prime":
        p = F.characteristic
        rows = [[sum(map(_mul, r, c)) % p for c in cols] for r in a.rows]
    elif kind == "Q":
        rows = [[sum(map(_mul, r, c), F.zero) for c in cols] for r in a.rows]
    else:
        rows = []
        for r in a.rows:
            nz = [(k, v) for k, v in enumerate(r) if v != 0]
            row = []
            for c in cols:
                acc = 0
                for k, v in nz:
                    w = c[k]
                    if w != 0:
                        acc = F.add(acc, F.mul(v, w))
                row.append(acc)
            rows.append(row)
    return SquareMatrix(F, rows)


def mat_add(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    _check(a, b)
    F = a.field
    return SquareMatrix(F, ([F.add(x, y) for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)))


def mat_sub(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    _check(a, b)
    F = a.field
    return SquareMatrix(F, ([F.sub(x, y) for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)))


def mat_scale(c: Scalar, a: SquareMatrix) -> SquareMatrix:
    F = a.field
    return SquareMatrix(F, ([F.mul(c, x) for x in r] for r in a.rows))


def mat_pow(a: SquareMatrix, e: int) -> SquareMatrix:
    """``a**e`` for ``e >= 0`` by repeated squaring."""
    if e < 0:
        raise ValueError("use mat_pow(mat_inv(a), -e) for negative exponents")
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return identity(a.field, a.dim) if result is None else result


def mat_inv(a: SquareMatrix) -> SquareMatrix:
    """Exact inverse by Gauss-Jordan elimination; raises SingularMatrixError."""
    F = a.field
    n = a.dim
    work = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(a.rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"singular {n}x{n} matrix")
        work[col], work[pivot] = work[pivot], work[col]
        inv_p = F.inv(work[col][col])
        work[col] = [F.mul(inv_p, v) for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(work[r], work[col])]
    return SquareMatrix(F, (row[n:] for row in work))


def solve(a: SquareMatrix, b: Sequence[Scalar]) -> list[Scalar]:
    """Solve ``a x = b`` exactly."""
    F = a.field
    inv = mat_inv(a)
    return [F.sum([F.mul(x, y) for x, y in zip(r, b)]) for r in inv.rows]


def row_times(v: Sequence[Scalar], a: SquareMatrix) -> list[Scalar]:
    """Row vector times matrix."""
    F = a.field
    cols = zip(*a.rows)
    return [F.sum([F.mul(x, y) for x, y in zip(v, c) if x != 0]) for c in cols]


def block_diag(field: FieldSpec, blocks: Sequence[Sequence[Sequence[Scalar]]]) -> SquareMatrix:
    """Block-diagonal matrix from square blocks given as nested sequences."""
    dim = sum(len(b) for b in blocks)
    rows = [[field.zero] * dim for _ in range(dim)]
    off = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, v in enumerate(r):
                rows[off + i][off + j] = v
        off += len(b)
    return SquareMatrix(field, rows)
