import random

import pytest

from freepit.errors import DimensionMismatchError, FieldMismatchError, SingularMatrixError
from freepit.field import DEFAULT_PRIME, RATIONALS, make_field
from freepit.matrix import (
    SquareMatrix,
    identity,
    mat_add,
    mat_inv,
    mat_mul,
    mat_pow,
    row_times,
    solve,
    zero_matrix,
)

P = make_field(DEFAULT_PRIME)
FIELDS = [RATIONALS, P, make_field(3, 2)]


def random_matrix(F, dim, rng):
    return SquareMatrix(F, [[F.random_element(rng) for _ in range(dim)] for _ in range(dim)])


def naive_mul(a, b):
    F = a.field
    n = a.dim
    return SquareMatrix(
        F, [[F.sum([F.mul(a[i, k], b[k, j]) for k in range(n)]) for j in range(n)] for i in range(n)]
    )


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_identity_is_neutral(F):
    rng = random.Random(1)
    a = random_matrix(F, 4, rng)
    assert mat_mul(identity(F, 4), a) == a
    assert mat_mul(a, identity(F, 4)) == a


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_fast_paths_match_naive(F):
    rng = random.Random(2)
    for dim in (1, 3, 5):
        a, b = random_matrix(F, dim, rng), random_matrix(F, dim, rng)
        assert mat_mul(a, b) == naive_mul(a, b)


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_two_by_two_block_inverse(F):
    rng = random.Random(3)
    y, z = F.random_nonzero(rng), F.random_nonzero(rng)
    block = SquareMatrix(F, [[F.zero, y], [F.inv(z), F.zero]])
    expected = SquareMatrix(F, [[F.zero, z], [F.inv(y), F.zero]])
    assert mat_mul(block, expected).is_identity()
    assert mat_inv(block) == expected


def test_n_blocks_compose_with_summed_alphas():
    F = P
    i, j = F.from_int(3), F.from_int(5)

    def n_block(a):
        o, z = F.one, F.zero
        return SquareMatrix(F, [[o, a, z, a], [z, o, z, z], [z, a, o, a], [z, z, z, o]])

    for b1 in (1, -1):
        for b2 in (1, -1):
            left = n_block(i) if b1 == 1 else mat_inv(n_block(i))
            right = n_block(j) if b2 == 1 else mat_inv(n_block(j))
            prod = mat_mul(left, right)
            s = F.add(F.mul(F.from_int(b1), i), F.mul(F.from_int(b2), j))
            for r, c in [(0, 1), (0, 3), (2, 1), (2, 3)]:
                assert prod[r, c] == s
            assert prod[1, 2] == 0 and prod[0, 2] == 0


@pytest.mark.parametrize("F", [RATIONALS, P], ids=str)
@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_inverse_round_trip(F, dim):
    rng = random.Random(dim)
    done = 0
    while done < (100 if dim <= 8 else 25):
        a = random_matrix(F, dim, rng) if F.is_finite else SquareMatrix(
            F, [[F.from_int(rng.randint(-9, 9)) for _ in range(dim)] for _ in range(dim)]
        )
        try:
            inv = mat_inv(a)
        except SingularMatrixError:
            continue
        assert mat_mul(a, inv).is_identity()
        done += 1


def test_inverse_of_identity_and_singular():
    assert mat_inv(identity(P, 3)) == identity(P, 3)
    with pytest.raises(SingularMatrixError):
        mat_inv(zero_matrix(P, 3))
    with pytest.raises(SingularMatrixError):
        mat_inv(SquareMatrix(RATIONALS, [[1, 2], [2, 4]]))


def test_mismatch_errors():
    with pytest.raises(DimensionMismatchError):
        mat_mul(identity(P, 2), identity(P, 3))
    with pytest.raises(FieldMismatchError):
        mat_add(identity(P, 2), identity(RATIONALS, 2))
    with pytest.raises(DimensionMismatchError):
        SquareMatrix(P, [[1, 2]])


def test_pow_and_solve():
    rng = random.Random(4)
    a = random_matrix(P, 3, rng)
    assert mat_pow(a, 0) == identity(P, 3)
    assert mat_pow(a, 5) == mat_mul(mat_mul(mat_mul(mat_mul(a, a), a), a), a)
    b = [P.random_element(rng) for _ in range(3)]
    x = solve(a, b)
    assert [P.sum([P.mul(a[i, j], x[j]) for j in range(3)]) for i in range(3)] == b


def test_row_times():
    rng = random.Random(5)
    a = random_matrix(P, 4, rng)
    e2 = [0, 1, 0, 0]
    assert row_times(e2, a) == list(a.rows[1])


def test_immutable():
    m = identity(P, 2)
    with pytest.raises(AttributeError):
        m.rows = ()
    assert hash(m) == hash(identity(P, 2))
