"""End-to-end acceptance checks, one test per criterion, each with its time limit."""

import math
import random
import time
from itertools import product

import pytest
from corpus import nonzero_cases, zero_cases

from freepit.encoding import DEGREE, encode, sparse_dim, top_entry
from freepit.expression import (
    Add,
    BlackBox,
    Const,
    Expression,
    Mul,
    eval_expr,
    expand,
    expression_from_algebra,
    parse,
    random_sparse_expression,
    syntactic_degree_bound,
)
from freepit.field import DEFAULT_PRIME, RATIONALS, find_separating_elements, make_field
from freepit.freegroup import AlgebraElement, eval_algebra, isolating_index_set, reduced_words
from freepit.pit import NONZERO, ZERO, check_degree_mode, check_sparse_mode, reconstruct

P = make_field(DEFAULT_PRIME)


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def pairwise_sums_nonzero(alphas, F):
    return all(
        F.add(F.mul(F.from_int(bi), a), F.mul(F.from_int(bj), b)) != 0
        for (i, a), (j, b) in product(enumerate(alphas), repeat=2)
        if i < j
        for bi, bj in product((1, -1), repeat=2)
    )


@pytest.mark.criterion("C1", "degree encoding word-level identity, n=2, d<=3, GF(2^61-1)")
def test_c1_word_level_identity():
    p = DEFAULT_PRIME
    rng = random.Random(101)
    checked = 0
    with Timer(30):
        for d in (1, 2, 3):
            for w in reduced_words(2, d):
                for _ in range(5):
                    enc = encode(P, 2, DEGREE, d, rng)
                    a = enc.assignment
                    got = top_entry(eval_algebra(AlgebraElement.word(P, w), enc.pairs))
                    # alpha_i = i here, so each adjacent pair contributes b_j*i_j + b_{j+1}*i_{j+1}
                    expected = 1
                    for u, v in zip(w, w[1:]):
                        expected = expected * (u.sign * u.gen + v.sign * v.gen) % p
                    for j, letter in enumerate(w, start=1):
                        table = a.y if letter.sign > 0 else a.z
                        expected = expected * table[(letter.gen, j)] % p
                    assert a.alphas == (1, 2)
                    assert got == expected
                    checked += 1
    assert checked == 5 * (4 + 12 + 36)


def _nonzero_within_five(e, d, F, rng):
    for _ in range(5):
        enc = encode(F, e.n, DEGREE, d, rng)
        if not eval_expr(e, enc.pairs, field=enc.field).is_zero():
            return True
    return False


@pytest.mark.criterion("C2", "nonzero expressions are nonzero on the dim-2d encoding")
def test_c2_nonzero_on_encoding():
    rng = random.Random(202)
    cases = nonzero_cases(rng, 200, P, n_max=3, d_max=6)
    with Timer(60):
        for e, f in cases:
            assert not f.is_zero() and f.degree() <= 6
            # a nonzero constant needs the smallest encoding, d = 1
            assert _nonzero_within_five(e, max(f.degree(), 1), P, rng)


@pytest.mark.criterion("C3", "identically zero expressions give Zero in both modes, 10 seeds")
def test_c3_soundness():
    cases = zero_cases(random.Random(303), 50, P)
    with Timer(60):
        for e in cases:
            assert expand(e, 64, 4096).is_zero()
            bb = BlackBox.from_expression(e)
            d = min(syntactic_degree_bound(e), 64)
            for seed in range(10):
                for v in (
                    check_degree_mode(bb, e.n, d, P, trials=5, seed=seed),
                    check_sparse_mode(bb, e.n, d, 8, P, trials=5, seed=seed),
                ):
                    assert v.kind == ZERO and v.trials_used == 5


@pytest.mark.criterion("C4", "sparse reconstruction round trip over Q and GF(2^61-1)")
@pytest.mark.parametrize("F", [RATIONALS, P], ids=["Q", "P"])
def test_c4_reconstruct(F):
    rng = random.Random(404)
    cases = [(e, f) for e, f in nonzero_cases(rng, 300, F, n_max=3, d_max=5) if f.sparsity() <= 8][:100]
    assert len(cases) == 100
    with Timer(150):
        for e, f in cases:
            assert reconstruct(BlackBox.from_expression(e), e.n, 5, 8, F) == f


@pytest.mark.criterion("C5", "sparse-mode dimension and high-degree certification")
def test_c5_sparse_pi():
    for s, dim in [(1, 4), (2, 8), (8, 16)]:
        assert sparse_dim(s) == 4 * (math.ceil(math.log2(s)) + 1) == dim
        v = check_sparse_mode(BlackBox.from_expression(parse("x1 - x2", 2, P)), 2, 1, s, P)
        assert v.witness.dim == dim

    with Timer(10):
        e = parse("x1^65536*x2 - x2*x1^65536", 2, P)
        v = check_sparse_mode(BlackBox.from_expression(e), 2, 65537, 2, P)
    assert v.kind == NONZERO and v.witness.dim == 8

    rng = random.Random(505)
    for _ in range(50):
        e = random_sparse_expression(rng, rng.randint(1, 3), 8, 50, P)
        f = expand(e, 64, 4096)
        twin = Expression(Add(e.root, Mul(Const(P.neg(P.one)), expression_from_algebra(f, e.n).root)), e.n, P)
        for expr, oracle in ((e, f), (twin, expand(twin, 64, 4096))):
            v = check_sparse_mode(BlackBox.from_expression(expr), e.n, 50, 8, P, seed=rng.randrange(2**32))
            assert (v.kind == ZERO) == oracle.is_zero()
        assert not f.is_zero()


@pytest.mark.criterion("C6", "finite-field adaptation over GF(3) and GF(9)")
def test_c6_finite_field():
    F, alphas = find_separating_elements(2, make_field(3))
    assert (F.characteristic, F.extension_degree, F.size) == (3, 2, 9)
    assert pairwise_sums_nonzero(alphas, F)

    gf9 = make_field(3, 2)
    rng = random.Random(606)
    cases = nonzero_cases(rng, 100, gf9, n_max=3, d_max=6)
    with Timer(60):
        for e, f in cases:
            v = check_degree_mode(BlackBox.from_expression(e), e.n, f.degree(), gf9, seed=rng.randrange(2**32))
            assert v.kind == NONZERO
            assert v.field.characteristic == 3 and v.field.extension_degree % 2 == 0


@pytest.mark.criterion("C7", "isolating index sets on sampled word sets")
def test_c7_isolating():
    words = list(reduced_words(2, 3))
    rng = random.Random(707)
    with Timer(30):
        for _ in range(500):
            sample = rng.sample(words, rng.randint(1, 8))
            index_set, m = isolating_index_set(sample)
            assert m in sample
            assert len(index_set) <= math.ceil(math.log2(len(sample)))
            assert index_set <= {1, 2, 3}
            project = lambda w: tuple(w[i - 1] for i in sorted(index_set))
            assert all(project(w) != project(m) for w in sample if w != m)
