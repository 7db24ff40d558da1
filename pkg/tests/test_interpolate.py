import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from freepit.errors import FieldTooSmallError, InfeasibleError, InterpolationError
from freepit.field import DEFAULT_PRIME, RATIONALS, make_field
from freepit.freegroup import CommPoly, CommVar, monomial
from freepit.interpolate import berlekamp_massey, deterministic_test_set, first_primes, sparse_interpolate

P = make_field(DEFAULT_PRIME)
Q = RATIONALS


def box(poly, names):
    return lambda pt: poly.evaluate(dict(zip(names, pt)))


def random_poly(rng, F, N, d, s):
    terms = {}
    for _ in range(s):
        exps = [0] * N
        for _ in range(rng.randint(0, d)):
            exps[rng.randrange(N)] += 1
        terms[monomial(dict(enumerate(exps)))] = F.from_int(rng.choice([-3, -2, -1, 1, 2, 3, 17]))
    return CommPoly(F, terms)


def test_first_primes():
    assert first_primes(6) == (2, 3, 5, 7, 11, 13)


@pytest.mark.parametrize("F", [Q, P], ids=str)
def test_berlekamp_massey_geometric_sums(F):
    # a_t = 2*3^t - 5^t satisfies (1 - 3z)(1 - 5z) = 1 - 8z + 15z^2
    seq = [F.sub(F.mul(F.from_int(2), F.pow(F.from_int(3), t)), F.pow(F.from_int(5), t)) for t in range(6)]
    assert berlekamp_massey(seq, F) == [F.one, F.from_int(-8), F.from_int(15)]
    assert berlekamp_massey([F.zero] * 4, F) == [F.one]


@pytest.mark.parametrize("F", [Q, P], ids=str)
class TestSparseInterpolate:
    def test_zero(self, F):
        assert sparse_interpolate(lambda pt: F.zero, 4, 3, 2, F).terms == {}

    def test_constant(self, F):
        poly = sparse_interpolate(lambda pt: F.from_int(5), 4, 3, 2, F)
        assert poly.terms == {(): F.from_int(5)}

    def test_two_term_example(self, F):
        y11, y21, z12, z22 = CommVar("y", 1, 1), CommVar("y", 2, 1), CommVar("z", 1, 2), CommVar("z", 2, 2)
        names = [y11, y21, z12, z22]
        target = CommPoly(F, {monomial({y11: 1, z22: 1}): F.one, monomial({y21: 1, z12: 1}): F.from_int(-1)})
        assert sparse_interpolate(box(target, names), 4, 2, 2, F, names) == target

    def test_random_round_trip(self, F):
        rng = random.Random(1)
        for _ in range(40):
            N, d, s = rng.randint(1, 12), rng.randint(1, 5), rng.randint(1, 8)
            target = random_poly(rng, F, N, d, s)
            names = list(range(N))
            assert sparse_interpolate(box(target, names), N, d, s, F) == target

    def test_sparsity_bound_violation_detected(self, F):
        target = CommPoly(F, {monomial({i: 1}): F.one for i in range(5)})
        with pytest.raises(InterpolationError):
            sparse_interpolate(box(target, range(5)), 5, 1, 2, F)

    def test_degree_bound_violation_detected(self, F):
        target = CommPoly(F, {monomial({0: 3}): F.one})
        with pytest.raises(InterpolationError):
            sparse_interpolate(box(target, range(2)), 2, 2, 2, F)


def test_small_characteristic_is_infeasible():
    with pytest.raises(InfeasibleError):
        sparse_interpolate(lambda pt: 0, 10, 4, 2, make_field(101))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_round_trip_property(data):
    N = data.draw(st.integers(1, 6))
    d = data.draw(st.integers(0, 4))
    s = data.draw(st.integers(1, 5))
    exps = st.lists(st.integers(0, d), min_size=N, max_size=N).filter(lambda e: sum(e) <= d)
    terms = data.draw(st.dictionaries(exps.map(tuple), st.integers(-50, 50).filter(bool), max_size=s))
    target = CommPoly(P, {monomial(dict(enumerate(e))): P.from_int(c) for e, c in terms.items()})
    assert sparse_interpolate(box(target, range(N)), N, d, s, P) == target


class TestTestSet:
    def test_univariate(self):
        ts = deterministic_test_set(1, 2, 5, make_field(101))
        assert len(set(ts.points)) == 3

    def test_single_monomial_point(self):
        for N, d in [(2, 2), (3, 4), (5, 1)]:
            ts = deterministic_test_set(N, d, 1, make_field(101))
            assert any(all(c != 0 for c in pt) for pt in ts.points)

    def test_exhaustive_two_sparse_over_gf101(self):
        F = make_field(101)
        ts = deterministic_test_set(2, 2, 2, F)
        monos = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]

        def poly(terms):
            return lambda pt: F.sum([F.mul(c, F.mul(F.pow(pt[0], a), F.pow(pt[1], b))) for (a, b), c in terms])

        count = 0
        for k in (1, 2):
            for ms in combinations(monos, k):
                for cs in product((1, F.neg(1)), repeat=k):
                    assert ts.hits(poly(list(zip(ms, cs))))
                    count += 1
        assert count == 6 * 2 + 15 * 4

    def test_random_sparse_polys_hit(self):
        F = make_field(10007)
        rng = random.Random(3)
        ts = deterministic_test_set(3, 2, 3, F)
        for _ in range(200):
            target = random_poly(rng, F, 3, 2, 3)
            if target.terms:
                assert ts.hits(box(target, range(3)))

    def test_field_too_small(self):
        with pytest.raises(FieldTooSmallError):
            deterministic_test_set(3, 3, 3, make_field(7))
