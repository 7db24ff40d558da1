"""Identity testing and sparse reconstruction for black boxes over F<X, X^-1>.

Both randomized tests are one-sided: a zero element evaluates to the zero
matrix under every assignment, so ``Zero`` is never wrong for zero input.
A nonzero matrix entry proves the element is nonzero and is kept as a
replayable witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .encoding import (
    DEGREE,
    SPARSE,
    Assignment,
    build_degree_encoding,
    build_sparsity_encoding,
    encode,
    identity_pairs,
    scalar_factor,
    sparse_kprime,
    top_entry,
)
from .errors import FieldTooSmallError, InfeasibleError
from .expression import BlackBox
from .field import FieldSpec, Scalar, extend_to_size, find_separating_elements, separating_elements_in
from .freegroup import AlgebraElement, CommVar, eval_algebra_entry, phi_inverse_monomial
from .interpolate import sparse_interpolate

ZERO = "Zero"
NONZERO = "NonZero"
CONSTANT = "constant"

#: Field-size constant for sparse mode: require |F| > SPARSE_FIELD_FACTOR * n * D * (k'+1).
SPARSE_FIELD_FACTOR = 8


@dataclass(frozen=True)
class Witness:
    """Everything needed to repeat the evaluation that exposed a nonzero entry."""

    mode: str  # "degree", "sparse" or "constant"
    seed: int | str
    trial: int
    level: int  # l for degree mode, s_bound for sparse mode, 0 for the constant probe
    dim: int
    entry: tuple[int, int]  # 0-based (row, col)
    value: Scalar
    field: FieldSpec
    assignment: Assignment | None

    def to_json_obj(self) -> dict:
        F = self.field
        return {
            "mode": self.mode,
            "seed": self.seed,
            "trial": self.trial,
            "level": self.level,
            "dim": self.dim,
            "entry": [self.entry[0] + 1, self.entry[1] + 1],
            "value": F.to_str(self.value),
            "field": str(F),
            "assignment": None if self.assignment is None else self.assignment.to_json_obj(),
        }


@dataclass(frozen=True)
class Verdict:
    kind: str
    trials_used: int
    per_trial_error_bound: Fraction
    mode: str
    seed: int | str
    field: FieldSpec
    witness: Witness | None = None

    @property
    def is_zero(self) -> bool:
        return self.kind == ZERO

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.kind,
            "mode": self.mode,
            "field": str(self.field),
            "seed": self.seed,
            "trials_used": self.trials_used,
            "per_trial_error_bound": str(self.per_trial_error_bound),
            "witness": None if self.witness is None else self.witness.to_json_obj(),
        }


def trial_rng(seed: int | str, mode: str, trial: int, level: int = 0) -> random.Random:
    """Independent deterministic stream per (seed, mode, trial, level)."""
    return random.Random(f"{seed}/{mode}/{trial}/{level}")


def prepare_field(F: FieldSpec, n: int, min_size: int, extend: bool = True) -> tuple[FieldSpec, tuple[Scalar, ...]]:
    """Working field of size >= min_size that holds separating alphas, and those alphas."""
    if F.characteristic == 2:
        raise InfeasibleError("characteristic 2: b*alpha + b*alpha vanishes on repeated letters")
    if F.is_finite and F.size < min_size:
        if not extend:
            raise FieldTooSmallError(f"{F} has fewer than {min_size} elements")
        F = extend_to_size(F, min_size)
    try:
        return F, separating_elements_in(F, n)
    except FieldTooSmallError:
        if not extend:
            raise
    return find_separating_elements(n, F)


def _first_nonzero(m, mode, seed, trial, level, F, assignment) -> Witness | None:
    pos = m.nonzero_entry()
    if pos is None:
        return None
    return Witness(mode, seed, trial, level, m.dim, pos, m[pos], F, assignment)


def _constant_probe(bb: BlackBox, n: int, F: FieldSpec, seed, trial) -> Witness | None:
    m = bb(identity_pairs(F, n))
    return _first_nonzero(m, CONSTANT, seed, trial, 0, F, None)


def degree_trial(bb: BlackBox, n: int, d_bound: int, F: FieldSpec, alphas, seed, trial: int) -> Witness | None:
    """One trial: dim-2l encodings for l = d_bound..1, then the constant probe."""
    for ell in range(d_bound, 0, -1):
        enc = encode(F, n, DEGREE, ell, trial_rng(seed, DEGREE, trial, ell), alphas)
        w = _first_nonzero(bb(enc.pairs), DEGREE, seed, trial, ell, F, enc.assignment)
        if w is not None:
            return w
    return _constant_probe(bb, n, F, seed, trial)


def check_degree_mode(
    bb: BlackBox,
    n: int,
    d_bound: int,
    field: FieldSpec,
    trials: int = 5,
    seed: int | str = 0,
    *,
    extend: bool = True,
) -> Verdict:
    """Randomized test with 2l x 2l degree encodings.

    Small finite fields are replaced by the smallest extension with more
    than 4*d_bound + 1 elements that also holds separating alphas, unless
    ``extend`` is False, in which case FieldTooSmallError is raised.
    """
    if d_bound < 0 or trials < 1:
        raise ValueError("need d_bound >= 0 and trials >= 1")
    F, alphas = prepare_field(field, n, 4 * d_bound + 2, extend)
    bound = Fraction(d_bound, F.sample_size)
    for t in range(trials):
        w = degree_trial(bb, n, d_bound, F, alphas, seed, t)
        if w is not None:
            return Verdict(NONZERO, t + 1, bound, DEGREE, seed, F, w)
    return Verdict(ZERO, trials, bound, DEGREE, seed, F)


def sparse_trial(bb: BlackBox, n: int, s_bound: int, F: FieldSpec, alphas, seed, trial: int) -> Witness | None:
    enc = encode(F, n, SPARSE, s_bound, trial_rng(seed, SPARSE, trial), alphas)
    return _first_nonzero(bb(enc.pairs), SPARSE, seed, trial, s_bound, F, enc.assignment)


def check_sparse_mode(
    bb: BlackBox,
    n: int,
    D_bound: int,
    s_bound: int,
    field: FieldSpec,
    trials: int = 5,
    seed: int | str = 0,
    *,
    extend: bool = True,
) -> Verdict:
    """Randomized test with 4(k'+1)-dimensional encodings, k' = ceil(log2 s_bound).

    D_bound only enters the field-size requirement and the error bound.
    """
    if s_bound < 1 or D_bound < 0 or trials < 1:
        raise ValueError("need s_bound >= 1, D_bound >= 0 and trials >= 1")
    entry_degree = SPARSE_FIELD_FACTOR * n * max(D_bound, 1) * (sparse_kprime(s_bound) + 1)
    F, alphas = prepare_field(field, n, entry_degree + 1, extend)
    bound = min(Fraction(1), Fraction(entry_degree, F.sample_size))
    for t in range(trials):
        w = sparse_trial(bb, n, s_bound, F, alphas, seed, t)
        if w is not None:
            return Verdict(NONZERO, t + 1, bound, SPARSE, seed, F, w)
    return Verdict(ZERO, trials, bound, SPARSE, seed, F)


def replay_witness(bb: BlackBox, n: int, witness: Witness) -> Scalar:
    """Re-evaluate the black box at the witnessing assignment and read the same entry."""
    if witness.mode == CONSTANT:
        m = bb(identity_pairs(witness.field, n))
    elif witness.mode == DEGREE:
        m = bb(build_degree_encoding(n, witness.level, witness.assignment).pairs)
    else:
        m = bb(build_sparsity_encoding(n, witness.level, witness.assignment).pairs)
    return m[witness.entry]


def position_variables(n: int, ell: int) -> list[CommVar]:
    """y_(i,j), z_(i,j) for i in 1..n, j in 1..l, in a fixed order."""
    return [CommVar(axis, i, j) for i in range(1, n + 1) for j in range(1, ell + 1) for axis in ("y", "z")]


def reconstruct(
    bb: BlackBox,
    n: int,
    d_bound: int,
    s_bound: int,
    field: FieldSpec,
) -> AlgebraElement:
    """Deterministically recover the hidden element, highest degree first.

    For each l = d_bound..1 the (1, 2l) entry of the dim-2l degree encoding,
    minus the contribution of the parts already found, is a commutative
    s-sparse polynomial of degree l in the position variables.  It is
    interpolated, every monomial is decoded back to its word and divided by
    that word's scalar factor.  The constant term comes from x_i -> 1.
    """
    if d_bound < 0 or s_bound < 1:
        raise ValueError("need d_bound >= 0 and s_bound >= 1")
    F = field
    if F.characteristic == 2:
        raise InfeasibleError("characteristic 2: b*alpha + b*alpha vanishes on repeated letters")
    alphas = separating_elements_in(F, n)
    found = AlgebraElement.zero(F)
    for ell in range(d_bound, 0, -1):
        variables = position_variables(n, ell)
        dim = 2 * ell

        def cbb(point: Sequence[Scalar], ell=ell, variables=variables, dim=dim, known=found) -> Scalar:
            values = dict(zip(variables, point))
            y = {(v.var_index, v.position): x for v, x in values.items() if v.axis == "y"}
            z = {(v.var_index, v.position): x for v, x in values.items() if v.axis == "z"}
            pairs = build_degree_encoding(n, ell, Assignment(F, y, z, alphas), verify=False).pairs
            value = top_entry(bb(pairs))
            if known.is_zero():
                return value
            return F.sub(value, eval_algebra_entry(known, pairs, 0, dim - 1))

        poly = sparse_interpolate(cbb, len(variables), ell, s_bound, F, variables)
        part = {}
        for mono, c in poly.terms.items():
            w = phi_inverse_monomial(mono)
            part[w] = F.div(c, scalar_factor(w, alphas, F))
        found = found + AlgebraElement(F, part)
    total_at_ones = bb(identity_pairs(F, n))[0, 0]
    known_at_ones = F.sum(list(found.terms.values()))
    return found + AlgebraElement.constant(F, F.sub(total_at_ones, known_at_ones))
