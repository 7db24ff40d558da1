"""Black-box identity testing and sparse reconstruction in the free group algebra F<X, X^-1>."""

from .encoding import (
    Assignment,
    Encoding,
    build_degree_encoding,
    build_sparsity_encoding,
    random_assignment,
    scalar_factor,
    top_entry,
)
from .errors import (
    FieldError,
    FieldTooSmallError,
    FreePitError,
    GuardExceeded,
    InfeasibleError,
    InterpolationError,
    InversionHeightError,
    NotInImage,
    ParseError,
)
from .expression import BlackBox, Expression, eval_expr, expand, parse, syntactic_degree_bound, to_text
from .field import RATIONALS, FieldSpec, find_separating_elements, make_field, parse_field
from .freegroup import AlgebraElement, Letter, isolating_index_set, phi, phi_inverse_monomial
from .interpolate import TestSet, deterministic_test_set, sparse_interpolate
from .matrix import SquareMatrix
from .pit import Verdict, Witness, check_degree_mode, check_sparse_mode, reconstruct, replay_witness

__all__ = [
    "AlgebraElement",
    "Assignment",
    "BlackBox",
    "Encoding",
    "Expression",
    "FieldError",
    "FieldSpec",
    "FieldTooSmallError",
    "FreePitError",
    "GuardExceeded",
    "InfeasibleError",
    "InterpolationError",
    "InversionHeightError",
    "Letter",
    "NotInImage",
    "ParseError",
    "RATIONALS",
    "SquareMatrix",
    "TestSet",
    "Verdict",
    "Witness",
    "build_degree_encoding",
    "build_sparsity_encoding",
    "check_degree_mode",
    "check_sparse_mode",
    "deterministic_test_set",
    "eval_expr",
    "expand",
    "find_separating_elements",
    "isolating_index_set",
    "make_field",
    "parse",
    "parse_field",
    "phi",
    "phi_inverse_monomial",
    "random_assignment",
    "reconstruct",
    "replay_witness",
    "scalar_factor",
    "sparse_interpolate",
    "syntactic_degree_bound",
    "to_text",
    "top_entry",
]
