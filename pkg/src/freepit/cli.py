"""Command-line front end.

Exit codes: 0 Zero or success, 1 NonZero, 2 usage or parse error,
3 infeasible (guard exceeded, field too small, bounds inconsistent).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from .encoding import DEGREE, SPARSE, encode, encoding_to_json_obj
from .errors import (
    FreePitError,
    GuardExceeded,
    InfeasibleError,
    InterpolationError,
    NotInImage,
    ParseError,
)
from .expression import BlackBox, Expression, expand, max_generator, parse, syntactic_degree_bound
from .field import DEFAULT_PRIME, parse_field
from .pit import check_degree_mode, check_sparse_mode, prepare_field, reconstruct

DEFAULT_SEED = 1729
DEFAULT_TRIALS = 5
MAX_DEGREE_MODE = 64

EXIT_ZERO, EXIT_NONZERO, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freepit",
        description="Identity testing and reconstruction for F<X, X^-1> via matrix encodings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_expr: bool = True) -> None:
        if needs_expr:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--expr", help="expression text")
            src.add_argument("--file", help="path to an expression file ('#' starts a comment line)")
        p.add_argument("--n", type=int, help="alphabet size (default: largest generator index used)")
        p.add_argument("--field", default=str(DEFAULT_PRIME), help="Q, p or p^k (default: 2^61-1)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check", help="randomized test with degree encodings")
    common(p)
    p.add_argument("--degree", type=int, help="degree bound (default: syntactic bound)")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)

    p = sub.add_parser("check-sparse", help="randomized test with sparsity encodings")
    common(p)
    p.add_argument("--degree", type=int, help="degree bound (default: syntactic bound)")
    p.add_argument("--sparsity", type=int, required=True)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)

    p = sub.add_parser("reconstruct", help="deterministic sparse reconstruction")
    common(p)
    p.add_argument("--degree", type=int, help="degree bound (default: syntactic bound)")
    p.add_argument("--sparsity", type=int, required=True)

    p = sub.add_parser("expand", help="brute-force symbolic expansion")
    common(p)
    p.add_argument("--degree-guard", type=int, default=64)
    p.add_argument("--sparsity-guard", type=int, default=4096)

    p = sub.add_parser("encode-dump", help="print a random encoding as JSON")
    common(p, needs_expr=False)
    p.add_argument("--mode", choices=(DEGREE, SPARSE), default=DEGREE)
    p.add_argument("--degree", type=int, help="d for the degree encoding")
    p.add_argument("--sparsity", type=int, help="s for the sparsity encoding")
    return parser


def _load(args) -> tuple[Expression, int]:
    field = parse_field(args.field)
    if args.expr is not None:
        text = args.expr
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    n = args.n if args.n is not None else max(1, max_generator(text))
    if n < 1:
        raise UsageError("--n must be positive")
    return parse(text, n, field), n


def _positive(name: str, value: int | None) -> None:
    if value is not None and value < 1:
        raise UsageError(f"{name} must be positive")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _verdict_text(v) -> str:
    lines = [
        v.kind,
        f"mode: {v.mode}",
        f"field: {v.field}",
        f"seed: {v.seed}",
        f"trials_used: {v.trials_used}",
        f"per_trial_error_bound: {v.per_trial_error_bound}",
    ]
    w = v.witness
    if w is not None:
        lines.append(
            f"witness: trial={w.trial} level={w.level} dim={w.dim} "
            f"entry=({w.entry[0] + 1},{w.entry[1] + 1}) value={w.field.to_str(w.value)}"
        )
    return "\n".join(lines)


def _run(args) -> tuple[int, str]:
    cmd = args.command
    if cmd == "encode-dump":
        field = parse_field(args.field)
        n = 1 if args.n is None else args.n
        _positive("--n", n)
        size = args.degree if args.mode == DEGREE else args.sparsity
        if size is None:
            raise UsageError("--degree is required for degree mode, --sparsity for sparse mode")
        _positive("--degree/--sparsity", size)
        work, alphas = prepare_field(field, n, 3)
        enc = encode(work, n, args.mode, size, random.Random(f"{args.seed}/dump"), alphas)
        obj = encoding_to_json_obj(enc)
        obj["seed"] = args.seed
        return EXIT_ZERO, _dump(obj)

    expr, n = _load(args)
    if cmd == "expand":
        _positive("--degree-guard", args.degree_guard)
        _positive("--sparsity-guard", args.sparsity_guard)
        f = expand(expr, args.degree_guard, args.sparsity_guard)
        body = {"field": str(expr.field), "n": n, "terms": f.to_json_obj()} if args.json else f.to_json_obj()
        return EXIT_ZERO, json.dumps(body, sort_keys=True)

    degree = args.degree if args.degree is not None else syntactic_degree_bound(expr)
    if degree < 0:
        raise UsageError("--degree must be non-negative")
    bb = BlackBox.from_expression(expr)
    if cmd == "reconstruct":
        _positive("--sparsity", args.sparsity)
        f = reconstruct(bb, n, degree, args.sparsity, expr.field)
        body = {"field": str(expr.field), "n": n, "terms": f.to_json_obj()} if args.json else f.to_json_obj()
        return EXIT_ZERO, json.dumps(body, sort_keys=True)

    _positive("--trials", args.trials)
    if cmd == "check":
        if degree > MAX_DEGREE_MODE:
            raise UsageError(f"degree bound {degree} > {MAX_DEGREE_MODE}; use check-sparse")
        verdict = check_degree_mode(bb, n, degree, expr.field, args.trials, args.seed)
    else:
        _positive("--sparsity", args.sparsity)
        verdict = check_sparse_mode(bb, n, degree, args.sparsity, expr.field, args.trials, args.seed)
    text = _dump(verdict.to_json_obj()) if args.json else _verdict_text(verdict)
    return (EXIT_ZERO if verdict.is_zero else EXIT_NONZERO), text


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = _run(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GuardExceeded, InfeasibleError, InterpolationError, NotInImage) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FreePitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
