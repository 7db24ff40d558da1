"""Polynomial expressions over X and X^-1: parsing, printing, evaluation, expansion.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' ['-'] INT)?
    atom   := 'x' INT | INT | '(' expr ')'

``a - b`` is stored as ``Add(a, Mul(Const(-1), b))``.  Negative exponents are
only accepted on variables (possibly parenthesized or already powered), since
only variables may be inverted.  A positive power of a compound
subexpression becomes a DAG of shared ``Mul`` nodes (repeated squaring).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import GuardExceeded, InversionHeightError, ParseError
from .field import RATIONALS, FieldSpec, Scalar
from .freegroup import AlgebraElement, Letter, MatrixAssignment, word_str
from .matrix import SquareMatrix, mat_add, mat_mul, mat_pow, scalar_matrix


@dataclass(frozen=True, eq=False)
class Const:
    value: Scalar


@dataclass(frozen=True, eq=False)
class Var:
    index: int


@dataclass(frozen=True, eq=False)
class InvVar:
    index: int


@dataclass(frozen=True, eq=False)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True, eq=False)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True, eq=False)
class Pow:
    child: Union[Var, InvVar]
    exponent: int

    def __post_init__(self):
        if not isinstance(self.child, (Var, InvVar)):
            raise InversionHeightError("Pow applies to variables only")
        if self.exponent == 0:
            raise ValueError("Pow exponent must be nonzero")

    @property
    def signed_exponent(self) -> int:
        """Exponent of the underlying x_i (negative means x_i^-1 powers)."""
        return self.exponent if isinstance(self.child, Var) else -self.exponent


Node = Union[Const, Var, InvVar, Add, Mul, Pow]


@dataclass(frozen=True, eq=False)
class Expression:
    root: Node
    n: int
    field: FieldSpec = RATIONALS

    def __str__(self) -> str:
        return to_text(self)


def var_power(index: int, k: int) -> Node:
    """Canonical node for x_index^k, k != 0."""
    if k == 1:
        return Var(index)
    if k == -1:
        return InvVar(index)
    return Pow(Var(index), k)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x\d+)|(\d+)|([-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            offset = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + offset]!r}", pos + offset)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("var", m.group(1), start))
        elif m.group(2):
            tokens.append(("int", m.group(2), start))
        else:
            tokens.append((m.group(3), m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int, field: FieldSpec):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        self.field = field
        self.minus_one = field.neg(field.one)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        self.take("end")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            rhs = self.term()
            node = Add(node, rhs if op == "+" else Mul(Const(self.minus_one), rhs))
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Node:
        if self.peek()[0] == "-":
            self.take("-")
            if self.peek()[0] == "int" and self.tokens[self.i + 1][0] != "^":
                return Const(self.field.neg(self.field.from_int(int(self.take("int")[1]))))
            return Mul(Const(self.minus_one), self.factor())
        start = self.peek()[2]
        node = self.atom()
        if self.peek()[0] != "^":
            return node
        self.take("^")
        negative = False
        if self.peek()[0] == "-":
            self.take("-")
            negative = True
        k = int(self.take("int")[1])
        if negative:
            k = -k
        if k >= 2**63:
            raise ParseError("exponent too large", start)
        return self.power(node, k, start)

    def power(self, node: Node, k: int, pos: int) -> Node:
        if k == 0:
            return Const(self.field.one)
        if isinstance(node, (Var, InvVar, Pow)):
            base = node.signed_exponent if isinstance(node, Pow) else (1 if isinstance(node, Var) else -1)
            return var_power(node.child.index if isinstance(node, Pow) else node.index, base * k)
        if k < 0:
            raise InversionHeightError("negative exponent on a non-variable subexpression", pos)
        if isinstance(node, Const):
            return Const(self.field.pow(node.value, k))
        return power_dag(node, k)

    def atom(self) -> Node:
        kind, text, pos = self.peek()
        if kind == "var":
            self.i += 1
            idx = int(text[1:])
            if idx < 1 or idx > self.n:
                raise ParseError(f"generator x{idx} outside x1..x{self.n}", pos)
            return Var(idx)
        if kind == "int":
            self.i += 1
            return Const(self.field.from_int(int(text)))
        if kind == "(":
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", pos)


def power_dag(node: Node, k: int) -> Node:
    """node^k (k >= 1) as a DAG of shared Mul nodes."""
    result = None
    base = node
    while k:
        if k & 1:
            result = base if result is None else Mul(result, base)
        k >>= 1
        if k:
            base = Mul(base, base)
    return result


def parse(text: str, n: int, field: FieldSpec = RATIONALS) -> Expression:
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    body = " ".join(lines)
    if not body.strip():
        raise ParseError("empty expression", 0)
    return Expression(_Parser(body, n, field).parse(), n, field)


def max_generator(text: str) -> int:
    """Largest generator index mentioned in the text (0 if none)."""
    body = "\n".join(ln for ln in text.splitlines() if not ln.lstrip().startswith("#"))
    return max((int(m) for m in re.findall(r"x(\d+)", body)), default=0)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _const_text(F: FieldSpec, c: Scalar) -> str:
    if F.characteristic == 0:
        if c.denominator != 1:
            raise ValueError(f"non-integer constant {c} has no textual form")
        return str(c.numerator)
    return str(F.prime_subfield_int(c))


def to_text(e: Expression) -> str:
    """Canonical text; ``parse(to_text(e))`` rebuilds the same structure."""
    F = e.field
    minus_one = F.neg(F.one)

    def is_neg(node: Node) -> bool:
        return isinstance(node, Mul) and isinstance(node.left, Const) and node.left.value == minus_one

    def go(node: Node, prec: int) -> str:
        if isinstance(node, Const):
            return _const_text(F, node.value)
        if isinstance(node, Var):
            return f"x{node.index}"
        if isinstance(node, InvVar):
            return f"x{node.index}^-1"
        if isinstance(node, Pow):
            return f"x{node.child.index}^{node.signed_exponent}"
        if isinstance(node, Add):
            if is_neg(node.right):
                s = f"{go(node.left, 1)} - {go(node.right.right, 2)}"
            else:
                s = f"{go(node.left, 1)} + {go(node.right, 2)}"
            return f"({s})" if prec > 1 else s
        if isinstance(node, Mul):
            if node.left is node.right and not isinstance(node.left, Const):
                return f"({go(node.left, 1)})^2"
            s = f"{go(node.left, 2)}*{go(node.right, 3)}"
            return f"({s})" if prec > 2 else s
        raise TypeError(node)

    return go(e.root, 1)


def structurally_equal(a: Expression | Node, b: Expression | Node) -> bool:
    """Tree equality (sharing-insensitive), memoized on node identity."""
    if isinstance(a, Expression):
        if not isinstance(b, Expression) or a.n != b.n or a.field != b.field:
            return False
        a, b = a.root, b.root
    seen: set[tuple[int, int]] = set()

    def eq(x: Node, y: Node) -> bool:
        key = (id(x), id(y))
        if key in seen:
            return True
        if type(x) is not type(y):
            return False
        if isinstance(x, Const):
            ok = x.value == y.value
        elif isinstance(x, (Var, InvVar)):
            ok = x.index == y.index
        elif isinstance(x, Pow):
            ok = x.exponent == y.exponent and eq(x.child, y.child)
        else:
            ok = eq(x.left, y.left) and eq(x.right, y.right)
        if ok:
            seen.add(key)
        return ok

    return eq(a, b)


# ---------------------------------------------------------------------------
# Evaluation, expansion, degree bound
# ---------------------------------------------------------------------------


def eval_expr(
    e: Expression,
    assignment: MatrixAssignment,
    *,
    field: FieldSpec | None = None,
    dim: int | None = None,
) -> SquareMatrix:
    """Evaluate homomorphically at x_i -> M_i, x_i^-1 -> M_i^-1 (pairs are trusted)."""
    if assignment:
        m0 = next(iter(assignment.values()))[0]
        field, dim = m0.field, m0.dim
    if field is None or dim is None:
        raise ValueError("field and dim are required for an empty assignment")
    memo: dict[int, SquareMatrix] = {}

    def letter(i: int, sign: int) -> SquareMatrix:
        pair = assignment[i]
        return pair[0] if sign > 0 else pair[1]

    def go(node: Node) -> SquareMatrix:
        key = id(node)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = scalar_matrix(field, dim, field.embed(node.value, e.field))
        elif isinstance(node, Var):
            out = letter(node.index, 1)
        elif isinstance(node, InvVar):
            out = letter(node.index, -1)
        elif isinstance(node, Pow):
            k = node.signed_exponent
            out = mat_pow(letter(node.child.index, 1 if k > 0 else -1), abs(k))
        elif isinstance(node, Add):
            out = mat_add(go(node.left), go(node.right))
        else:
            out = mat_mul(go(node.left), go(node.right))
        memo[key] = out
        return out

    return go(e.root)


def expand(e: Expression, degree_guard: int = 64, sparsity_guard: int = 4096) -> AlgebraElement:
    """Exact canonical form of ``e`` in F<X, X^-1> (the brute-force oracle).

    Raises GuardExceeded when an intermediate result is too large.
    """
    if degree_guard < 1 or sparsity_guard < 1:
        raise ValueError("guards must be positive")
    F = e.field
    memo: dict[int, AlgebraElement] = {}

    def guard(f: AlgebraElement) -> AlgebraElement:
        if f.degree() > degree_guard:
            raise GuardExceeded("degree", degree_guard, f.degree())
        if f.sparsity() > sparsity_guard:
            raise GuardExceeded("sparsity", sparsity_guard, f.sparsity())
        return f

    def go(node: Node) -> AlgebraElement:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Const):
            out = AlgebraElement.constant(F, node.value)
        elif isinstance(node, Var):
            out = AlgebraElement.word(F, [Letter(node.index, 1)])
        elif isinstance(node, InvVar):
            out = AlgebraElement.word(F, [Letter(node.index, -1)])
        elif isinstance(node, Pow):
            k = node.signed_exponent
            if abs(k) > degree_guard:
                raise GuardExceeded("degree", degree_guard, abs(k))
            out = AlgebraElement.word(F, [Letter(node.child.index, 1 if k > 0 else -1)] * abs(k))
        elif isinstance(node, Add):
            out = go(node.left) + go(node.right)
        else:
            out = go(node.left) * go(node.right)
        memo[key] = guard(out)
        return memo[key]

    return go(e.root)


def syntactic_degree_bound(e: Expression | Node) -> int:
    root = e.root if isinstance(e, Expression) else e
    memo: dict[int, int] = {}

    def go(node: Node) -> int:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Const):
            out = 0
        elif isinstance(node, (Var, InvVar)):
            out = 1
        elif isinstance(node, Pow):
            out = abs(node.exponent)
        elif isinstance(node, Add):
            out = max(go(node.left), go(node.right))
        else:
            out = go(node.left) + go(node.right)
        memo[key] = out
        return out

    return go(root)


def expression_from_algebra(f: AlgebraElement, n: int) -> Expression:
    """A sum-of-words expression whose expansion is ``f``."""
    F = f.field
    node: Node | None = None
    for w, c in f.items():
        term: Node = Const(c)
        for a in w:
            term = Mul(term, Var(a.gen) if a.sign > 0 else InvVar(a.gen))
        node = term if node is None else Add(node, term)
    return Expression(node if node is not None else Const(F.zero), n, F)


# ---------------------------------------------------------------------------
# Black boxes
# ---------------------------------------------------------------------------


class BlackBox:
    """Matrix-valued oracle for a hidden element of F<X, X^-1>.

    Calling it with a generator -> (M, M^-1) map returns f(M_1, ..., M_n).
    Evaluations must be pure so that trials can share the box.
    """

    def __init__(
        self,
        evaluate: Callable[[MatrixAssignment], SquareMatrix],
        n: int,
        *,
        degree_bound: int | None = None,
        sparsity_bound: int | None = None,
    ):
        self._evaluate = evaluate
        self.n = n
        self.degree_bound = degree_bound
        self.sparsity_bound = sparsity_bound

    def __call__(self, assignment: MatrixAssignment) -> SquareMatrix:
        return self._evaluate(assignment)

    @classmethod
    def from_expression(cls, e: Expression) -> "BlackBox":
        return cls(lambda a: eval_expr(e, a), e.n, degree_bound=syntactic_degree_bound(e))

    @classmethod
    def from_algebra(cls, f: AlgebraElement, n: int) -> "BlackBox":
        from .freegroup import eval_algebra

        return cls(
            lambda a: eval_algebra(f, a, verify=False),
            n,
            degree_bound=max(f.degree(), 0),
            sparsity_bound=f.sparsity(),
        )


# ---------------------------------------------------------------------------
# Random expressions (reproducible corpora for tests and benchmarks)
# ---------------------------------------------------------------------------


def random_expression(
    rng: random.Random,
    n: int,
    depth: int,
    field: FieldSpec = RATIONALS,
    const_pool: Sequence[int] = (-2, -1, 0, 1, 2),
    max_power: int = 2,
) -> Expression:
    def leaf() -> Node:
        r = rng.random()
        i = rng.randint(1, n)
        if r < 0.2:
            return Const(field.from_int(rng.choice(const_pool)))
        if r < 0.55:
            return Var(i)
        if r < 0.85:
            return InvVar(i)
        k = rng.randint(2, max(2, max_power))
        return var_power(i, k if rng.random() < 0.5 else -k)

    def gen(d: int) -> Node:
        if d == 0 or rng.random() < 0.25:
            return leaf()
        left, right = gen(d - 1), gen(d - 1)
        return Add(left, right) if rng.random() < 0.5 else Mul(left, right)

    return Expression(gen(depth), n, field)


def random_sparse_expression(
    rng: random.Random,
    n: int,
    terms: int,
    degree: int,
    field: FieldSpec = RATIONALS,
    const_pool: Sequence[int] = (-2, -1, 1, 2),
) -> Expression:
    """Sum of ``terms`` scaled products of variable powers, each of total length ~``degree``."""
    node: Node | None = None
    for _ in range(terms):
        term: Node = Const(field.from_int(rng.choice(const_pool)))
        remaining = degree
        while remaining > 0:
            k = rng.randint(1, min(remaining, 8))
            remaining -= k
            term = Mul(term, var_power(rng.randint(1, n), k if rng.random() < 0.6 else -k))
        node = term if node is None else Add(node, term)
    return Expression(node, n, field)


__all__ = [
    "Add",
    "BlackBox",
    "Const",
    "Expression",
    "InvVar",
    "Mul",
    "Node",
    "Pow",
    "Var",
    "eval_expr",
    "expand",
    "expression_from_algebra",
    "max_generator",
    "parse",
    "power_dag",
    "random_expression",
    "random_sparse_expression",
    "structurally_equal",
    "syntactic_degree_bound",
    "to_text",
    "var_power",
    "word_str",
]
