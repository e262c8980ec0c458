"""Evaluation trees for determinant-norm and inverse formulas.

A formula is a tree over one bound multivector input: the input itself, its
reversion, grade negations, geometric products, and rational weighted sums.
Even-subalgebra recipes additionally bind a dummy vector atom.

Nodes are interned: structurally equal trees are the same object, so
evaluation can memoize repeated pieces (the self-products that appear many
times inside one formula) by identity.

Text syntax, used by the catalog files and the search reports:

    A                      the bound input
    rev(A)                 reversion of the input
    v                      the bound dummy vector (even-inverse recipes only)
    neg{g1,g2}(expr)       grade negation
    prod(e1, e2, ...)      geometric product, left to right; prod() is 1
    sum(w1*e1, w2*e2, ...) weighted sum with rational weights like 2/3 or -1
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .algebra import (Multivector, gp, grade_negate, involution,
                      linear_combine)


class Expr:
    """Base class for interned formula nodes; equality is identity."""

    __slots__ = ()

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return serialize(self)


class InputExpr(Expr):
    __slots__ = ()


class ReversedInputExpr(Expr):
    __slots__ = ()


class VectorInputExpr(Expr):
    __slots__ = ()


class NegateExpr(Expr):
    __slots__ = ("grades", "child")

    def __init__(self, grades, child):
        object.__setattr__(self, "grades", grades)
        object.__setattr__(self, "child", child)


class ProductExpr(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        object.__setattr__(self, "factors", factors)


class SumExpr(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", terms)


INPUT = InputExpr()
REVERSED_INPUT = ReversedInputExpr()
VECTOR_INPUT = VectorInputExpr()

_interned = {}


def negate(grades: Iterable[int], child: Expr) -> Expr:
    grades = frozenset(grades)
    if not all(isinstance(g, int) and g >= 0 for g in grades):
        raise ValueError(f"invalid grade set {sorted(grades)}")
    if not grades:
        return child
    key = ("neg", tuple(sorted(grades)), child)
    node = _interned.get(key)
    if node is None:
        node = _interned.setdefault(key, NegateExpr(grades, child))
    return node


def product(*factors: Expr) -> Expr:
    if len(factors) == 1:
        return factors[0]
    key = ("prod", factors)
    node = _interned.get(key)
    if node is None:
        node = _interned.setdefault(key, ProductExpr(tuple(factors)))
    return node


def weighted_sum(*terms) -> Expr:
    normalized = tuple((Fraction(w), e) for w, e in terms)
    if not normalized:
        raise ValueError("weighted_sum needs at least one term")
    if len(normalized) == 1 and normalized[0][0] == 1:
        return normalized[0][1]
    key = ("sum", normalized)
    node = _interned.get(key)
    if node is None:
        node = _interned.setdefault(key, SumExpr(normalized))
    return node


def evaluate(expr: Expr, a: Multivector, v: Optional[Multivector] = None,
             memo: Optional[dict] = None) -> Multivector:
    """Bottom-up evaluation of a formula on the bound input `a`.

    `memo` maps nodes to already-computed values; pass a shared dict to reuse
    common subtrees (e.g. the self-product H) across several formulas
    evaluated on the same input.
    """
    if memo is None:
        memo = {}

    def walk(node):
        value = memo.get(node)
        if value is not None:
            return value
        if isinstance(node, InputExpr):
            value = a
        elif isinstance(node, ReversedInputExpr):
            value = involution(a, "reverse")
        elif isinstance(node, VectorInputExpr):
            if v is None:
                raise ValueError("formula references the dummy vector but none was bound")
            value = v
        elif isinstance(node, NegateExpr):
            value = grade_negate(walk(node.child), node.grades)
        elif isinstance(node, ProductExpr):
            if not node.factors:
                value = Multivector.scalar(a.sig, 1)
            else:
                value = walk(node.factors[0])
                for factor in node.factors[1:]:
                    value = gp(value, walk(factor))
        elif isinstance(node, SumExpr):
            value = linear_combine([(w, walk(e)) for w, e in node.terms])
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[node] = value
        return value

    return walk(expr)


def mirror(expr: Expr) -> Expr:
    """Right-form counterpart: reverse every product order and swap the input
    for its reversion.  A determinant norm and its mirror agree exactly."""
    if isinstance(expr, InputExpr):
        return REVERSED_INPUT
    if isinstance(expr, ReversedInputExpr):
        return INPUT
    if isinstance(expr, VectorInputExpr):
        return expr
    if isinstance(expr, NegateExpr):
        return negate(expr.grades, mirror(expr.child))
    if isinstance(expr, ProductExpr):
        return product(*(mirror(f) for f in reversed(expr.factors)))
    if isinstance(expr, SumExpr):
        return weighted_sum(*((w, mirror(e)) for w, e in expr.terms))
    raise TypeError(f"not a formula node: {expr!r}")


def flatten_product(expr: Expr) -> tuple:
    """Associative flattening of nested top-level products."""
    if isinstance(expr, ProductExpr):
        out = []
        for factor in expr.factors:
            out.extend(flatten_product(factor))
        return tuple(out)
    return (expr,)


def strip_leading_input(expr: Expr) -> Expr:
    """Remove the left-most bound input from a product, yielding the adjugate
    shape of a determinant-norm expression."""
    if isinstance(expr, SumExpr):
        return weighted_sum(*((w, strip_leading_input(e)) for w, e in expr.terms))
    factors = flatten_product(expr)
    if not factors or not isinstance(factors[0], InputExpr):
        raise ValueError("expression does not start with the bound input")
    return product(*factors[1:])


def adjugate_matches(det_expr: Expr, adjugate_expr: Expr) -> bool:
    """Check the structural relation: det = prod(input, adjugate factors),
    termwise for weighted sums."""
    if isinstance(det_expr, SumExpr):
        if not isinstance(adjugate_expr, SumExpr):
            return False
        if len(det_expr.terms) != len(adjugate_expr.terms):
            return False
        return all(wd == wa and adjugate_matches(ed, ea)
                   for (wd, ed), (wa, ea) in zip(det_expr.terms, adjugate_expr.terms))
    det_factors = flatten_product(det_expr)
    if not det_factors or not isinstance(det_factors[0], InputExpr):
        return False
    return det_factors[1:] == flatten_product(adjugate_expr)


def negation_count(expr: Expr) -> int:
    """Total number of negated grades over all occurrences in the tree (the
    bookkeeping count used to group catalog rows)."""
    if isinstance(expr, NegateExpr):
        return len(expr.grades) + negation_count(expr.child)
    if isinstance(expr, ProductExpr):
        return sum(negation_count(f) for f in expr.factors)
    if isinstance(expr, SumExpr):
        return sum(negation_count(e) for _, e in expr.terms)
    return 0


def input_count(expr: Expr) -> int:
    """Number of bound-input occurrences (multivector factors) in the tree."""
    if isinstance(expr, (InputExpr, ReversedInputExpr)):
        return 1
    if isinstance(expr, NegateExpr):
        return input_count(expr.child)
    if isinstance(expr, ProductExpr):
        return sum(input_count(f) for f in expr.factors)
    if isinstance(expr, SumExpr):
        counts = {input_count(e) for _, e in expr.terms}
        if len(counts) != 1:
            raise ValueError("sum terms have differing factor counts")
        return counts.pop()
    return 0


def uses_vector(expr: Expr) -> bool:
    if isinstance(expr, VectorInputExpr):
        return True
    if isinstance(expr, NegateExpr):
        return uses_vector(expr.child)
    if isinstance(expr, ProductExpr):
        return any(uses_vector(f) for f in expr.factors)
    if isinstance(expr, SumExpr):
        return any(uses_vector(e) for _, e in expr.terms)
    return False


# -- text form ---------------------------------------------------------------

def serialize(expr: Expr) -> str:
    if isinstance(expr, InputExpr):
        return "A"
    if isinstance(expr, ReversedInputExpr):
        return "rev(A)"
    if isinstance(expr, VectorInputExpr):
        return "v"
    if isinstance(expr, NegateExpr):
        grades = ",".join(str(g) for g in sorted(expr.grades))
        return f"neg{{{grades}}}({serialize(expr.child)})"
    if isinstance(expr, ProductExpr):
        return f"prod({', '.join(serialize(f) for f in expr.factors)})"
    if isinstance(expr, SumExpr):
        terms = ", ".join(f"{w}*{serialize(e)}" for w, e in expr.terms)
        return f"sum({terms})"
    raise TypeError(f"not a formula node: {expr!r}")


class _ExprParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise ValueError(f"bad formula expression: {message} at {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_int(self):
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def parse_name(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            self.error("expected name")
        return self.text[start:self.pos]

    def parse_expr(self) -> Expr:
        name = self.parse_name()
        if name == "A":
            return INPUT
        if name == "v":
            return VECTOR_INPUT
        if name == "rev":
            self.expect("(")
            inner = self.parse_name()
            if inner != "A":
                self.error("rev() applies to the bound input A")
            self.expect(")")
            return REVERSED_INPUT
        if name == "neg":
            self.expect("{")
            grades = [self.parse_int()]
            while self.peek() == ",":
                self.expect(",")
                grades.append(self.parse_int())
            self.expect("}")
            self.expect("(")
            child = self.parse_expr()
            self.expect(")")
            return negate(grades, child)
        if name == "prod":
            self.expect("(")
            factors = []
            if self.peek() != ")":
                factors.append(self.parse_expr())
                while self.peek() == ",":
                    self.expect(",")
                    factors.append(self.parse_expr())
            self.expect(")")
            return product(*factors)
        if name == "sum":
            self.expect("(")
            terms = [self.parse_term()]
            while self.peek() == ",":
                self.expect(",")
                terms.append(self.parse_term())
            self.expect(")")
            return weighted_sum(*terms)
        self.error(f"unknown form {name!r}")

    def parse_term(self):
        numerator = self.parse_int()
        weight = Fraction(numerator)
        if self.peek() == "/":
            self.expect("/")
            weight = Fraction(numerator, self.parse_int())
        self.expect("*")
        return weight, self.parse_expr()

    def parse_complete(self) -> Expr:
        expr = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return expr


def parse_expr(text: str) -> Expr:
    """Parse the catalog expression syntax into an interned tree."""
    return _ExprParser(text).parse_complete()
