"""Formula expression trees: parsing, evaluation, mirroring, adjugates."""

from fractions import Fraction
from random import Random

import pytest

from cliffinv import Multivector, Signature, gp
from cliffinv.exprs import (INPUT, REVERSED_INPUT, VECTOR_INPUT,
                            adjugate_matches, evaluate, flatten_product,
                            input_count, mirror, negate, negation_count,
                            parse_expr, product, serialize,
                            strip_leading_input, weighted_sum)
from cliffinv.sampling import random_multivector

from conftest import EX2_A, EX2_H, mv

H5_TEXT = "prod(A,neg{2,3}(A))"


def test_parse_serialize_round_trip_and_interning():
    texts = [
        "A",
        "rev(A)",
        "prod()",
        f"prod({H5_TEXT}, neg{{1,5}}({H5_TEXT}))",
        "sum(1/3*A, -2/3*neg{4}(A))",
        "prod(v, prod(A, v))",
    ]
    for text in texts:
        expr = parse_expr(text)
        assert parse_expr(serialize(expr)) is expr
    assert parse_expr("neg{3,2}(A)") is parse_expr("neg{2,3}(A)")
    assert parse_expr("prod(A)") is INPUT
    assert negate(set(), INPUT) is INPUT


def test_parse_errors():
    for bad in ("", "prod(A", "neg{}(A)", "neg{a}(A)", "sum()", "sum(A)",
                "rev(v)", "B", "prod(A,) "):
        with pytest.raises(ValueError):
            parse_expr(bad)


def test_evaluate_basics():
    a = mv(5, 0, EX2_A)
    assert evaluate(INPUT, a) == a
    assert evaluate(REVERSED_INPUT, a) == a.reverse()
    assert evaluate(parse_expr("prod()"), a) == Multivector.scalar(a.sig, 1)
    h = evaluate(parse_expr(H5_TEXT), a)
    assert h == mv(5, 0, EX2_H)
    combo = evaluate(parse_expr("sum(1/3*A, 2/3*A)"), a)
    assert combo == a


def test_evaluate_requires_vector_binding():
    expr = parse_expr("prod(A, v)")
    a = Multivector.scalar(Signature(2, 0), 1)
    with pytest.raises(ValueError):
        evaluate(expr, a)
    v = Multivector.basis_vector(a.sig, 1)
    assert evaluate(expr, a, v=v) == v


def test_memo_is_shared_across_calls():
    a = mv(5, 0, EX2_A)
    memo = {}
    h = parse_expr(H5_TEXT)
    evaluate(h, a, memo=memo)
    assert h in memo
    bigger = parse_expr(f"prod({H5_TEXT}, neg{{1,5}}({H5_TEXT}))")
    evaluate(bigger, a, memo=memo)
    assert memo[h] == mv(5, 0, EX2_H)


def test_mirror_swaps_order_and_reverses_input():
    expr = parse_expr(f"prod({H5_TEXT}, neg{{1,5}}({H5_TEXT}))")
    mirrored = mirror(expr)
    assert mirror(mirrored) is expr
    rng = Random(12)
    for sig in (Signature(5, 0), Signature(2, 3)):
        for _ in range(5):
            a = random_multivector(sig, rng)
            left = evaluate(expr, a)
            right = evaluate(mirrored, a)
            # The mirrored form is the reversion of the original value.
            assert right == left.reverse()


def test_flatten_and_strip_leading_input():
    expr = parse_expr(f"prod({H5_TEXT}, neg{{1,5}}({H5_TEXT}))")
    flat = flatten_product(expr)
    assert flat[0] is INPUT
    assert len(flat) == 3
    adj = strip_leading_input(expr)
    assert adjugate_matches(expr, adj)
    assert not adjugate_matches(expr, INPUT)
    with pytest.raises(ValueError):
        strip_leading_input(parse_expr("neg{1}(A)"))


def test_strip_leading_input_distributes_over_sums():
    expr = parse_expr(f"sum(1/3*prod(A, A), 2/3*prod(A, neg{{1}}(A)))")
    adj = strip_leading_input(expr)
    assert serialize(adj) == "sum(1/3*A, 2/3*neg{1}(A))"
    assert adjugate_matches(expr, adj)


def test_counts():
    expr = parse_expr(
        f"prod({H5_TEXT}, neg{{1,5}}({H5_TEXT}), "
        f"neg{{3,4}}(prod({H5_TEXT}, neg{{1,5}}({H5_TEXT}))))")
    assert negation_count(expr) == 14
    assert input_count(expr) == 8
    assert negation_count(INPUT) == 0
    assert input_count(parse_expr("sum(1*A, 1/2*rev(A))")) == 1


def test_adjugate_relation_numerically():
    # det = A * adjugate holds for any product expression by associativity.
    rng = Random(13)
    expr = parse_expr(
        f"prod({H5_TEXT}, neg{{1,4}}({H5_TEXT}), neg{{5}}(prod({H5_TEXT}, neg{{1,4}}({H5_TEXT}))))")
    adj = strip_leading_input(expr)
    for _ in range(5):
        a = random_multivector(Signature(4, 1), rng)
        assert gp(a, evaluate(adj, a)) == evaluate(expr, a)
