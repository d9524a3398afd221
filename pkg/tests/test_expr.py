import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bour_edge.errors import DomainError, ExprSyntaxError
from bour_edge.expr import BinOp, Call, Const, Var, parse_expr


def test_parse_metric_function_example():
    f = parse_expr("1 - s*cos(s) + sin(s)")
    for s in (0.0, 0.3, -0.7, 1.2):
        assert f(s) == pytest.approx(1 - s * math.cos(s) + math.sin(s), abs=1e-15)


def test_parse_identity():
    f = parse_expr("s")
    assert isinstance(f.root, Var)
    assert f(1.75) == 1.75


def test_unbalanced_paren_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("sin(")
    assert err.value.position == 4


def test_unknown_identifier():
    with pytest.raises(ExprSyntaxError, match="unknown identifier"):
        parse_expr("tan(s)")
    with pytest.raises(ExprSyntaxError, match="unknown identifier"):
        parse_expr("x + 1")


def test_non_integer_exponent():
    with pytest.raises(ExprSyntaxError, match="non-integer exponent"):
        parse_expr("s^2.5")
    with pytest.raises(ExprSyntaxError, match="expected integer exponent"):
        parse_expr("s^(2)")


def test_trailing_input():
    with pytest.raises(ExprSyntaxError, match="trailing"):
        parse_expr("1 + 2 3")


def test_precedence_and_power():
    assert parse_expr("2 + 3*4")(0) == 14
    assert parse_expr("-s^2")(2.0) == -4.0  # unary minus binds looser than ^
    assert parse_expr("(1 - s)^3")(3.0) == -8.0
    assert parse_expr("s^-2")(2.0) == 0.25
    assert parse_expr("2 - 3 - 4")(0) == -5  # left associative


def test_division_by_zero_raises():
    f = parse_expr("1/(s - 1)")
    with pytest.raises(DomainError):
        f(1.0)


def test_sqrt_of_negative_raises():
    with pytest.raises(DomainError):
        parse_expr("sqrt(s)")(-1.0)


def test_custom_variable_name():
    f = parse_expr("u^2 + 1", var="u")
    assert f(3.0) == 10.0
    with pytest.raises(ExprSyntaxError):
        parse_expr("s", var="u")


def _random_expr_text(rng, depth=0):
    choices = ["num", "var"]
    if depth < 4:
        choices += ["add", "sub", "mul", "div", "pow", "neg", "call"]
    kind = rng.choice(choices)
    if kind == "num":
        return repr(round(rng.uniform(0.1, 5.0), 3))
    if kind == "var":
        return "s"
    if kind == "call":
        fn = rng.choice(["sin", "cos", "exp"])
        return f"{fn}({_random_expr_text(rng, depth + 1)})"
    if kind == "neg":
        return f"-({_random_expr_text(rng, depth + 1)})"
    if kind == "pow":
        return f"({_random_expr_text(rng, depth + 1)})^{rng.randint(0, 4)}"
    op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[kind]
    return f"({_random_expr_text(rng, depth + 1)}) {op} ({_random_expr_text(rng, depth + 1)})"


def test_reparse_idempotence_corpus():
    rng = random.Random(987)
    for _ in range(50):
        text = _random_expr_text(rng)
        first = parse_expr(text)
        second = parse_expr(first.to_source())
        assert first.root == second.root, text
        third = parse_expr(second.to_source())
        assert second.root == third.root


_leaf = st.one_of(
    st.floats(min_value=0.1, max_value=4.0).map(lambda v: parse_expr(repr(v))),
    st.just(parse_expr("s")),
)


def _combine(children):
    a, b = children
    return st.sampled_from([a + b, a - b, a * b, parse_expr(f"sin({a.to_source()})")])


_exprs = st.recursive(_leaf, lambda inner: st.tuples(inner, inner).flatmap(_combine), max_leaves=12)


@given(_exprs)
@settings(max_examples=120, deadline=None)
def test_reparse_idempotence_property(fn):
    reparsed = parse_expr(fn.to_source())
    assert reparsed.root == parse_expr(reparsed.to_source()).root


def test_operator_building_matches_evaluation():
    f = parse_expr("sin(s)") * parse_expr("s") + 2.0
    assert f(0.5) == pytest.approx(math.sin(0.5) * 0.5 + 2.0, rel=1e-15)
    assert isinstance(f.root, BinOp)
    g = -parse_expr("cos(s)")
    assert g(0.0) == -1.0
    h = parse_expr("s") ** 3
    assert h(2.0) == 8.0


def test_source_text_preserved():
    f = parse_expr("1 - s*cos(s) + sin(s)")
    assert f.source_text == "1 - s*cos(s) + sin(s)"
    assert isinstance(parse_expr("7").root, Const)
    assert isinstance(parse_expr("sin(s)").root, Call)
