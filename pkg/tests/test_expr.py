import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from onofri_lab.errors import ExprDomainError, ExprSyntaxError
from onofri_lab.numcore import compile_expr, eval_expr, parse_expr, to_source


@pytest.mark.parametrize("src, x, expected", [
    ("1 + 2 * 3", 0.0, 7.0),
    ("2 ^ 3 ^ 2", 0.0, 512.0),
    ("2 ** 3", 0.0, 8.0),
    ("-2 ^ 2", 0.0, -4.0),
    ("(1 - z) / 2", 0.5, 0.25),
    ("exp(-r^2)", 1.0, math.exp(-1.0)),
    ("log(e) + cosh(0) + sqrt(4)", 0.0, 4.0),
    ("tanh(s) - sinh(s)", 0.0, 0.0),
    ("2 * pi", 0.0, 2 * math.pi),
    ("1.5e2 + .5", 0.0, 150.5),
])
def test_evaluation(src, x, expected):
    assert eval_expr(parse_expr(src), x) == pytest.approx(expected, abs=1e-15)


def test_vectorised_call_keeps_shape():
    f = compile_expr("0.3 * z")
    out = f(np.array([-1.0, 0.0, 1.0]))
    assert np.allclose(out, [-0.3, 0.0, 0.3])
    assert isinstance(f(0.5), float)


@pytest.mark.parametrize("src", ["", "1 +", "(1", "1 2", "exp(", "a + b", "3 $ 4", ")"])
def test_syntax_errors(src):
    with pytest.raises(ExprSyntaxError):
        parse_expr(src)


def test_syntax_error_reports_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("1 + * 2")
    assert info.value.position == 4


@pytest.mark.parametrize("src, x", [
    ("log(z)", 0.0), ("sqrt(z)", -1.0), ("1 / z", 0.0), ("z ^ 0.5", -1.0), ("z ^ -1", 0.0),
    ("exp(1000)", 0.0),
])
def test_domain_errors(src, x):
    with pytest.raises(ExprDomainError):
        eval_expr(parse_expr(src), x)


_ATOMS = st.one_of(st.sampled_from(["z", "pi", "e"]),
                   st.floats(0.0, 100.0, allow_nan=False).map(repr))


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(_ATOMS)
    kind = draw(st.sampled_from(["bin", "neg", "call", "paren"]))
    if kind == "bin":
        op = draw(st.sampled_from(["+", "-", "*"]))
        return f"{draw(expressions(depth - 1))} {op} {draw(expressions(depth - 1))}"
    if kind == "neg":
        return f"-{draw(expressions(depth - 1))}"
    if kind == "call":
        return f"tanh({draw(expressions(depth - 1))})"
    return f"({draw(expressions(depth - 1))})"


@given(expressions(), st.floats(-1, 1))
def test_round_trip_through_source(src, x):
    ast = parse_expr(src)
    again = parse_expr(to_source(ast))
    assert again == ast
    a = eval_expr(ast, x)
    assert eval_expr(again, x) == a
