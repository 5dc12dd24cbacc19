import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csskit.errors import EvalError, ExprSyntaxError, UnknownIdentifier
from csskit.expressions import (
    Bin,
    Lit,
    Neg,
    ScalarFn1D,
    ScalarFn4D,
    Var,
    compile_expr,
    differentiate,
    evaluate,
    parse_expr,
    to_str,
)

V = ("x", "y")


def test_precedence_and_associativity():
    e = parse_expr("1 + 2*x^2", V)
    assert evaluate(e, {"x": 3.0, "y": 0.0}) == 19.0
    # ^ binds tighter than unary minus
    assert evaluate(parse_expr("-x^2", V), {"x": 3.0, "y": 0.0}) == -9.0
    # ^ is right-associative in the exponent chain
    assert evaluate(parse_expr("x^2^3", V), {"x": 2.0, "y": 0.0}) == 2.0**8


def test_half_integer_powers():
    e = parse_expr("x^1.5", V)
    assert evaluate(e, {"x": 4.0, "y": 0.0}) == pytest.approx(8.0)
    with pytest.raises(EvalError):
        evaluate(e, {"x": -4.0, "y": 0.0})
    with pytest.raises(ExprSyntaxError):
        parse_expr("x^0.3", V)
    with pytest.raises(ExprSyntaxError):
        parse_expr("x^y", V)


def test_constant_folding():
    assert parse_expr("2 + 3", V) == Lit(5.0)
    assert parse_expr("x + 0", V) == Var("x")
    assert parse_expr("1*x", V) == Var("x")
    assert parse_expr("x^1", V) == Var("x")
    assert parse_expr("x^0", V) == Lit(1.0)
    assert parse_expr("0 - x", V) == Neg(Var("x"))


def test_syntax_error_offsets():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("2 +* x", V)
    assert err.value.offset == 2
    with pytest.raises(ExprSyntaxError):
        parse_expr("(x + 1", V)
    with pytest.raises(ExprSyntaxError):
        parse_expr("", V)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as err:
        parse_expr("x + zz", V)
    assert err.value.name == "zz"
    with pytest.raises(UnknownIdentifier):
        parse_expr("tan(x)", V)


def test_eval_error_domains():
    assert evaluate(parse_expr("ln(x)", V), {"x": 2.0, "y": 0.0}) == pytest.approx(math.log(2.0))
    with pytest.raises(EvalError):
        evaluate(parse_expr("ln(x)", V), {"x": -1.0, "y": 0.0})
    with pytest.raises(EvalError):
        evaluate(parse_expr("1/x", V), {"x": 0.0, "y": 0.0})
    with pytest.raises(EvalError):
        evaluate(parse_expr("exp(x)", V), {"x": 1e9, "y": 0.0})


_leaf = st.one_of(
    st.floats(min_value=-3, max_value=3).map(lambda v: Lit(round(v, 3))),
    st.sampled_from([Var("x"), Var("y")]),
)


def _combine(children):
    a, b = children
    return st.sampled_from(
        [
            Bin("+", a, b),
            Bin("-", a, b),
            Bin("*", a, b),
            Neg(a),
            Bin("^", a, Lit(2.0)),
        ]
    )


_exprs = st.recursive(_leaf, lambda s: st.tuples(s, s).flatmap(_combine), max_leaves=12)


@given(_exprs, st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=200, deadline=None)
def test_round_trip_and_compile_agree(e, x, y):
    text = to_str(e)
    back = parse_expr(text, V)
    env = {"x": x, "y": y}
    try:
        direct = evaluate(e, env)
    except EvalError:
        return
    assert evaluate(back, env) == pytest.approx(direct, rel=1e-12, abs=1e-12)
    fn = compile_expr(back, V)
    assert fn(x, y) == pytest.approx(direct, rel=1e-12, abs=1e-12)


@given(st.floats(-1.2, 1.2))
@settings(max_examples=100, deadline=None)
def test_derivative_matches_finite_difference(x):
    f = ScalarFn1D.parse("sin(x)*exp(0.3*x) + x^3 - 2/(x + 3)", "x")
    h = 1e-5
    fd = (f(x + h) - f(x - h)) / (2 * h)
    assert f.deriv(x) == pytest.approx(fd, rel=1e-7, abs=1e-7)


def test_sqrt_derivative():
    f = ScalarFn1D.parse("sqrt(1 + x^2)", "x")
    x = 0.7
    assert f.deriv(x) == pytest.approx(x / math.sqrt(1 + x * x), rel=1e-12)


def test_scalar_fn_4d_truncates_extra_args():
    p = ScalarFn4D.parse("1 + u*v", ("u", "v", "w"))
    assert p(2.0, 3.0, 4.0) == 7.0
    assert p(2.0, 3.0, 4.0, 99.0) == 7.0


def test_scalar_fn_4d_gradient():
    f = ScalarFn4D.parse("x0^2 + x1*x2", ("x0", "x1", "x2", "x3"))
    g = f.gradient()
    assert g[0](1.0, 2.0, 3.0, 4.0) == 2.0
    assert g[1](1.0, 2.0, 3.0, 4.0) == 3.0
    assert g[3](1.0, 2.0, 3.0, 4.0) == 0.0
