import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkfourier.expressions import ExpressionError, function_from_expression, parse_expression
from hkfourier.functions import cantor_eval


@pytest.mark.parametrize("text, t, expected", [
    ("exp(-abs(t))", 1.5, math.exp(-1.5)),
    ("1/(1+t^2)", 2.0, 0.2),
    ("2^3 + t", 1.0, 9.0),
    ("atan(abs(t)) - pi/2", 0.0, -math.pi / 2),
    ("arctan(t)", 1.0, math.pi / 4),
    ("pow(t, 2) * e", 3.0, 9 * math.e),
    ("cbrt(t) * sin(1/t)", -0.5, -(0.5 ** (1 / 3)) * math.sin(-2)),
    ("sqrt(t) + cos(t)", 4.0, 2 + math.cos(4.0)),
    ("sign(t) * exp(-abs(t))", -2.0, -math.exp(-2.0)),
    ("cantor(t)", 0.25, 1 / 3),
    ("indicator(0, 1) * t", 0.5, 0.5),
    ("indicator(0, 1) * t", 1.0, 0.0),
    ("indicator(-inf, 0)", -1e6, 1.0),
])
def test_evaluation(text, t, expected):
    f = function_from_expression(text)
    assert float(f(t)) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_vectorised_and_constant_expressions():
    f = function_from_expression("3")
    assert np.all(f(np.arange(4.0)) == 3.0)
    g = function_from_expression("t*t")
    assert np.allclose(g(np.array([1.0, 2.0])), [1.0, 4.0])


@pytest.mark.parametrize("text", ["__import__('os')", "t.real", "foo(t)", "x + 1", "t if t else 1",
                                  "exp(t, 2)", "lambda: 1", "1 +", "[t]", "exp(t=1)"])
def test_rejected_input(text):
    with pytest.raises(ExpressionError):
        function_from_expression(text)


def test_symbolic_derivative():
    f = function_from_expression("exp(-t^2/2)")
    t = np.linspace(-3, 3, 13)
    assert np.allclose(f.derivative(t), -t * np.exp(-t * t / 2), atol=1e-15)
    h = function_from_expression("atan(abs(t)) - pi/2")
    assert h.derivative(2.0) == pytest.approx(1 / 5)
    assert h.derivative(-2.0) == pytest.approx(-1 / 5)


def test_no_derivative_through_cantor_or_indicator():
    assert function_from_expression("cantor(t)").derivative is None
    assert function_from_expression("indicator(0, 1)/(1+t^2)").derivative is None


def test_metadata_is_passed_through():
    f = function_from_expression("exp(-abs(t))", label="mine", parity="even",
                                 membership=["L1", "BV0"], singular_points=[0.0],
                                 total_variation=2.0, support=[(-5.0, 5.0)])
    assert f.label == "mine" and f.parity == "even" and f.has("L1", "BV0")
    assert f.singular_points == (0.0,) and f.total_variation == 2.0
    assert f.support == ((-5.0, 5.0),)


def test_caret_binds_like_power():
    assert parse_expression("1 + t^2") == parse_expression("1 + t**2")


@settings(max_examples=40)
@given(t=st.floats(0, 1))
def test_cantor_call_matches_direct_evaluation(t):
    assert float(function_from_expression("cantor(t)")(t)) == cantor_eval(t)


@settings(max_examples=40)
@given(t=st.floats(-50, 50, allow_subnormal=False))
def test_gaussian_expression_matches_numpy(t):
    assert float(function_from_expression("exp(-t^2/2)")(t)) == pytest.approx(math.exp(-t * t / 2), rel=1e-14, abs=1e-300)
