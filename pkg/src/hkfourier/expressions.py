"""Inline function definitions from a small expression grammar.

The variable is ``t``. Allowed: numbers, ``pi``, ``e``, ``inf``, ``+ - * /``,
``**`` or ``^``, and the calls ``exp``, ``sin``, ``cos``, ``atan`` (also
``arctan``), ``abs``, ``sqrt``, ``cbrt``, ``sign``, ``pow(x, y)``,
``cantor(x)`` and ``indicator(a, b)``. ``indicator(a, b)`` is 1 on the open
interval ``(a, b)`` and 0 elsewhere; ``a`` and ``b`` may be ``-inf``/``inf``.

The derivative is produced symbolically unless the expression contains
``cantor`` or ``indicator``, in which case it is unavailable.
"""

from __future__ import annotations

import ast
import math
from typing import Iterable

import numpy as np
import sympy as sp

from .functions import RealFunction, cantor_eval

__all__ = ["ExpressionError", "parse_expression", "function_from_expression"]

T = sp.Symbol("t", real=True)


class ExpressionError(ValueError):
    pass


class cantor(sp.Function):
    nargs = 1


class indicator(sp.Function):
    nargs = 2


_CALLS = {
    "exp": sp.exp,
    "sin": sp.sin,
    "cos": sp.cos,
    "atan": sp.atan,
    "arctan": sp.atan,
    "abs": sp.Abs,
    "sqrt": sp.sqrt,
    "cbrt": lambda x: sp.sign(x) * sp.Abs(x) ** sp.Rational(1, 3),
    "sign": sp.sign,
    "pow": lambda x, y: x ** y,
    "cantor": cantor,
    "indicator": lambda a, b: indicator(a, b),
}
_NAMES = {"t": T, "pi": sp.pi, "e": sp.E, "inf": sp.oo}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}


def _build(node: ast.AST) -> sp.Expr:
    if isinstance(node, ast.Expression):
        return _build(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        v = node.value
        return sp.Integer(v) if isinstance(v, int) else sp.Float(v)
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise ExpressionError(f"unknown name {node.id!r}")
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _build(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_build(node.left), _build(node.right))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        if name not in _CALLS:
            raise ExpressionError(f"unknown function {name!r}")
        args = [_build(a) for a in node.args]
        try:
            return _CALLS[name](*args)
        except TypeError as exc:
            raise ExpressionError(f"bad arguments to {name}: {exc}") from None
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_expression(text: str) -> sp.Expr:
    """Parse ``text`` into a sympy expression in ``t``; raises ExpressionError."""
    try:
        # '^' would bind looser than '+' in Python's grammar
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    expr = _build(tree)
    if not isinstance(expr, sp.Basic):
        expr = sp.sympify(expr)
    extra = expr.free_symbols - {T}
    if extra:
        raise ExpressionError(f"unknown symbols {sorted(map(str, extra))}")
    return expr


def _np_cantor(x):
    x = np.asarray(x, dtype=float)
    return cantor_eval(x)


def _np_indicator(a, b, t):
    return np.where((t > a) & (t < b), 1.0, 0.0)


def _lambdify(expr: sp.Expr):
    # indicator needs t; rewrite indicator(a, b) -> _ind(a, b, t)
    ind = sp.Function("_ind")
    expr = expr.replace(indicator, lambda a, b: ind(a, b, T))
    raw = sp.lambdify(T, expr, modules=[{"cantor": _np_cantor, "_ind": _np_indicator, "inf": np.inf},
                                        "numpy"])

    def ev(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(raw(t), dtype=float)
        return np.broadcast_to(out, t.shape).copy()

    return ev


def function_from_expression(
    text: str,
    *,
    label: str | None = None,
    parity: str = "none",
    support: Iterable[tuple[float, float]] | None = None,
    membership: Iterable[str] = (),
    singular_points: Iterable[float] = (),
    total_variation: float | None = None,
) -> RealFunction:
    """Build a RealFunction from ``text``; metadata is declared by the caller."""
    expr = parse_expression(text)
    derivative = None
    if not (expr.has(cantor) or expr.has(indicator)):
        d = sp.diff(expr, T)
        if not d.has(sp.Derivative) and not d.has(sp.DiracDelta):
            derivative = _lambdify(d)
    sup = tuple(support) if support is not None else ((-math.inf, math.inf),)
    return RealFunction(_lambdify(expr), label or text, derivative=derivative, parity=parity,
                        support=sup, membership=frozenset(membership),
                        singular_points=tuple(singular_points), total_variation=total_variation,
                        description=str(expr))
