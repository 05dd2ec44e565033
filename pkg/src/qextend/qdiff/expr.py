"""A small arithmetic expression language for maps ``g_t(x, y)``.

Grammar (infix, usual precedence, ``^`` and ``**`` both mean power)::

    expr   := expr ('+'|'-') term | term
    term   := term ('*'|'/') factor | factor
    factor := ('+'|'-') factor | atom ('^' factor)?
    atom   := number | name | func '(' expr (',' expr)* ')' | '(' expr ')'

Names are ``x``, ``y``, ``t``, ``pi``, ``e`` and any caller-supplied
parameters; functions are ``log``, ``exp``, ``pow``, ``sqrt`` and ``abs``.
Parsing goes through :mod:`ast` with a node whitelist, so nothing else can
run.  Integer literals stay exact: with Fraction inputs, expressions built
from ``+ - * /`` and integer powers evaluate exactly.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Callable, Mapping

from ..errors import ExpressionError

_FUNCS: dict[str, Callable] = {
    "log": math.log,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
    "pow": lambda a, b: a**b,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_UNARY = (ast.UAdd, ast.USub)


def _check(node: ast.AST, names: set[str]) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body, names)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _BINOPS):
            raise ExpressionError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.left, names)
        _check(node.right, names)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, _UNARY):
            raise ExpressionError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.operand, names)
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"literal {node.value!r} is not a number")
    elif isinstance(node, ast.Name):
        if node.id not in names:
            raise ExpressionError(f"unknown name {node.id!r}")
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS or node.keywords:
            raise ExpressionError("only log, exp, pow, sqrt and abs may be called")
        for a in node.args:
            _check(a, names)
    else:
        raise ExpressionError(f"syntax {type(node).__name__} is not allowed")


class _Exact(ast.NodeTransformer):
    """Turn integer literals into Fractions so that ``1/2`` stays exact."""

    def visit_Constant(self, node: ast.Constant) -> ast.AST:
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            call = ast.Call(func=ast.Name(id="__F", ctx=ast.Load()), args=[node], keywords=[])
            return ast.copy_location(call, node)
        return node


class Expression:
    """A compiled expression over ``x``, ``y``, ``t`` and named parameters."""

    def __init__(self, text: str, params: Mapping[str, object] | None = None):
        self.text = text
        self.params = dict(params or {})
        names = {"x", "y", "t", *_CONSTS, *self.params}
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
        _check(tree, names)
        tree = ast.fix_missing_locations(_Exact().visit(tree))
        self._code = compile(tree, "<expression>", "eval")
        self._env = {"__builtins__": {}, "__F": Fraction, **_FUNCS, **_CONSTS, **self.params}

    def __call__(self, **values: object):
        try:
            return eval(self._code, self._env, values)  # noqa: S307 - whitelisted AST
        except (ArithmeticError, ValueError, TypeError, NameError) as exc:
            raise ExpressionError(f"evaluating {self.text!r}: {exc}") from None

    def __repr__(self) -> str:
        return f"Expression({self.text!r})"


def parse_expression(text: str, params: Mapping[str, object] | None = None) -> Expression:
    return Expression(text, params)
