"""Restricted arithmetic expressions for rule files.

Rule documents carry coefficients such as ``"(l+1)*binom(n, 2)"`` and
class/vector templates such as ``"D - E - (2*l+m)*(K+E)"``.  They are parsed
with :mod:`ast` and evaluated over an explicit environment; only arithmetic,
comparisons, boolean connectives and a few whitelisted functions are allowed.
Values may be ints, divisor classes or tangency vectors, whatever supports
the operator at hand.
"""

from __future__ import annotations

import ast
import math
import operator
from typing import Any, Callable, Mapping

from .errors import RuleSetError

_BINOPS: dict[type, Callable[[Any, Any], Any]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}

_CMPOPS: dict[type, Callable[[Any, Any], bool]] = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def fact(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return math.factorial(n)


BUILTINS: dict[str, Callable[..., Any]] = {
    "binom": binom,
    "fact": fact,
    "min": min,
    "max": max,
    "abs": abs,
}


class Expr:
    """A compiled expression; ``Expr("l+1")({"l": 2}) == 3``."""

    def __init__(self, source: str | int):
        self.source = str(source)
        try:
            self._tree = ast.parse(self.source.strip(), mode="eval").body
        except SyntaxError as exc:
            raise RuleSetError(f"syntax error in expression {self.source!r}: {exc.msg}") from None
        self._check(self._tree)

    def _check(self, node: ast.AST):
        allowed = (
            ast.BinOp, ast.UnaryOp, ast.Compare, ast.BoolOp, ast.Call, ast.Name,
            ast.Constant, ast.Load, ast.USub, ast.UAdd, ast.Not, ast.And, ast.Or,
            ast.Pow, *_BINOPS, *_CMPOPS,
        )
        for sub in ast.walk(node):
            if not isinstance(sub, allowed):
                raise RuleSetError(
                    f"construct {type(sub).__name__} not allowed in expression {self.source!r}"
                )
            if isinstance(sub, ast.Constant) and not isinstance(sub.value, (int, str)):
                raise RuleSetError(f"only integer and string literals allowed in {self.source!r}")
            if isinstance(sub, ast.Call) and not isinstance(sub.func, ast.Name):
                raise RuleSetError(f"only plain function calls allowed in {self.source!r}")

    @property
    def names(self) -> set[str]:
        return {n.id for n in ast.walk(self._tree) if isinstance(n, ast.Name)}

    def __call__(self, env: Mapping[str, Any]) -> Any:
        return self._eval(self._tree, env)

    def _eval(self, node: ast.AST, env: Mapping[str, Any]) -> Any:
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            if node.id in BUILTINS:
                return BUILTINS[node.id]
            raise RuleSetError(f"unknown name {node.id!r} in expression {self.source!r}")
        if isinstance(node, ast.UnaryOp):
            val = self._eval(node.operand, env)
            if isinstance(node.op, ast.USub):
                return -val
            if isinstance(node.op, ast.UAdd):
                return val
            return not val
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left, env)
            right = self._eval(node.right, env)
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, int) or right < 0 or right > 4096:
                    raise RuleSetError(f"exponent must be a small nonnegative integer in {self.source!r}")
                return left**right
            return _BINOPS[type(node.op)](left, right)
        if isinstance(node, ast.Compare):
            left = self._eval(node.left, env)
            for op, comp in zip(node.ops, node.comparators):
                right = self._eval(comp, env)
                if not _CMPOPS[type(op)](left, right):
                    return False
                left = right
            return True
        if isinstance(node, ast.BoolOp):
            if isinstance(node.op, ast.And):
                return all(self._eval(v, env) for v in node.values)
            return any(self._eval(v, env) for v in node.values)
        if isinstance(node, ast.Call):
            func = self._eval(node.func, env)
            args = [self._eval(a, env) for a in node.args]
            return func(*args)
        raise RuleSetError(f"cannot evaluate {ast.dump(node)}")

    def __repr__(self) -> str:
        return f"Expr({self.source!r})"
