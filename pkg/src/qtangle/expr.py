"""Small polynomial expression parser.

Expressions such as ``(x-y)*(y-z)^2`` or ``t^2-t+1`` are parsed with the
:mod:`ast` module into a syntax tree restricted to ``+ - *``, integer powers,
integer literals and single-letter variables.  The tree can be evaluated
with any arithmetic backend (see :func:`evaluate`) or expanded into a
dictionary of monomials (see :func:`expand`).
"""

from __future__ import annotations

import ast
import re
from collections import defaultdict
from typing import Callable, Mapping, Sequence


class ExpressionError(ValueError):
    pass


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow)
# implicit products such as "2t" or "3(x-y)" or "(x-y)(y-z)"
_IMPLICIT = re.compile(r"(?<=[0-9)])\s*(?=[A-Za-z(])")


def parse(text: str, variables: Sequence[str]) -> ast.expr:
    """Parse ``text`` into a checked expression tree over ``variables``."""
    source = _IMPLICIT.sub("*", text.strip()).replace("^", "**")
    if not source:
        raise ExpressionError("empty expression")
    try:
        tree = ast.parse(source, mode="eval").body
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    _check(tree, set(variables), text)
    return tree


def _check(node: ast.AST, variables: set[str], text: str) -> None:
    if isinstance(node, ast.BinOp):
        if not isinstance(node.op, _ALLOWED_BINOPS):
            raise ExpressionError(f"operator not allowed in {text!r}")
        _check(node.left, variables, text)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                    and node.right.value >= 0):
                raise ExpressionError(f"exponents must be non-negative integers in {text!r}")
        else:
            _check(node.right, variables, text)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        _check(node.operand, variables, text)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, int) or isinstance(node.value, bool):
            raise ExpressionError(f"only integer constants allowed in {text!r}")
    elif isinstance(node, ast.Name):
        if node.id not in variables:
            raise ExpressionError(f"unknown variable {node.id!r} in {text!r}")
    else:
        raise ExpressionError(f"unsupported syntax in {text!r}")


class Backend:
    """Arithmetic used by :func:`evaluate`.  Subclasses supply the ring."""

    def const(self, value: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, a, n: int):
        result = self.const(1)
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result


def evaluate(tree: ast.expr, env: Mapping[str, object], backend: Backend):
    if isinstance(tree, ast.BinOp):
        left = evaluate(tree.left, env, backend)
        if isinstance(tree.op, ast.Pow):
            return backend.power(left, tree.right.value)
        right = evaluate(tree.right, env, backend)
        if isinstance(tree.op, ast.Add):
            return backend.add(left, right)
        if isinstance(tree.op, ast.Sub):
            return backend.sub(left, right)
        return backend.mul(left, right)
    if isinstance(tree, ast.UnaryOp):
        value = evaluate(tree.operand, env, backend)
        return backend.neg(value) if isinstance(tree.op, ast.USub) else value
    if isinstance(tree, ast.Constant):
        return backend.const(tree.value)
    return env[tree.id]


Monomials = dict  # exponent tuple -> int coefficient


def expand(tree: ast.expr, variables: Sequence[str]) -> Monomials:
    """Expand into ``{(e_1, ..., e_k): coefficient}`` with integer coefficients."""
    names = list(variables)

    def mul(a: Monomials, b: Monomials) -> Monomials:
        out: dict = defaultdict(int)
        for ea, ca in a.items():
            for eb, cb in b.items():
                out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
        return {e: c for e, c in out.items() if c}

    def add(a: Monomials, b: Monomials, sign: int = 1) -> Monomials:
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + sign * c
        return {e: c for e, c in out.items() if c}

    zero = (0,) * len(names)

    def walk(node) -> Monomials:
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                result = {zero: 1}
                for _ in range(node.right.value):
                    result = mul(result, left)
                return result
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return add(left, right)
            if isinstance(node.op, ast.Sub):
                return add(left, right, -1)
            return mul(left, right)
        if isinstance(node, ast.UnaryOp):
            inner = walk(node.operand)
            if isinstance(node.op, ast.USub):
                return {e: -c for e, c in inner.items()}
            return inner
        if isinstance(node, ast.Constant):
            return {zero: node.value} if node.value else {}
        exps = [0] * len(names)
        exps[names.index(node.id)] = 1
        return {tuple(exps): 1}

    return walk(tree)


def univariate_coefficients(text: str, variable: str = "t") -> list[int]:
    """Coefficient list (constant term first) of a polynomial in one variable."""
    monomials = expand(parse(text, [variable]), [variable])
    if not monomials:
        return [0]
    degree = max(e[0] for e in monomials)
    coeffs = [0] * (degree + 1)
    for (e,), c in monomials.items():
        coeffs[e] = c
    return coeffs


def make_function(tree: ast.expr, variables: Sequence[str], backend: Backend) -> Callable:
    names = list(variables)

    def fn(*args):
        return evaluate(tree, dict(zip(names, args)), backend)

    return fn
