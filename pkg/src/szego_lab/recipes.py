"""Small expression grammar for scalar recipes on C^n.

Recipes are strings such as ``"norm2() - 1"`` or ``"1 + 0.1*re(z1)"``.  The
same parsed expression can be evaluated on plain numbers / numpy arrays (fast
sampling) or on :class:`~szego_lab.jets.DerivativeJet` objects (exact
derivatives through order three).

Grammar
-------
* numbers (real or imaginary literals such as ``2j``), ``pi``, ``e``, ``n``
* coordinates ``z1 .. zn`` and their conjugates ``zb1 .. zbn``
* ``+ - * /`` and ``**`` (any exponent; jets use the power rule)
* functions ``exp, log, sqrt, conj, re, im, abs2`` and ``norm2()`` (= |z|^2)
* ``factorial(k)`` on constant integers
"""

from __future__ import annotations

import ast
import math
import re

import numpy as np

from .jets import DerivativeJet, coordinate_jets

_COORD = re.compile(r"^(zb|z)([1-9][0-9]*)$")
_CONSTANTS = {"pi": math.pi, "e": math.e}


class RecipeError(ValueError):
    """Raised for malformed or unsupported recipe expressions."""


def _is_jet(x):
    return isinstance(x, DerivativeJet)


def _exp(x):
    return x.exp() if _is_jet(x) else np.exp(x)


def _log(x):
    return x.log() if _is_jet(x) else np.log(x)


def _sqrt(x):
    return x.sqrt() if _is_jet(x) else np.sqrt(x)


def _conj(x):
    return x.conj() if _is_jet(x) else np.conj(x)


def _re(x):
    return x.real() if _is_jet(x) else np.real(x)


def _im(x):
    return x.imag() if _is_jet(x) else np.imag(x)


def _abs2(x):
    return x * _conj(x)


def _factorial(k):
    if _is_jet(k) or not float(k).is_integer() or k < 0:
        raise RecipeError("factorial() takes a non-negative integer constant")
    return float(math.factorial(int(k)))


_FUNCS = {"exp": _exp, "log": _log, "sqrt": _sqrt, "conj": _conj, "re": _re,
          "im": _im, "abs2": _abs2, "factorial": _factorial}

_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b,
           ast.Pow: lambda a, b: a ** b}


class Recipe:
    """A parsed scalar expression in the coordinates of C^n.

    Parameters
    ----------
    source : str
        Expression text.
    n : int
        Complex dimension; coordinate indices above ``n`` are rejected.
    """

    def __init__(self, source, n):
        if isinstance(source, (int, float)):
            source = repr(float(source))
        self.source = str(source)
        self.n = int(n)
        try:
            self._tree = ast.parse(self.source, mode="eval").body
        except SyntaxError as exc:
            raise RecipeError(f"cannot parse recipe {self.source!r}: {exc.msg}") from None
        self._check(self._tree)

    def _check(self, node):
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float, complex)) or isinstance(node.value, bool):
                raise RecipeError(f"unsupported literal {node.value!r}")
        elif isinstance(node, ast.Name):
            m = _COORD.match(node.id)
            if m:
                if int(m.group(2)) > self.n:
                    raise RecipeError(f"coordinate {node.id} exceeds dimension {self.n}")
            elif node.id not in _CONSTANTS and node.id != "n":
                raise RecipeError(f"unknown name {node.id!r}")
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                raise RecipeError(f"unsupported operator {type(node.op).__name__}")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.USub, ast.UAdd)):
                raise RecipeError("only unary + and - are supported")
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name):
                raise RecipeError("only plain function calls are supported")
            name = node.func.id
            if node.keywords:
                raise RecipeError("keyword arguments are not supported")
            if name == "norm2":
                if node.args:
                    raise RecipeError("norm2() takes no arguments")
            elif name in _FUNCS:
                if len(node.args) != 1:
                    raise RecipeError(f"{name}() takes exactly one argument")
                self._check(node.args[0])
            else:
                raise RecipeError(f"unknown function {name!r}")
        else:
            raise RecipeError(f"unsupported syntax {type(node).__name__}")

    # -- evaluation -----------------------------------------------------------
    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            if node.id == "n":
                return float(self.n)
            return _CONSTANTS[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](self._eval(node.left, env),
                                          self._eval(node.right, env))
        if isinstance(node, ast.UnaryOp):
            val = self._eval(node.operand, env)
            return -val if isinstance(node.op, ast.USub) else val
        name = node.func.id
        if name == "norm2":
            return env["__norm2__"]()
        return _FUNCS[name](self._eval(node.args[0], env))

    def _env(self, zs, zbars):
        env = {}
        for j in range(self.n):
            env[f"z{j + 1}"] = zs[j]
            env[f"zb{j + 1}"] = zbars[j]

        def norm2():
            total = 0
            for a, b in zip(zs, zbars):
                total = total + a * b
            return total

        env["__norm2__"] = norm2
        return env

    def __call__(self, z):
        """Evaluate on a point ``z`` of shape (n,) or a batch of shape (m, n)."""
        z = np.asarray(z, dtype=complex)
        cols = [z[..., j] for j in range(self.n)]
        out = self._eval(self._tree, self._env(cols, [np.conj(c) for c in cols]))
        return np.broadcast_to(np.asarray(out, dtype=complex), z.shape[:-1]).copy() \
            if z.ndim > 1 else complex(out)

    def jet(self, z):
        """Exact third-order jet of the recipe at ``z``."""
        z = np.asarray(z, dtype=complex)
        zs, zbars = coordinate_jets(z)
        out = self._eval(self._tree, self._env(zs, zbars))
        if not isinstance(out, DerivativeJet):
            out = DerivativeJet.constant(out, self.n)
        return out

    @property
    def is_constant(self):
        return not any(isinstance(node, ast.Name) and _COORD.match(node.id)
                       or isinstance(node, ast.Call) and node.func.id == "norm2"
                       for node in ast.walk(self._tree))

    def __repr__(self):
        return f"Recipe({self.source!r}, n={self.n})"
